"""Closed-form zero-mass limit results.

For the underdamped dynamics with position-dependent friction gamma(x)
and noise sigma(x), the zero-mass (overdamped) limit is the Ito SDE

    dx = [ F(x)/gamma(x) - sigma(x)^2 gamma'(x) / (2 gamma(x)^3) ] dt
         + (sigma(x)/gamma(x)) dW,

i.e. the naive F/gamma drift plus a noise-induced correction.  The same
limit can be written as the overdamped equation read under an
alpha-convention, with

    alpha(x) = gamma' sigma / (2 (gamma' sigma - gamma sigma')),

constant and equal to lambda / (2 (lambda - 1)) whenever
gamma = c sigma^lambda.  The proportional case gamma = c sigma (lambda=1)
has no alpha representation but still acquires a drift correction.
"""

from __future__ import annotations

import numpy as np

from .fields import DynamicsSpec, ScalarField

ALPHA_SINGULAR_RTOL = 1e-9  # relative floor for the alpha denominator
LAMBDA_SINGULAR_TOL = 1e-12
PROPORTIONALITY_RTOL = 1e-8
_PROPORTIONALITY_GRID = 1024


class SingularProportionalCase(ValueError):
    """gamma is (locally) proportional to sigma: alpha is undefined.

    The limiting dynamics still exist; use :func:`singular_sk_drift`.
    """


def sk_drift(spec: DynamicsSpec) -> ScalarField:
    """Drift of the zero-mass limiting Ito SDE.

    Returns x -> F(x)/gamma(x) - sigma(x)^2 gamma'(x) / (2 gamma(x)^3).
    The matching diffusion coefficient is :func:`sk_diffusion`.
    """
    force, gamma, sigma = spec.force, spec.friction, spec.noise

    def drift_fn(x):
        g = gamma(x)
        s = sigma(x)
        return force(x) / g - s * s * gamma.deriv(x) / (2.0 * g ** 3)

    return ScalarField(drift_fn, name="sk-drift")


def sk_diffusion(spec: DynamicsSpec) -> ScalarField:
    """Effective diffusion coefficient sigma(x)/gamma(x) of the limit."""
    gamma, sigma = spec.friction, spec.noise

    def diff_fn(x):
        return sigma(x) / gamma(x)

    def diff_dfn(x):
        g = gamma(x)
        return (sigma.deriv(x) * g - sigma(x) * gamma.deriv(x)) / (g * g)

    analytic = gamma.kind == "analytic" and sigma.kind == "analytic"
    return ScalarField(diff_fn, diff_dfn if analytic else None, name="sk-diffusion")


def ito_drift_from_alpha(spec: DynamicsSpec, alpha: ScalarField) -> ScalarField:
    """Ito drift of the overdamped SDE read under the alpha(x) convention.

    Returns x -> F/gamma + alpha(x) (sigma/gamma) d/dx (sigma/gamma); with
    the position-dependent alpha of :func:`alpha_of_x` this reproduces
    :func:`sk_drift` identically.
    """
    force, gamma = spec.force, spec.friction
    diff = sk_diffusion(spec)

    def drift_fn(x):
        return force(x) / gamma(x) + alpha(x) * diff(x) * diff.deriv(x)

    return ScalarField(drift_fn, name="alpha-drift")


def alpha_of_x(spec: DynamicsSpec, x):
    """Integration convention selected by the zero-mass limit at position x.

    alpha(x) = gamma' sigma / (2 (gamma' sigma - gamma sigma')).  Accepts
    scalars or arrays.  Raises :class:`SingularProportionalCase` when the
    denominator vanishes relative to its terms (gamma proportional to sigma).
    """
    x = np.asarray(x, dtype=float)
    gamma, sigma = spec.friction, spec.noise
    a = gamma.deriv(x) * sigma(x)
    b = gamma(x) * sigma.deriv(x)
    den = a - b
    singular = np.abs(den) <= ALPHA_SINGULAR_RTOL * (np.abs(a) + np.abs(b))
    if np.any(singular):
        bad = x[singular] if x.ndim else x
        bad = np.atleast_1d(bad)[0]
        raise SingularProportionalCase(
            "alpha(x) is singular at x=%g (gamma' sigma ~ gamma sigma'); "
            "the friction is proportional to the noise there -- use singular_sk_drift" % bad)
    out = a / (2.0 * den)
    return float(out) if out.ndim == 0 else out


def alpha_field(spec: DynamicsSpec) -> ScalarField:
    """alpha(x) wrapped as a ScalarField (finite-difference derivative)."""
    return ScalarField(lambda x: alpha_of_x(spec, x), name="alpha(x)")


def alpha_of_lambda(lam):
    """Constant alpha for the family gamma = c sigma**lam: lam/(2(lam-1)).

    lam=0 gives the Ito convention, lam=2 the anti-Ito one; 1/2 is only
    approached as |lam| -> infinity.  lam=1 is the singular proportional
    case and raises.
    """
    lam = float(lam)
    if abs(lam - 1.0) <= LAMBDA_SINGULAR_TOL:
        raise SingularProportionalCase(
            "lambda=1 (gamma proportional to sigma) has no alpha representation; "
            "use singular_sk_drift")
    return lam / (2.0 * (lam - 1.0))


def singular_sk_drift(spec: DynamicsSpec, c):
    """Zero-mass limit drift for the proportional case gamma = c sigma.

    Verifies the proportionality on a dense grid (max relative deviation
    below ``PROPORTIONALITY_RTOL``), then returns the pair

        drift(x) = F(x)/(c sigma(x)) - sigma'(x)/(2 c^2 sigma(x)),
        diffusion_const = 1/c.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    c = float(c)
    force, gamma, sigma = spec.force, spec.friction, spec.noise
    grid = np.linspace(spec.domain[0], spec.domain[1], _PROPORTIONALITY_GRID)
    dev = np.abs(gamma(grid) - c * sigma(grid)) / np.abs(c * sigma(grid))
    worst = int(np.argmax(dev))
    if dev[worst] >= PROPORTIONALITY_RTOL:
        raise ValueError(
            "gamma is not proportional to sigma with c=%g: max relative deviation %.3e at x=%g"
            % (c, dev[worst], grid[worst]))

    def drift_fn(x):
        s = sigma(x)
        return force(x) / (c * s) - sigma.deriv(x) / (2.0 * c * c * s)

    return ScalarField(drift_fn, name="singular-sk-drift"), 1.0 / c


def ou_stationary_variance(gamma0, sigma0):
    """Stationary variance sigma0^2/(2 gamma0) of du = -gamma0 u dt + sigma0 dW."""
    if not gamma0 > 0:
        raise ValueError("gamma0 must be positive")
    if sigma0 < 0:
        raise ValueError("sigma0 must be nonnegative")
    return float(sigma0) ** 2 / (2.0 * float(gamma0))

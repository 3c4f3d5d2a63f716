"""Coefficient functions for one-dimensional Langevin dynamics.

A :class:`ScalarField` bundles a real function of position with its
derivative; :class:`DynamicsSpec` collects the force, friction and noise
fields together with the spatial domain and initial conditions of the
underdamped problem

    dx = v dt,   m dv = (F(x) - gamma(x) v) dt + sigma(x) dW.

Friction and noise must stay positive on the domain; this is checked on a
dense grid at construction time.  All fields must accept numpy arrays as
well as scalars (every builtin family does).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

POSITIVITY_GRID = 1024
FD_STEP_SCALE = 1e-5  # central difference: h = FD_STEP_SCALE * max(1, |x|)


class CoefficientError(ValueError):
    """A coefficient violates its positivity/finiteness requirements."""


def central_difference(fn, x, scale=FD_STEP_SCALE):
    """O(h^2) central difference with a step proportional to max(1, |x|)."""
    x = np.asarray(x, dtype=float)
    h = scale * np.maximum(1.0, np.abs(x))
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


@dataclass(frozen=True)
class ScalarField:
    """Evaluable function of position with a derivative.

    ``fn`` and ``dfn`` must be vectorized over numpy arrays.  When ``dfn``
    is omitted the derivative falls back to a central difference and the
    field is tagged ``kind="finite-difference"``.
    """

    fn: Callable
    dfn: Optional[Callable] = None
    name: str = ""
    kind: str = field(init=False, default="analytic")

    def __post_init__(self):
        object.__setattr__(self, "kind", "analytic" if self.dfn is not None else "finite-difference")

    def __call__(self, x):
        return self.fn(x)

    def eval(self, x):
        return self.fn(x)

    def deriv(self, x):
        if self.dfn is not None:
            return self.dfn(x)
        return central_difference(self.fn, x)


def constant(value, name=""):
    value = float(value)
    return ScalarField(
        fn=lambda x: np.full_like(np.asarray(x, dtype=float), value),
        dfn=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        name=name or "constant(%g)" % value,
    )


def affine(intercept, slope, name=""):
    intercept, slope = float(intercept), float(slope)
    return ScalarField(
        fn=lambda x: intercept + slope * np.asarray(x, dtype=float),
        dfn=lambda x: np.full_like(np.asarray(x, dtype=float), slope),
        name=name or "affine(%g,%g)" % (intercept, slope),
    )


def quadratic(offset, coeff, name=""):
    """offset + coeff * x**2 (the constant-friction example noise shape)."""
    offset, coeff = float(offset), float(coeff)
    return ScalarField(
        fn=lambda x: offset + coeff * np.asarray(x, dtype=float) ** 2,
        dfn=lambda x: 2.0 * coeff * np.asarray(x, dtype=float),
        name=name or "quadratic(%g,%g)" % (offset, coeff),
    )


def sinusoid(offset, amplitude, frequency=1.0, name=""):
    """offset + amplitude * sin(frequency * x)."""
    offset, amplitude, frequency = float(offset), float(amplitude), float(frequency)
    return ScalarField(
        fn=lambda x: offset + amplitude * np.sin(frequency * np.asarray(x, dtype=float)),
        dfn=lambda x: amplitude * frequency * np.cos(frequency * np.asarray(x, dtype=float)),
        name=name or "sinusoid(%g,%g,%g)" % (offset, amplitude, frequency),
    )


def exponential(amplitude, rate, name=""):
    """amplitude * exp(rate * x)."""
    amplitude, rate = float(amplitude), float(rate)
    return ScalarField(
        fn=lambda x: amplitude * np.exp(rate * np.asarray(x, dtype=float)),
        dfn=lambda x: amplitude * rate * np.exp(rate * np.asarray(x, dtype=float)),
        name=name or "exponential(%g,%g)" % (amplitude, rate),
    )


def from_einstein(diffusion: ScalarField, kBT: float) -> Tuple[ScalarField, ScalarField]:
    """Friction and noise fields of a Brownian particle with mobility D(x).

    Given the hydrodynamic diffusion coefficient D(x) > 0 and the thermal
    energy kBT > 0, returns

        gamma(x) = kBT / D(x),
        sigma(x) = kBT * sqrt(2) / sqrt(D(x)),

    so that gamma = sigma^2 / (2 kBT) (the fluctuation-dissipation relation
    with explicit constants).  Derivatives are propagated by the chain rule
    and stay analytic when ``diffusion`` is analytic.
    """
    if not kBT > 0:
        raise CoefficientError("kBT must be positive, got %r" % (kBT,))
    kBT = float(kBT)

    def gamma_fn(x):
        return kBT / diffusion(x)

    def gamma_dfn(x):
        d = diffusion(x)
        return -kBT * diffusion.deriv(x) / (d * d)

    def sigma_fn(x):
        return kBT * np.sqrt(2.0) / np.sqrt(diffusion(x))

    def sigma_dfn(x):
        d = diffusion(x)
        return -0.5 * kBT * np.sqrt(2.0) * diffusion.deriv(x) / d ** 1.5

    analytic = diffusion.kind == "analytic"
    gamma = ScalarField(gamma_fn, gamma_dfn if analytic else None,
                        name="einstein-friction[%s]" % diffusion.name)
    sigma = ScalarField(sigma_fn, sigma_dfn if analytic else None,
                        name="einstein-noise[%s]" % diffusion.name)
    return gamma, sigma


def power_law(noise: ScalarField, c: float, exponent: float) -> ScalarField:
    """Friction field gamma(x) = c * sigma(x)**exponent.

    This is the generalized fluctuation-dissipation family; the overdamped
    limit then carries a position-independent integration convention
    alpha = exponent / (2 (exponent - 1)).
    """
    if not c > 0:
        raise CoefficientError("proportionality constant c must be positive, got %r" % (c,))
    c, exponent = float(c), float(exponent)

    def gamma_fn(x):
        return c * noise(x) ** exponent

    def gamma_dfn(x):
        return c * exponent * noise(x) ** (exponent - 1.0) * noise.deriv(x)

    return ScalarField(gamma_fn, gamma_dfn if noise.kind == "analytic" else None,
                       name="power-law[%s]^%g" % (noise.name, exponent))


@dataclass(frozen=True)
class DynamicsSpec:
    """Full problem data: coefficients, domain and initial conditions.

    Positivity of friction and noise is checked on a uniform grid of
    :data:`POSITIVITY_GRID` points spanning the domain.  Instances are
    immutable and safe to share across concurrent trajectory workers.
    """

    force: ScalarField
    friction: ScalarField
    noise: ScalarField
    domain: Tuple[float, float]
    x0: float
    v0: float = 0.0
    friction_max: float = field(init=False, default=0.0)

    def __post_init__(self):
        lo, hi = float(self.domain[0]), float(self.domain[1])
        if not lo < hi:
            raise CoefficientError("domain must satisfy x_lo < x_hi, got (%g, %g)" % (lo, hi))
        object.__setattr__(self, "domain", (lo, hi))
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "v0", float(self.v0))
        if not (lo < self.x0 < hi):
            raise CoefficientError("x0=%g must lie in the interior of the domain (%g, %g)"
                                   % (self.x0, lo, hi))
        grid = np.linspace(lo, hi, POSITIVITY_GRID)
        for label, f in (("force", self.force), ("friction", self.friction), ("noise", self.noise)):
            vals = np.asarray(f(grid), dtype=float)
            if not np.all(np.isfinite(vals)):
                bad = grid[~np.isfinite(vals)][0]
                raise CoefficientError("%s is not finite at x=%g" % (label, bad))
            if label != "force" and not np.all(vals > 0.0):
                idx = int(np.argmax(vals <= 0.0))
                raise CoefficientError("%s must be positive on the domain; at x=%g it is %g"
                                       % (label, grid[idx], vals[idx]))
        object.__setattr__(self, "friction_max", float(np.max(self.friction(grid))))

    def contains(self, x):
        lo, hi = self.domain
        return (np.asarray(x) >= lo) & (np.asarray(x) <= hi)

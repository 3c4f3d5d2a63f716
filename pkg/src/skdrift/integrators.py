"""Trajectory integrators driven by a supplied Wiener path.

Two layers:

* public single-trajectory functions (:func:`integrate_underdamped`,
  :func:`integrate_ito`, :func:`integrate_alpha`) returning a
  :class:`Trajectory`, raising :class:`DomainExitError` if the position
  leaves the declared interval;
* private batch kernels (``_underdamped_batch``, ``_em_batch``,
  ``_alpha_direct_batch``) stepping many trajectories side by side for the
  experiment drivers.  Per-sample arithmetic is elementwise, so batched
  results are bit-identical to one-at-a-time integration and independent
  of how samples are grouped.

All integrators are pure: the output is a deterministic function of the
arguments, with no internal random state.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fields import DynamicsSpec, ScalarField

STABILITY_FACTOR = 10.0  # explicit Euler requires dt <= m / (10 sup gamma)


class StabilityError(ValueError):
    """Time step too coarse for the explicit underdamped scheme."""


class DomainExitError(RuntimeError):
    """A trajectory left the declared domain.

    Attributes ``step``, ``time`` and ``position`` identify the first
    offending step.
    """

    def __init__(self, step, time, position, domain):
        self.step = int(step)
        self.time = float(time)
        self.position = float(position)
        self.domain = domain
        super().__init__(
            "trajectory left the domain [%g, %g] at step %d (t=%g), x=%g"
            % (domain[0], domain[1], self.step, self.time, self.position))


@dataclass
class Trajectory:
    """Uniformly sampled time series of position (and optionally velocity)."""

    dt: float
    positions: np.ndarray
    velocities: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        if self.velocities is not None:
            self.velocities = np.asarray(self.velocities, dtype=float)
            if len(self.velocities) != len(self.positions):
                raise ValueError("positions and velocities must have equal length")

    @property
    def times(self):
        return self.dt * np.arange(len(self.positions))

    def subsample(self, factor):
        """Every factor-th point (both grids contain t=0 and t_final)."""
        factor = int(factor)
        if (len(self.positions) - 1) % factor != 0:
            raise ValueError("factor %d does not divide %d steps" % (factor, len(self.positions) - 1))
        vel = None if self.velocities is None else self.velocities[::factor]
        return Trajectory(dt=self.dt * factor, positions=self.positions[::factor],
                          velocities=vel, meta=dict(self.meta))


def _exit_scan(x, lo, hi, exit_step, exit_x, k):
    """Mark first exits at step k and clamp so later evaluations stay finite."""
    bad = (x < lo) | (x > hi)
    if bad.any():
        new = bad & (exit_step < 0)
        if new.any():
            exit_step[new] = k
            exit_x[new] = x[new]
        np.clip(x, lo, hi, out=x)
    return x


def _underdamped_batch(spec: DynamicsSpec, mass, dt, dW, record_idx,
                       scheme="exponential", record_velocities=False):
    """Step (x, v) for each row of dW; record positions at ``record_idx``.

    Returns ``(positions, velocities or None, exit_step, exit_x)`` where
    ``exit_step[j] = -1`` if row j stayed inside the domain, else the first
    step index at which it left (its state is clamped from then on) and
    ``exit_x[j]`` the offending position.
    """
    if mass <= 0:
        raise ValueError("mass must be positive")
    lo, hi = spec.domain
    force, gamma, sigma = spec.force, spec.friction, spec.noise
    ns, n = dW.shape
    record_idx = np.asarray(record_idx, dtype=int)
    sqrt_dt = np.sqrt(dt)
    dt_m = dt / mass

    x = np.full(ns, spec.x0)
    v = np.full(ns, spec.v0)
    exit_step = np.full(ns, -1, dtype=np.int64)
    exit_x = np.full(ns, np.nan)
    pos = np.empty((ns, len(record_idx)))
    vel = np.empty((ns, len(record_idx))) if record_velocities else None
    ri = 0
    if ri < len(record_idx) and record_idx[ri] == 0:
        pos[:, ri] = x
        if record_velocities:
            vel[:, ri] = v
        ri += 1

    if scheme == "exponential":
        for k in range(n):
            g = gamma(x)
            decay = np.exp(-g * dt_m)
            noise_std = sigma(x) * np.sqrt((1.0 - decay * decay) / (2.0 * g * mass))
            x_next = x + v * dt
            v = v * decay + (force(x) / g) * (1.0 - decay) + noise_std * (dW[:, k] / sqrt_dt)
            x = _exit_scan(x_next, lo, hi, exit_step, exit_x, k + 1)
            if ri < len(record_idx) and record_idx[ri] == k + 1:
                pos[:, ri] = x
                if record_velocities:
                    vel[:, ri] = v
                ri += 1
    elif scheme == "explicit-euler":
        if dt > mass / (STABILITY_FACTOR * spec.friction_max):
            raise StabilityError(
                "dt=%g exceeds the stability guard m/(%g sup gamma)=%g; "
                "use a finer path or the exponential scheme"
                % (dt, STABILITY_FACTOR, mass / (STABILITY_FACTOR * spec.friction_max)))
        for k in range(n):
            x_next = x + v * dt
            v = v + (force(x) - gamma(x) * v) * dt_m + sigma(x) * (dW[:, k] / mass)
            x = _exit_scan(x_next, lo, hi, exit_step, exit_x, k + 1)
            if ri < len(record_idx) and record_idx[ri] == k + 1:
                pos[:, ri] = x
                if record_velocities:
                    vel[:, ri] = v
                ri += 1
    else:
        raise ValueError("unknown scheme %r (expected 'exponential' or 'explicit-euler')" % (scheme,))
    return pos, vel, exit_step, exit_x


def _em_batch(drift_fn, diffusion_fn, x0, dt, dW, domain=None, record_idx=None):
    """Euler-Maruyama on each row of dW; returns (positions, exit_step)."""
    ns, n = dW.shape
    lo, hi = (-np.inf, np.inf) if domain is None else domain
    if record_idx is None:
        record_idx = np.arange(n + 1)
    record_idx = np.asarray(record_idx, dtype=int)
    x = np.full(ns, float(x0))
    exit_step = np.full(ns, -1, dtype=np.int64)
    exit_x = np.full(ns, np.nan)
    pos = np.empty((ns, len(record_idx)))
    ri = 0
    if ri < len(record_idx) and record_idx[ri] == 0:
        pos[:, ri] = x
        ri += 1
    for k in range(n):
        x = x + drift_fn(x) * dt + diffusion_fn(x) * dW[:, k]
        x = _exit_scan(x, lo, hi, exit_step, exit_x, k + 1)
        if ri < len(record_idx) and record_idx[ri] == k + 1:
            pos[:, ri] = x
            ri += 1
    return pos, exit_step, exit_x


def _alpha_direct_batch(drift_fn, diffusion: ScalarField, alpha_fn, x0, dt, dW,
                        domain=None, record_idx=None):
    """One-step predictor realization of the alpha-point Riemann sum.

    Predictor x* = x + alpha(x) (b(x) dt + sigma(x) dW), then the noise
    coefficient is evaluated at x*:  x' = x + b(x) dt + sigma(x*) dW.
    """
    ns, n = dW.shape
    lo, hi = (-np.inf, np.inf) if domain is None else domain
    if record_idx is None:
        record_idx = np.arange(n + 1)
    record_idx = np.asarray(record_idx, dtype=int)
    x = np.full(ns, float(x0))
    exit_step = np.full(ns, -1, dtype=np.int64)
    exit_x = np.full(ns, np.nan)
    pos = np.empty((ns, len(record_idx)))
    ri = 0
    if ri < len(record_idx) and record_idx[ri] == 0:
        pos[:, ri] = x
        ri += 1
    for k in range(n):
        dw = dW[:, k]
        b_dt = drift_fn(x) * dt
        x_star = x + alpha_fn(x) * (b_dt + diffusion(x) * dw)
        x = x + b_dt + diffusion(x_star) * dw
        x = _exit_scan(x, lo, hi, exit_step, exit_x, k + 1)
        if ri < len(record_idx) and record_idx[ri] == k + 1:
            pos[:, ri] = x
            ri += 1
    return pos, exit_step, exit_x


def integrate_underdamped(spec: DynamicsSpec, mass, path, scheme="exponential") -> Trajectory:
    """Integrate the underdamped system at finite mass along ``path``.

    Schemes
    -------
    ``explicit-euler``
        x' = x + v dt;  v' = v + (F(x) - gamma(x) v) dt/m + sigma(x) dW/m.
        Guarded by dt <= m / (10 sup gamma).
    ``exponential``
        Position as above; velocity by the exact frozen-coefficient
        Ornstein-Uhlenbeck step with mean F/gamma, decay exp(-gamma dt/m)
        and noise std sigma * sqrt((1 - exp(-2 gamma dt/m)) / (2 gamma m)),
        which tolerates dt of the order of m/gamma and above.
    """
    dW = path.increments[np.newaxis, :]
    rec = np.arange(path.n_steps + 1)
    pos, vel, exit_step, exit_x = _underdamped_batch(spec, mass, path.dt, dW, rec,
                                                     scheme=scheme, record_velocities=True)
    if exit_step[0] >= 0:
        k = int(exit_step[0])
        raise DomainExitError(step=k, time=k * path.dt, position=exit_x[0], domain=spec.domain)
    return Trajectory(dt=path.dt, positions=pos[0], velocities=vel[0],
                      meta={"scheme": scheme, "mass": float(mass),
                            "seed": path.seed, "stream": path.stream})


def integrate_ito(drift: ScalarField, diffusion: ScalarField, x0, path, domain=None) -> Trajectory:
    """Euler-Maruyama for dx = drift(x) dt + diffusion(x) dW along ``path``."""
    dW = path.increments[np.newaxis, :]
    pos, exit_step, exit_x = _em_batch(drift, diffusion, x0, path.dt, dW, domain=domain)
    if exit_step[0] >= 0:
        k = int(exit_step[0])
        raise DomainExitError(step=k, time=k * path.dt, position=exit_x[0], domain=domain)
    return Trajectory(dt=path.dt, positions=pos[0],
                      meta={"scheme": "euler-maruyama", "seed": path.seed, "stream": path.stream})


def integrate_alpha(drift_b: ScalarField, diffusion: ScalarField, alpha: ScalarField,
                    x0, path, mode="converted", domain=None) -> Trajectory:
    """Integrate dx = b dt + sigma(x) o^alpha dW under an alpha-convention.

    ``mode="converted"`` rewrites the equation as the Ito SDE with the
    extra drift alpha(x) sigma(x) sigma'(x) and delegates to
    :func:`integrate_ito`; this is the authoritative construction.
    ``mode="direct"`` evaluates the noise coefficient at the alpha-point of
    each step via a one-step Euler predictor.
    """
    if mode == "converted":
        def drift_eff(x):
            return drift_b(x) + alpha(x) * diffusion(x) * diffusion.deriv(x)
        traj = integrate_ito(ScalarField(drift_eff, name="converted-drift"),
                             diffusion, x0, path, domain=domain)
        traj.meta["scheme"] = "alpha-converted"
        return traj
    if mode == "direct":
        dW = path.increments[np.newaxis, :]
        pos, exit_step, exit_x = _alpha_direct_batch(drift_b, diffusion, alpha, x0, path.dt,
                                                     dW, domain=domain)
        if exit_step[0] >= 0:
            k = int(exit_step[0])
            raise DomainExitError(step=k, time=k * path.dt, position=exit_x[0], domain=domain)
        return Trajectory(dt=path.dt, positions=pos[0],
                          meta={"scheme": "alpha-direct", "seed": path.seed, "stream": path.stream})
    raise ValueError("unknown mode %r (expected 'converted' or 'direct')" % (mode,))


_META_ORDER = ("scheme", "mass", "candidate", "seed", "stream", "dt")


def dump_trajectory_csv(traj: Trajectory, dest):
    """Write (n, t, x[, v]) rows; a leading '#' line carries the metadata."""
    meta = dict(traj.meta)
    meta["dt"] = traj.dt
    parts = ["%s=%s" % (k, meta[k]) for k in _META_ORDER if k in meta]
    parts += ["%s=%s" % (k, v) for k, v in sorted(meta.items()) if k not in _META_ORDER]
    buf = io.StringIO()
    buf.write("# " + ",".join(parts) + "\n")
    if traj.velocities is None:
        buf.write("n,t,x\n")
        for n, x in enumerate(traj.positions):
            buf.write("%d,%s,%s\n" % (n, repr(n * traj.dt), repr(float(x))))
    else:
        buf.write("n,t,x,v\n")
        for n, (x, v) in enumerate(zip(traj.positions, traj.velocities)):
            buf.write("%d,%s,%s,%s\n" % (n, repr(n * traj.dt), repr(float(x)), repr(float(v))))
    text = buf.getvalue()
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="\n") as fh:
            fh.write(text)

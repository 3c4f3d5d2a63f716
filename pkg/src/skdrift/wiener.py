"""Reproducible discretized Wiener paths.

Increments are drawn from a counter-based Philox generator keyed by
``(seed, stream)``, so a path is a pure function of its key and length:
generation order, thread scheduling and the presence of other streams
cannot change it.  Project-wide Gaussian convention: numpy's
``Generator.standard_normal`` (ziggurat) over the Philox-4x64 bit stream.

Coarsening sums blocks of increments, which is how one Brownian
realization drives both a finely resolved underdamped integration and a
coarser overdamped one ("the same Wiener process").
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1


def _generator(seed, stream):
    key = np.array([int(seed) & _MASK64, int(stream) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class WienerPath:
    """A discretized Brownian motion: time step, increments and its key."""

    dt: float
    increments: np.ndarray
    seed: int
    stream: int = 0

    def __post_init__(self):
        inc = np.asarray(self.increments, dtype=float)
        inc.flags.writeable = False
        object.__setattr__(self, "increments", inc)
        object.__setattr__(self, "dt", float(self.dt))
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def n_steps(self):
        return len(self.increments)

    @property
    def t_final(self):
        return self.dt * len(self.increments)

    def times(self):
        """Grid t_0=0, ..., t_n = n*dt including both endpoints."""
        return self.dt * np.arange(len(self.increments) + 1)

    def cumulative(self):
        """W evaluated on :meth:`times`; W(0) = 0, no regeneration."""
        w = np.empty(len(self.increments) + 1)
        w[0] = 0.0
        np.cumsum(self.increments, out=w[1:])
        return w


def sample_path(t_final, n_steps, seed, stream=0):
    """Draw a Wiener path with n_steps Normal(0, dt) increments.

    ``(seed, stream)`` fully determines the increments; distinct streams
    give independent paths for the same master seed (one stream per
    trajectory in Monte Carlo use).
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    dt = float(t_final) / int(n_steps)
    inc = _generator(seed, stream).standard_normal(int(n_steps)) * np.sqrt(dt)
    return WienerPath(dt=dt, increments=inc, seed=int(seed), stream=int(stream))


def sample_increments(t_final, n_steps, seed, streams):
    """Increment rows for many streams at once, shape (len(streams), n_steps).

    Row j is bit-identical to ``sample_path(t_final, n_steps, seed,
    streams[j]).increments``; used by the experiment drivers to batch
    trajectories without changing per-sample results.
    """
    dt = float(t_final) / int(n_steps)
    out = np.empty((len(streams), int(n_steps)))
    for j, s in enumerate(streams):
        out[j] = _generator(seed, s).standard_normal(int(n_steps))
    out *= np.sqrt(dt)
    return out


def coarsen(path: WienerPath, factor: int) -> WienerPath:
    """Merge blocks of ``factor`` increments: dt' = dt*factor, same W(t)."""
    factor = int(factor)
    if factor < 1:
        raise ValueError("factor must be a positive integer")
    n = len(path.increments)
    if n % factor != 0:
        raise ValueError("factor %d does not divide the number of increments %d" % (factor, n))
    inc = path.increments.reshape(n // factor, factor).sum(axis=1)
    return WienerPath(dt=path.dt * factor, increments=inc, seed=path.seed, stream=path.stream)


def dump_path_csv(path: WienerPath, dest):
    """Write the path as CSV rows (n, t, dW, W); header always present."""
    w = path.cumulative()
    buf = io.StringIO()
    buf.write("n,t,dW,W\n")
    for n, dw in enumerate(path.increments):
        buf.write("%d,%s,%s,%s\n" % (n, repr(n * path.dt), repr(float(dw)), repr(float(w[n + 1]))))
    text = buf.getvalue()
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="\n") as fh:
            fh.write(text)

"""Monte Carlo experiments: shared-path mass sweeps and statistical checks.

A mass sweep integrates the underdamped dynamics at several masses on a
fine grid and a set of candidate overdamped SDEs on a coarsened grid, all
driven by coarsenings of one Wiener realization per sample, and reports
pathwise sup-distances, terminal weak errors and Kolmogorov-Smirnov
statistics per (mass, candidate).

Samples are independent work units keyed by (master_seed, sample index);
the block partition is a function of the problem size only, and per-sample
arithmetic is elementwise, so reports are bit-identical for any worker
count.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.stats

from .fields import DynamicsSpec, ScalarField, constant
from .integrators import _em_batch, _underdamped_batch, Trajectory, integrate_ito, integrate_underdamped
from .limits import alpha_field, ito_drift_from_alpha, ou_stationary_variance, sk_diffusion, singular_sk_drift
from .wiener import coarsen, sample_increments, sample_path

_BLOCK_ELEMS = 50_000_000  # increments held per block (~400 MB); the step
# loops cost is per step, nearly independent of block width, so blocks are
# sized as wide as this budget allows
_COUPLING_RTOL = 1e-9
EXCLUSION_BUDGET = 0.10


class ExperimentError(RuntimeError):
    """An experiment could not produce a trustworthy report."""


Candidate = Tuple[str, ScalarField, ScalarField]


def alpha_candidates(spec: DynamicsSpec, alphas: Sequence[float]) -> List[Candidate]:
    """Overdamped candidates labelled by constant alpha values.

    Each candidate is the Ito SDE with drift F/gamma + alpha (s/g)(s/g)'
    and diffusion sigma/gamma (the converted form of the alpha-convention).
    """
    diff = sk_diffusion(spec)
    out = []
    for a in alphas:
        label = "alpha=%g" % float(a)
        out.append((label, ito_drift_from_alpha(spec, constant(float(a))), diff))
    return out


def auto_candidates(spec: DynamicsSpec) -> List[Candidate]:
    """Position-dependent alpha(x) candidate plus the Ito baseline."""
    diff = sk_diffusion(spec)
    return [("alpha(x)", ito_drift_from_alpha(spec, alpha_field(spec)), diff),
            ("alpha=0", ito_drift_from_alpha(spec, constant(0.0)), diff)]


def singular_candidates(spec: DynamicsSpec, c: float) -> List[Candidate]:
    """The proportional-case limit vs the naive overdamped equation.

    Both share the constant diffusion 1/c; they differ only by the
    noise-induced drift correction -sigma'/(2 c^2 sigma).
    """
    drift_limit, diff_const = singular_sk_drift(spec, c)
    force, sigma = spec.force, spec.noise

    def naive_fn(x):
        return force(x) / (c * sigma(x))

    diffusion = constant(diff_const)
    return [("sk-limit", drift_limit, diffusion),
            ("naive", ScalarField(naive_fn, name="naive-drift"), diffusion)]


@dataclass
class ConvergenceReport:
    """Per-mass, per-candidate error metrics from a shared-path sweep."""

    masses: List[float]
    candidates: List[str]
    t_final: float
    n_fine: int
    n_coarse: int
    n_samples: int
    master_seed: int
    scheme: str
    excluded: List[int]
    sup_errors: Dict[str, np.ndarray]          # label -> (n_masses, n_samples)
    terminal_underdamped: np.ndarray           # (n_masses, n_samples)
    terminal_candidates: Dict[str, np.ndarray]  # label -> (n_samples,)
    coupling_max_rel_dev: float
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            self.summary = self._summarize()

    def _included(self):
        mask = np.ones(self.n_samples, dtype=bool)
        mask[list(self.excluded)] = False
        return mask

    def _summarize(self):
        inc = self._included()
        n_inc = int(inc.sum())
        per_candidate = {}
        smallest = len(self.masses) - 1  # masses are strictly decreasing
        for label in self.candidates:
            sup = self.sup_errors[label][:, inc]
            mean_sup = sup.mean(axis=1)
            entry = {
                "mean_sup_err": [float(v) for v in mean_sup],
                "max_sup_err": [float(v) for v in sup.max(axis=1)],
                "terminal_weak": [],
                "terminal_se": [],
                "ks": [],
            }
            tc = self.terminal_candidates[label][inc]
            sem_c = tc.std(ddof=1) / np.sqrt(n_inc) if n_inc > 1 else np.nan
            for i in range(len(self.masses)):
                tm = self.terminal_underdamped[i, inc]
                sem_m = tm.std(ddof=1) / np.sqrt(n_inc) if n_inc > 1 else np.nan
                entry["terminal_weak"].append(float(abs(tm.mean() - tc.mean())))
                entry["terminal_se"].append(float(np.hypot(sem_m, sem_c)))
                entry["ks"].append(float(scipy.stats.ks_2samp(tm, tc).statistic))
            if len(self.masses) >= 2:
                rho, p = scipy.stats.spearmanr(self.masses, mean_sup)
                entry["spearman_rho"] = float(rho)
                entry["spearman_p"] = float(p)
            else:
                entry["spearman_rho"] = None
                entry["spearman_p"] = None
            per_candidate[label] = entry

        # per-sample comparisons at the smallest mass
        sup_small = np.stack([self.sup_errors[label][smallest, inc] for label in self.candidates])
        argmin = np.argmin(sup_small, axis=0)
        win_fraction = {label: float((argmin == j).mean())
                        for j, label in enumerate(self.candidates)}
        pairwise = {}
        for j, a in enumerate(self.candidates):
            for k, b in enumerate(self.candidates):
                if j != k:
                    pairwise["%s<%s" % (a, b)] = float((sup_small[j] < sup_small[k]).mean())

        def _argmin_label(key):
            vals = [per_candidate[label][key][smallest] for label in self.candidates]
            return self.candidates[int(np.argmin(vals))]

        return {
            "n_included": n_inc,
            "n_excluded": len(self.excluded),
            "exclusion_fraction": len(self.excluded) / self.n_samples,
            "per_candidate": per_candidate,
            "win_fraction_at_smallest_mass": win_fraction,
            "pairwise_win_at_smallest_mass": pairwise,
            "winner": {
                "pathwise": _argmin_label("mean_sup_err"),
                "terminal_weak": _argmin_label("terminal_weak"),
                "ks": _argmin_label("ks"),
            },
            "coupling_max_rel_dev": self.coupling_max_rel_dev,
        }

    def to_dict(self):
        return {
            "masses": [float(m) for m in self.masses],
            "candidates": list(self.candidates),
            "t_final": self.t_final,
            "n_fine": self.n_fine,
            "n_coarse": self.n_coarse,
            "n_samples": self.n_samples,
            "master_seed": self.master_seed,
            "scheme": self.scheme,
            "excluded": [int(i) for i in self.excluded],
            "sup_errors": {k: v.tolist() for k, v in self.sup_errors.items()},
            "terminal_underdamped": self.terminal_underdamped.tolist(),
            "terminal_candidates": {k: v.tolist() for k, v in self.terminal_candidates.items()},
            "coupling_max_rel_dev": self.coupling_max_rel_dev,
            "summary": self.summary,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d):
        return cls(
            masses=d["masses"], candidates=d["candidates"], t_final=d["t_final"],
            n_fine=d["n_fine"], n_coarse=d["n_coarse"], n_samples=d["n_samples"],
            master_seed=d["master_seed"], scheme=d["scheme"], excluded=d["excluded"],
            sup_errors={k: np.asarray(v) for k, v in d["sup_errors"].items()},
            terminal_underdamped=np.asarray(d["terminal_underdamped"]),
            terminal_candidates={k: np.asarray(v) for k, v in d["terminal_candidates"].items()},
            coupling_max_rel_dev=d["coupling_max_rel_dev"],
            summary=d["summary"],
        )

    def summary_csv(self):
        """Per-(mass, candidate) table with the headline metrics."""
        lines = ["mass,candidate,mean_sup_err,max_sup_err,terminal_weak,ks"]
        for i, m in enumerate(self.masses):
            for label in self.candidates:
                e = self.summary["per_candidate"][label]
                lines.append(",".join([
                    repr(float(m)), label,
                    repr(e["mean_sup_err"][i]), repr(e["max_sup_err"][i]),
                    repr(e["terminal_weak"][i]), repr(e["ks"][i]),
                ]))
        return "\n".join(lines) + "\n"


def _block_size(n_samples, n_fine):
    return max(1, min(n_samples, _BLOCK_ELEMS // max(1, n_fine)))


def _run_blocks(n_samples, n_fine, threads, worker):
    size = _block_size(n_samples, n_fine)
    blocks = [(b, min(b + size, n_samples)) for b in range(0, n_samples, size)]
    if threads <= 1:
        for b0, b1 in blocks:
            worker(b0, b1)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda blk: worker(*blk), blocks))


def mass_sweep(spec: DynamicsSpec, masses: Sequence[float], candidates: Sequence[Candidate],
               t_final: float, n_fine: int, n_samples: int, master_seed: int,
               scheme: str = "exponential", n_coarse: Optional[int] = None,
               threads: int = 1) -> ConvergenceReport:
    """Shared-path convergence experiment over a decreasing mass grid.

    For each sample, one fine Wiener path drives the underdamped dynamics
    at every mass; its coarsening (coarse dt ~ 1e-3 t_final by default)
    drives every candidate overdamped SDE.  Sup-distances are measured on
    the coarse grid (fine trajectories subsampled, not interpolated).

    Samples whose trajectories leave the domain are excluded and counted;
    more than 10% exclusions aborts with :class:`ExperimentError`.
    """
    masses = [float(m) for m in masses]
    if any(m <= 0 for m in masses):
        raise ValueError("masses must be positive")
    if any(b >= a for a, b in zip(masses, masses[1:])):
        raise ValueError("masses must be strictly decreasing")
    candidates = list(candidates)
    if not candidates:
        raise ValueError("at least one candidate is required")
    labels = [label for label, _, _ in candidates]
    if len(set(labels)) != len(labels):
        raise ValueError("candidate labels must be unique")
    n_fine = int(n_fine)
    if n_coarse is None:
        n_coarse = min(1000, n_fine)
    n_coarse = int(n_coarse)
    if n_fine % n_coarse != 0:
        raise ValueError("n_coarse=%d must divide n_fine=%d" % (n_coarse, n_fine))
    factor = n_fine // n_coarse
    dt_fine = t_final / n_fine
    dt_coarse = t_final / n_coarse
    tau_min = masses[-1] / spec.friction_max
    if scheme == "exponential" and dt_fine > 0.5 * tau_min:
        warnings.warn("fine dt=%.3g does not resolve the velocity relaxation time %.3g "
                      "of the smallest mass; the sweep may be biased" % (dt_fine, tau_min))
    record = np.arange(0, n_fine + 1, factor)

    sup = {label: np.empty((len(masses), n_samples)) for label in labels}
    term_m = np.empty((len(masses), n_samples))
    term_c = {label: np.empty(n_samples) for label in labels}
    excluded = np.zeros(n_samples, dtype=bool)
    coupling_dev = np.zeros(n_samples)

    def worker(b0, b1):
        ns = b1 - b0
        dW = sample_increments(t_final, n_fine, master_seed, range(b0, b1))
        dWc = dW.reshape(ns, n_coarse, factor).sum(axis=2)
        dev = np.abs(dW.sum(axis=1) - dWc.sum(axis=1)) / np.maximum(1.0, np.abs(dW.sum(axis=1)))
        coupling_dev[b0:b1] = dev
        excl = np.zeros(ns, dtype=bool)
        cand_pos = {}
        for label, drift, diffusion in candidates:
            pos, ex, _ = _em_batch(drift, diffusion, spec.x0, dt_coarse, dWc, domain=spec.domain)
            excl |= ex >= 0
            cand_pos[label] = pos
            term_c[label][b0:b1] = pos[:, -1]
        for i, mass in enumerate(masses):
            pos, _, ex, _ = _underdamped_batch(spec, mass, dt_fine, dW, record, scheme=scheme)
            excl |= ex >= 0
            term_m[i, b0:b1] = pos[:, -1]
            for label in labels:
                sup[label][i, b0:b1] = np.abs(pos - cand_pos[label]).max(axis=1)
        excluded[b0:b1] = excl

    _run_blocks(n_samples, n_fine, threads, worker)

    max_dev = float(coupling_dev.max()) if n_samples else 0.0
    if max_dev > _COUPLING_RTOL:
        raise ExperimentError("shared-path checksum failed: coarsened increments deviate by %.3e"
                              % max_dev)
    excluded_idx = [int(i) for i in np.nonzero(excluded)[0]]
    if len(excluded_idx) > EXCLUSION_BUDGET * n_samples:
        raise ExperimentError("%d of %d samples left the domain (budget %d%%)"
                              % (len(excluded_idx), n_samples, int(EXCLUSION_BUDGET * 100)))
    return ConvergenceReport(
        masses=masses, candidates=labels, t_final=float(t_final), n_fine=n_fine,
        n_coarse=n_coarse, n_samples=int(n_samples), master_seed=int(master_seed),
        scheme=scheme, excluded=excluded_idx, sup_errors=sup,
        terminal_underdamped=term_m, terminal_candidates=term_c,
        coupling_max_rel_dev=max_dev)


def singular_case_experiment(spec: DynamicsSpec, c: float, masses: Sequence[float],
                             t_final: float, n_fine: int, n_samples: int, master_seed: int,
                             scheme: str = "exponential", n_coarse: Optional[int] = None,
                             threads: int = 1) -> ConvergenceReport:
    """Mass sweep for the proportional case gamma = c sigma.

    Exactly two candidates: the limiting SDE with the noise-induced drift
    correction ("sk-limit") and the naive overdamped equation without it
    ("naive"), both with constant diffusion 1/c.
    """
    return mass_sweep(spec, masses, singular_candidates(spec, c), t_final, n_fine,
                      n_samples, master_seed, scheme=scheme, n_coarse=n_coarse, threads=threads)


def ou_stationary_check(gamma0, sigma0, t_final, dt, seed, n_paths=64):
    """Euler-Maruyama check of the Ornstein-Uhlenbeck stationary variance.

    Simulates du = -gamma0 u dt + sigma0 dW from u(0)=0, discards the first
    10% of each path as burn-in and averages the per-path time-average
    variance over ``n_paths`` independent paths (one path per stream, so
    n_paths=1 reproduces a plain single-path check; the default keeps the
    estimator noise near 2%).

    Requires t_final * gamma0 >= 50 so the burn-in covers many relaxation
    times.
    """
    gamma0, sigma0, t_final, dt = float(gamma0), float(sigma0), float(t_final), float(dt)
    if not gamma0 > 0:
        raise ValueError("gamma0 must be positive")
    if t_final * gamma0 < 50.0:
        raise ValueError("t_final*gamma0 = %g < 50: too short to reach stationarity" % (t_final * gamma0))
    n = int(round(t_final / dt))
    burn = int(0.1 * n)
    dW = sample_increments(t_final, n, seed, range(int(n_paths)))
    u = np.zeros(int(n_paths))
    s1 = np.zeros_like(u)
    s2 = np.zeros_like(u)
    count = 0
    for k in range(n):
        u = u - gamma0 * u * dt + sigma0 * dW[:, k]
        if k >= burn:
            s1 += u
            s2 += u * u
            count += 1
    mean = s1 / count
    var = s2 / count - mean * mean
    empirical = float(var.mean())
    expected = ou_stationary_variance(gamma0, sigma0)
    rel = abs(empirical - expected) / expected if expected > 0 else abs(empirical - expected)
    return {"empirical_variance": empirical, "expected_variance": expected,
            "relative_error": float(rel), "n_paths": int(n_paths),
            "t_final": t_final, "dt": dt, "seed": int(seed)}


def shared_path_trajectories(spec: DynamicsSpec, masses: Sequence[float],
                             candidates: Sequence[Candidate], t_final: float,
                             n_fine: int, seed: int, scheme: str = "exponential",
                             n_coarse: Optional[int] = None):
    """One shared-noise realization of every trajectory, on the coarse grid.

    Returns a list of ("mass", mass, Trajectory) and
    ("candidate", label, Trajectory) entries, all subsampled/integrated on
    the common coarse grid; this is the input the figure renderer consumes.
    """
    n_fine = int(n_fine)
    if n_coarse is None:
        n_coarse = min(1000, n_fine)
    if n_fine % n_coarse != 0:
        raise ValueError("n_coarse=%d must divide n_fine=%d" % (n_coarse, n_fine))
    factor = n_fine // n_coarse
    path = sample_path(t_final, n_fine, seed, stream=0)
    coarse = coarsen(path, factor)
    out = []
    for mass in masses:
        traj = integrate_underdamped(spec, float(mass), path, scheme=scheme).subsample(factor)
        out.append(("mass", float(mass), traj))
    for label, drift, diffusion in candidates:
        traj = integrate_ito(drift, diffusion, spec.x0, coarse, domain=spec.domain)
        traj.meta["candidate"] = label
        out.append(("candidate", label, traj))
    return out

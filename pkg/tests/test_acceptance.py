"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -v -s`.  The Monte Carlo criteria
are ordinal (winner/ordering statements) at the preset scales and run in a
few minutes total; every tolerance is stated inline.
"""

import time

import numpy as np
import pytest
import scipy.stats

import skdrift as sk
from skdrift import experiments
from skdrift.cli import main
from skdrift.config import DEFAULT_MASTER_SEED, preset
from skdrift.integrators import _em_batch, _underdamped_batch
from skdrift.limits import SingularProportionalCase


def _verdict(num, name, ok, detail):
    print("ACCEPTANCE %d %s: %s -- %s" % (num, name, "PASS" if ok else "FAIL", detail))
    assert ok, detail


# -- 1: drift identity -------------------------------------------------------

def test_acceptance_1_drift_identity():
    sigma = sk.sinusoid(2.0, 1.0)
    e_gamma, e_sigma = sk.from_einstein(sk.exponential(1.0, 1.0 / 3.0), kBT=1.5)
    specs = [("einstein", sk.DynamicsSpec(
        force=sk.constant(0.0), friction=e_gamma, noise=e_sigma,
        domain=(-2.0, 2.0), x0=0.0))]
    for lam in (0.0, 4.0 / 3.0, 2.0, 3.0):
        specs.append(("power-law lambda=%.3g" % lam, sk.DynamicsSpec(
            force=sk.constant(0.0), friction=sk.power_law(sigma, 0.9, lam),
            noise=sigma, domain=(-6.0, 6.0), x0=0.0)))
    specs.append(("generic", sk.DynamicsSpec(
        force=sk.sinusoid(0.0, 0.5), friction=sk.quadratic(2.0, 0.05),
        noise=sk.exponential(1.0, 0.2), domain=(-3.0, 3.0), x0=0.0)))

    start = time.perf_counter()
    rng = np.random.default_rng(DEFAULT_MASTER_SEED)
    worst = 0.0
    for name, spec in specs:
        lo, hi = spec.domain
        xs = lo + (hi - lo) * rng.random(1000)
        ref = sk.sk_drift(spec)(xs)
        implied = sk.ito_drift_from_alpha(spec, sk.alpha_field(spec))(xs)
        err = float(np.max(np.abs(implied - ref) / np.maximum(np.abs(ref), 1e-12)))
        worst = max(worst, err)
        assert err < 1e-10, (name, err)
    elapsed = time.perf_counter() - start
    _verdict(1, "drift identity", worst < 1e-10 and elapsed < 1.0,
             "max rel err %.2e over %d families in %.2fs" % (worst, len(specs), elapsed))


# -- 2: alpha(lambda) ---------------------------------------------------------

def test_acceptance_2_alpha_of_lambda():
    start = time.perf_counter()
    exact = abs(sk.alpha_of_lambda(0.0) - 0.0) <= 1e-12 \
        and abs(sk.alpha_of_lambda(2.0) - 1.0) <= 1e-12 \
        and abs(sk.alpha_of_lambda(4.0 / 3.0) - 2.0) <= 1e-12
    grid = [v for v in np.arange(-5.0, 5.5, 0.5) if abs(v - 1.0) > 1e-9] + [-1e3, 1e3]
    identity = all(abs(abs(sk.alpha_of_lambda(l) - 0.5) - 1.0 / (2.0 * abs(l - 1.0)))
                   <= 1e-12 * max(1.0, 1.0 / abs(l - 1.0)) for l in grid)
    with pytest.raises(SingularProportionalCase):
        sk.alpha_of_lambda(1.0)
    elapsed = time.perf_counter() - start
    _verdict(2, "alpha(lambda) table", exact and identity and elapsed < 1.0,
             "exact checks + |alpha-1/2| identity on %d grid points in %.2fs"
             % (len(grid), elapsed))


# -- 3-5: mass-sweep winners --------------------------------------------------

def _preset_sweep(name, alphas, threads=2):
    cfg = preset(name)
    spec = cfg.build_spec()
    return sk.mass_sweep(spec, cfg.run["masses"], sk.alpha_candidates(spec, alphas),
                         cfg.run["t_final"], cfg.run["n_fine"], cfg.run["n_samples"],
                         cfg.run["master_seed"], n_coarse=cfg.run["n_coarse"],
                         threads=threads)


def test_acceptance_3_einstein_case_anti_ito_wins():
    rep = _preset_sweep("fig1", [1.0, 0.0])
    mean_sup = rep.summary["per_candidate"]["alpha=1"]["mean_sup_err"]
    monotone = all(a > b for a, b in zip(mean_sup, mean_sup[1:]))
    p = rep.summary["per_candidate"]["alpha=1"]["spearman_p"]
    win = rep.summary["pairwise_win_at_smallest_mass"]["alpha=1<alpha=0"]
    _verdict(3, "Einstein case (anti-Ito limit)",
             monotone and p < 0.01 and win >= 0.80,
             "mean sup %s, spearman p=%.3g, win=%.2f (need >=0.80), excluded=%d"
             % (["%.3f" % v for v in mean_sup], p, win, len(rep.excluded)))


def test_acceptance_4_constant_friction_ito_wins():
    rep = _preset_sweep("fig2-constant-friction", [0.0, 1.0])
    mean_sup = rep.summary["per_candidate"]["alpha=0"]["mean_sup_err"]
    monotone = all(a > b for a, b in zip(mean_sup, mean_sup[1:]))
    p = rep.summary["per_candidate"]["alpha=0"]["spearman_p"]
    win = rep.summary["pairwise_win_at_smallest_mass"]["alpha=0<alpha=1"]
    _verdict(4, "constant friction (Ito limit)",
             monotone and p < 0.01 and win >= 0.80,
             "mean sup %s, spearman p=%.3g, win=%.2f, excluded=%d"
             % (["%.3f" % v for v in mean_sup], p, win, len(rep.excluded)))


def test_acceptance_5_lambda_four_thirds_alpha2_wins():
    rep = _preset_sweep("fig4-alpha2", [0.0, 1.0, 2.0])
    mean_sup = rep.summary["per_candidate"]["alpha=2"]["mean_sup_err"]
    monotone = all(a > b for a, b in zip(mean_sup, mean_sup[1:]))
    p = rep.summary["per_candidate"]["alpha=2"]["spearman_p"]
    win = rep.summary["win_fraction_at_smallest_mass"]["alpha=2"]
    _verdict(5, "gamma=sigma^(4/3) (alpha=2 limit)",
             monotone and p < 0.01 and win >= 0.80,
             "mean sup %s, spearman p=%.3g, argmin win=%.2f, excluded=%d"
             % (["%.3f" % v for v in mean_sup], p, win, len(rep.excluded)))


# -- 6: singular proportional case ---------------------------------------------

def test_acceptance_6_singular_case_drift_correction_detected():
    cfg = preset("fig5-singular")
    spec = cfg.build_spec()
    rep = sk.singular_case_experiment(spec, 1.0, [1e-3], cfg.run["t_final"],
                                      cfg.run["n_fine"], 10_000, cfg.run["master_seed"],
                                      n_coarse=cfg.run["n_coarse"], threads=2)
    s = rep.summary["per_candidate"]
    limit_ok = s["sk-limit"]["terminal_weak"][0] <= 3.0 * s["sk-limit"]["terminal_se"][0]
    naive_out = s["naive"]["terminal_weak"][0] > 3.0 * s["naive"]["terminal_se"][0]
    ks_ordered = s["sk-limit"]["ks"][0] < s["naive"]["ks"][0]
    _verdict(6, "singular case (noise-induced drift)",
             limit_ok and naive_out and ks_ordered,
             "weak: limit %.4f (3se %.4f), naive %.4f (3se %.4f); KS %.4f vs %.4f"
             % (s["sk-limit"]["terminal_weak"][0], 3 * s["sk-limit"]["terminal_se"][0],
                s["naive"]["terminal_weak"][0], 3 * s["naive"]["terminal_se"][0],
                s["sk-limit"]["ks"][0], s["naive"]["ks"][0]))


# -- 7: OU stationary variance ---------------------------------------------------

def test_acceptance_7_ou_stationary_variance():
    cases = [(1.0, 1.0), (2.0, 2.0), (0.5, 1.0)]
    rels = []
    for i, (g0, s0) in enumerate(cases):
        res = sk.ou_stationary_check(g0, s0, t_final=100.0, dt=1e-3,
                                     seed=DEFAULT_MASTER_SEED + i)
        rels.append(res["relative_error"])
    ok = all(r < 0.05 for r in rels)
    _verdict(7, "OU stationary variance",
             ok, "relative errors %s (tol 5%%)" % (["%.3f" % r for r in rels]))


# -- 8: thread-count determinism ---------------------------------------------------

def test_acceptance_8_sweep_byte_identical_across_threads(tmp_path, monkeypatch):
    # force several work blocks so the worker pool genuinely matters, then
    # compare CLI outputs byte for byte
    monkeypatch.setattr(experiments, "_BLOCK_ELEMS", 4 * 2000)
    cfg = preset("fig1")
    cfg.run.update({"n_fine": 2000, "n_coarse": 500, "masses": [0.1, 0.01], "n_samples": 18})
    ini = tmp_path / "det.ini"
    outs = {}
    for threads in (1, 4):
        cfg.output["directory"] = str(tmp_path / ("t%d" % threads))
        ini.write_text(cfg.to_ini())
        assert main(["sweep", "--config", str(ini), "--threads", str(threads)]) == 0
        outs[threads] = {name: (tmp_path / ("t%d" % threads) / name).read_bytes()
                         for name in ("report.csv", "report.json")}
    same = outs[1] == outs[4]
    _verdict(8, "thread-count determinism", same,
             "report.csv and report.json byte-identical for --threads 1 vs 4")


# -- 9: integrator self-convergence ----------------------------------------------

def test_acceptance_9_self_convergence_orders():
    # (a) exponential scheme at m=1e-2 on the Einstein preset: the sup gap
    # between dt and dt/2 runs halves (ratio within [1.7, 2.3], averaged
    # over 16 shared-noise paths)
    spec = preset("fig1").build_spec()
    n4 = 16_000
    dW4 = sk.sample_increments(1.0, n4, DEFAULT_MASTER_SEED, range(16))

    def positions(dW, n):
        pos, _, _, _ = _underdamped_batch(spec, 1e-2, 1.0 / n, dW, np.arange(n + 1))
        return pos

    x1 = positions(dW4.reshape(16, -1, 4).sum(axis=2), n4 // 4)
    x2 = positions(dW4.reshape(16, -1, 2).sum(axis=2), n4 // 2)
    x4 = positions(dW4, n4)
    gap1 = np.abs(x1 - x2[:, ::2]).max(axis=1).mean()
    gap2 = np.abs(x2 - x4[:, ::2]).max(axis=1).mean()
    ratio = gap1 / gap2
    ratio_ok = 1.7 <= ratio <= 2.3

    # (b) Euler-Maruyama strong order on dx = x dW: fitted exponent in
    # [0.35, 0.65] against a shared fine reference
    ident = sk.ScalarField(lambda x: np.asarray(x, float),
                           lambda x: np.ones_like(np.asarray(x, float)))
    zero = sk.constant(0.0)
    n_ref, n_paths = 2 ** 14, 1000
    dWr = sk.sample_increments(1.0, n_ref, DEFAULT_MASTER_SEED + 1000, range(n_paths))
    ref, _, _ = _em_batch(zero, ident, 1.0, 1.0 / n_ref, dWr)
    errs, dts = [], []
    for lev in (6, 7, 8, 9):
        n = 2 ** lev
        pos, _, _ = _em_batch(zero, ident, 1.0, 1.0 / n,
                              dWr.reshape(n_paths, n, n_ref // n).sum(axis=2))
        errs.append(np.abs(pos[:, -1] - ref[:, -1]).mean())
        dts.append(1.0 / n)
    slope = float(np.polyfit(np.log(dts), np.log(errs), 1)[0])
    slope_ok = 0.35 <= slope <= 0.65
    _verdict(9, "integrator self-convergence", ratio_ok and slope_ok,
             "exponential dt-halving ratio %.2f (need 1.7-2.3); "
             "Euler-Maruyama strong order %.2f (need 0.35-0.65)" % (ratio, slope))

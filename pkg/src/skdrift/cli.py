"""Command-line front end.

Subcommands
-----------
simulate   one shared-noise realization of every trajectory -> CSV files
sweep      shared-path mass sweep -> report.json / report.csv
singular   the proportional-case experiment (gamma = c sigma)
alpha      alpha(x) table (and optionally the alpha(lambda) table)
check      drift-identity and OU stationary-variance self-checks
preset     emit the configuration for a builtin demonstration preset

Exit codes: 0 success, 1 configuration/validation error, 2 numerical
failure (domain-exit budget exceeded, singular alpha, unstable scheme).
Outputs land in the configured directory next to a manifest.json carrying
the config hash and master seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .config import ConfigError, PRESET_NAMES, RunConfig, load_config, preset
from .experiments import (ExperimentError, mass_sweep, ou_stationary_check,
                          shared_path_trajectories, singular_candidates,
                          singular_case_experiment)
from .fields import CoefficientError
from .integrators import DomainExitError, StabilityError, dump_trajectory_csv
from .limits import (SingularProportionalCase, alpha_of_lambda, alpha_of_x,
                     ito_drift_from_alpha, alpha_field, sk_drift, singular_sk_drift)

DRIFT_IDENTITY_RTOL = 1e-10
OU_CHECK_RTOL = 0.05
ALPHA_GRID_POINTS = 201


def _threads(args):
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("SK_LIMIT_THREADS")
    return max(1, int(env)) if env else 1


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.run["master_seed"] = int(args.seed)
    if args.out is not None:
        cfg.output["directory"] = args.out
    return cfg


def _write(outdir, name, text):
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return name


def _write_manifest(outdir, cfg, command, outputs):
    manifest = {
        "command": command,
        "config_sha256": cfg.config_hash(),
        "master_seed": cfg.run["master_seed"],
        "outputs": sorted(outputs),
        "version": __version__,
    }
    _write(outdir, "manifest.json", json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _coefficients_csv(spec):
    grid = np.linspace(spec.domain[0], spec.domain[1], 256)
    lines = ["x,gamma,sigma,force"]
    for x in grid:
        lines.append(",".join(repr(float(v)) for v in
                              (x, spec.friction(x), spec.noise(x), spec.force(x))))
    return "\n".join(lines) + "\n"


def _slug(label):
    return label.replace("=", "-").replace("(", "").replace(")", "").replace("/", "-")


def _dump_candidates(cfg, spec):
    """Candidate SDEs to dump: the singular pair when gamma = c sigma."""
    exponent = cfg.power_law_exponent()
    if exponent is not None and abs(exponent[1] - 1.0) <= 1e-12:
        return singular_candidates(spec, exponent[0])
    return cfg.candidate_list(spec)


def _dump_trajectories(outdir, cfg, spec):
    run = cfg.run
    entries = shared_path_trajectories(
        spec, run["masses"], _dump_candidates(cfg, spec), run["t_final"], run["n_fine"],
        run["master_seed"], scheme=run["scheme"], n_coarse=run["n_coarse"])
    written = []
    for kind, key, traj in entries:
        if kind == "mass":
            name = "traj_mass_%s.csv" % ("%g" % key)
        else:
            name = "traj_candidate_%s.csv" % _slug(key)
        out = os.path.join(outdir, name)
        os.makedirs(outdir, exist_ok=True)
        dump_trajectory_csv(traj, out)
        written.append(name)
    written.append(_write(outdir, "coefficients.csv", _coefficients_csv(spec)))
    return written


def cmd_simulate(args):
    cfg = _load(args)
    spec = cfg.build_spec()
    outdir = cfg.output["directory"]
    outputs = _dump_trajectories(outdir, cfg, spec)
    _write_manifest(outdir, cfg, "simulate", outputs)
    print("simulate: wrote %d trajectory files to %s" % (len(outputs) - 1, outdir))
    return 0


def _write_report(outdir, cfg, report, command):
    outputs = []
    if "json" in cfg.output["formats"]:
        outputs.append(_write(outdir, "report.json", report.to_json() + "\n"))
    if "csv" in cfg.output["formats"]:
        outputs.append(_write(outdir, "report.csv", report.summary_csv()))
    _write_manifest(outdir, cfg, command, outputs)
    return outputs


def cmd_sweep(args):
    cfg = _load(args)
    exponent = cfg.power_law_exponent()
    if exponent is not None and abs(exponent[1] - 1.0) <= 1e-12:
        raise ConfigError("lambda: gamma is proportional to sigma, so alpha candidates "
                          "are undefined; use the singular subcommand")
    spec = cfg.build_spec()
    candidates = cfg.candidate_list(spec)
    if not candidates:
        raise ConfigError("alphas: at least one candidate required for sweep")
    run = cfg.run
    report = mass_sweep(spec, run["masses"], candidates, run["t_final"], run["n_fine"],
                        run["n_samples"], run["master_seed"], scheme=run["scheme"],
                        n_coarse=run["n_coarse"], threads=_threads(args))
    outdir = cfg.output["directory"]
    _write_report(outdir, cfg, report, "sweep")
    if cfg.output["dump_trajectories"]:
        _dump_trajectories(outdir, cfg, spec)
    print("sweep: winner (pathwise) = %s; report in %s" %
          (report.summary["winner"]["pathwise"], outdir))
    return 0


def cmd_singular(args):
    cfg = _load(args)
    exponent = cfg.power_law_exponent()
    if exponent is None or abs(exponent[1] - 1.0) > 1e-12:
        raise ConfigError("lambda: the singular experiment requires power-law "
                          "coefficients with lambda = 1")
    c = exponent[0]
    spec = cfg.build_spec()
    run = cfg.run
    report = singular_case_experiment(spec, c, run["masses"], run["t_final"], run["n_fine"],
                                      run["n_samples"], run["master_seed"], scheme=run["scheme"],
                                      n_coarse=run["n_coarse"], threads=_threads(args))
    outdir = cfg.output["directory"]
    _write_report(outdir, cfg, report, "singular")
    if cfg.output["dump_trajectories"]:
        _dump_trajectories(outdir, cfg, spec)
    print("singular: winner (terminal) = %s; report in %s" %
          (report.summary["winner"]["terminal_weak"], outdir))
    return 0


def cmd_alpha(args):
    cfg = _load(args)
    spec = cfg.build_spec()
    grid = np.linspace(spec.domain[0], spec.domain[1], ALPHA_GRID_POINTS)
    exponent = cfg.power_law_exponent()
    if exponent is not None:
        # declared gamma = c sigma^lambda: alpha is constant in x
        alpha = alpha_of_lambda(exponent[1])
        values = np.full_like(grid, alpha)
        print("# power-law exponent lambda=%r -> constant alpha=%r" % (exponent[1], alpha),
              file=sys.stderr)
    else:
        values = alpha_of_x(spec, grid)
    lines = ["x,alpha"] + ["%s,%s" % (repr(float(x)), repr(float(a)))
                           for x, a in zip(grid, values)]
    table = "\n".join(lines) + "\n"
    sys.stdout.write(table)
    outdir = cfg.output["directory"]
    outputs = [_write(outdir, "alpha.csv", table)]
    if args.lambda_grid:
        try:
            lo, hi, n = args.lambda_grid.split(":")
            lo, hi, n = float(lo), float(hi), int(n)
        except ValueError:
            raise ConfigError("--lambda-grid: expected LO:HI:N")
        lam = np.linspace(lo, hi, n)
        rows = ["lambda,alpha"]
        for l in lam:
            if abs(l - 1.0) <= 1e-9:
                continue  # the singular point has no alpha
            rows.append("%s,%s" % (repr(float(l)), repr(alpha_of_lambda(l))))
        outputs.append(_write(outdir, "lambda_alpha.csv", "\n".join(rows) + "\n"))
    _write_manifest(outdir, cfg, "alpha", outputs)
    return 0


def cmd_check(args):
    cfg = _load(args)
    spec = cfg.build_spec()
    seed = cfg.run["master_seed"]
    failures = 0

    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 2 ** 32], dtype=np.uint64)))
    lo, hi = spec.domain
    points = lo + (hi - lo) * rng.random(1000)
    reference = sk_drift(spec)(points)
    scale = np.maximum(np.abs(reference), 1e-12)
    try:
        implied = ito_drift_from_alpha(spec, alpha_field(spec))(points)
        err = float(np.max(np.abs(implied - reference) / scale))
        ok = err <= DRIFT_IDENTITY_RTOL
        print("drift-identity: %s (max rel err %.3e, tol %.0e)"
              % ("PASS" if ok else "FAIL", err, DRIFT_IDENTITY_RTOL))
        failures += 0 if ok else 1
    except SingularProportionalCase:
        c = float(spec.friction(spec.x0) / spec.noise(spec.x0))
        drift, _ = singular_sk_drift(spec, c)
        err = float(np.max(np.abs(drift(points) - reference) / scale))
        ok = err <= DRIFT_IDENTITY_RTOL
        print("drift-identity (singular case, c=%g): %s (max rel err %.3e)"
              % (c, "PASS" if ok else "FAIL", err))
        failures += 0 if ok else 1

    gamma0 = float(spec.friction(spec.x0))
    sigma0 = float(spec.noise(spec.x0))
    t_final = 120.0 / gamma0
    result = ou_stationary_check(gamma0, sigma0, t_final, 1e-3 / gamma0, seed, n_paths=256)
    ok = result["relative_error"] <= OU_CHECK_RTOL
    print("ou-stationary: %s (gamma0=%g sigma0=%g rel err %.2f%%, tol %.0f%%)"
          % ("PASS" if ok else "FAIL", gamma0, sigma0,
             100 * result["relative_error"], 100 * OU_CHECK_RTOL))
    failures += 0 if ok else 1
    return 0 if failures == 0 else 2


def cmd_preset(args):
    cfg = preset(args.name)
    text = cfg.to_ini()
    if args.out_file:
        with open(args.out_file, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="skdrift",
        description="Zero-mass limits of Langevin dynamics with state-dependent "
                    "friction and noise: simulation, sweeps and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="path to an INI run configuration")
        p.add_argument("--seed", type=int, default=None, help="override [run] master_seed")
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (default $SK_LIMIT_THREADS or 1); results do not depend on it")
        p.add_argument("--out", default=None, help="override [output] directory")

    p = sub.add_parser("simulate", help="shared-noise trajectories at every mass and candidate")
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="mass-sweep convergence experiment")
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("singular", help="proportional-case experiment (gamma = c sigma)")
    add_common(p)
    p.set_defaults(func=cmd_singular)

    p = sub.add_parser("alpha", help="alpha(x) table for the configured problem")
    add_common(p)
    p.add_argument("--lambda-grid", default=None, metavar="LO:HI:N",
                   help="also write the alpha(lambda) table on this grid")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("check", help="drift-identity and OU stationary-variance checks")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("preset", help="emit a builtin demonstration configuration")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--out-file", default=None, help="write the INI here instead of stdout")
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ExperimentError, DomainExitError, StabilityError, SingularProportionalCase) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 2
    except (ConfigError, CoefficientError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

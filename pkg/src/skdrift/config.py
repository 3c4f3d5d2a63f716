"""Run configuration: strict INI parsing, presets and canonical hashing.

A run is described by four flat sections:

    [problem]     coefficient families, domain, initial conditions
    [run]         time horizon, grids, masses, sample count, master seed
    [candidates]  constant alpha values, or "auto" for alpha(x)
    [output]      directory, formats, trajectory dumping

Unknown sections or keys are rejected; every value is typed.  The builtin
coefficient families are constant, affine, quadratic-offset,
sinusoidal-offset and exponential; friction can also be derived from the
noise (power-law mode) or from a diffusion coefficient / friction profile
with the Einstein relation (einstein mode).
"""

from __future__ import annotations

import configparser
import hashlib
import io
import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, List

from . import fields
from .fields import DynamicsSpec, ScalarField
from .experiments import alpha_candidates, auto_candidates

DEFAULT_MASTER_SEED = 2

PRESET_NAMES = ("fig1", "fig2-constant-friction", "fig4-alpha2", "fig5-singular")


class ConfigError(ValueError):
    """A configuration file failed validation; the message names the key."""


_FAMILY_ARITY = {
    "constant": (1, 1),
    "affine": (2, 2),
    "quadratic-offset": (2, 2),
    "sinusoidal-offset": (2, 3),
    "exponential": (2, 2),
}

_FAMILY_BUILDERS = {
    "constant": fields.constant,
    "affine": fields.affine,
    "quadratic-offset": fields.quadratic,
    "sinusoidal-offset": fields.sinusoid,
    "exponential": fields.exponential,
}

_PROBLEM_KEYS = {"coefficients", "force_family", "force_params", "domain", "x0", "v0",
                 "kbt", "friction_family", "friction_params", "d_family", "d_params",
                 "noise_family", "noise_params", "c", "lambda"}
_RUN_KEYS = {"t_final", "n_fine", "n_coarse", "masses", "n_samples", "master_seed", "scheme"}
_CANDIDATE_KEYS = {"mode", "alphas"}
_OUTPUT_KEYS = {"directory", "formats", "dump_trajectories"}


def _floats(raw, key):
    try:
        return [float(tok) for tok in raw.replace(",", " ").split()]
    except ValueError:
        raise ConfigError("%s: cannot parse %r as a list of numbers" % (key, raw))


def _float(raw, key):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError("%s: cannot parse %r as a number" % (key, raw))


def _int(raw, key):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError("%s: cannot parse %r as an integer" % (key, raw))


def _bool(raw, key):
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError("%s: cannot parse %r as a boolean" % (key, raw))


def _family(prefix, raw):
    name = raw[prefix + "_family"].strip()
    if name not in _FAMILY_BUILDERS:
        raise ConfigError("%s_family: unknown family %r (expected one of %s)"
                          % (prefix, name, ", ".join(sorted(_FAMILY_BUILDERS))))
    params_key = prefix + "_params"
    if params_key not in raw:
        raise ConfigError("%s: required with %s_family" % (params_key, prefix))
    params = _floats(raw[params_key], params_key)
    lo, hi = _FAMILY_ARITY[name]
    if not lo <= len(params) <= hi:
        raise ConfigError("%s: family %r takes %s parameters, got %d"
                          % (params_key, name, lo if lo == hi else "%d-%d" % (lo, hi), len(params)))
    return name, params


def _build_family(name, params):
    return _FAMILY_BUILDERS[name](*params)


@dataclass
class RunConfig:
    """Typed view of a configuration file (see the module docstring)."""

    problem: Dict = dc_field(default_factory=dict)
    run: Dict = dc_field(default_factory=dict)
    candidates: Dict = dc_field(default_factory=dict)
    output: Dict = dc_field(default_factory=dict)

    # -- construction of model objects ------------------------------------

    def build_spec(self) -> DynamicsSpec:
        p = self.problem
        force = _build_family(p["force_family"], p["force_params"])
        mode = p["coefficients"]
        if mode == "einstein":
            if "friction_family" in p:
                gamma_profile = _build_family(p["friction_family"], p["friction_params"])
                kbt = p["kbt"]
                diffusion = ScalarField(
                    lambda x, g=gamma_profile: kbt / g(x),
                    lambda x, g=gamma_profile: -kbt * g.deriv(x) / g(x) ** 2,
                    name="einstein-D")
            else:
                diffusion = _build_family(p["d_family"], p["d_params"])
            gamma, sigma = fields.from_einstein(diffusion, p["kbt"])
        elif mode == "power-law":
            sigma = _build_family(p["noise_family"], p["noise_params"])
            gamma = fields.power_law(sigma, p["c"], p["lambda"])
        else:  # independent
            gamma = _build_family(p["friction_family"], p["friction_params"])
            sigma = _build_family(p["noise_family"], p["noise_params"])
        return DynamicsSpec(force=force, friction=gamma, noise=sigma,
                            domain=tuple(p["domain"]), x0=p["x0"], v0=p["v0"])

    def candidate_list(self, spec):
        if self.candidates["mode"] == "auto":
            return auto_candidates(spec)
        return alpha_candidates(spec, self.candidates["alphas"])

    def power_law_exponent(self):
        """(c, lambda) when friction is a declared power of the noise, else None."""
        p = self.problem
        if p["coefficients"] == "power-law":
            return p["c"], p["lambda"]
        if p["coefficients"] == "einstein":
            # gamma = sigma^2/(2 kBT): a power law with exponent 2
            return 1.0 / (2.0 * p["kbt"]), 2.0
        return None

    # -- canonical representations ----------------------------------------

    def to_dict(self):
        return {"problem": dict(self.problem), "run": dict(self.run),
                "candidates": dict(self.candidates), "output": dict(self.output)}

    def config_hash(self):
        blob = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_ini(self):
        def fmt(v):
            if isinstance(v, bool):
                return "true" if v else "false"
            if isinstance(v, float):
                return repr(v)
            if isinstance(v, (list, tuple)):
                return ", ".join(fmt(x) for x in v)
            return str(v)

        buf = io.StringIO()
        for section, data in (("problem", self.problem), ("run", self.run),
                              ("candidates", self.candidates), ("output", self.output)):
            buf.write("[%s]\n" % section)
            for key, value in data.items():
                buf.write("%s = %s\n" % (key, fmt(value)))
            buf.write("\n")
        return buf.getvalue()


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; raises :class:`ConfigError`."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("config syntax error: %s" % exc)

    known = {"problem", "run", "candidates", "output"}
    for section in cp.sections():
        if section not in known:
            raise ConfigError("unknown section [%s]" % section)
    for section in known:
        if section not in cp:
            raise ConfigError("missing section [%s]" % section)

    raw_p = dict(cp["problem"])
    raw_r = dict(cp["run"])
    raw_c = dict(cp["candidates"])
    raw_o = dict(cp["output"])
    for name, raw, allowed in (("problem", raw_p, _PROBLEM_KEYS), ("run", raw_r, _RUN_KEYS),
                               ("candidates", raw_c, _CANDIDATE_KEYS), ("output", raw_o, _OUTPUT_KEYS)):
        for key in raw:
            if key not in allowed:
                raise ConfigError("unknown key %r in section [%s]" % (key, name))

    # [problem]
    problem = {}
    mode = raw_p.get("coefficients", "").strip()
    if mode not in ("einstein", "power-law", "independent"):
        raise ConfigError("coefficients: expected einstein, power-law or independent, got %r" % mode)
    problem["coefficients"] = mode
    fam, params = _family("force", raw_p) if "force_family" in raw_p else ("constant", [0.0])
    problem["force_family"], problem["force_params"] = fam, params
    if "domain" not in raw_p:
        raise ConfigError("domain: required")
    domain = _floats(raw_p["domain"], "domain")
    if len(domain) != 2 or not domain[0] < domain[1]:
        raise ConfigError("domain: expected two numbers x_lo < x_hi")
    problem["domain"] = domain
    problem["x0"] = _float(raw_p.get("x0", "0.0"), "x0")
    problem["v0"] = _float(raw_p.get("v0", "0.0"), "v0")
    if mode == "einstein":
        if "kbt" not in raw_p:
            raise ConfigError("kbt: required in einstein mode")
        problem["kbt"] = _float(raw_p["kbt"], "kbt")
        if problem["kbt"] <= 0:
            raise ConfigError("kbt: must be positive")
        has_fr = "friction_family" in raw_p
        has_d = "d_family" in raw_p
        if has_fr == has_d:
            raise ConfigError("einstein mode needs exactly one of friction_family or d_family")
        prefix = "friction" if has_fr else "d"
        fam, params = _family(prefix, raw_p)
        problem[prefix + "_family"], problem[prefix + "_params"] = fam, params
    elif mode == "power-law":
        for key in ("noise_family", "c", "lambda"):
            if key not in raw_p:
                raise ConfigError("%s: required in power-law mode" % key)
        fam, params = _family("noise", raw_p)
        problem["noise_family"], problem["noise_params"] = fam, params
        problem["c"] = _float(raw_p["c"], "c")
        if problem["c"] <= 0:
            raise ConfigError("c: must be positive")
        problem["lambda"] = _float(raw_p["lambda"], "lambda")
    else:
        for key in ("friction_family", "noise_family"):
            if key not in raw_p:
                raise ConfigError("%s: required in independent mode" % key)
        for prefix in ("friction", "noise"):
            fam, params = _family(prefix, raw_p)
            problem[prefix + "_family"], problem[prefix + "_params"] = fam, params

    # [run]
    run = {}
    run["t_final"] = _float(raw_r.get("t_final", "1.0"), "t_final")
    if run["t_final"] <= 0:
        raise ConfigError("t_final: must be positive")
    run["n_fine"] = _int(raw_r.get("n_fine", "100000"), "n_fine")
    if run["n_fine"] < 1:
        raise ConfigError("n_fine: must be >= 1")
    run["n_coarse"] = _int(raw_r.get("n_coarse", str(min(1000, run["n_fine"]))), "n_coarse")
    if run["n_coarse"] < 1 or run["n_fine"] % run["n_coarse"] != 0:
        raise ConfigError("n_coarse: must be a positive divisor of n_fine")
    if "masses" not in raw_r:
        raise ConfigError("masses: required")
    run["masses"] = _floats(raw_r["masses"], "masses")
    if not run["masses"] or any(m <= 0 for m in run["masses"]):
        raise ConfigError("masses: must be a nonempty list of positive numbers")
    if any(b >= a for a, b in zip(run["masses"], run["masses"][1:])):
        raise ConfigError("masses: must be strictly decreasing")
    run["n_samples"] = _int(raw_r.get("n_samples", "100"), "n_samples")
    if run["n_samples"] < 1:
        raise ConfigError("n_samples: must be >= 1")
    run["master_seed"] = _int(raw_r.get("master_seed", str(DEFAULT_MASTER_SEED)), "master_seed")
    run["scheme"] = raw_r.get("scheme", "exponential").strip()
    if run["scheme"] not in ("exponential", "explicit-euler"):
        raise ConfigError("scheme: expected exponential or explicit-euler")

    # [candidates]
    candidates = {}
    cmode = raw_c.get("mode", "list").strip()
    if cmode not in ("list", "auto"):
        raise ConfigError("mode: expected list or auto")
    candidates["mode"] = cmode
    if cmode == "list":
        candidates["alphas"] = _floats(raw_c.get("alphas", ""), "alphas")
    elif "alphas" in raw_c:
        raise ConfigError("alphas: not allowed with mode=auto")

    # [output]
    output = {}
    output["directory"] = raw_o.get("directory", "out").strip()
    formats = [tok.strip() for tok in raw_o.get("formats", "csv, json").split(",") if tok.strip()]
    for fmt in formats:
        if fmt not in ("csv", "json"):
            raise ConfigError("formats: unknown format %r" % fmt)
    if not formats:
        raise ConfigError("formats: at least one of csv, json")
    output["formats"] = formats
    output["dump_trajectories"] = _bool(raw_o.get("dump_trajectories", "false"), "dump_trajectories")

    return RunConfig(problem=problem, run=run, candidates=candidates, output=output)


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())


# -- paper-figure presets --------------------------------------------------

def _base_output(name):
    return {"directory": "out/%s" % name, "formats": ["csv", "json"], "dump_trajectories": False}


def preset(name: str) -> RunConfig:
    """Configuration reproducing one of the demonstration figures."""
    if name == "fig1":
        return RunConfig(
            problem={"coefficients": "einstein", "force_family": "constant",
                     "force_params": [0.0], "domain": [-50.0, 200.0], "x0": 0.0, "v0": 0.0,
                     "kbt": 1.0, "friction_family": "affine", "friction_params": [1.0, 0.01]},
            run={"t_final": 1.0, "n_fine": 100000, "n_coarse": 1000,
                 "masses": [0.1, 0.01, 0.001, 0.0001], "n_samples": 100,
                 "master_seed": DEFAULT_MASTER_SEED, "scheme": "exponential"},
            candidates={"mode": "list", "alphas": [1.0, 0.0]},
            output=_base_output("fig1"))
    if name == "fig2-constant-friction":
        return RunConfig(
            problem={"coefficients": "power-law", "force_family": "constant",
                     "force_params": [0.0], "domain": [-6.0, 6.0], "x0": 0.0, "v0": 0.0,
                     "noise_family": "quadratic-offset", "noise_params": [1.0, 0.1],
                     "c": 1.0, "lambda": 0.0},
            run={"t_final": 1.0, "n_fine": 100000, "n_coarse": 1000,
                 "masses": [0.1, 0.01, 0.001, 0.0001], "n_samples": 100,
                 "master_seed": DEFAULT_MASTER_SEED, "scheme": "exponential"},
            candidates={"mode": "list", "alphas": [0.0, 1.0]},
            output=_base_output("fig2"))
    if name == "fig4-alpha2":
        return RunConfig(
            problem={"coefficients": "power-law", "force_family": "constant",
                     "force_params": [0.0], "domain": [-6.0, 6.0], "x0": 0.0, "v0": 0.0,
                     "noise_family": "sinusoidal-offset", "noise_params": [2.0, 1.0, 1.0],
                     "c": 1.0, "lambda": 4.0 / 3.0},
            run={"t_final": 1.0, "n_fine": 500000, "n_coarse": 1000,
                 "masses": [0.1, 0.01, 0.001, 0.0001], "n_samples": 100,
                 "master_seed": DEFAULT_MASTER_SEED, "scheme": "exponential"},
            candidates={"mode": "list", "alphas": [0.0, 1.0, 2.0]},
            output=_base_output("fig4"))
    if name == "fig5-singular":
        return RunConfig(
            problem={"coefficients": "power-law", "force_family": "constant",
                     "force_params": [0.0], "domain": [-6.0, 6.0], "x0": 0.0, "v0": 0.0,
                     "noise_family": "sinusoidal-offset", "noise_params": [2.0, 1.0, 1.0],
                     "c": 1.0, "lambda": 1.0},
            run={"t_final": 1.0, "n_fine": 50000, "n_coarse": 1000,
                 "masses": [0.1, 0.01, 0.001], "n_samples": 10000,
                 "master_seed": DEFAULT_MASTER_SEED, "scheme": "exponential"},
            candidates={"mode": "list", "alphas": []},
            output=_base_output("fig5"))
    raise ConfigError("unknown preset %r (expected one of %s)" % (name, ", ".join(PRESET_NAMES)))

"""Strict INI configuration for the verification harness.

Sections
--------
[covariance]   ``diagonal`` or ``matrix`` (rows separated by ';'), ``zero_threshold``
[corpus.N]     one test field per section; ``kind`` = ridge | constant | linear | quadratic
[suite]        grids, designs, slack and seed
[quadrature]   Gaussian / ridge / time integration parameters
[output]       ``directory``, ``format`` (json | csv | both), ``curves``, ``timing``

Unknown sections or keys, malformed values and violated ranges raise
``ConfigError`` (CLI exit code 2).
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import ConfigError, OUError
from ..fields import ConstantField, ScalarField, make_linear, make_quadratic, make_ridge
from ..gaussian import ZERO_THRESHOLD, CovarianceModel, build_covariance
from ..profiles import AbsClipPow, GaussBump, Sine
from ..quadrature import QuadratureSpec
from ..solver import TimeQuadrature

_CORPUS_KEYS = {
    "ridge": {"kind", "name", "direction", "profile", "power", "clip", "amplitude", "omega", "phase", "order"},
    "constant": {"kind", "name", "value"},
    "linear": {"kind", "name", "coefficients"},
    "quadratic": {"kind", "name", "coefficients"},
}

_SUITE_DEFAULTS = {
    "alphas": "0.3, 0.5, 0.7",
    "lambdas": "0.5, 1, 2",
    "t_min": "1e-3",
    "t_max": "5",
    "t_count": "10",
    "horizon": "1",
    "design_points": "64",
    "design_directions": "32",
    "ladder_min": "0",
    "ladder_max": "10",
    "resolvent_points": "16",
    "resolvent_directions": "8",
    "parabolic_points": "8",
    "parabolic_directions": "8",
    "parabolic_times": "4",
    "parabolic_pairs": "",
    "source_weight": "cos",
    "line_points": "401",
    "formula_times": "0.1, 0.5, 2",
    "formula_points": "6",
    "slack": "1e-3",
    "error_multiple": "3",
    "diagnostics": "true",
    "seed": "42",
}

_QUAD_DEFAULTS = {
    "gh_order": "40",
    "gh_max_dims": "4",
    "qmc_log2": "16",
    "ridge_gl_order": "10",
    "ridge_half_width": "8",
    "ridge_piece": "1.5",
    "ridge_rel_err": "1e-12",
    "engine_tol": "1e-10",
    "time_power": "2",
    "time_split": "0.25",
    "time_grading": "0.5",
    "time_panels": "20",
    "time_tol": "1e-10",
    "time_max": "400",
}

_OUTPUT_DEFAULTS = {
    "directory": "ouschauder-out",
    "format": "json",
    "curves": "true",
    "timing": "false",
}


@dataclass(frozen=True)
class CorpusEntry:
    index: int
    name: str
    field: ScalarField
    params: dict


@dataclass
class SuiteConfig:
    covariance: np.ndarray
    zero_threshold: float
    corpus_spec: list[dict]
    alphas: tuple[float, ...]
    lambdas: tuple[float, ...]
    t_grid: tuple[float, ...]
    horizon: float
    design_points: int = 64
    design_directions: int = 32
    ladder_min: int = 0
    ladder_max: int = 10
    resolvent_points: int = 16
    resolvent_directions: int = 8
    parabolic_points: int = 8
    parabolic_directions: int = 8
    parabolic_times: int = 4
    parabolic_pairs: tuple[tuple[int, int], ...] = ()
    source_weight: str = "cos"
    line_points: int = 401
    formula_times: tuple[float, ...] = (0.1, 0.5, 2.0)
    formula_points: int = 6
    slack: float = 1e-3
    error_multiple: float = 3.0
    diagnostics: bool = True
    seed: int = 42
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    time_quadrature: TimeQuadrature = field(default_factory=TimeQuadrature)
    engine_tol: float = 1e-10
    out_dir: str = "ouschauder-out"
    out_format: str = "json"
    curves: bool = True
    timing: bool = False
    source: str = "<defaults>"

    def with_seed(self, seed: int) -> "SuiteConfig":
        return replace(self, seed=int(seed), quadrature=replace(self.quadrature, seed=int(seed)))

    def build_model(self) -> CovarianceModel:
        return build_covariance(self.covariance, self.zero_threshold)

    def build_corpus(self, model: CovarianceModel) -> list[CorpusEntry]:
        return [CorpusEntry(spec["index"], spec["name"], _build_field(model, spec), spec)
                for spec in self.corpus_spec]


# ---------------------------------------------------------------------------
# value parsing
# ---------------------------------------------------------------------------

def _floats(text: str, key: str) -> tuple[float, ...]:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if not parts:
        raise ConfigError(f"{key}: expected a nonempty list of numbers")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{key}: values must be finite")
    return vals


def _float(text: str, key: str) -> float:
    vals = _floats(text, key)
    if len(vals) != 1:
        raise ConfigError(f"{key}: expected a single number")
    return vals[0]


def _int(text: str, key: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _bool(text: str, key: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def _check_keys(section: str, given, allowed) -> None:
    extra = sorted(set(given) - set(allowed))
    if extra:
        raise ConfigError(f"[{section}]: unknown key(s) {', '.join(extra)}")


def _matrix(sec) -> np.ndarray:
    if "diagonal" in sec and "matrix" in sec:
        raise ConfigError("[covariance]: give either 'diagonal' or 'matrix', not both")
    if "diagonal" in sec:
        return np.diag(_floats(sec["diagonal"], "covariance.diagonal"))
    if "matrix" in sec:
        rows = [r for r in sec["matrix"].split(";") if r.strip()]
        mat = [list(_floats(r, "covariance.matrix")) for r in rows]
        if len({len(r) for r in mat}) != 1 or len(mat) != len(mat[0]):
            raise ConfigError("[covariance]: matrix must be square")
        return np.array(mat)
    raise ConfigError("[covariance]: 'diagonal' or 'matrix' is required")


def _corpus_entry(name: str, sec, index: int, dim: int) -> dict:
    kind = sec.get("kind", "").strip()
    if kind not in _CORPUS_KEYS:
        raise ConfigError(f"[{name}]: kind must be one of {sorted(_CORPUS_KEYS)}")
    _check_keys(name, sec.keys(), _CORPUS_KEYS[kind])
    spec = {"index": index, "kind": kind, "name": sec.get("name", f"{kind}{index}").strip()}
    if kind == "ridge":
        spec["direction"] = _floats(sec.get("direction", ""), f"{name}.direction")
        if len(spec["direction"]) != dim:
            raise ConfigError(f"[{name}]: direction needs {dim} entries")
        prof = sec.get("profile", "").strip()
        if prof not in ("abs_clip_pow", "sine", "gauss_bump"):
            raise ConfigError(f"[{name}]: profile must be abs_clip_pow, sine or gauss_bump")
        allowed = {"abs_clip_pow": {"power", "clip", "amplitude"},
                   "sine": {"omega", "amplitude", "phase"},
                   "gauss_bump": {"amplitude", "order"}}[prof]
        used = set(sec.keys()) & {"power", "clip", "amplitude", "omega", "phase", "order"}
        if used - allowed:
            raise ConfigError(f"[{name}]: key(s) {', '.join(sorted(used - allowed))} do not apply to {prof}")
        spec["profile"] = prof
        for key in used:
            spec[key] = _int(sec[key], f"{name}.{key}") if key == "order" else _float(sec[key], f"{name}.{key}")
    elif kind == "constant":
        spec["value"] = _float(sec.get("value", "1"), f"{name}.value")
    else:
        spec["coefficients"] = _floats(sec.get("coefficients", ""), f"{name}.coefficients")
        if len(spec["coefficients"]) != dim:
            raise ConfigError(f"[{name}]: coefficients need {dim} entries")
    return spec


def _build_field(model: CovarianceModel, spec: dict) -> ScalarField:
    try:
        kind = spec["kind"]
        if kind == "constant":
            return ConstantField(model, spec["value"], spec["name"])
        if kind == "linear":
            return make_linear(model, spec["coefficients"], spec["name"])
        if kind == "quadratic":
            return make_quadratic(model, spec["coefficients"], spec["name"])
        prof = spec["profile"]
        if prof == "abs_clip_pow":
            p = AbsClipPow(spec.get("power", 0.5), spec.get("clip", 1.0), spec.get("amplitude", 1.0))
        elif prof == "sine":
            p = Sine(spec.get("omega", 1.0), spec.get("amplitude", 1.0), spec.get("phase", 0.0))
        else:
            p = GaussBump(spec.get("amplitude", 1.0), int(spec.get("order", 0)))
        return make_ridge(model, spec["direction"], p, spec["name"])
    except (ValueError, OUError) as exc:
        raise ConfigError(f"corpus entry {spec['name']}: {exc}") from None


def _pairs(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for item in [p for p in re.split(r"[,\s]+", text.strip()) if p]:
        m = re.fullmatch(r"(\d+):(\d+)", item)
        if not m:
            raise ConfigError(f"suite.parabolic_pairs: expected 'data:source' index pairs, got {item!r}")
        out.append((int(m.group(1)), int(m.group(2))))
    return tuple(out)


def parse_config(text: str, source: str = "<string>") -> SuiteConfig:
    """Parse and validate a configuration text."""
    cp = configparser.ConfigParser(interpolation=None, strict=True, default_section="__none__")
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    sections = cp.sections()
    known = {"covariance", "suite", "quadrature", "output"}
    for name in sections:
        if name not in known and not re.fullmatch(r"corpus\.\d+", name):
            raise ConfigError(f"unknown section [{name}]")
    if "covariance" not in sections:
        raise ConfigError("missing [covariance] section")

    cov = cp["covariance"]
    _check_keys("covariance", cov.keys(), {"diagonal", "matrix", "zero_threshold"})
    matrix = _matrix(cov)
    zt = _float(cov.get("zero_threshold", str(ZERO_THRESHOLD)), "covariance.zero_threshold")
    if not 0 < zt < 1:
        raise ConfigError("covariance.zero_threshold must lie in (0, 1)")
    dim = matrix.shape[0]

    corpus_names = sorted((s for s in sections if s.startswith("corpus.")), key=lambda s: int(s.split(".")[1]))
    corpus = [_corpus_entry(n, cp[n], int(n.split(".")[1]), dim) for n in corpus_names]
    if not corpus:
        raise ConfigError("the corpus is empty: declare at least one [corpus.N] section")
    names = [c["name"] for c in corpus]
    if len(set(names)) != len(names):
        raise ConfigError("corpus names must be unique")

    suite = dict(_SUITE_DEFAULTS)
    if "suite" in sections:
        _check_keys("suite", cp["suite"].keys(), _SUITE_DEFAULTS)
        suite.update(cp["suite"])
    quad = dict(_QUAD_DEFAULTS)
    if "quadrature" in sections:
        _check_keys("quadrature", cp["quadrature"].keys(), _QUAD_DEFAULTS)
        quad.update(cp["quadrature"])
    out = dict(_OUTPUT_DEFAULTS)
    if "output" in sections:
        _check_keys("output", cp["output"].keys(), _OUTPUT_DEFAULTS)
        out.update(cp["output"])

    alphas = _floats(suite["alphas"], "suite.alphas")
    if not all(0 < a < 1 for a in alphas):
        raise ConfigError("suite.alphas must lie in (0, 1)")
    lambdas = _floats(suite["lambdas"], "suite.lambdas")
    if not all(v > 0 for v in lambdas):
        raise ConfigError("suite.lambdas must be positive")
    t_min, t_max = _float(suite["t_min"], "suite.t_min"), _float(suite["t_max"], "suite.t_max")
    t_count = _int(suite["t_count"], "suite.t_count")
    if not (0 < t_min <= t_max) or t_count < 1:
        raise ConfigError("suite time grid needs 0 < t_min <= t_max and t_count >= 1")
    t_grid = tuple(float(v) for v in np.geomspace(t_min, t_max, t_count))
    horizon = _float(suite["horizon"], "suite.horizon")
    if horizon < 0:
        raise ConfigError("suite.horizon must be nonnegative")
    slack = _float(suite["slack"], "suite.slack")
    err_mult = _float(suite["error_multiple"], "suite.error_multiple")
    if slack < 0 or err_mult < 0:
        raise ConfigError("slack and error_multiple must be nonnegative")
    ints = {k: _int(suite[k], f"suite.{k}") for k in (
        "design_points", "design_directions", "ladder_min", "ladder_max", "resolvent_points",
        "resolvent_directions", "parabolic_points", "parabolic_directions", "parabolic_times",
        "line_points", "formula_points", "seed")}
    for k, v in ints.items():
        if k not in ("ladder_min", "ladder_max", "seed") and v < 1:
            raise ConfigError(f"suite.{k} must be positive")
    if ints["ladder_max"] < ints["ladder_min"]:
        raise ConfigError("suite.ladder_max must be >= ladder_min")
    weight = suite["source_weight"].strip()
    if weight not in ("cos", "constant"):
        raise ConfigError("suite.source_weight must be 'cos' or 'constant'")
    formula_times = _floats(suite["formula_times"], "suite.formula_times")
    if not all(v > 0 for v in formula_times):
        raise ConfigError("suite.formula_times must be positive")
    pairs = _pairs(suite["parabolic_pairs"])
    indices = {c["index"] for c in corpus}
    for a, b in pairs:
        if a not in indices or b not in indices:
            raise ConfigError(f"suite.parabolic_pairs refers to an undeclared corpus entry ({a}:{b})")

    try:
        spec = QuadratureSpec(
            gh_order=_int(quad["gh_order"], "quadrature.gh_order"),
            gh_max_dims=_int(quad["gh_max_dims"], "quadrature.gh_max_dims"),
            qmc_log2=_int(quad["qmc_log2"], "quadrature.qmc_log2"),
            seed=ints["seed"],
            ridge_gl_order=_int(quad["ridge_gl_order"], "quadrature.ridge_gl_order"),
            ridge_half_width=_float(quad["ridge_half_width"], "quadrature.ridge_half_width"),
            ridge_piece=_float(quad["ridge_piece"], "quadrature.ridge_piece"),
            ridge_rel_err=_float(quad["ridge_rel_err"], "quadrature.ridge_rel_err"),
        )
        tq = TimeQuadrature(
            power=_float(quad["time_power"], "quadrature.time_power"),
            split=_float(quad["time_split"], "quadrature.time_split"),
            grading=_float(quad["time_grading"], "quadrature.time_grading"),
            panels=_int(quad["time_panels"], "quadrature.time_panels"),
            tol=_float(quad["time_tol"], "quadrature.time_tol"),
            max_time=_float(quad["time_max"], "quadrature.time_max"),
        )
    except OUError as exc:
        raise ConfigError(str(exc)) from None
    engine_tol = _float(quad["engine_tol"], "quadrature.engine_tol")
    if engine_tol <= 0:
        raise ConfigError("quadrature.engine_tol must be positive")

    fmt = out["format"].strip()
    if fmt not in ("json", "csv", "both"):
        raise ConfigError("output.format must be json, csv or both")

    cfg = SuiteConfig(
        covariance=matrix, zero_threshold=zt, corpus_spec=corpus, alphas=alphas, lambdas=lambdas,
        t_grid=t_grid, horizon=horizon, parabolic_pairs=pairs, source_weight=weight,
        formula_times=formula_times, slack=slack, error_multiple=err_mult,
        diagnostics=_bool(suite["diagnostics"], "suite.diagnostics"), quadrature=spec,
        time_quadrature=tq, engine_tol=engine_tol, out_dir=out["directory"].strip(), out_format=fmt,
        curves=_bool(out["curves"], "output.curves"), timing=_bool(out["timing"], "output.timing"),
        source=source, **ints)
    # fail early on an invalid covariance or corpus
    try:
        model = cfg.build_model()
    except OUError as exc:
        raise ConfigError(f"[covariance]: {exc}") from None
    cfg.build_corpus(model)
    return cfg


def load_config(path) -> SuiteConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    return parse_config(text, str(p))


DEMO_CONFIG = """\
[covariance]
diagonal = 4, 1, 0

[corpus.1]
kind = ridge
name = holder07_e1
profile = abs_clip_pow
power = 0.7
direction = 1, 0, 0

[corpus.2]
kind = ridge
name = holder07_oblique
profile = abs_clip_pow
power = 0.7
direction = 0.6, 0.8, 0

[corpus.3]
kind = ridge
name = sine_e2
profile = sine
omega = 2
direction = 0, 1, 0

[corpus.4]
kind = ridge
name = bump_mixed
profile = gauss_bump
direction = 0.5, 0, 1

[corpus.5]
kind = ridge
name = holder05_kernel
profile = abs_clip_pow
power = 0.5
direction = 0, 0, 1

[corpus.6]
kind = constant
name = constant
value = 0.7

[corpus.7]
kind = linear
name = linear_e1
coefficients = 1, 0, 0

[corpus.8]
kind = quadratic
name = quadratic_e1
coefficients = 1, 0, 0

[suite]
alphas = 0.3, 0.5, 0.7
lambdas = 0.5, 1, 2
t_min = 1e-3
t_max = 5
t_count = 10
horizon = 1
parabolic_pairs = 3:1, 4:2
seed = 42

[output]
format = json
"""


def demo_config() -> SuiteConfig:
    return parse_config(DEMO_CONFIG, "<demo>")

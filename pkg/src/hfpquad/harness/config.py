"""Experiment configuration: YAML files mirroring :class:`ExperimentConfig`."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import yaml

from ..engine import MAX_SEARCH_N, REFERENCE, STABILIZATION
from ..interpolation import NU_BALANCED, NU_SPREAD
from ..orthogonal import CHEBYSHEV1, JACOBI, LEGENDRE, WeightFamily
from .registry import format_integrand_spec, resolve_params

SCHEMA_VERSION = 1

EXPERIMENTS = ("table1", "table2", "table3", "fig1", "fig2", "single")
PRESETS = ("table1", "table2", "table3", "fig1", "fig2")
FORMATS = ("csv", "json")
REFERENCES = ("I1", "I2", "I3")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True)
class WeightSpec:
    kind: str = LEGENDRE
    alpha: float = 0.0
    beta: float = 0.0
    a: float = -1.0
    b: float = 1.0

    def family(self) -> WeightFamily:
        if self.kind == JACOBI:
            return WeightFamily.jacobi(self.alpha, self.beta, self.a, self.b)
        return WeightFamily(self.kind, a=self.a, b=self.b)

    def label(self) -> str:
        if self.kind == JACOBI:
            return f"jacobi({self.alpha!r},{self.beta!r};{self.a!r},{self.b!r})"
        return f"{self.kind}({self.a!r},{self.b!r})"


@dataclass(frozen=True)
class IntegrandSpec:
    name: str
    params: dict = field(default_factory=dict)

    def label(self) -> str:
        return format_integrand_spec(self.name, self.params)


@dataclass(frozen=True)
class NPolicy:
    """How n is chosen for each m.

    ``fixed``: one row per listed n.  ``search``: one row per m, n picked
    over ``[lo, hi]`` or over the window ``[m - delta, m + delta]``.
    """

    mode: str = "fixed"
    values: tuple[int, ...] = ()
    lo: Optional[int] = None
    hi: Optional[int] = None
    delta: Optional[int] = None
    criterion: str = REFERENCE

    def search_range(self, m: int, p: int) -> tuple[int, int]:
        floor = max(p + 1, 2)
        if self.delta is not None:
            return max(floor, m - self.delta), min(MAX_SEARCH_N, m + self.delta)
        return max(floor, self.lo), self.hi


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    weight: WeightSpec
    integrand: IntegrandSpec
    xi: float
    p: int
    m: tuple[int, ...]
    n_policy: NPolicy
    output: Optional[str] = None
    format: str = "csv"
    reference: Optional[str] = None
    baseline: bool = False
    far_node_column: bool = False
    xi_grid: tuple[float, ...] = ()
    gauss_midpoints: bool = False
    blocks: tuple[dict, ...] = ()
    nu_rule: str = NU_BALANCED
    timing: bool = True
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        d = asdict(self)
        d["m"] = list(self.m)
        d["xi_grid"] = list(self.xi_grid)
        d["blocks"] = [dict(b) for b in self.blocks]
        d["n_policy"]["values"] = list(self.n_policy.values)
        return d


def _int(name: str, v: Any, minimum: Optional[int] = None) -> int:
    if isinstance(v, bool):
        raise ConfigError(name, f"expected an integer, got {v!r}")
    try:
        f = float(v)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected an integer, got {v!r}") from None
    if not f.is_integer():
        raise ConfigError(name, f"expected an integer, got {v!r}")
    i = int(f)
    if minimum is not None and i < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {i}")
    return i


def _float(name: str, v: Any) -> float:
    # pyyaml reads 1e-5 (no dot) as a string
    try:
        f = float(v)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected a number, got {v!r}") from None
    if not math.isfinite(f):
        raise ConfigError(name, f"must be finite, got {v!r}")
    return f


def _int_list(name: str, v: Any, minimum: int) -> tuple[int, ...]:
    if isinstance(v, (int, float, str)):
        v = [v]
    if not isinstance(v, (list, tuple)):
        raise ConfigError(name, f"expected a list of integers, got {v!r}")
    return tuple(_int(f"{name}[{i}]", x, minimum) for i, x in enumerate(v))


def _weight(d: Any) -> WeightSpec:
    if isinstance(d, str):
        d = {"kind": d}
    if not isinstance(d, dict):
        raise ConfigError("weight", f"expected a mapping, got {d!r}")
    unknown = set(d) - {"kind", "alpha", "beta", "a", "b"}
    if unknown:
        raise ConfigError("weight", f"unknown keys {sorted(unknown)}")
    kind = str(d.get("kind", LEGENDRE)).lower()
    if kind not in (LEGENDRE, CHEBYSHEV1, JACOBI):
        raise ConfigError("weight.kind", f"expected legendre, chebyshev1 or jacobi, got {kind!r}")
    spec = WeightSpec(kind, _float("weight.alpha", d.get("alpha", 0.0)), _float("weight.beta", d.get("beta", 0.0)),
                      _float("weight.a", d.get("a", -1.0)), _float("weight.b", d.get("b", 1.0)))
    try:
        spec.family()
    except ValueError as exc:
        raise ConfigError("weight", str(exc)) from None
    return spec


def _integrand(d: Any) -> IntegrandSpec:
    if isinstance(d, str):
        d = {"name": d}
    if not isinstance(d, dict) or "name" not in d:
        raise ConfigError("integrand", f"expected a mapping with a name, got {d!r}")
    try:
        params = resolve_params(str(d["name"]), d.get("params") or {})
    except ValueError as exc:
        raise ConfigError("integrand", str(exc)) from None
    return IntegrandSpec(str(d["name"]), params)


def _n_policy(d: Any, p: int) -> NPolicy:
    if not isinstance(d, dict):
        raise ConfigError("n_policy", f"expected a mapping, got {d!r}")
    unknown = set(d) - {"mode", "values", "lo", "hi", "delta", "criterion"}
    if unknown:
        raise ConfigError("n_policy", f"unknown keys {sorted(unknown)}")
    mode = d.get("mode", "fixed")
    if mode == "fixed":
        values = _int_list("n_policy.values", d.get("values", []), p + 1)
        if not values:
            raise ConfigError("n_policy.values", "fixed policy needs at least one n")
        return NPolicy("fixed", values)
    if mode != "search":
        raise ConfigError("n_policy.mode", f"expected fixed or search, got {mode!r}")
    criterion = d.get("criterion", REFERENCE)
    if criterion not in (REFERENCE, STABILIZATION):
        raise ConfigError("n_policy.criterion", f"expected {REFERENCE} or {STABILIZATION}, got {criterion!r}")
    if d.get("delta") is not None:
        return NPolicy("search", delta=_int("n_policy.delta", d["delta"], 0), criterion=criterion)
    if d.get("lo") is None or d.get("hi") is None:
        raise ConfigError("n_policy", "search needs either delta or both lo and hi")
    lo = _int("n_policy.lo", d["lo"], p + 1)
    hi = _int("n_policy.hi", d["hi"], lo)
    if hi > MAX_SEARCH_N:
        raise ConfigError("n_policy.hi", f"capped at {MAX_SEARCH_N}, got {hi}")
    return NPolicy("search", lo=lo, hi=hi, criterion=criterion)


_TOP_KEYS = {
    "schema_version", "experiment", "weight", "integrand", "xi", "p", "m", "n_policy", "output", "format",
    "reference", "baseline", "far_node_column", "xi_grid", "gauss_midpoints", "blocks", "nu_rule", "timing",
}
_BLOCK_KEYS = {"label", "p", "xi", "params", "m", "n_policy"}


def config_from_dict(d: dict) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ConfigError("<root>", "configuration must be a mapping")
    unknown = set(d) - _TOP_KEYS
    if unknown:
        raise ConfigError("<root>", f"unknown keys {sorted(unknown)}")
    version = _int("schema_version", d.get("schema_version", SCHEMA_VERSION))
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version}; this build reads {SCHEMA_VERSION}")
    exp = d.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError("experiment", f"expected one of {EXPERIMENTS}, got {exp!r}")
    weight = _weight(d.get("weight", LEGENDRE))
    if "integrand" not in d:
        raise ConfigError("integrand", "missing")
    integrand = _integrand(d["integrand"])
    p = _int("p", d.get("p", 0), 0)
    xi = _float("xi", d.get("xi", 0.0))
    if "m" not in d:
        raise ConfigError("m", "missing")
    m = _int_list("m", d["m"], 1)
    if not m:
        raise ConfigError("m", "list of Gauss orders is empty")
    n_policy = _n_policy(d.get("n_policy", {}), p)
    fmt = d.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError("format", f"expected csv or json, got {fmt!r}")
    ref = d.get("reference")
    if ref is not None and ref not in REFERENCES:
        raise ConfigError("reference", f"expected one of {REFERENCES} or null, got {ref!r}")
    nu_rule = d.get("nu_rule", NU_BALANCED)
    if nu_rule not in (NU_BALANCED, NU_SPREAD):
        raise ConfigError("nu_rule", f"expected {NU_BALANCED} or {NU_SPREAD}, got {nu_rule!r}")
    xi_grid = tuple(_float(f"xi_grid[{i}]", v) for i, v in enumerate(d.get("xi_grid") or []))
    if exp == "fig1" and not xi_grid:
        raise ConfigError("xi_grid", "fig1 needs a grid of singularity positions")
    for i, x in enumerate(xi_grid):
        if not weight.a < x < weight.b:
            raise ConfigError(f"xi_grid[{i}]", f"singularity outside interval: {x}")
    blocks = []
    for i, blk in enumerate(d.get("blocks") or []):
        if not isinstance(blk, dict):
            raise ConfigError(f"blocks[{i}]", "expected a mapping")
        bad = set(blk) - _BLOCK_KEYS
        if bad:
            raise ConfigError(f"blocks[{i}]", f"unknown keys {sorted(bad)}")
        blocks.append(dict(blk))
    if n_policy.mode == "search" and n_policy.criterion == REFERENCE and ref is None:
        raise ConfigError("n_policy.criterion", "reference criterion needs a reference value (set reference)")
    cfg = ExperimentConfig(
        experiment=exp, weight=weight, integrand=integrand, xi=xi, p=p, m=m, n_policy=n_policy,
        output=d.get("output"), format=fmt, reference=ref, baseline=bool(d.get("baseline", False)),
        far_node_column=bool(d.get("far_node_column", False)), xi_grid=xi_grid,
        gauss_midpoints=bool(d.get("gauss_midpoints", False)), blocks=tuple(blocks), nu_rule=nu_rule,
        timing=bool(d.get("timing", True)), schema_version=version,
    )
    # validate every block resolves to a usable configuration
    for i, blk in enumerate(cfg.blocks):
        try:
            resolve_block(cfg, blk)
        except ConfigError as exc:
            raise ConfigError(f"blocks[{i}].{exc.field}", str(exc).split(": ", 1)[-1]) from None
    if not cfg.blocks:
        resolve_block(cfg, {})
    return cfg


@dataclass(frozen=True)
class ResolvedBlock:
    label: str
    integrand: IntegrandSpec
    xi: float
    p: int
    m: tuple[int, ...]
    n_policy: NPolicy


def resolve_block(cfg: ExperimentConfig, blk: dict) -> ResolvedBlock:
    p = _int("p", blk.get("p", cfg.p), 0)
    xi = _float("xi", blk.get("xi", cfg.xi))
    if not cfg.weight.a < xi < cfg.weight.b and cfg.experiment != "fig1":
        raise ConfigError("xi", f"singularity outside interval: {xi} not in ({cfg.weight.a}, {cfg.weight.b})")
    integrand = cfg.integrand
    if blk.get("params"):
        try:
            params = resolve_params(integrand.name, {**integrand.params, **blk["params"]})
        except ValueError as exc:
            raise ConfigError("params", str(exc)) from None
        integrand = IntegrandSpec(integrand.name, params)
    m = _int_list("m", blk["m"], 1) if "m" in blk else cfg.m
    if not m:
        raise ConfigError("m", "list of Gauss orders is empty")
    pol = _n_policy(blk["n_policy"], p) if "n_policy" in blk else cfg.n_policy
    if pol.mode == "fixed" and min(pol.values) <= p:
        raise ConfigError("n_policy.values", f"every n must exceed p={p}")
    label = str(blk.get("label", "")) or integrand.label()
    return ResolvedBlock(label, integrand, xi, p, m, pol)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"YAML parse error in {path}: {exc}") from None
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    return config_from_dict(data)


def preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError("experiment", f"no preset {name!r}; available: {PRESETS}")
    text = resources.files("hfpquad.harness").joinpath("configs", f"{name}.yaml").read_text(encoding="utf-8")
    return config_from_dict(yaml.safe_load(text))


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(cfg, **kw)

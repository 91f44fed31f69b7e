"""Builtin integrands addressable by name, e.g. ``rational-pole(lam=2.5)``."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

from ..bounds import rho_of_point
from ..integrands import Integrand, exp_integrand, inv_sqrt_pole, monomial, rational_pole


@dataclass(frozen=True)
class Builtin:
    factory: Callable[..., Integrand]
    defaults: dict
    required: tuple[str, ...] = ()
    # ellipse parameter of the nearest complex singularity (inf for entire f)
    rho_sing: Optional[Callable[[dict], float]] = None
    # max |f^(k)| on [-1, 1] when known in closed form, independent of k
    derivative_bound: Optional[Callable[[dict], float]] = None


BUILTINS: dict[str, Builtin] = {
    "exp": Builtin(lambda: exp_integrand(), {}, (), lambda q: math.inf, lambda q: math.e),
    "inv-sqrt-pole": Builtin(
        lambda c: inv_sqrt_pole(c), {"c": 1.21}, (), lambda q: rho_of_point(math.sqrt(q["c"]))
    ),
    "rational-pole": Builtin(
        lambda lam: rational_pole(lam), {}, ("lam",), lambda q: rho_of_point(1j * abs(q["lam"]))
    ),
    "monomial": Builtin(lambda d: monomial(int(d)), {}, ("d",), lambda q: math.inf),
}

# accepted spellings of parameter names
_ALIASES = {"lambda": "lam", "λ": "lam"}

_SPEC_RE = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")


def _coerce(value):
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value))
    except ValueError:
        raise ValueError(f"integrand parameter must be numeric, got {value!r}") from None


def resolve_params(name: str, params: Optional[dict] = None) -> dict:
    if name not in BUILTINS:
        raise ValueError(f"unknown integrand {name!r}; builtins are {sorted(BUILTINS)}")
    b = BUILTINS[name]
    out = dict(b.defaults)
    for k, v in (params or {}).items():
        key = _ALIASES.get(k, k)
        if key not in b.defaults and key not in b.required:
            allowed = sorted(set(b.defaults) | set(b.required)) or "none"
            raise ValueError(f"integrand {name!r} has no parameter {k!r} (allowed: {allowed})")
        out[key] = _coerce(v)
    missing = [k for k in b.required if k not in out]
    if missing:
        raise ValueError(f"integrand {name!r} needs parameter(s) {missing}")
    return out


def make_integrand(name: str, params: Optional[dict] = None) -> Integrand:
    resolved = resolve_params(name, params)
    return BUILTINS[name].factory(**resolved)


def parse_integrand_spec(text: str) -> tuple[str, dict]:
    """``"rational-pole(lam=2.5)"`` -> ``("rational-pole", {"lam": 2.5})``."""
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse integrand spec {text!r}")
    name, body = m.group(1), m.group(2)
    params = {}
    if body:
        for item in body.split(","):
            if not item.strip():
                continue
            if "=" not in item:
                raise ValueError(f"integrand parameter {item.strip()!r} is not of the form key=value")
            k, v = item.split("=", 1)
            params[k.strip()] = v.strip()
    return name, resolve_params(name, params)


def format_integrand_spec(name: str, params: dict) -> str:
    if not params:
        return name
    inner = ",".join(f"{k}={params[k]!r}" for k in sorted(params))
    return f"{name}({inner})"


def singularity_rho(name: str, params: Optional[dict] = None) -> float:
    b = BUILTINS[name]
    return b.rho_sing(resolve_params(name, params)) if b.rho_sing else math.inf


def derivative_bound(name: str, params: Optional[dict] = None) -> Optional[float]:
    b = BUILTINS[name]
    return b.derivative_bound(resolve_params(name, params)) if b.derivative_bound else None

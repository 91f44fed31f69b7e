"""Exponential integral and exact values for the reference experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

EULER_GAMMA = 0.57721566490153286061

_EPS = 2.0**-53
_TINY = 1e-300


def _ei_series(x: float) -> float:
    """``gamma + ln|x| + sum_k x^k / (k k!)``."""
    s = 0.0
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= x / k
        contrib = term / k
        s += contrib
        if abs(contrib) <= _EPS * abs(s) or k > 500:
            break
    return EULER_GAMMA + math.log(abs(x)) + s


def _e1_continued_fraction(y: float) -> float:
    """E1(y) for y > 0 by modified Lentz on the even continued fraction."""
    b = y + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            return h * math.exp(-y)
    raise ArithmeticError(f"E1 continued fraction did not converge at y={y}")


def _ei_asymptotic(x: float) -> float:
    s = 1.0
    term = 1.0
    for k in range(1, 200):
        nxt = term * k / x
        if abs(nxt) >= abs(term):
            break
        term = nxt
        s += term
        if abs(term) <= _EPS * s:
            break
    return math.exp(x) / x * s


def exponential_integral(x: float) -> float:
    """Ei(x) = PV int_{-inf}^x e^t/t dt for real nonzero x.

    x < -1 uses the continued fraction of E1 (Ei(-y) = -E1(y)); x > 40 the
    asymptotic series; the power series everywhere else.
    """
    x = float(x)
    if x == 0.0:
        raise ZeroDivisionError("Ei has a logarithmic pole at x = 0")
    if x < -1.0:
        return -_e1_continued_fraction(-x)
    if x > 40.0:
        return _ei_asymptotic(x)
    return _ei_series(x)


@dataclass(frozen=True)
class ExactReference:
    label: str
    parameters: dict = field(default_factory=dict)
    value: float = math.nan


I2_EXACT = -0.757450528292818
I2_XI = 1e-5
I2_C = 1.21


def i1_exact(xi: float, p: int = 0) -> float:
    """Finite part of ``int_{-1}^{1} e^x / (x - xi)^{p+1} dx``.

    p = 0 is the closed form; p = 1 is its xi-derivative.
    """
    if not -1.0 < xi < 1.0:
        raise ValueError(f"singularity outside interval: xi={xi}")
    h0 = (exponential_integral(1.0 - xi) - exponential_integral(-1.0 - xi)) * math.exp(xi)
    if p == 0:
        return h0
    if p == 1:
        return h0 - math.e / (1.0 - xi) - 1.0 / (math.e * (1.0 + xi))
    raise NotImplementedError(f"no closed form for I1 with p={p}")


def i3_exact(xi: float, lam: float) -> float:
    """Finite part of ``int_{-1}^{1} (x^2+lam^2)^-1 (x-xi)^-2 (1-x^2)^-1/2 dx``."""
    l2 = lam * lam
    return math.pi * (xi * xi - l2) / (lam * math.sqrt(l2 + 1.0) * (l2 + xi * xi) ** 2)


def exact_reference(label: str, **params) -> ExactReference:
    key = label.upper()
    if key == "I1":
        xi = float(params.get("xi", 0.0))
        p = int(params.get("p", 0))
        return ExactReference("I1", {"xi": xi, "p": p}, i1_exact(xi, p))
    if key == "I2":
        return ExactReference("I2", {"xi": I2_XI, "p": 1, "c": I2_C}, I2_EXACT)
    if key == "I3":
        xi = float(params.get("xi", 0.25))
        lam = float(params["lam"])
        return ExactReference("I3", {"xi": xi, "p": 1, "lam": lam}, i3_exact(xi, lam))
    raise ValueError(f"unknown reference {label!r}; expected I1, I2 or I3")

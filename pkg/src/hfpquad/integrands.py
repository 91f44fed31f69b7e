"""Integrand container and the builtin integrands used by the experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Integrand:
    """A smooth function f together with its derivatives at the singular point.

    ``derivatives(xi, order)`` must return ``[f(xi), f'(xi), ..., f^(order)(xi)]``.
    Derivatives are never estimated numerically; a builtin that cannot
    supply the requested order raises.
    """

    value: Callable
    derivatives: Callable[[float, int], Sequence[float]]
    complex_value: Optional[Callable] = None
    label: str = "f"

    def __call__(self, x):
        return self.value(x)

    def derivatives_at_xi(self, xi: float, order: int) -> np.ndarray:
        d = np.asarray(self.derivatives(float(xi), int(order)), dtype=float)
        if d.shape != (order + 1,):
            raise ValueError(f"{self.label}: expected {order + 1} derivative values, got shape {d.shape}")
        return d


def exp_integrand() -> Integrand:
    return Integrand(
        value=np.exp,
        derivatives=lambda xi, order: [math.exp(xi)] * (order + 1),
        complex_value=np.exp,
        label="exp",
    )


def monomial(d: int) -> Integrand:
    """``f(x) = x**d`` with exact derivatives of every order."""
    d = int(d)
    if d < 0:
        raise ValueError("monomial degree must be non-negative")

    def derivs(xi, order):
        out = []
        for j in range(order + 1):
            if j > d:
                out.append(0.0)
            else:
                out.append(math.perm(d, j) * xi ** (d - j))
        return out

    return Integrand(
        value=lambda x: np.asarray(x, dtype=float) ** d,
        derivatives=derivs,
        complex_value=lambda z: np.asarray(z, dtype=complex) ** d,
        label=f"x^{d}",
    )


def _limit_order(label: str, order: int, max_order: int = 2) -> None:
    if order > max_order:
        raise ValueError(f"{label}: analytic derivatives are provided up to order {max_order}, requested {order}")


def inv_sqrt_pole(c: float = 1.21) -> Integrand:
    """``f(x) = (c - x^2)^(-1/2)``; branch points at ``+-sqrt(c)``."""
    c = float(c)
    if c <= 0:
        raise ValueError("inv-sqrt-pole needs c > 0")

    def derivs(xi, order):
        _limit_order("inv-sqrt-pole", order)
        u = c - xi * xi
        vals = [u**-0.5, xi * u**-1.5, u**-1.5 + 3.0 * xi * xi * u**-2.5]
        return vals[: order + 1]

    return Integrand(
        value=lambda x: (c - np.asarray(x, dtype=float) ** 2) ** -0.5,
        derivatives=derivs,
        complex_value=lambda z: 1.0 / np.sqrt(c - np.asarray(z, dtype=complex) ** 2),
        label=f"inv-sqrt-pole(c={c:g})",
    )


def rational_pole(lam: float) -> Integrand:
    """``f(x) = 1 / (x^2 + lam^2)``; poles at ``+-i*lam``."""
    lam = float(lam)
    if lam == 0:
        raise ValueError("rational-pole needs lambda != 0")
    l2 = lam * lam

    def derivs(xi, order):
        _limit_order("rational-pole", order)
        q = xi * xi + l2
        vals = [1.0 / q, -2.0 * xi / q**2, (6.0 * xi * xi - 2.0 * l2) / q**3]
        return vals[: order + 1]

    return Integrand(
        value=lambda x: 1.0 / (np.asarray(x, dtype=float) ** 2 + l2),
        derivatives=derivs,
        complex_value=lambda z: 1.0 / (np.asarray(z, dtype=complex) ** 2 + l2),
        label=f"rational-pole(lambda={lam:g})",
    )

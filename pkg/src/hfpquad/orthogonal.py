"""Gauss rules for Jacobi-type weights.

A weight on ``(a, b)`` is the pull-back of ``(1-t)^alpha (1+t)^beta`` on
``(-1, 1)`` under the affine map ``x = mid + half*t``.  Legendre is
``alpha = beta = 0``; Chebyshev of the first kind is ``alpha = beta = -1/2``
and gets its closed-form rule.  Custom weights carry their own rule and
moment providers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

LEGENDRE = "legendre"
CHEBYSHEV1 = "chebyshev1"
JACOBI = "jacobi"
CUSTOM = "custom"
KINDS = (LEGENDRE, CHEBYSHEV1, JACOBI, CUSTOM)

RuleProvider = Callable[[int], tuple]
MomentProvider = Callable[[float, int], float]


@dataclass(frozen=True)
class WeightFamily:
    kind: str = LEGENDRE
    alpha: float = 0.0
    beta: float = 0.0
    a: float = -1.0
    b: float = 1.0
    rule_provider: Optional[RuleProvider] = field(default=None, compare=False, repr=False)
    moment_provider: Optional[MomentProvider] = field(default=None, compare=False, repr=False)
    mass: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == LEGENDRE:
            object.__setattr__(self, "alpha", 0.0)
            object.__setattr__(self, "beta", 0.0)
        elif self.kind == CHEBYSHEV1:
            object.__setattr__(self, "alpha", -0.5)
            object.__setattr__(self, "beta", -0.5)
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise ValueError(f"Jacobi parameters must exceed -1, got alpha={self.alpha}, beta={self.beta}")
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"invalid interval ({self.a}, {self.b})")
        if self.kind == CUSTOM and self.rule_provider is None:
            raise ValueError("custom weights need a rule_provider")

    @classmethod
    def legendre(cls, a: float = -1.0, b: float = 1.0) -> "WeightFamily":
        return cls(LEGENDRE, a=a, b=b)

    @classmethod
    def chebyshev1(cls, a: float = -1.0, b: float = 1.0) -> "WeightFamily":
        return cls(CHEBYSHEV1, a=a, b=b)

    @classmethod
    def jacobi(cls, alpha: float, beta: float, a: float = -1.0, b: float = 1.0,
               moment_provider: Optional[MomentProvider] = None) -> "WeightFamily":
        return cls(JACOBI, alpha=alpha, beta=beta, a=a, b=b, moment_provider=moment_provider)

    @property
    def interval(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def symmetric(self) -> bool:
        return self.kind != CUSTOM and self.alpha == self.beta

    def __call__(self, x):
        """Pointwise weight value ``omega(x)``."""
        if self.kind == CUSTOM:
            raise TypeError("custom weights are known only through their providers")
        t = (2.0 * np.asarray(x, dtype=float) - self.a - self.b) / (self.b - self.a)
        return (1.0 - t) ** self.alpha * (1.0 + t) ** self.beta


@dataclass(frozen=True)
class GaussRule:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return self.nodes.size

    def integrate(self, g) -> float:
        return float(np.dot(self.weights, g(self.nodes)))


def _gamma_ratio_mass(alpha: float, beta: float) -> float:
    try:
        return 2.0 ** (alpha + beta + 1.0) * math.gamma(alpha + 1.0) * math.gamma(beta + 1.0) / math.gamma(alpha + beta + 2.0)
    except OverflowError:
        return math.exp((alpha + beta + 1.0) * math.log(2.0) + math.lgamma(alpha + 1.0)
                        + math.lgamma(beta + 1.0) - math.lgamma(alpha + beta + 2.0))


def weight_mass(w: WeightFamily) -> float:
    """Total mass ``int_a^b omega(x) dx``."""
    half = 0.5 * (w.b - w.a)
    if w.kind == LEGENDRE:
        return w.b - w.a
    if w.kind == CHEBYSHEV1:
        return math.pi * half
    if w.kind == JACOBI:
        return _gamma_ratio_mass(w.alpha, w.beta) * half
    if w.mass is not None:
        return float(w.mass)
    _, lam = w.rule_provider(1)
    return float(np.sum(lam))


def jacobi_recurrence(m: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Monic recurrence coefficients on (-1, 1).

    Returns ``(diag, off2)`` with ``p_{k+1} = (t - diag[k]) p_k - off2[k] p_{k-1}``;
    ``off2[0]`` is the total mass.
    """
    ab = alpha + beta
    diag = np.empty(m)
    off2 = np.empty(m)
    diag[0] = (beta - alpha) / (ab + 2.0)
    off2[0] = _gamma_ratio_mass(alpha, beta)
    for k in range(1, m):
        s = 2.0 * k + ab
        diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0))
        if k == 1:
            off2[k] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) ** 2 * (3.0 + ab))
        else:
            off2[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
    return diag, off2


def tridiagonal_eigenvalues(diag: np.ndarray, offdiag: np.ndarray, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.

    ``offdiag[i]`` couples rows ``i`` and ``i+1``.  Returns ascending values.
    """
    n = len(diag)
    d = np.array(diag, dtype=float)
    e = np.zeros(n)
    e[: n - 1] = offdiag
    eps = np.finfo(float).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_sweeps:
                raise RuntimeError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                bb = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(d)


def _orthonormal_eval(t: np.ndarray, diag: np.ndarray, off2: np.ndarray, m: int):
    """Values of p_m and p_m' (orthonormal) plus ``sum_{j<m} p_j^2`` at ``t``."""
    sq = np.sqrt(off2)
    p_prev = np.zeros_like(t)
    dp_prev = np.zeros_like(t)
    p = np.full_like(t, 1.0 / sq[0])
    dp = np.zeros_like(t)
    christoffel = p * p
    for k in range(m):
        # the last normaliser is not needed: scaling p_m leaves its zeros alone
        nxt_sq = sq[k + 1] if k + 1 < m else 1.0
        lower = sq[k] if k > 0 else 0.0
        p_new = ((t - diag[k]) * p - lower * p_prev) / nxt_sq
        dp_new = (p + (t - diag[k]) * dp - lower * dp_prev) / nxt_sq
        p_prev, p = p, p_new
        dp_prev, dp = dp, dp_new
        if k + 1 < m:
            christoffel = christoffel + p * p
    return p, dp, christoffel


@lru_cache(maxsize=256)
def _reference_rule(kind: str, alpha: float, beta: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    if kind == CHEBYSHEV1:
        k = np.arange(m, 0, -1)
        t = np.cos((2 * k - 1) * np.pi / (2 * m))
        if m % 2 == 1:
            t[m // 2] = 0.0
        t = 0.5 * (t - t[::-1])
        return t, np.full(m, np.pi / m)

    diag, off2 = jacobi_recurrence(m, alpha, beta)
    t = tridiagonal_eigenvalues(diag, np.sqrt(off2[1:]))
    for _ in range(3):
        p, dp, _ = _orthonormal_eval(t, diag, off2, m)
        step = p / dp
        t = t - step
        if np.max(np.abs(step)) < 1e-17:
            break
    if alpha == beta:
        t = 0.5 * (t - t[::-1])
        if m % 2 == 1:
            t[m // 2] = 0.0
    _, _, christoffel = _orthonormal_eval(t, diag, off2, m)
    lam = 1.0 / christoffel
    if alpha == beta:
        lam = 0.5 * (lam + lam[::-1])
    return t, lam


def gauss_rule(w: WeightFamily, m: int) -> GaussRule:
    """m-point Gauss rule for ``w``, exact for degree ``2m-1``; nodes ascending."""
    if int(m) != m or m < 1:
        raise ValueError(f"number of Gauss nodes must be a positive integer, got {m}")
    m = int(m)
    if w.kind == CUSTOM:
        x, lam = w.rule_provider(m)
        x = np.asarray(x, dtype=float)
        lam = np.asarray(lam, dtype=float)
        order = np.argsort(x)
        return GaussRule(x[order].copy(), lam[order].copy())
    t, lam = _reference_rule(w.kind, float(w.alpha), float(w.beta), m)
    half = 0.5 * (w.b - w.a)
    mid = 0.5 * (w.a + w.b)
    return GaussRule(mid + half * t, half * lam)

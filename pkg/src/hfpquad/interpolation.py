"""Equidistant interpolation layout around the singularity and the
cycle-index formulas for the Taylor coefficients of its Lagrange basis.

For a layout ``a_0 = xi, a_1 .. a_n`` the table entry ``A_i^(k)`` is
``l_i^(k)(xi) / k!``.  With integer offsets ``t_i = (a_i - xi)/h`` the
entries factor as ``A_i^(k) = h^-k * Atilde_i^(k)`` where ``Atilde`` depends
only on the integer offsets; the table stores ``Atilde`` and the signed step
so that nothing overflows for large n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .combinatorics import cycle_index_batch
from .integrands import Integrand

RIGHT_SHORT = "right-short"
LEFT_SHORT = "left-short"

# nu = n // 2 (balanced power sums) or the smallest admissible nu, which
# stretches the long side of the layout out toward the far endpoint
NU_BALANCED = "balanced"
NU_SPREAD = "spread"

MAX_ORACLE_NODES = 20


class LayoutError(ValueError):
    """The singularity is too close to the interval midpoint/end for this n."""


@dataclass(frozen=True)
class NodeLayout:
    xi: float
    h: float
    nu: int
    n: int
    nodes: np.ndarray
    orientation: str
    interval: tuple[float, float]

    @property
    def sign(self) -> int:
        return 1 if self.orientation == RIGHT_SHORT else -1

    @property
    def step(self) -> float:
        """Signed step: positive when the short side lies to the right of xi."""
        return self.sign * self.h

    @property
    def offsets(self) -> np.ndarray:
        """Integer offsets ``(a_i - xi)/h`` in node order (signed)."""
        return self.sign * reflected_offsets(self.nu, self.n)


def reflected_offsets(nu: int, n: int) -> np.ndarray:
    """Offsets of the right-short layout: 0, 1, -1, 2, -2, .., nu, -nu, -(nu+1), .., -(n-nu)."""
    t = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, nu + 1):
        t[2 * i - 1] = i
        t[2 * i] = -i
    for i in range(nu + 1, n - nu + 1):
        t[nu + i] = -i
    return t


def layout_nodes(xi: float, interval: tuple[float, float], n: int,
                 nu_rule: str = NU_BALANCED) -> NodeLayout:
    a, b = map(float, interval)
    xi = float(xi)
    if not a < b:
        raise ValueError(f"invalid interval ({a}, {b})")
    if not a < xi < b:
        raise ValueError(f"singularity outside interval: xi={xi} not in ({a}, {b})")
    if int(n) != n or n < 2:
        raise ValueError(f"need an integer n >= 2 interpolation intervals, got {n}")
    n = int(n)
    if nu_rule not in (NU_BALANCED, NU_SPREAD):
        raise ValueError(f"unknown nu rule {nu_rule!r}; expected {NU_BALANCED!r} or {NU_SPREAD!r}")
    nu = n // 2
    right, left = b - xi, xi - a
    # ties go to the right-short construction
    if right <= left:
        orientation, short, long_ = RIGHT_SHORT, right, left
    else:
        orientation, short, long_ = LEFT_SHORT, left, right
    lower = (n * short - long_) / (b - a)
    if nu_rule == NU_SPREAD:
        nu = max(1, min(nu, math.floor(lower) + 1))
    if not lower < nu:
        raise LayoutError(
            f"node layout infeasible for xi={xi}, n={n}: needs nu > {lower:.6g} but nu = n//2 = {nu}; "
            "use a larger n (an even n always works)"
        )
    h = short / (nu + 1)
    sign = 1 if orientation == RIGHT_SHORT else -1
    nodes = xi + (sign * reflected_offsets(nu, n)) * h
    if not (np.all(nodes > a) and np.all(nodes < b)):
        raise LayoutError(
            f"node layout for xi={xi}, n={n} touches the interval boundary; use a larger n"
        )
    nodes.setflags(write=False)
    return NodeLayout(xi, h, nu, n, nodes, orientation, (a, b))


def _scaled_eta(nu: int, n: int, r_max: int) -> np.ndarray:
    """``e_r = -sum_{i != 0} t_i^-r`` over the right-short offsets, r = 1..r_max."""
    out = np.empty(r_max)
    j_pair = np.arange(1, nu + 1, dtype=float)
    j_tail = np.arange(nu + 1, n - nu + 1, dtype=float)
    for r in range(1, r_max + 1):
        odd = r % 2 == 1
        # paired +-j terms cancel exactly for odd r
        paired = 0.0 if odd else 2.0 * math.fsum((j_pair**-r)[::-1])
        tail = math.fsum((j_tail**-r)[::-1])
        out[r - 1] = -(paired - tail if odd else paired + tail)
    return out


def eta_values(layout: NodeLayout, r_max: int) -> np.ndarray:
    """``eta_r = -sum_{i>=1} (a_i - xi)^-r`` for r = 1..r_max (exact finite sums)."""
    if r_max < 1:
        raise ValueError("r_max must be positive")
    e = _scaled_eta(layout.nu, layout.n, r_max)
    r = np.arange(1, r_max + 1)
    with np.errstate(over="ignore"):
        return e * float(layout.step) ** (-r.astype(float))


def _prefactors(nu: int, n: int) -> np.ndarray:
    """``h * l_i'(xi)`` for the right-short layout, i = 1..n (index 0 unused)."""
    P = np.zeros(n + 1)
    for i in range(1, nu + 1):
        ratio = math.prod((nu - j + 1) / (n - nu + j) for j in range(1, i + 1))
        P[2 * i - 1] = (-1) ** (i - 1) * ratio / i
        ratio = math.prod((n - nu - j + 1) / (nu + j) for j in range(1, i + 1))
        P[2 * i] = (-1) ** i * ratio / i
    for i in range(nu + 1, n - nu + 1):
        ratio = math.prod((n - nu - j + 1) / (nu + j) for j in range(1, i + 1))
        P[nu + i] = (-1) ** i * ratio / i
    return P


@dataclass(frozen=True)
class CoefficientTable:
    """Taylor coefficients ``A_i^(k)``, i = 0..n, k = p+1..n, of the layout's Lagrange basis at xi.

    ``scaled[i, k-p-1] * step**-k`` is ``A_i^(k)``.
    """

    layout: NodeLayout
    p: int
    scaled: np.ndarray

    @property
    def orders(self) -> np.ndarray:
        return np.arange(self.p + 1, self.layout.n + 1)

    @property
    def A(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            scale = float(self.layout.step) ** (-self.orders.astype(float))
        return self.scaled * scale[None, :]

    def entry(self, i: int, k: int) -> float:
        if not self.p < k <= self.layout.n:
            raise IndexError(f"order k={k} outside {self.p + 1}..{self.layout.n}")
        return float(self.scaled[i, k - self.p - 1] * float(self.layout.step) ** (-k))


def cycle_arguments(nu: int, n: int) -> np.ndarray:
    """Cycle-index argument rows: row 0 is ``e_r``, row i is ``e_r + t_i^-r`` (r = 1..n)."""
    t = reflected_offsets(nu, n)
    e = _scaled_eta(nu, n, n)
    r = np.arange(1, n + 1)
    X = np.empty((n + 1, n))
    X[0] = e
    mag = np.abs(t[1:]).astype(float)
    sgn = np.where(t[1:] < 0, -1.0, 1.0)
    # (t_i)^-r with the sign of t_i raised to r
    corr = mag[:, None] ** (-r[None, :].astype(float)) * np.where(r % 2 == 1, sgn[:, None], 1.0)
    X[1:] = e[None, :] + corr
    return X


def scaled_coefficients(nu: int, n: int) -> np.ndarray:
    """Full scaled table (n+1, n+1), column k holding ``h^k A_i^(k)`` for the right-short layout.

    Column 0 is the Kronecker delta ``l_i(xi)``.
    """
    Z = cycle_index_batch(cycle_arguments(nu, n))
    P = _prefactors(nu, n)
    S = np.empty((n + 1, n + 1))
    S[0] = Z[0]
    S[1:, 0] = 0.0
    S[1:, 1:] = P[1:, None] * Z[1:, :n]
    return S


def coefficient_table(layout: NodeLayout, p: int) -> CoefficientTable:
    if int(p) != p or p < 0:
        raise ValueError(f"p must be a non-negative integer, got {p}")
    p = int(p)
    if p >= layout.n:
        raise ValueError(f"need p < n, got p={p}, n={layout.n}")
    S = scaled_coefficients(layout.nu, layout.n)
    scaled = np.ascontiguousarray(S[:, p + 1:])
    scaled.setflags(write=False)
    return CoefficientTable(layout, p, scaled)


def surrogate_divdiff(table: CoefficientTable, f_values: Sequence[float], x_c: float) -> float:
    """``L_n[x_c, xi^{p+1}]``: divided difference of the layout interpolant of f."""
    f_values = np.asarray(f_values, dtype=float)
    layout = table.layout
    if f_values.shape != (layout.n + 1,):
        raise ValueError(f"expected {layout.n + 1} function values, got shape {f_values.shape}")
    s = float(layout.step)
    u = (float(x_c) - layout.xi) / s
    inner = _kernels.horner_rows(table.scaled, u)
    return math.fsum(f_values * inner) * s ** (-(table.p + 1))


def _taylor_part(derivs: np.ndarray, d):
    # sum_j derivs[j] d^j / j!, Horner from the top
    acc = np.zeros_like(d)
    for j in range(len(derivs) - 1, -1, -1):
        acc = acc * d + derivs[j] / math.factorial(j)
    return acc


def confluent_divdiff_direct(f: Integrand, xi: float, p: int, x, derivs: Sequence[float] | None = None):
    """``f[x, xi^{p+1}]`` from the singularity-subtracted quotient.

    Accepts scalar or array ``x``; cancellation grows as ``x -> xi``.
    """
    x_arr = np.asarray(x, dtype=float)
    d = x_arr - xi
    if np.any(d == 0.0):
        raise ZeroDivisionError(
            "confluent_divdiff_direct: x coincides with xi; use the surrogate or f^(p+1)(xi)/(p+1)!"
        )
    if derivs is None:
        derivs = f.derivatives_at_xi(xi, p)
    derivs = np.asarray(derivs, dtype=float)[: p + 1]
    out = (np.asarray(f(x_arr), dtype=float) - _taylor_part(derivs, d)) / d ** (p + 1)
    return float(out) if np.ndim(x) == 0 else out


def basis_derivative_oracle(nodes: Sequence[float], i: int, k: int, x: float) -> float:
    """``l_i^(k)(x)/k!`` by exact rational polynomial arithmetic (test oracle)."""
    pts = [Fraction(v) for v in nodes]
    if len(pts) > MAX_ORACLE_NODES:
        raise ValueError(f"oracle limited to {MAX_ORACLE_NODES} nodes")
    if len(set(pts)) != len(pts):
        raise ValueError("interpolation nodes must be distinct")
    # coefficients of prod_{j != i} (X - a_j), lowest degree first
    poly = [Fraction(1)]
    denom = Fraction(1)
    for j, aj in enumerate(pts):
        if j == i:
            continue
        nxt = [Fraction(0)] * (len(poly) + 1)
        for deg, c in enumerate(poly):
            nxt[deg + 1] += c
            nxt[deg] -= aj * c
        poly = nxt
        denom *= pts[i] - aj
    if k >= len(poly):
        return 0.0
    # k-th derivative over k!: coefficient c_d picks up binom(d, k)
    deriv = [math.comb(d, k) * poly[d] for d in range(k, len(poly))]
    X = Fraction(x)
    acc = Fraction(0)
    for c in reversed(deriv):
        acc = acc * X + c
    return float(acc / denom)

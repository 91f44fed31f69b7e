"""Assembly of the finite-part quadrature.

    H*(f) = sum_{k != c} lam_k f[x_k, xi^{p+1}]
            + sum_{c} lam_c L_n[x_c, xi^{p+1}]
            + sum_j f^(j)(xi)/j! mu_{p+1-j}(xi)

Every Gauss node except the one(s) closest to xi uses the subtracted
quotient directly; the closest node(s) use the divided difference of the
interpolant on the well-separated layout around xi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .integrands import Integrand
from .interpolation import (
    NU_BALANCED,
    coefficient_table,
    confluent_divdiff_direct,
    layout_nodes,
    surrogate_divdiff,
)
from .moments import finite_part_moments
from .orthogonal import WeightFamily, gauss_rule

REFERENCE = "reference"
STABILIZATION = "stabilization"
MAX_SEARCH_N = 200


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    gauss_sum: float
    moment_sum: float
    surrogate_terms: tuple[tuple[int, float], ...]
    closest_indices: tuple[int, ...]
    m: int
    n: int
    nu: int
    h: float
    p: int
    xi: float
    node_distances: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def parameters(self) -> dict:
        return dict(m=self.m, n=self.n, nu=self.nu, h=self.h, p=self.p, xi=self.xi)


def select_closest(nodes, xi: float, scale: float = 2.0) -> tuple[int, ...]:
    """Index of the node nearest to ``xi``; both neighbours when ``xi`` is their midpoint.

    ``scale`` is the interval length entering the midpoint tolerance
    ``1e-14 * scale``.
    """
    x = np.asarray(nodes, dtype=float)
    if x.size == 0:
        raise ValueError("empty node list")
    dist = np.abs(x - xi)
    c = int(np.argmin(dist))
    if dist[c] == 0.0:
        return (c,)
    tol = 1e-14 * scale
    for k in (c - 1, c + 1):
        if 0 <= k < x.size:
            lo, hi = min(c, k), max(c, k)
            if abs(xi - 0.5 * (x[lo] + x[hi])) <= tol:
                return (lo, hi)
    return (c,)


def _check_p(p) -> int:
    if int(p) != p or p < 0:
        raise ValueError(f"p must be a non-negative integer, got {p}")
    return int(p)


def _moment_sum(w: WeightFamily, xi: float, p: int, derivs: np.ndarray) -> float:
    mu = finite_part_moments(w, xi, p)
    terms = [derivs[j] / math.factorial(j) * mu[p + 1 - j] for j in range(p + 1)]
    return math.fsum(terms)


def evaluate_hfp(f: Integrand, w: WeightFamily, xi: float, p: int, m: int, n: int,
                 derivs: Optional[np.ndarray] = None, nu_rule: str = NU_BALANCED) -> QuadratureResult:
    """Finite-part integral of ``w * f / (x - xi)^{p+1}`` with m Gauss nodes and n+1 interpolation nodes."""
    p = _check_p(p)
    xi = float(xi)
    if not w.a < xi < w.b:
        raise ValueError(f"singularity outside interval: xi={xi} not in ({w.a}, {w.b})")
    if int(n) != n or n <= p:
        raise ValueError(f"need integer n > p, got n={n}, p={p}")
    n = int(n)
    layout = layout_nodes(xi, w.interval, n, nu_rule)
    rule = gauss_rule(w, m)
    if derivs is None:
        derivs = f.derivatives_at_xi(xi, p)
    derivs = np.asarray(derivs, dtype=float)

    closest = select_closest(rule.nodes, xi, w.b - w.a)
    far = np.ones(rule.nodes.size, dtype=bool)
    far[list(closest)] = False

    terms = np.empty(rule.nodes.size)
    terms[far] = rule.weights[far] * confluent_divdiff_direct(f, xi, p, rule.nodes[far], derivs)

    table = coefficient_table(layout, p)
    f_layout = np.asarray(f(layout.nodes), dtype=float)
    surrogate = []
    for c in closest:
        t = rule.weights[c] * surrogate_divdiff(table, f_layout, rule.nodes[c])
        terms[c] = t
        surrogate.append((c, float(t)))

    gauss_sum = math.fsum(terms)
    moment_sum = _moment_sum(w, xi, p, derivs)
    value = gauss_sum + moment_sum
    if not math.isfinite(value):
        raise FloatingPointError(f"non-finite quadrature value (gauss={gauss_sum}, moments={moment_sum})")
    return QuadratureResult(
        value=value,
        gauss_sum=gauss_sum,
        moment_sum=moment_sum,
        surrogate_terms=tuple(surrogate),
        closest_indices=closest,
        m=int(m),
        n=n,
        nu=layout.nu,
        h=layout.h,
        p=p,
        xi=xi,
        node_distances=np.abs(rule.nodes - xi),
    )


def evaluate_baseline(f: Integrand, w: WeightFamily, xi: float, p: int, m: int) -> float:
    """Plain Gauss rule on the subtracted integrand; no protection against cancellation.

    Raises ``ZeroDivisionError`` when xi coincides with a Gauss node.
    """
    p = _check_p(p)
    xi = float(xi)
    if not w.a < xi < w.b:
        raise ValueError(f"singularity outside interval: xi={xi} not in ({w.a}, {w.b})")
    rule = gauss_rule(w, m)
    derivs = f.derivatives_at_xi(xi, p)
    g = confluent_divdiff_direct(f, xi, p, rule.nodes, derivs)
    return math.fsum(rule.weights * g) + _moment_sum(w, xi, p, derivs)


@dataclass(frozen=True)
class SearchResult:
    n_hat: int
    criterion: str
    ns: tuple[int, ...]
    values: tuple[float, ...]
    errors: Optional[tuple[float, ...]] = None
    failures: tuple[tuple[int, str], ...] = ()


def search_optimal_n(f: Integrand, w: WeightFamily, xi: float, p: int, m: int,
                     n_range: tuple[int, int], criterion: str = REFERENCE,
                     exact: Optional[float] = None, plateau: int = 3,
                     nu_rule: str = NU_BALANCED) -> SearchResult:
    """Pick the interpolation size n for a given Gauss order m.

    ``reference``: the n in the range minimising ``|H* - exact|``.
    ``stabilization``: no exact value needed; the smallest n after which the
    successive differences ``|H*(n) - H*(n+1)|`` fail to decrease for
    ``plateau`` consecutive steps.  Ties go to the smaller n.
    n values whose layout is infeasible are skipped and reported.
    """
    lo, hi = int(n_range[0]), int(n_range[1])
    if hi < lo:
        raise ValueError(f"empty n range [{lo}, {hi}]")
    if lo <= p:
        raise ValueError(f"n range must start above p={p}")
    if hi > MAX_SEARCH_N:
        raise ValueError(f"n range capped at {MAX_SEARCH_N}")
    if criterion not in (REFERENCE, STABILIZATION):
        raise ValueError(f"unknown criterion {criterion!r}")
    if criterion == REFERENCE and exact is None:
        raise ValueError("reference criterion needs the exact value")

    derivs = f.derivatives_at_xi(xi, p)
    ns, vals, failures = [], [], []
    for n in range(lo, hi + 1):
        try:
            vals.append(evaluate_hfp(f, w, xi, p, m, n, derivs=derivs, nu_rule=nu_rule).value)
            ns.append(n)
        except ValueError as exc:
            failures.append((n, str(exc)))
    if not ns:
        raise ValueError(f"no feasible n in [{lo}, {hi}]")

    if criterion == REFERENCE:
        errs = [abs(v - exact) for v in vals]
        best = min(range(len(ns)), key=lambda i: (errs[i], ns[i]))
        return SearchResult(ns[best], criterion, tuple(ns), tuple(vals), tuple(errs), tuple(failures))

    diffs = [abs(vals[i + 1] - vals[i]) for i in range(len(vals) - 1)]
    # without a plateau, fall back to the quietest step
    n_hat = ns[int(np.argmin(diffs))] if diffs else ns[0]
    for i in range(len(diffs)):
        window = diffs[i: i + plateau + 1]
        if len(window) < plateau + 1:
            break
        if all(window[j + 1] >= window[j] for j in range(plateau)):
            n_hat = ns[i]
            break
    return SearchResult(n_hat, criterion, tuple(ns), tuple(vals), None, tuple(failures))

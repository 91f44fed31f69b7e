"""Quick oracle checks runnable from an installed package (no test suite needed)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from .. import _kernels
from ..bounds import KAMBO, HUNTER, gauss_remainder_bound
from ..combinatorics import cycle_index_explicit, cycle_index_prefix
from ..engine import evaluate_hfp
from ..integrands import exp_integrand
from ..interpolation import basis_derivative_oracle, coefficient_table, layout_nodes
from ..moments import finite_part_moments
from ..orthogonal import WeightFamily, gauss_rule
from ..specialfn import exponential_integral, i1_exact


def _cycle_index() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(1, 11))
        x = rng.uniform(-2, 2, n)
        ref = cycle_index_explicit(x)
        got = cycle_index_prefix(x)[-1]
        worst = max(worst, abs(got - ref) / max(1.0, abs(ref)))
    ones = max(abs(cycle_index_prefix(np.ones(n))[-1] - 1.0) for n in range(1, 21))
    return worst <= 1e-12 and ones <= 1e-12, f"recursion vs partitions {worst:.1e}, Z(1..1)-1 {ones:.1e}"


def _coefficients() -> tuple[bool, str]:
    worst = 0.0
    for xi in (0.0, 0.25, -0.4):
        for n in (4, 8, 12):
            L = layout_nodes(xi, (-1.0, 1.0), n)
            exact_nodes = [Fraction(L.xi) + int(t) * Fraction(L.h) for t in L.offsets]
            A = coefficient_table(L, 0).A
            for k in range(1, n + 1):
                ref = np.array([basis_derivative_oracle(exact_nodes, i, k, Fraction(L.xi)) for i in range(n + 1)])
                col = A[:, k - 1]
                scale = np.max(np.abs(ref))
                for i in range(n + 1):
                    dev = abs(col[i] - ref[i]) / (abs(ref[i]) if ref[i] != 0 else scale)
                    worst = max(worst, dev)
    return worst <= 1e-10, f"max relative deviation {worst:.1e}"


def _gauss() -> tuple[bool, str]:
    rule = gauss_rule(WeightFamily.legendre(), 10)
    worst = 0.0
    for d in range(20):
        exact = 0.0 if d % 2 else 2.0 / (d + 1)
        worst = max(worst, abs(rule.integrate(lambda x: x**d) - exact))
    return worst <= 1e-13, f"Legendre m=10 monomial error {worst:.1e}"


def _moments() -> tuple[bool, str]:
    mu = finite_part_moments(WeightFamily.legendre(), 0.0, 1)
    mc = finite_part_moments(WeightFamily.chebyshev1(), 0.25, 1)
    ok = abs(mu[1]) < 1e-15 and abs(mu[2] + 2.0) < 1e-15 and mc[1] == 0.0 and mc[2] == 0.0
    return ok, f"Legendre xi=0: {mu.values.tolist()}, Chebyshev xi=0.25: {mc.values.tolist()}"


def _ei() -> tuple[bool, str]:
    e1 = abs(exponential_integral(1.0) / 1.8951178163559368 - 1)
    em1 = abs(exponential_integral(-1.0) / -0.21938393439552026 - 1)
    return max(e1, em1) <= 1e-13, f"relative errors {e1:.1e}, {em1:.1e}"


def _rule() -> tuple[bool, str]:
    w = WeightFamily.legendre()
    err8 = abs(evaluate_hfp(exp_integrand(), w, 1e-5, 0, 7, 8).value - i1_exact(1e-5, 0))
    err12 = abs(evaluate_hfp(exp_integrand(), w, 1e-5, 0, 7, 12).value - i1_exact(1e-5, 0))
    return err8 <= 5e-9 and err12 <= 1e-12, f"m=7: n=8 {err8:.2e}, n=12 {err12:.2e}"


def _bounds() -> tuple[bool, str]:
    h = gauss_remainder_bound(HUNTER, 2.0, 1.0, 2.0, 3)
    k = gauss_remainder_bound(KAMBO, 2.0, 1.0, 2.0, 3)
    return h == 0.25 and abs(k - 5 * math.pi / 128) <= 1e-14, f"Hunter {h}, Kambo {k:.15f}"


CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("cycle-index", _cycle_index),
    ("coefficient-oracle", _coefficients),
    ("gauss-exactness", _gauss),
    ("moments", _moments),
    ("exponential-integral", _ei),
    ("finite-part-rule", _rule),
    ("bounds", _bounds),
]


def run_selftest(out=print) -> bool:
    out(f"backend: {_kernels.backend()}")
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name:22s} {detail}")
    return all_ok

"""Independent reference computations shared by the unit and acceptance tests.

Every oracle here avoids the package's own algorithms: exact rational
arithmetic, extended-precision quadrature, or permutation enumeration.
"""

import itertools
import math
from fractions import Fraction

import mpmath as mp
import numpy as np

from hfpquad.interpolation import basis_derivative_oracle


def _cycle_counts(perm):
    seen = [False] * len(perm)
    counts = [0] * len(perm)
    for s in range(len(perm)):
        if seen[s]:
            continue
        length, j = 0, s
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        counts[length - 1] += 1
    return counts


def brute_force_cycle_index(x):
    """Average of prod x_i^{c_i} over every permutation of len(x) letters (exact)."""
    n = len(x)
    xs = [Fraction(v) for v in x]
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        term = Fraction(1)
        for i, c in enumerate(_cycle_counts(perm)):
            term *= xs[i] ** c
        total += term
    return total / math.factorial(n)


def exact_nodes(layout):
    """The layout's nodes as exact rationals xi + t*h (no rounding of the products)."""
    return [Fraction(layout.xi) + int(t) * Fraction(layout.h) for t in layout.offsets]


def oracle_column(layout, k):
    ex = exact_nodes(layout)
    return np.array([basis_derivative_oracle(ex, i, k, Fraction(layout.xi)) for i in range(layout.n + 1)])


def node_polynomial_derivative(nodes, k, x):
    poly = [Fraction(1)]
    for a in nodes:
        nxt = [Fraction(0)] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d + 1] += c
            nxt[d] -= a * c
        poly = nxt
    acc = Fraction(0)
    for d in range(len(poly) - 1, k - 1, -1):
        acc = acc * x + math.comb(d, k) * poly[d]
    return acc


def excision_finite_part(weight, a, b, xi, q, eps_scale=0.02, extra=6):
    """Constant term of the symmetric-excision integral, by fitting its expansion in eps.

    F(eps) = int_{|x-xi|>eps} w(x) (x-xi)^-q dx is c_0 + sum_j c_{-j} eps^-j + sum_j c_j eps^j;
    sampling F on a geometric eps sequence and solving for the coefficients at
    40 digits extrapolates c_0.  The largest eps is a fixed fraction of the
    distance to the nearer endpoint, where the expansion of w stops converging.
    """
    with mp.workdps(40):
        xi_m = mp.mpf(xi)
        a_m, b_m = mp.mpf(a), mp.mpf(b)
        eps0 = eps_scale * min(xi_m - a_m, b_m - xi_m)
        powers = list(range(-(q - 1), 0)) + [0] + list(range(1, extra + 1))
        epss = [eps0 / 2**j for j in range(len(powers))]
        g = lambda x: weight(x) / (x - xi_m) ** q
        rows, rhs = [], []
        for e in epss:
            left = mp.quad(g, [a_m, xi_m - 8 * e, xi_m - e])
            right = mp.quad(g, [xi_m + e, xi_m + 8 * e, b_m])
            rows.append([e**k for k in powers])
            rhs.append(left + right)
        sol = mp.lu_solve(mp.matrix(rows), mp.matrix(rhs))
        return float(sol[powers.index(0)])


def monomial_finite_part(d, xi, p):
    """Finite part of int_{-1}^1 x^d (x-xi)^-(p+1) dx by expanding x^d about xi.

    Every power (x-xi)^e integrates in closed form; e = -1 contributes a log.
    Rational arithmetic keeps the algebra exact until the final rounding.
    """
    x0 = Fraction(xi)
    rational, log_coeff = Fraction(0), Fraction(0)
    for j in range(d + 1):
        c = math.comb(d, j) * x0 ** (d - j)
        e = j - p - 1
        if e == -1:
            log_coeff += c
        else:
            rational += c * ((1 - x0) ** (e + 1) - (-1 - x0) ** (e + 1)) / (e + 1)
    return float(rational) + float(log_coeff) * math.log(float((1 - x0) / (1 + x0)))


def ei_series_oracle(x, dps=80):
    """gamma + ln|x| + sum x^k/(k k!) summed at high precision (cancellation-proof up to |x| = 40)."""
    with mp.workdps(dps):
        x = mp.mpf(x)
        s, term, k = mp.mpf(0), mp.mpf(1), 0
        while True:
            k += 1
            term *= x / k
            s += term / k
            if abs(term / k) < mp.mpf(10) ** (-dps + 5) * max(abs(s), 1):
                break
        return float(mp.euler + mp.log(abs(x)) + s)


def expm1_quotient(d, p):
    """(e^d - sum_{j<=p} d^j/j!) / d^(p+1) without cancellation."""
    if abs(d) < mp.mpf("0.01"):
        return mp.fsum(d**k / mp.factorial(k + p + 1) for k in range(25))
    return (mp.exp(d) - mp.fsum(d**j / mp.factorial(j) for j in range(p + 1))) / d ** (p + 1)


def brute_force_i1(xi, p):
    """Subtract the Taylor polynomial of e^x at xi, integrate the smooth rest, add the analytic moments."""
    with mp.workdps(30):
        x0 = mp.mpf(xi)
        e = mp.exp(x0)
        g = lambda x: e * expm1_quotient(x - x0, p)
        mu1 = mp.log((1 - x0) / (1 + x0))
        moments = e * mu1 if p == 0 else e * (-1 / (1 - x0) - 1 / (1 + x0)) + e * mu1
        return float(mp.quad(g, [-1, x0, 1]) + moments)

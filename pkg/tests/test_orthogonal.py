import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from hfpquad.orthogonal import (
    CUSTOM,
    WeightFamily,
    gauss_rule,
    jacobi_recurrence,
    tridiagonal_eigenvalues,
    weight_mass,
)

FAMILIES = [
    WeightFamily.legendre(),
    WeightFamily.chebyshev1(),
    WeightFamily.jacobi(0.5, -0.3),
    WeightFamily.jacobi(1.0, 0.0),
    WeightFamily.jacobi(-0.5, 0.7),
    WeightFamily.jacobi(2.0, 2.0),
    WeightFamily.legendre(0.0, 3.0),
    WeightFamily.jacobi(0.25, 1.5, -2.0, 0.5),
    WeightFamily.chebyshev1(1.0, 2.0),
]


def _ids(w):
    return f"{w.kind}({w.alpha},{w.beta})[{w.a},{w.b}]"


_moment_cache = {}


def reference_moment(w, d, absolute=False):
    """int_a^b omega(x) x^d dx (or |x|^d) by tanh-sinh quadrature at 30 digits."""
    key = (w.kind, w.alpha, w.beta, w.a, w.b, d, absolute)
    if key not in _moment_cache:
        with mp.workdps(30):
            a, b = mp.mpf(w.a), mp.mpf(w.b)
            mid, half = (a + b) / 2, (b - a) / 2
            al, be = mp.mpf(w.alpha), mp.mpf(w.beta)

            def g(t):
                x = mid + half * t
                x = abs(x) if absolute else x
                return (1 - t) ** al * (1 + t) ** be * x**d * half

            pts = [-1, 1] if not absolute or not (w.a < 0 < w.b) else [-1, -mid / half, 1]
            _moment_cache[key] = float(mp.quad(g, pts))
    return _moment_cache[key]


@pytest.mark.parametrize("w", FAMILIES, ids=_ids)
@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 12])
def test_exactness_against_extended_precision_moments(w, m):
    rule = gauss_rule(w, m)
    for d in range(2 * m):
        got = float(np.dot(rule.weights, rule.nodes**d))
        ref = reference_moment(w, d)
        scale = reference_moment(w, d, absolute=True)
        assert abs(got - ref) <= 1e-11 * scale, (d, got, ref)


@pytest.mark.parametrize("w", FAMILIES, ids=_ids)
def test_rule_invariants(w):
    for m in (1, 4, 17):
        rule = gauss_rule(w, m)
        assert len(rule) == m
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all(rule.nodes > w.a) and np.all(rule.nodes < w.b)
        assert np.all(rule.weights > 0)


@pytest.mark.parametrize("w", FAMILIES, ids=_ids)
def test_weights_sum_to_mass(w):
    mass = weight_mass(w)
    for m in range(1, 65):
        rule = gauss_rule(w, m)
        assert math.fsum(rule.weights) == pytest.approx(mass, rel=1e-12)


@pytest.mark.parametrize("w", [WeightFamily.legendre(), WeightFamily.chebyshev1(), WeightFamily.jacobi(0.7, 0.7),
                               WeightFamily.legendre(0.0, 3.0)], ids=_ids)
@pytest.mark.parametrize("m", [2, 7, 12, 31])
def test_symmetric_weights_give_symmetric_rules(w, m):
    rule = gauss_rule(w, m)
    mid = 0.5 * (w.a + w.b)
    np.testing.assert_allclose(rule.nodes - mid, -(rule.nodes[::-1] - mid), atol=1e-13)
    np.testing.assert_allclose(rule.weights, rule.weights[::-1], rtol=1e-13)


def test_closed_form_examples():
    r = gauss_rule(WeightFamily.legendre(), 2)
    np.testing.assert_allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    np.testing.assert_allclose(r.weights, [1.0, 1.0], rtol=1e-15)
    c = gauss_rule(WeightFamily.chebyshev1(), 3)
    np.testing.assert_allclose(c.nodes, [-math.sqrt(3) / 2, 0.0, math.sqrt(3) / 2], atol=1e-15)
    np.testing.assert_allclose(c.weights, [math.pi / 3] * 3, rtol=1e-15)


def test_jacobi_zero_zero_is_legendre():
    a = gauss_rule(WeightFamily.jacobi(0.0, 0.0), 5)
    b = gauss_rule(WeightFamily.legendre(), 5)
    np.testing.assert_allclose(a.nodes, b.nodes, atol=1e-13)
    np.testing.assert_allclose(a.weights, b.weights, atol=1e-13)


def legendre_rule_extended(m, start):
    """Legendre nodes/weights polished by Newton at 40 digits from the given start values."""
    xs, ws = [], []
    with mp.workdps(40):
        for x0 in start:
            x = mp.mpf(x0)
            for _ in range(8):
                p, q = mp.legendre(m, x), mp.legendre(m - 1, x)
                x -= p / (m * (x * p - q) / (x * x - 1))
            p, q = mp.legendre(m, x), mp.legendre(m - 1, x)
            dp = m * (x * p - q) / (x * x - 1)
            xs.append(float(x))
            ws.append(float(2 / ((1 - x * x) * dp * dp)))
    return np.array(xs), np.array(ws)


@pytest.mark.parametrize("m", [3, 10, 40, 64])
def test_legendre_agrees_with_extended_precision_rule(m):
    # numpy's leggauss weights drift to ~1e-12 relative by m = 40, too loose to serve here
    r = gauss_rule(WeightFamily.legendre(), m)
    x, wts = legendre_rule_extended(m, np.polynomial.legendre.leggauss(m)[0])
    np.testing.assert_allclose(r.nodes, x, atol=2e-16)
    np.testing.assert_allclose(r.weights, wts, rtol=1e-13)


def test_masses():
    assert weight_mass(WeightFamily.legendre()) == 2.0
    assert weight_mass(WeightFamily.chebyshev1()) == math.pi
    assert weight_mass(WeightFamily.jacobi(1.0, 0.0)) == pytest.approx(2.0, rel=1e-15)
    quad, _ = integrate.quad(lambda t: 1.0 - t, -1.0, 1.0)
    assert weight_mass(WeightFamily.jacobi(1.0, 0.0)) == pytest.approx(quad, rel=1e-13)
    assert weight_mass(WeightFamily.legendre(0.0, 3.0)) == 3.0
    assert weight_mass(WeightFamily.chebyshev1(1.0, 2.0)) == pytest.approx(math.pi / 2, rel=1e-15)


def test_jacobi_mass_against_quadrature_oracle():
    for al, be in [(0.5, -0.3), (-0.5, 0.7), (2.0, 2.0), (3.5, 0.25)]:
        w = WeightFamily.jacobi(al, be)
        assert weight_mass(w) == pytest.approx(reference_moment(w, 0), rel=1e-13)


def test_tridiagonal_eigenvalues_against_numpy():
    rng = np.random.default_rng(3)
    d = rng.normal(size=12)
    e = rng.normal(size=11)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(np.sort(tridiagonal_eigenvalues(d, e)), np.linalg.eigvalsh(T), atol=1e-12)


def test_recurrence_mass_entry():
    diag, off2 = jacobi_recurrence(4, 0.5, 1.5)
    assert off2[0] == pytest.approx(weight_mass(WeightFamily.jacobi(0.5, 1.5)), rel=1e-15)


def test_custom_weight_uses_provider():
    base = gauss_rule(WeightFamily.legendre(), 6)
    w = WeightFamily(CUSTOM, rule_provider=lambda m: (np.array(base.nodes), np.array(base.weights)))
    r = gauss_rule(w, 6)
    np.testing.assert_array_equal(r.nodes, base.nodes)
    assert weight_mass(w) == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("kwargs", [dict(alpha=-1.0, beta=0.0), dict(alpha=0.0, beta=-1.5)])
def test_rejects_bad_jacobi_parameters(kwargs):
    with pytest.raises(ValueError):
        WeightFamily.jacobi(**kwargs)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        gauss_rule(WeightFamily.legendre(), 0)
    with pytest.raises(ValueError):
        WeightFamily.legendre(1.0, 1.0)
    with pytest.raises(ValueError):
        WeightFamily(CUSTOM)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hfpquad.bounds import (
    HUNTER,
    KAMBO,
    EllipseEvaluationError,
    EllipseSpec,
    best_bound_over_rho,
    gauss_remainder_bound,
    interp_remainder_bound,
    max_on_ellipse,
    rho_grid,
    rho_of_point,
    theorem41_bound,
)
from hfpquad.engine import evaluate_hfp
from hfpquad.integrands import exp_integrand
from hfpquad.orthogonal import WeightFamily
from hfpquad.specialfn import i1_exact


def test_gauss_term_examples():
    assert gauss_remainder_bound(HUNTER, 2.0, 1.0, 2.0, 3) == 0.25
    assert abs(gauss_remainder_bound(KAMBO, 2.0, 1.0, 2.0, 3) - 5 * math.pi / 128) <= 1e-14
    assert gauss_remainder_bound(HUNTER, 2.0, 0.0, 2.0, 3) == 0.0


def test_interp_term_examples():
    assert interp_remainder_bound(math.e, math.e, 8, 0) == pytest.approx(2 * math.e * 1.25**8 / 40320, rel=1e-15)
    assert interp_remainder_bound(math.e, math.e, 8, 0) == pytest.approx(8.04e-4, rel=1e-3)
    assert interp_remainder_bound(1.0, 1.0, 4, 0) == 0.421875
    assert interp_remainder_bound(0.0, 0.0, 9, 3) == 0.0
    assert interp_remainder_bound(1.0, 1.0, 4, 0, proof_form=True) == pytest.approx(2 * 1.4**4 / 24, rel=1e-15)


def test_interp_term_large_n_uses_log_scale():
    v = interp_remainder_bound(1.0, 1.0, 400, 1)
    ref = math.exp(399 * math.log(1 + 3 / 400) - math.lgamma(400) + math.log(2))
    assert v == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("p", [0, 1, 2, 4])
def test_interp_term_decreasing_in_n(p):
    vals = [interp_remainder_bound(1.0, 1.0, n, p) for n in range(p + 3, 80)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_theorem_bound_examples():
    r = theorem41_bound(2.0, 1.0, 3, 0.0, 0.0, 0.0, 0.0, 5, 0)
    assert r.total == 0.25 and r.interp_term == 0.0
    assert r.gauss_term == gauss_remainder_bound(HUNTER, 2.0, 1.0, 2.0, 3)
    assert theorem41_bound(2.0, 1.0, 10, 0, 0, 1, 1, 5, 0).total < theorem41_bound(2.0, 1.0, 5, 0, 0, 1, 1, 5, 0).total
    d = r.as_dict()
    assert d["M_source"] == "SUPPLIED" and d["M"] == 1.0 and d["rho"] == 2.0 and d["variant"] == HUNTER


def test_theorem_bound_jacobi_mass():
    # mass of (1-x)^1 (1+x)^0 on (-1,1) is 2
    r = theorem41_bound(2.0, 1.0, 3, 1.0, 0.0, 0.0, 0.0, 5, 0)
    assert r.gauss_term == pytest.approx(gauss_remainder_bound(HUNTER, 2.0, 1.0, 2.0, 3), rel=1e-15)
    r2 = theorem41_bound(2.0, 1.0, 3, -0.5, -0.5, 0.0, 0.0, 5, 0)
    assert r2.gauss_term == pytest.approx(gauss_remainder_bound(HUNTER, 2.0, 1.0, math.pi, 3), rel=1e-14)


KAMBO_HUNTER_CROSSOVER = 1.5835349711075088


def kambo_over_hunter(rho):
    return math.pi * (rho * rho + 1) * (rho - 1) / (8 * rho * (rho * rho - 2))


@pytest.mark.parametrize("rho", [
    pytest.param(1.5, marks=pytest.mark.xfail(strict=True, reason=(
        "the ratio of the two formulas is pi(rho^2+1)(rho-1)/(8 rho (rho^2-2)), independent of m and M; "
        "it is 1.70 at rho=1.5 and drops below 1 only past rho=1.5835"))),
    2.0, 3.0])
@pytest.mark.parametrize("m", [3, 7, 15])
def test_kambo_sharper_than_hunter(rho, m):
    assert gauss_remainder_bound(KAMBO, rho, 1.0, 2.0, m) < gauss_remainder_bound(HUNTER, rho, 1.0, 2.0, m)


@settings(max_examples=100, deadline=None)
@given(st.floats(1.42, 20.0), st.integers(1, 20))
def test_kambo_hunter_ratio(rho, m):
    ratio = gauss_remainder_bound(KAMBO, rho, 1.0, 2.0, m) / gauss_remainder_bound(HUNTER, rho, 1.0, 2.0, m)
    assert ratio == pytest.approx(kambo_over_hunter(rho), rel=1e-12)
    assert (ratio < 1) == (rho > KAMBO_HUNTER_CROSSOVER) or abs(rho - KAMBO_HUNTER_CROSSOVER) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.floats(1.5, 8.0), st.integers(1, 30), st.sampled_from([HUNTER, KAMBO]))
def test_gauss_term_decreasing(rho, m, variant):
    b = gauss_remainder_bound(variant, rho, 1.0, 2.0, m)
    assert gauss_remainder_bound(variant, rho, 1.0, 2.0, m + 1) < b
    assert gauss_remainder_bound(variant, rho * 1.01, 1.0, 2.0, m) < b


def test_domain_errors():
    with pytest.raises(ValueError):
        gauss_remainder_bound(KAMBO, 1.4, 1.0, 2.0, 3)
    with pytest.raises(ValueError):
        gauss_remainder_bound(KAMBO, 2.0, 1.0, 2.0, 3, alpha=0.5)
    with pytest.raises(ValueError):
        gauss_remainder_bound(HUNTER, 1.0, 1.0, 2.0, 3)
    with pytest.raises(ValueError):
        gauss_remainder_bound(HUNTER, 2.0, -1.0, 2.0, 3)
    with pytest.raises(ValueError):
        gauss_remainder_bound("lagrange", 2.0, 1.0, 2.0, 3)
    with pytest.raises(ValueError):
        interp_remainder_bound(1.0, 1.0, 3, 3)
    with pytest.raises(ValueError):
        EllipseSpec(1.0)
    with pytest.raises(ValueError):
        EllipseSpec(2.0, samples=10)


# -- ellipse maxima ------------------------------------------------------------------

def test_ellipse_geometry():
    e = EllipseSpec(2.0)
    assert (e.semi_major, e.semi_minor) == (1.25, 0.75)
    z = e.point(np.linspace(0, 2 * np.pi, 50))
    # foci at +-1: distance sum equals the major axis
    np.testing.assert_allclose(np.abs(z - 1) + np.abs(z + 1), 2.5, rtol=1e-14)


def test_max_on_ellipse_examples():
    assert max_on_ellipse(lambda z: np.ones_like(z), EllipseSpec(3.0)) == 1.0
    assert max_on_ellipse(lambda z: z, EllipseSpec(2.0)) == pytest.approx(1.25, rel=1e-15)
    assert max_on_ellipse(np.exp, EllipseSpec(2.0)) == pytest.approx(math.exp(1.25), rel=1e-14)


def test_max_refinement_beats_grid():
    # maximum of |exp(c z)| sits off the sampling grid for a rotated c
    c = np.exp(0.3j) * 4.0
    spec = EllipseSpec(1.7, samples=64)
    got = max_on_ellipse(lambda z: np.exp(c * z), spec)
    dense = np.max(np.abs(np.exp(c * spec.point(np.linspace(0, 2 * np.pi, 400001)))))
    assert got == pytest.approx(dense, rel=1e-9)
    assert got >= dense * (1 - 1e-12)


def test_max_reports_singular_point():
    spec = EllipseSpec(2.0)
    with pytest.raises(EllipseEvaluationError) as info:
        max_on_ellipse(lambda z: 1.0 / (z - 1.25), spec)
    assert info.value.z == pytest.approx(1.25)


def test_rho_helpers():
    assert rho_of_point(2.0) == pytest.approx(2 + math.sqrt(3), rel=1e-15)
    assert rho_of_point(2.5j) == pytest.approx(2.5 + math.sqrt(7.25), rel=1e-15)
    assert rho_of_point(EllipseSpec(3.0).point(1.1)) == pytest.approx(3.0, rel=1e-14)
    g = rho_grid()
    assert len(g) == 16 and g[0] == 1.05 and g[-1] == pytest.approx(9.5)
    assert rho_grid(4.0)[-1] == pytest.approx(3.8)
    with pytest.raises(ValueError):
        rho_grid(1.06)


# -- validity for e^x at xi = 1e-5 -------------------------------------------------------------------

def test_bound_covers_measured_error():
    xi = 1e-5
    err = abs(evaluate_hfp(exp_integrand(), WeightFamily.legendre(), xi, 0, 7, 8).value - i1_exact(xi, 0))
    M = max_on_ellipse(np.exp, EllipseSpec(3.0))
    r = theorem41_bound(3.0, M, 7, 0.0, 0.0, math.e, math.e, 8, 0, m_estimated=True)
    assert r.total >= err
    assert r.as_dict()["M_source"] == "ESTIMATED"


def test_best_bound_over_rho():
    best, all_reports = best_bound_over_rho(np.exp, 7, 8, 0, math.e, math.e)
    assert len(all_reports) == 16
    assert best.total == min(r.total for r in all_reports)
    assert best.m_estimated
    fixed, _ = best_bound_over_rho(np.exp, 7, 8, 0, math.e, math.e, M_override=100.0)
    assert not fixed.m_estimated and fixed.inputs["M"] == 100.0

"""A-priori error bounds for the finite-part rule.

The Gauss part uses the analyticity of the integrand on a confocal ellipse
with foci +-1 (Hunter's bound for general Jacobi weights, Kambo's sharper
form for Legendre); the interpolation part is a factorial-decay term in n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .orthogonal import weight_mass, WeightFamily

HUNTER = "hunter"
KAMBO = "kambo"

MIN_SAMPLES = 64
RHO_GRID_POINTS = 16
RHO_GRID_START = 1.05
RHO_CAP = 10.0


class EllipseEvaluationError(ArithmeticError):
    def __init__(self, z: complex, cause: Exception | str):
        self.z = z
        super().__init__(f"evaluator failed at z={z!r}: {cause}")


@dataclass(frozen=True)
class EllipseSpec:
    """Ellipse ``z = (rho e^{it} + e^{-it}/rho) / 2`` with foci +-1."""

    rho: float
    samples: int = 256

    def __post_init__(self):
        if not self.rho > 1.0:
            raise ValueError(f"ellipse parameter must exceed 1, got rho={self.rho}")
        if self.samples < MIN_SAMPLES:
            raise ValueError(f"need at least {MIN_SAMPLES} boundary samples, got {self.samples}")

    @property
    def semi_major(self) -> float:
        return 0.5 * (self.rho + 1.0 / self.rho)

    @property
    def semi_minor(self) -> float:
        return 0.5 * (self.rho - 1.0 / self.rho)

    def point(self, theta):
        return 0.5 * (self.rho * np.exp(1j * theta) + np.exp(-1j * theta) / self.rho)


@dataclass(frozen=True)
class BoundReport:
    gauss_term: float
    interp_term: float
    total: float
    inputs: dict = field(default_factory=dict)
    variant: str = HUNTER
    m_estimated: bool = False

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "gauss_term": self.gauss_term,
            "interp_term": self.interp_term,
            "total": self.total,
            **self.inputs,
            "M_source": "ESTIMATED" if self.m_estimated else "SUPPLIED",
        }


def gauss_remainder_bound(variant: str, rho: float, M: float, mass: float, m: int,
                          alpha: float = 0.0, beta: float = 0.0) -> float:
    """Bound on the m-point Gauss remainder for g analytic inside the rho-ellipse, |g| <= M there."""
    if M < 0:
        raise ValueError("M must be non-negative")
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    variant = variant.lower()
    if variant == HUNTER:
        if not rho > 1.0:
            raise ValueError(f"Hunter bound needs rho > 1, got {rho}")
        return 4.0 * M * mass / (rho ** (2 * m - 1) * (rho - 1.0))
    if variant == KAMBO:
        if alpha != 0.0 or beta != 0.0:
            raise ValueError("Kambo bound applies to the Legendre weight only (alpha = beta = 0)")
        if not rho > math.sqrt(2.0):
            raise ValueError(f"Kambo bound needs rho > sqrt(2), got {rho}")
        return math.pi * M * (rho * rho + 1.0) / (rho ** (2 * m) * (rho * rho - 2.0))
    raise ValueError(f"unknown variant {variant!r}; expected {HUNTER!r} or {KAMBO!r}")


def interp_remainder_bound(M1: float, M2: float, n: int, p: int, proof_form: bool = False) -> float:
    """``(M1+M2)/p! * 1/(n-p)! * (1 + (p+2)/n)^(n-p)``.

    ``proof_form`` swaps n for n+1 in the base, the variant that falls out of
    the derivation; the default is the stated theorem.
    """
    if int(n) != n or int(p) != p or p < 0:
        raise ValueError("n and p must be integers with p >= 0")
    n, p = int(n), int(p)
    if n <= p:
        raise ValueError(f"need n > p, got n={n}, p={p}")
    if M1 < 0 or M2 < 0:
        raise ValueError("derivative bounds must be non-negative")
    base = 1.0 + (p + 2) / ((n + 1) if proof_form else n)
    if n - p <= 170:
        return (M1 + M2) * base ** (n - p) / math.factorial(p) / math.factorial(n - p)
    # factorials past 170! do not fit a double
    log_scale = (n - p) * math.log(base) - math.lgamma(p + 1) - math.lgamma(n - p + 1)
    return (M1 + M2) * math.exp(log_scale)


def total_bound(gauss_term: float, interp_term: float) -> float:
    return gauss_term + interp_term


def theorem41_bound(rho: float, M: float, m: int, alpha: float, beta: float,
                    M1: float, M2: float, n: int, p: int,
                    m_estimated: bool = False, proof_form: bool = False) -> BoundReport:
    """Combined bound: Hunter's term with the Jacobi mass on (-1, 1) plus the interpolation term."""
    mass = weight_mass(WeightFamily.jacobi(alpha, beta))
    g = gauss_remainder_bound(HUNTER, rho, M, mass, m)
    r = interp_remainder_bound(M1, M2, n, p, proof_form=proof_form)
    inputs = dict(rho=rho, M=M, M1=M1, M2=M2, m=int(m), n=int(n), p=int(p), alpha=alpha, beta=beta)
    return BoundReport(g, r, total_bound(g, r), inputs, HUNTER, m_estimated)


def _abs_at(f_complex: Callable, spec: EllipseSpec, theta):
    z = spec.point(theta)
    with np.errstate(all="raise"):
        try:
            vals = np.abs(np.asarray(f_complex(z), dtype=complex))
        except (FloatingPointError, ZeroDivisionError, ValueError) as exc:
            # locate the first offending point for the report
            for zk in np.atleast_1d(z):
                try:
                    ok = np.isfinite(complex(f_complex(zk)))
                except (FloatingPointError, ZeroDivisionError, ValueError):
                    ok = False
                if not ok:
                    raise EllipseEvaluationError(complex(zk), exc) from exc
            raise EllipseEvaluationError(complex(np.atleast_1d(z)[0]), exc) from exc
    bad = ~np.isfinite(vals)
    if np.any(bad):
        zz = np.atleast_1d(z)
        raise EllipseEvaluationError(complex(zz[np.argmax(np.atleast_1d(bad))]), "non-finite value")
    return vals


def max_on_ellipse(f_complex: Callable, spec: EllipseSpec) -> float:
    """Sampled estimate of ``max |f|`` on the ellipse boundary (a lower estimate, not a certificate)."""
    theta = np.linspace(0.0, 2.0 * math.pi, spec.samples, endpoint=False)
    vals = _abs_at(f_complex, spec, theta)
    k = int(np.argmax(vals))
    best = float(vals[k])
    # golden-section refinement on the bracketing grid cell pair
    step = 2.0 * math.pi / spec.samples
    lo, hi = theta[k] - step, theta[k] + step
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = float(_abs_at(f_complex, spec, c)), float(_abs_at(f_complex, spec, d))
    for _ in range(60):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = float(_abs_at(f_complex, spec, c))
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = float(_abs_at(f_complex, spec, d))
        if hi - lo < 1e-12:
            break
    return max(best, fc, fd)


def rho_grid(rho_sing: Optional[float] = None, points: int = RHO_GRID_POINTS) -> np.ndarray:
    """Geometric grid from 1.05 to 0.95*rho_sing (rho_sing None or inf means entire, capped at 10)."""
    top = RHO_CAP if rho_sing is None or not math.isfinite(rho_sing) else min(float(rho_sing), RHO_CAP)
    top *= 0.95
    if not top > RHO_GRID_START:
        raise ValueError(f"singularity ellipse rho={rho_sing} too close to the interval")
    return np.geomspace(RHO_GRID_START, top, points)


def rho_of_point(z: complex) -> float:
    """Parameter of the confocal ellipse through z: |z + sqrt(z^2 - 1)| on the outer branch."""
    z = complex(z)
    s = np.sqrt(z * z - 1.0)
    return float(max(abs(z + s), abs(z - s)))


def best_bound_over_rho(f_complex: Callable, m: int, n: int, p: int, M1: float, M2: float,
                        alpha: float = 0.0, beta: float = 0.0,
                        rho_sing: Optional[float] = None, samples: int = 256,
                        M_override: Optional[float] = None) -> tuple[BoundReport, list[BoundReport]]:
    """Evaluate the combined bound on the rho grid and return the smallest with every candidate."""
    reports = []
    for rho in rho_grid(rho_sing):
        if M_override is None:
            M = max_on_ellipse(f_complex, EllipseSpec(float(rho), samples))
        else:
            M = float(M_override)
        reports.append(theorem41_bound(float(rho), M, m, alpha, beta, M1, M2, n, p,
                                       m_estimated=M_override is None))
    return min(reports, key=lambda r: r.total), reports

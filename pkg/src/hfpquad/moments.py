"""Finite-part moments ``mu_q(xi) = =int_a^b omega(x) (x - xi)^-q dx``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orthogonal import CHEBYSHEV1, CUSTOM, LEGENDRE, WeightFamily


class UnsupportedWeightError(NotImplementedError):
    pass


@dataclass(frozen=True)
class MomentVector:
    """``values[q-1] = mu_q(xi)`` for q = 1..p+1."""

    xi: float
    values: np.ndarray
    weight: WeightFamily

    def __getitem__(self, q: int) -> float:
        if q < 1:
            raise IndexError("moment orders start at 1")
        return float(self.values[q - 1])


def legendre_moment(a: float, b: float, xi: float, q: int) -> float:
    if q == 1:
        return math.log((b - xi) / (xi - a))
    e = 1 - q
    return ((b - xi) ** e - (a - xi) ** e) / e


def finite_part_moments(w: WeightFamily, xi: float, p: int) -> MomentVector:
    """Moments mu_1..mu_{p+1} of ``w`` at ``xi``.

    Closed forms exist for Legendre (any interval) and Chebyshev of the first
    kind, whose principal value vanishes for every xi and hence so do all its
    xi-derivatives.  Any other weight must bring a ``moment_provider``.
    """
    xi = float(xi)
    if not w.a < xi < w.b:
        raise ValueError(f"singularity outside interval: xi={xi} not in ({w.a}, {w.b})")
    if p < 0:
        raise ValueError("p must be non-negative")
    qs = range(1, p + 2)
    if w.moment_provider is not None:
        vals = [float(w.moment_provider(xi, q)) for q in qs]
    elif w.kind == LEGENDRE:
        vals = [legendre_moment(w.a, w.b, xi, q) for q in qs]
    elif w.kind == CHEBYSHEV1:
        vals = [0.0 for _ in qs]
    else:
        what = "custom" if w.kind == CUSTOM else f"Jacobi(alpha={w.alpha}, beta={w.beta})"
        raise UnsupportedWeightError(
            f"no closed-form finite-part moments for {what} weights; supply a moment_provider"
        )
    values = np.array(vals)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError(f"non-finite moment at xi={xi}: {values}")
    values.setflags(write=False)
    return MomentVector(xi, values, w)

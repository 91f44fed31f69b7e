"""Cycle index of the symmetric group.

``Z_n(x_1..x_n)`` averages ``x_1^{c_1} ... x_n^{c_n}`` over all permutations
of n letters, ``c_i`` being the number of i-cycles.  Two evaluators are
provided: the O(n^2) recursion ``n Z_n = sum_j x_j Z_{n-j}`` (the production
path) and the explicit sum over integer partitions, kept as a small-n
oracle.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels

MAX_EXPLICIT_N = 12

Partition = tuple[int, ...]


def _as_arguments(x: Sequence[float]) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError("cycle-index arguments must be finite")
    return arr


def cycle_index_prefix(x: Sequence[float]) -> np.ndarray:
    """Return ``[Z_0, Z_1, ..., Z_n]`` evaluated at ``x = (x_1..x_n)``.

    >>> cycle_index_prefix([1, 2, 3, 4]).tolist()[:3]
    [1.0, 1.0, 1.5]
    """
    arr = _as_arguments(x)
    if arr.size == 0:
        return np.ones(1)
    return _kernels.cycle_index_rows(arr[None, :])[0]


def cycle_index_batch(X: np.ndarray) -> np.ndarray:
    """Row-wise :func:`cycle_index_prefix` for a 2-D argument array."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("expected a 2-D array of argument rows")
    if X.shape[1] == 0:
        return np.ones((X.shape[0], 1))
    if not np.all(np.isfinite(X)):
        raise ValueError("cycle-index arguments must be finite")
    return _kernels.cycle_index_rows(X)


def _check_small(n: int) -> None:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_EXPLICIT_N:
        raise ValueError(
            f"n={n} exceeds {MAX_EXPLICIT_N}; partition enumeration is an oracle "
            "for small n only, use cycle_index_prefix instead"
        )


def partitions_of(n: int) -> list[Partition]:
    """All multiplicity vectors ``(a_1..a_n)`` with ``sum i*a_i == n``.

    Sorted lexicographically on the vector.  ``n == 0`` yields the single
    empty partition.
    """
    _check_small(n)
    out: list[Partition] = []

    def rec(i: int, remaining: int, tail: list[int]) -> None:
        # choose a_i for i = n, n-1, ..., 2; a_1 takes what is left
        if i == 1:
            out.append(tuple([remaining] + tail))
            return
        for a in range(remaining // i + 1):
            rec(i - 1, remaining - a * i, [a] + tail)

    if n == 0:
        return [()]
    rec(n, n, [])
    out.sort()
    return out


def cycle_index_explicit(x: Sequence[float]) -> float:
    """Partition-sum form of ``Z_n``, evaluated in exact rational arithmetic.

    The float inputs are converted exactly, every monomial is formed exactly
    and only the final sum is rounded, so the result is the correctly
    rounded value of the polynomial at the given arguments.
    """
    arr = _as_arguments(x)
    n = arr.size
    _check_small(n)
    xs = [Fraction(float(v)) for v in arr]
    total = Fraction(0)
    for a in partitions_of(n):
        term = Fraction(1)
        for i, ai in enumerate(a, start=1):
            if ai:
                term *= xs[i - 1] ** ai / (i**ai * math.factorial(ai))
        total += term
    return float(total)

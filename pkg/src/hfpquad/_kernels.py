"""Hot loops: batched cycle-index recursion and row-wise Horner evaluation.

Each kernel exists twice, a numba ``@njit`` version and a pure-numpy one
performing the same floating-point operations in the same order, so the two
backends return bit-identical arrays.  Which one is exported is decided once
at import time:

* ``HFP_DISABLE_NUMBA=1`` (or ``true``/``yes``) forces the numpy path;
* a missing or broken numba install falls back silently to numpy.

Both variants are always importable under explicit names
(``*_numpy`` / ``*_jit``) for benchmarking and cross-checking.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = "HFP_DISABLE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in {"1", "true", "yes", "on"}


def cycle_index_rows_numpy(X: np.ndarray) -> np.ndarray:
    """Z[:, 0..K] for every row of ``X`` (shape ``(R, K)``).

    Row ``r`` holds the arguments x_1..x_K; column ``k`` of the result is
    Z_k of that row, from ``k Z_k = sum_j x_j Z_{k-j}`` with Neumaier
    compensated accumulation of the j-terms.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    R, K = X.shape
    Z = np.empty((R, K + 1))
    Z[:, 0] = 1.0
    for k in range(1, K + 1):
        s = np.zeros(R)
        c = np.zeros(R)
        for j in range(1, k + 1):
            v = X[:, j - 1] * Z[:, k - j]
            t = s + v
            big = np.abs(s) >= np.abs(v)
            c += np.where(big, (s - t) + v, (v - t) + s)
            s = t
        Z[:, k] = (s + c) / k
    return Z


def horner_rows_numpy(C: np.ndarray, u: float) -> np.ndarray:
    """Evaluate ``sum_j C[:, j] * u**j`` for each row, highest power first."""
    C = np.ascontiguousarray(C, dtype=np.float64)
    R, J = C.shape
    acc = np.zeros(R)
    for j in range(J - 1, -1, -1):
        acc = acc * u + C[:, j]
    return acc


cycle_index_rows_jit = None
horner_rows_jit = None

try:  # pragma: no cover - exercised implicitly when numba is present
    from numba import njit

    @njit(cache=True)
    def cycle_index_rows_jit(X):  # noqa: F811
        R, K = X.shape
        Z = np.empty((R, K + 1))
        # one row at a time keeps X[r] and Z[r] in cache; per-row order of
        # operations matches the numpy version exactly
        for r in range(R):
            Z[r, 0] = 1.0
            for k in range(1, K + 1):
                s = 0.0
                c = 0.0
                for j in range(1, k + 1):
                    v = X[r, j - 1] * Z[r, k - j]
                    t = s + v
                    if abs(s) >= abs(v):
                        c += (s - t) + v
                    else:
                        c += (v - t) + s
                    s = t
                Z[r, k] = (s + c) / k
        return Z

    @njit(cache=True)
    def horner_rows_jit(C, u):  # noqa: F811
        R, J = C.shape
        out = np.zeros(R)
        for r in range(R):
            acc = 0.0
            for j in range(J - 1, -1, -1):
                acc = acc * u + C[r, j]
            out[r] = acc
        return out

    HAVE_NUMBA = True
except Exception:  # ImportError, or a numba that fails to initialise
    HAVE_NUMBA = False


USING_NUMBA = HAVE_NUMBA and _numba_requested()

if USING_NUMBA:

    def cycle_index_rows(X: np.ndarray) -> np.ndarray:
        return cycle_index_rows_jit(np.ascontiguousarray(X, dtype=np.float64))

    def horner_rows(C: np.ndarray, u: float) -> np.ndarray:
        return horner_rows_jit(np.ascontiguousarray(C, dtype=np.float64), float(u))

else:
    cycle_index_rows = cycle_index_rows_numpy
    horner_rows = horner_rows_numpy


def backend() -> str:
    return "numba" if USING_NUMBA else "numpy"

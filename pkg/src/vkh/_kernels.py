"""Optional numba-accelerated dense kernels.

The hot spot of the whole pipeline is Smith normal form of the dense
core left after sparse unit-pivot reduction.  The jitted kernel works in
int64 with an explicit magnitude guard; when entries threaten to leave
the safe range it bails out and the caller retries with the exact
big-integer implementation.  Setting ``VKH_NO_NUMBA=1`` (or a missing
numba) disables the fast path entirely.
"""

from __future__ import annotations

import os

import numpy as np

HAVE_NUMBA = False
if not os.environ.get("VKH_NO_NUMBA"):
    try:
        from numba import njit

        HAVE_NUMBA = True
    except Exception:  # pragma: no cover - numba genuinely missing
        HAVE_NUMBA = False

GUARD = np.int64(1) << 40


def _snf_int64_impl(A, U, V):  # pragma: no cover - jitted
    n, m = A.shape
    t = 0
    while t < n and t < m:
        # find a nonzero entry of minimal magnitude in A[t:, t:]
        piv_i, piv_j = -1, -1
        best = np.int64(0)
        for i in range(t, n):
            for j in range(t, m):
                v = A[i, j]
                if v != 0 and (piv_i < 0 or abs(v) < best):
                    piv_i, piv_j, best = i, j, abs(v)
        if piv_i < 0:
            break
        if piv_i != t:
            for j in range(m):
                A[t, j], A[piv_i, j] = A[piv_i, j], A[t, j]
            for j in range(n):
                U[t, j], U[piv_i, j] = U[piv_i, j], U[t, j]
        if piv_j != t:
            for i in range(n):
                A[i, t], A[i, piv_j] = A[i, piv_j], A[i, t]
            for i in range(m):
                V[i, t], V[i, piv_j] = V[i, piv_j], V[i, t]
        while True:
            # clear the pivot column
            dirty = False
            for i in range(t + 1, n):
                if A[i, t] != 0:
                    q = A[i, t] // A[t, t]
                    if q != 0:
                        for j in range(m):
                            A[i, j] -= q * A[t, j]
                            if abs(A[i, j]) > GUARD:
                                return -1
                        for j in range(n):
                            U[i, j] -= q * U[t, j]
                            if abs(U[i, j]) > GUARD:
                                return -1
                    if A[i, t] != 0:
                        # remainder became the smaller pivot candidate
                        for j in range(m):
                            A[t, j], A[i, j] = A[i, j], A[t, j]
                        for j in range(n):
                            U[t, j], U[i, j] = U[i, j], U[t, j]
                        dirty = True
            if dirty:
                continue
            # clear the pivot row
            dirty = False
            for j in range(t + 1, m):
                if A[t, j] != 0:
                    q = A[t, j] // A[t, t]
                    if q != 0:
                        for i in range(n):
                            A[i, j] -= q * A[i, t]
                            if abs(A[i, j]) > GUARD:
                                return -1
                        for i in range(m):
                            V[i, j] -= q * V[i, t]
                            if abs(V[i, j]) > GUARD:
                                return -1
                    if A[t, j] != 0:
                        for i in range(n):
                            A[i, t], A[i, j] = A[i, j], A[i, t]
                        for i in range(m):
                            V[i, t], V[i, j] = V[i, j], V[i, t]
                        dirty = True
            if not dirty:
                break
        # pivot must divide the rest of the submatrix
        rerun = False
        for i in range(t + 1, n):
            if rerun:
                break
            for j in range(t + 1, m):
                if A[i, j] % A[t, t] != 0:
                    for jj in range(m):
                        A[t, jj] += A[i, jj]
                        if abs(A[t, jj]) > GUARD:
                            return -1
                    for jj in range(n):
                        U[t, jj] += U[i, jj]
                        if abs(U[t, jj]) > GUARD:
                            return -1
                    rerun = True
                    break
        if rerun:
            continue
        if A[t, t] < 0:
            for j in range(m):
                A[t, j] = -A[t, j]
            for j in range(n):
                U[t, j] = -U[t, j]
        t += 1
    return t


if HAVE_NUMBA:
    snf_int64 = njit(cache=True)(_snf_int64_impl)
else:
    snf_int64 = None

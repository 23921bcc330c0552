"""Exact integer linear algebra: Smith normal form and ranks.

Differentials of Khovanov-type complexes are very sparse with almost all
entries in ``{+-1, +-2}``.  The hybrid strategy here first peels off
unit pivots by exact sparse elimination (each contributes an invariant
factor 1), then runs a certified dense Smith normal form on the small
remaining core — jitted in int64 when numba is available, exact Python
integers otherwise or on overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels


class SNFError(Exception):
    pass


# ---------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """A minimal exact integer sparse matrix (dict-of-rows)."""

    def __init__(self, nrows: int, ncols: int):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}

    def add(self, i: int, j: int, v: int) -> None:
        if v == 0:
            return
        row = self.rows.setdefault(i, {})
        nv = row.get(j, 0) + v
        if nv:
            row[j] = nv
        else:
            del row[j]
            if not row:
                del self.rows[i]

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.rows.get(i, {}).get(j, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise SNFError("shape mismatch in sparse product")
        out = SparseMatrix(self.nrows, other.ncols)
        for i, row in self.rows.items():
            acc: dict[int, int] = {}
            for k, a in row.items():
                for j, b in other.rows.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + a * b
            for j, v in acc.items():
                if v:
                    out.rows.setdefault(i, {})[j] = v
        return out

    def is_zero(self) -> bool:
        return not self.rows

    def to_numpy(self) -> np.ndarray:
        A = np.zeros((self.nrows, self.ncols), dtype=object)
        for i, row in self.rows.items():
            for j, v in row.items():
                A[i, j] = v
        return A

    def copy(self) -> "SparseMatrix":
        out = SparseMatrix(self.nrows, self.ncols)
        out.rows = {i: dict(r) for i, r in self.rows.items()}
        return out

    @classmethod
    def from_dense(cls, A) -> "SparseMatrix":
        A = np.asarray(A, dtype=object)
        out = cls(A.shape[0], A.shape[1])
        for i in range(A.shape[0]):
            for j in range(A.shape[1]):
                if A[i, j]:
                    out.rows.setdefault(i, {})[j] = int(A[i, j])
        return out


# ---------------------------------------------------------------------------
# dense exact SNF


def _snf_object(A: np.ndarray):
    """Smith normal form over Python integers; mirrors the jitted kernel."""
    A = A.copy()
    n, m = A.shape
    U = np.eye(n, dtype=object)
    V = np.eye(m, dtype=object)
    t = 0
    while t < n and t < m:
        piv = None
        best = None
        for i in range(t, n):
            for j in range(t, m):
                v = A[i, j]
                if v != 0 and (best is None or abs(v) < best):
                    piv, best = (i, j), abs(v)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            A[[t, i0], :] = A[[i0, t], :]
            U[[t, i0], :] = U[[i0, t], :]
        if j0 != t:
            A[:, [t, j0]] = A[:, [j0, t]]
            V[:, [t, j0]] = V[:, [j0, t]]
        while True:
            dirty = False
            for i in range(t + 1, n):
                if A[i, t] != 0:
                    q = A[i, t] // A[t, t]
                    if q:
                        A[i, :] -= q * A[t, :]
                        U[i, :] -= q * U[t, :]
                    if A[i, t] != 0:
                        A[[t, i], :] = A[[i, t], :]
                        U[[t, i], :] = U[[i, t], :]
                        dirty = True
            if dirty:
                continue
            dirty = False
            for j in range(t + 1, m):
                if A[t, j] != 0:
                    q = A[t, j] // A[t, t]
                    if q:
                        A[:, j] -= q * A[:, t]
                        V[:, j] -= q * V[:, t]
                    if A[t, j] != 0:
                        A[:, [t, j]] = A[:, [j, t]]
                        V[:, [t, j]] = V[:, [j, t]]
                        dirty = True
            if not dirty:
                break
        rerun = False
        for i in range(t + 1, n):
            if rerun:
                break
            for j in range(t + 1, m):
                if A[i, j] % A[t, t] != 0:
                    A[t, :] += A[i, :]
                    U[t, :] += U[i, :]
                    rerun = True
                    break
        if rerun:
            continue
        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            U[t, :] = -U[t, :]
        t += 1
    return A, U, V


def _det_exact(M: np.ndarray) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    M = M.astype(object).copy()
    n = M.shape[0]
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k, k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i, k] != 0), None)
            if swap is None:
                return 0
            M[[k, swap], :] = M[[swap, k], :]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i, j] = (M[i, j] * M[k, k] - M[i, k] * M[k, j]) // prev
            M[i, k] = 0
        prev = M[k, k]
    return sign * int(M[n - 1, n - 1])


@dataclass
class SNFResult:
    """Certified Smith normal form ``U @ A @ V = D``."""

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    factors: list[int] = field(default_factory=list)
    used_kernel: bool = False

    def verify(self, A: np.ndarray) -> None:
        A = np.asarray(A, dtype=object)
        P = self.U @ A @ self.V
        if not np.array_equal(P, self.D):
            raise SNFError("U*A*V != D")
        du, dv = _det_exact(self.U), _det_exact(self.V)
        if abs(du) != 1 or abs(dv) != 1:
            raise SNFError(f"non-unimodular transforms: det {du}, {dv}")
        diag = [int(self.D[i, i]) for i in range(min(self.D.shape))]
        for i, j in zip(range(len(diag)), range(1, len(diag))):
            if diag[j] and (diag[i] == 0 or diag[j] % diag[i] != 0):
                raise SNFError(f"divisibility chain broken at {i}")
        off = self.D.copy()
        for i in range(min(off.shape)):
            off[i, i] = 0
        if np.any(off != 0):
            raise SNFError("D not diagonal")


def smith_normal_form(A, verify: bool = True) -> SNFResult:
    """Certified Smith normal form of an integer matrix.

    Tries the int64 jitted kernel first; falls back to exact Python
    integers when numba is unavailable or the magnitude guard trips.
    The certificate ``U @ A @ V = D`` with unimodular ``U``, ``V`` and a
    divisibility chain is re-verified in exact arithmetic on request
    (and by default).
    """
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise SNFError("need a matrix")
    used_kernel = False
    result = None
    if _kernels.snf_int64 is not None and A.size:
        mx = max((abs(int(v)) for v in A.flat), default=0)
        if mx < (1 << 30):
            A64 = A.astype(np.int64)
            U = np.eye(A.shape[0], dtype=np.int64)
            V = np.eye(A.shape[1], dtype=np.int64)
            rc = _kernels.snf_int64(A64, U, V)
            if rc >= 0:
                result = (A64.astype(object), U.astype(object),
                          V.astype(object))
                used_kernel = True
    if result is None:
        result = _snf_object(A)
    D, U, V = result
    factors = [int(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0]
    out = SNFResult(D, U, V, factors, used_kernel)
    if verify:
        out.verify(A)
    return out


# ---------------------------------------------------------------------------
# hybrid invariant factors for sparse matrices


def _unit_reduce(sp: SparseMatrix) -> tuple[int, SparseMatrix]:
    """Peel off unit pivots from a sparse matrix.

    Each pivot with value +-1 is removed by exact row elimination and
    deletion of its row and column; this is a unimodular reduction, so
    the invariant factors of the input are those of the remaining core
    plus one factor 1 per pivot.  Returns (number of unit pivots, core).
    """
    rows = {i: dict(r) for i, r in sp.rows.items()}
    col_rows: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    removed = 0
    while True:
        piv = None
        best = None
        for i, r in rows.items():
            ri = len(r)
            for j, v in r.items():
                if v in (1, -1):
                    cost = (ri - 1) * (len(col_rows[j]) - 1)
                    if best is None or cost < best:
                        piv, best = (i, j, v), cost
                        if cost == 0:
                            break
            if best == 0:
                break
        if piv is None:
            break
        pi, pj, pv = piv
        prow = rows.pop(pi)
        for j in prow:
            col_rows[j].discard(pi)
        for i in list(col_rows.get(pj, ())):
            r = rows[i]
            a = r.pop(pj)
            col_rows[pj].discard(i)
            f = a * pv  # pv is its own inverse
            for j, w in prow.items():
                if j == pj:
                    continue
                nv = r.get(j, 0) - f * w
                if nv:
                    if j not in r:
                        col_rows.setdefault(j, set()).add(i)
                    r[j] = nv
                else:
                    r.pop(j, None)
                    col_rows[j].discard(i)
            if not r:
                del rows[i]
        col_rows.pop(pj, None)
        removed += 1
    core = SparseMatrix(sp.nrows, sp.ncols)
    # compact the core onto fresh indices
    ri = {i: k for k, i in enumerate(sorted(rows))}
    cols = sorted({j for r in rows.values() for j in r})
    ci = {j: k for k, j in enumerate(cols)}
    core.nrows, core.ncols = len(ri), len(ci)
    for i, r in rows.items():
        core.rows[ri[i]] = {ci[j]: v for j, v in r.items()}
    return removed, core


def invariant_factors(sp: SparseMatrix, certify: bool = True) -> list[int]:
    """Invariant factors of a sparse integer matrix (hybrid algorithm)."""
    units, core = _unit_reduce(sp)
    if core.nnz() == 0:
        return [1] * units
    dense = core.to_numpy()
    res = smith_normal_form(dense, verify=certify)
    return [1] * units + res.factors


def rank_q(sp: SparseMatrix, certify: bool = True) -> int:
    """Rank over the rationals."""
    return len(invariant_factors(sp, certify=certify))


def rank_mod_p(sp: SparseMatrix, p: int, certify: bool = True) -> int:
    """Rank over the prime field F_p."""
    return sum(1 for f in invariant_factors(sp, certify=certify)
               if f % p != 0)

"""Dense exact linear algebra over GF(q).

Matrices are 2-D numpy arrays of canonical element indices; every routine
takes the owning ``FieldCtx`` explicitly.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .gf import FieldCtx


def as_matrix(M, ncols: int | None = None) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    if A.ndim == 1:
        if A.size == 0 and ncols is not None:
            return A.reshape(0, ncols)
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return A


def rref(ctx: FieldCtx, M, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with zero rows dropped, plus pivot columns.

    ``ncols`` limits pivot search to the leading columns (used for
    augmented systems).
    """
    A = as_matrix(M).copy()
    rows, cols = A.shape
    limit = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        piv = int(A[r, c])
        if piv != 1:
            A[r] = ctx.mul(A[r], int(ctx.inv(piv)))
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            factors = A[others, c]
            A[others] = ctx.sub(A[others], ctx.mul(factors[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    if ncols is None:
        return A[:r], pivots
    # keep rows that are nonzero anywhere (inconsistency rows live past ncols)
    keep = np.flatnonzero(A.any(axis=1))
    return A[keep], pivots


def rank(ctx: FieldCtx, M) -> int:
    A = as_matrix(M)
    if A.size == 0:
        return 0
    return len(rref(ctx, A)[1])


def nullspace(ctx: FieldCtx, M, ncols: int | None = None) -> np.ndarray:
    """Basis rows x with M x = 0, one per free column of rref(M)."""
    A = as_matrix(M, ncols)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref(ctx, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        N[i, f] = 1
        for r, pc in enumerate(pivots):
            N[i, pc] = ctx.neg(R[r, f])
    return N


def row_space_equal(ctx: FieldCtx, A, B) -> bool:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"column mismatch: {A.shape[1]} vs {B.shape[1]}")
    Ra = rref(ctx, A)[0] if A.size else A[:0]
    Rb = rref(ctx, B)[0] if B.size else B[:0]
    return Ra.shape == Rb.shape and bool(np.array_equal(Ra, Rb))


def row_space_contains(ctx: FieldCtx, A, B) -> bool:
    """True when every row of B lies in the row space of A."""
    A, B = as_matrix(A), as_matrix(B)
    if B.shape[0] == 0:
        return True
    if A.shape[0] == 0:
        return not B.any()
    return rank(ctx, np.vstack([A, B])) == rank(ctx, A)


def distinguishing_rows(ctx: FieldCtx, A, B) -> dict:
    """RREF rows of each side that the other side does not contain."""
    A, B = as_matrix(A), as_matrix(B)
    Ra = rref(ctx, A)[0] if A.size else A[:0]
    Rb = rref(ctx, B)[0] if B.size else B[:0]
    only_a = [row.tolist() for row in Ra if not row_space_contains(ctx, Rb, row)]
    only_b = [row.tolist() for row in Rb if not row_space_contains(ctx, Ra, row)]
    return {"only_left": only_a, "only_right": only_b}


@dataclass
class AffineSolution:
    """Result of solving A x = b.

    ``particular`` is None exactly when the system is infeasible; then
    ``certificate`` holds a row of rref([A | b]) reading (0 ... 0 | c), c != 0.
    """

    feasible: bool
    particular: np.ndarray | None
    kernel: np.ndarray
    certificate: list[int] | None = None


def solve_affine(ctx: FieldCtx, A, b) -> AffineSolution:
    A = as_matrix(A)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    rows, cols = A.shape
    if b.shape[0] != rows:
        raise ValueError(f"shape mismatch: A is {A.shape}, b has {b.shape[0]} entries")
    if rows == 0:
        return AffineSolution(True, np.zeros(cols, dtype=np.int64), np.eye(cols, dtype=np.int64))
    R, pivots = rref(ctx, np.hstack([A, b[:, None]]), ncols=cols)
    # pivot rows of the augmented rref are the rref of A on the first cols
    free = [c for c in range(cols) if c not in set(pivots)]
    kernel = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        kernel[i, f] = 1
        for r, pc in enumerate(pivots):
            kernel[i, pc] = ctx.neg(R[r, f])
    for row in R:
        if not row[:cols].any() and row[cols] != 0:
            return AffineSolution(False, None, kernel, row.tolist())
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = R[r, cols]
    return AffineSolution(True, x, kernel)


def gram(ctx: FieldCtx, G) -> np.ndarray:
    G = as_matrix(G)
    return ctx.matmul(G, G.T)


def batched_full_rank(ctx: FieldCtx, blocks: np.ndarray) -> np.ndarray:
    """For a stack of r x c matrices (r <= c), whether each has rank r."""
    A = np.array(blocks, dtype=np.int64, copy=True)
    S, r, c = A.shape
    ok = np.ones(S, dtype=bool)
    idx = np.arange(S)
    # Row i is eliminated against the pivots of rows < i; it vanishes iff
    # it lies in their span.
    for i in range(r):
        row = A[:, i, :]
        ok &= row.any(axis=1)
        pc = np.argmax(row != 0, axis=1)
        piv = row[idx, pc]
        piv = np.where(piv == 0, 1, piv)
        scaled = ctx.mul(row, ctx.inv(piv)[:, None])
        if i + 1 < r:
            below = A[:, i + 1 :, :]
            f = below[idx, :, pc]
            A[:, i + 1 :, :] = ctx.sub(below, ctx.mul(f[:, :, None], scaled[:, None, :]))
    return ok


def matrix_hash(M) -> str:
    A = np.ascontiguousarray(as_matrix(M), dtype=np.int64)
    h = hashlib.sha256()
    h.update(str(A.shape).encode())
    h.update(A.tobytes())
    return h.hexdigest()[:16]

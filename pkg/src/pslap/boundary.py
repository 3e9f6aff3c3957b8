"""Boundary matrices, snapshot restrictions, and persistent boundary operators.

All bases are filtration-sorted, so a snapshot restriction is a top-left
block read of the full matrix, and the simplices added between two snapshots
occupy a contiguous tail block.  The persistent boundary for a snapshot pair
is the restriction of the later boundary matrix to the kernel of the Diff
operator, applied through the orthogonal projector onto that kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import LinearSolveFailure, SnapshotOrderViolation
from .simplices import FilteredComplex, Snapshot

# columns above this count switch the default projector construction from the
# dense nullspace route to the gauge-fixed linear-solve route
NULLSPACE_COLUMN_CUTOFF = 2000


@dataclass
class SparseBoundaryMatrix:
    """Signed incidence matrix between (q-1)- and q-simplices."""

    q: int
    matrix: sp.csc_array  # shape (N_{q-1}, N_q); (1, N_0) zero matrix for q=0

    @property
    def shape(self):
        return self.matrix.shape


@dataclass
class PersistentBoundary:
    """Matrix of the p-persistent boundary operator in the C_q^{alpha+p} basis.

    Rows are the (q-1)-simplices of the earlier snapshot; columns are all
    q-simplices of the later snapshot, with the orthogonal projection onto
    the persistent chain subspace already applied.
    """

    q: int
    alpha: float
    p: float
    matrix: np.ndarray


def full_boundary(complex: FilteredComplex, q: int) -> SparseBoundaryMatrix:
    """Boundary matrix of the entire filtration for dimension q."""
    if q == 0:
        return SparseBoundaryMatrix(0, sp.csc_array((1, complex.n_simplices(0)), dtype=np.int64))
    n_rows = complex.n_simplices(q - 1)
    cols = complex.simplices(q)
    data, rows_idx, cols_idx = [], [], []
    for j, s in enumerate(cols):
        sign = 1
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            rows_idx.append(complex.index_of(face))
            cols_idx.append(j)
            data.append(sign)
            sign = -sign
    m = sp.csc_array(
        (np.array(data, dtype=np.int64), (rows_idx, cols_idx)),
        shape=(n_rows, len(cols)),
    )
    return SparseBoundaryMatrix(q, m)


def _row_count(q: int, snap: Snapshot) -> int:
    return 1 if q == 0 else snap.count(q - 1)


def restrict(full: SparseBoundaryMatrix, snap: Snapshot) -> SparseBoundaryMatrix:
    """Top-left block of the full boundary matrix at a snapshot."""
    r = _row_count(full.q, snap)
    c = snap.count(full.q)
    return SparseBoundaryMatrix(full.q, full.matrix[:r, :][:, :c].tocsc())


def _check_order(snap_t: Snapshot, snap_tp: Snapshot) -> None:
    if snap_t.alpha_sq > snap_tp.alpha_sq or any(
        a > b for a, b in zip(snap_t.counts, snap_tp.counts)
    ):
        raise SnapshotOrderViolation(
            f"snapshots out of order: {snap_t.counts} vs {snap_tp.counts}"
        )


def diff_operator(full: SparseBoundaryMatrix, snap_t: Snapshot, snap_tp: Snapshot) -> sp.csc_array:
    """Rows of B_q at the later snapshot for (q-1)-simplices absent from the
    earlier one, other rows zeroed; its kernel is the persistent chain space."""
    _check_order(snap_t, snap_tp)
    b = restrict(full, snap_tp).matrix
    r_t = _row_count(full.q, snap_t)
    zeros = sp.csc_array((r_t, b.shape[1]), dtype=np.int64)
    if b.shape[0] <= r_t:
        return sp.csc_array(b.shape, dtype=np.int64)
    return sp.vstack([zeros, b[r_t:, :]]).tocsc()


def _kernel_projector_harmonic(d_tail: np.ndarray, down_tail: np.ndarray | None) -> np.ndarray:
    """I - Diff^T (L~)^{-1} Diff on the tail block, with the rank deficiency of
    the difference-complex Laplacian fixed by completing its kernel."""
    n = d_tail.shape[1]
    if d_tail.shape[0] == 0 or not d_tail.any():
        return np.eye(n)
    lap = d_tail @ d_tail.T
    if down_tail is not None and down_tail.size:
        lap = lap + down_tail.T @ down_tail
    kernel = scipy.linalg.null_space(lap)
    if kernel.size:
        lap = lap + kernel @ kernel.T
    try:
        f = scipy.linalg.solve(lap, d_tail, assume_a="pos")
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise LinearSolveFailure(str(exc)) from exc
    return np.eye(n) - d_tail.T @ f


def persistent_boundary(
    full: SparseBoundaryMatrix,
    snap_t: Snapshot,
    snap_tp: Snapshot,
    method: str = "auto",
    full_down: SparseBoundaryMatrix | None = None,
) -> PersistentBoundary:
    """Persistent boundary matrix for the snapshot pair.

    method: 'nullspace' projects through an orthonormal kernel basis of the
    Diff operator; 'harmonic-extension' applies the gauge-fixed inverse of
    the difference-complex Laplacian; 'auto' picks by column count.  Both
    yield the same operator up to roundoff.
    """
    _check_order(snap_t, snap_tp)
    q = full.q
    alpha = math.sqrt(snap_t.alpha_sq) if not math.isinf(snap_t.alpha_sq) else math.inf
    alpha_p = math.sqrt(snap_tp.alpha_sq) if not math.isinf(snap_tp.alpha_sq) else math.inf
    p = max(alpha_p - alpha, 0.0)

    b_p = restrict(full, snap_tp).matrix
    r_t = _row_count(q, snap_t)
    c_t = snap_t.count(q)
    c_p = snap_tp.count(q)
    b_top = b_p[:r_t, :].toarray().astype(float)
    if c_p == c_t:
        # no new q-simplices: the projector is the identity and the result is
        # exactly the earlier restriction
        return PersistentBoundary(q, alpha, p, b_top)

    if method == "auto":
        method = "nullspace" if c_p <= NULLSPACE_COLUMN_CUTOFF else "harmonic-extension"
    d_tail = b_p[r_t:, c_t:].toarray().astype(float)
    if d_tail.shape[0] == 0 or not d_tail.any():
        return PersistentBoundary(q, alpha, p, b_top)
    if method == "nullspace":
        kernel = scipy.linalg.null_space(d_tail)
        proj_tail = kernel @ kernel.T
    elif method == "harmonic-extension":
        down_tail = None
        if full_down is not None:
            down = restrict(full_down, snap_tp).matrix
            r_down = _row_count(full_down.q, snap_t)
            down_tail = down[r_down:, r_t:].toarray().astype(float)
        proj_tail = _kernel_projector_harmonic(d_tail, down_tail)
    else:
        raise ValueError(f"unknown method {method!r}")

    out = b_top.copy()
    out[:, c_t:] = b_top[:, c_t:] @ proj_tail
    return PersistentBoundary(q, alpha, p, out)

"""Persistent Laplacian assembly, spectra, sweeps, and per-vertex diagnostics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg

from .boundary import (
    PersistentBoundary,
    SparseBoundaryMatrix,
    full_boundary,
    persistent_boundary,
    restrict,
)
from .errors import DimensionMismatch, EigensolveFailure, PslapError
from .simplices import REL_TOL, FilteredComplex, snapshot


@dataclass(frozen=True)
class SolverPolicy:
    """Eigensolver and zero-threshold configuration."""

    dense_cutoff: int = 2000
    zero_abs: float = 1e-8
    zero_rel: float = 1e-10
    gap_factor: float = 1e3
    extra_k: int = 16

    def zero_threshold(self, lambda_max: float) -> float:
        return max(self.zero_abs, self.zero_rel * lambda_max)


DEFAULT_POLICY = SolverPolicy()


@dataclass
class PersistentLaplacian:
    """Symmetric PSD matrix of the q-th persistent Laplacian plus provenance."""

    matrix: np.ndarray
    q: int
    alpha: float
    p: float
    n_up: int  # number of (q+1)-simplices at alpha + p feeding the up-term

    @property
    def n_simplices(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectrumRecord:
    """Eigenvalues, Betti number, and smallest nonzero eigenvalue at (q, alpha, p)."""

    q: int
    alpha: float
    p: float
    eigenvalues: tuple[float, ...]
    betti: int
    lambda_min_nonzero: float | None
    n_simplices: int
    flags: tuple[str, ...] = field(default=())


def assemble_laplacian(bq: SparseBoundaryMatrix, bq1p: PersistentBoundary) -> PersistentLaplacian:
    """L_q = B_{q+1}^{a,p} (B_{q+1}^{a,p})^T + (B_q^a)^T B_q^a."""
    n = bq.shape[1]
    if bq1p.matrix.shape[0] != n:
        raise DimensionMismatch(
            f"up-term rows {bq1p.matrix.shape[0]} != down-term columns {n}"
        )
    up = bq1p.matrix @ bq1p.matrix.T
    down = (bq.matrix.T @ bq.matrix).toarray().astype(float)
    lap = up + down
    lap = 0.5 * (lap + lap.T)
    return PersistentLaplacian(matrix=lap, q=bq.q, alpha=bq1p.alpha, p=bq1p.p, n_up=bq1p.matrix.shape[1])


def _dense_spectrum(lap: PersistentLaplacian, policy: SolverPolicy) -> SpectrumRecord:
    try:
        eigs = np.linalg.eigvalsh(lap.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolveFailure(str(exc)) from exc
    return _record_from_eigs(lap, np.sort(eigs), policy, partial=False)


def _record_from_eigs(lap, eigs, policy, partial, lambda_max=None) -> SpectrumRecord:
    n = lap.n_simplices
    if lambda_max is None:
        lambda_max = float(eigs[-1]) if len(eigs) else 0.0
    tau = policy.zero_threshold(max(lambda_max, 0.0))
    betti = int(np.sum(eigs < tau))
    nonzero = eigs[eigs >= tau]
    lam_min = float(nonzero[0]) if len(nonzero) else None
    flags = []
    if betti > 0 and lam_min is not None:
        largest_zero = float(eigs[betti - 1])
        if largest_zero > 0 and lam_min / largest_zero < policy.gap_factor:
            flags.append("gap_ambiguous")
    if partial:
        flags.append("partial_spectrum")
    return SpectrumRecord(
        q=lap.q,
        alpha=lap.alpha,
        p=lap.p,
        eigenvalues=tuple(float(x) for x in eigs),
        betti=betti,
        lambda_min_nonzero=lam_min,
        n_simplices=n,
        flags=tuple(flags),
    )


def _iterative_spectrum(lap: PersistentLaplacian, policy: SolverPolicy, k_hint=None) -> SpectrumRecord:
    """Shift-invert Lanczos for the lowest eigenvalues of a large Laplacian."""
    n = lap.n_simplices
    mat = sp.csc_array(lap.matrix)
    try:
        lambda_max = float(
            scipy.sparse.linalg.eigsh(mat, k=1, which="LA", return_eigenvectors=False)[0]
        )
    except scipy.sparse.linalg.ArpackError as exc:
        raise EigensolveFailure(str(exc)) from exc
    tau = policy.zero_threshold(max(lambda_max, 0.0))
    k = min(n - 1, max(policy.extra_k, (k_hint or 0) + policy.extra_k))
    while True:
        try:
            eigs = scipy.sparse.linalg.eigsh(
                mat, k=k, sigma=-1.0, which="LM", return_eigenvectors=False
            )
        except scipy.sparse.linalg.ArpackError as exc:
            raise EigensolveFailure(str(exc)) from exc
        eigs = np.sort(eigs)
        if np.any(eigs >= tau) or k >= n - 1:
            break
        k = min(n - 1, 2 * k)
    return _record_from_eigs(lap, eigs, policy, partial=len(eigs) < n, lambda_max=lambda_max)


def spectrum(lap: PersistentLaplacian, policy: SolverPolicy = DEFAULT_POLICY, k_hint=None) -> SpectrumRecord:
    """Eigenvalues of the persistent Laplacian with zero/nonzero separation.

    Matrices up to the policy's dense cutoff get a full symmetric
    eigendecomposition; larger ones get the lowest eigenvalues by
    shift-invert iteration (record flagged partial_spectrum).
    """
    n = lap.n_simplices
    if n == 0:
        return SpectrumRecord(lap.q, lap.alpha, lap.p, (), 0, None, 0)
    if n <= policy.dense_cutoff:
        return _dense_spectrum(lap, policy)
    return _iterative_spectrum(lap, policy, k_hint)


def persistent_laplacian(
    complex: FilteredComplex,
    q: int,
    alpha: float,
    p: float = 0.0,
    method: str = "auto",
    _cache: dict | None = None,
) -> PersistentLaplacian:
    """Assemble L_q^{alpha,p} from the complex."""
    snap_t = snapshot(complex, alpha)
    snap_tp = snapshot(complex, alpha + p)
    cache = _cache if _cache is not None else {}

    def full(dim):
        key = ("full", dim)
        if key not in cache:
            cache[key] = full_boundary(complex, dim)
        return cache[key]

    bq = restrict(full(q), snap_t)
    bq1p = persistent_boundary(full(q + 1), snap_t, snap_tp, method=method, full_down=full(q))
    lap = assemble_laplacian(bq, bq1p)
    return PersistentLaplacian(lap.matrix, q, alpha, p, lap.n_up)


def spectrum_at(
    complex: FilteredComplex,
    q: int,
    alpha: float,
    p: float = 0.0,
    method: str = "auto",
    policy: SolverPolicy = DEFAULT_POLICY,
) -> SpectrumRecord:
    return spectrum(persistent_laplacian(complex, q, alpha, p, method=method), policy)


def sweep(
    complex: FilteredComplex,
    q_list,
    alphas,
    p: float = 0.0,
    method: str = "auto",
    policy: SolverPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> list[SpectrumRecord]:
    """One SpectrumRecord per (q, alpha), sorted by (q, alpha).

    Snapshots with identical simplex counts at alpha and alpha + p produce
    identical Laplacians, so their records are computed once and re-labelled.
    Failed records are flagged and the sweep continues.
    """
    alphas = sorted(float(a) for a in alphas)
    q_list = sorted(set(int(q) for q in q_list))
    full_cache: dict = {}
    jobs = [(q, a) for q in q_list for a in alphas]
    results: list = [None] * len(jobs)
    sig_cache: dict = {}

    def signature(q, a):
        s_t = snapshot(complex, a)
        s_p = snapshot(complex, a + p)
        return (q, s_t.counts, s_p.counts)

    def run(idx):
        q, a = jobs[idx]
        sig = signature(q, a)
        hit = sig_cache.get(sig)
        if hit is not None:
            rec = hit
            results[idx] = SpectrumRecord(
                q, a, p, rec.eigenvalues, rec.betti, rec.lambda_min_nonzero,
                rec.n_simplices, rec.flags,
            )
            return
        try:
            lap = persistent_laplacian(complex, q, a, p, method=method, _cache=full_cache)
            rec = spectrum(lap, policy)
        except PslapError as exc:
            results[idx] = SpectrumRecord(
                q, a, p, (), 0, None, snapshot(complex, a).count(q),
                flags=("failed:" + type(exc).__name__,),
            )
            return
        sig_cache[sig] = rec
        results[idx] = SpectrumRecord(
            q, a, p, rec.eigenvalues, rec.betti, rec.lambda_min_nonzero,
            rec.n_simplices, rec.flags,
        )

    if threads > 1:
        # thread-safe: caches only ever grow and recomputation is harmless
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(len(jobs))))
    else:
        for i in range(len(jobs)):
            run(i)
    return results


def accumulated_laplacian_diagonal(complex: FilteredComplex, alphas) -> np.ndarray:
    """Normalized diagonal of the alpha-accumulated vertex Laplacian.

    The diagonal of L_0 at one alpha is the vertex degree in the edge set
    present there; the sum over the grid reduces to counting, per edge, the
    grid values at or past its filtration value.  An all-zero accumulation
    normalizes to all ones.
    """
    alphas_sq = np.sort(np.asarray([float(a) ** 2 for a in alphas]))
    n = complex.n_simplices(0)
    acc = np.zeros(n)
    edge_vals = complex.filtration_values_sq(1)
    for (u, v), val in zip(complex.simplices(1), edge_vals):
        hits = len(alphas_sq) - int(
            np.searchsorted(alphas_sq, val / (1.0 + REL_TOL) - 1e-300, side="left")
        )
        acc[u] += hits
        acc[v] += hits
    top = acc.max()
    if top == 0:
        return np.ones(n)
    return acc / top


def detect_anomalies(complex: FilteredComplex, points, onset_threshold: float):
    """Vertex pairs joined by an edge forming at less than half the threshold.

    A Gabriel edge enters the filtration at half the pair distance, so
    2 * alpha_edge < threshold flags abnormally close pairs; reported with
    their Euclidean distance, closest first.
    """
    coords = points.coords if hasattr(points, "coords") else np.asarray(points, float)
    out = []
    for (u, v), val in zip(complex.simplices(1), complex.filtration_values_sq(1)):
        if 2.0 * math.sqrt(val) < onset_threshold:
            dist = float(np.linalg.norm(coords[u] - coords[v]))
            out.append(((u, v), dist))
    out.sort(key=lambda t: (t[1], t[0]))
    return out

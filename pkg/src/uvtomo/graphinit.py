"""Shift-aware graph-Laplacian initialization of projection angles.

Pipeline: align-then-compare similarity matrix -> random-walk-normalized
Laplacian eigenmap to 2D -> circular sort -> order-statistics angle
assignment on the uniform 2*pi/N grid. Shifts are initialized to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, GraphConnectivityError
from .geometry import TWO_PI, GeometryEstimate, check_sinogram, shift_projection

# relative d^2 scale below which projections count as identical
_IDENTICAL_REL = 1e-18


def _priority_shifts(k_max: int) -> list[int]:
    # tie-break order: smallest |k| first, negative before positive
    ks = [0]
    for m in range(1, k_max + 1):
        ks.extend((-m, m))
    return ks


def best_alignment_shift(a: np.ndarray, b: np.ndarray, k_max: int) -> int:
    """Integer shift k in [-k_max, k_max] maximizing dot(a, shift_k(b)).

    Ties break toward smallest |k|, then toward negative k.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("projections must be 1D arrays of equal length")
    k_max = int(k_max)
    if k_max < 0 or k_max > a.shape[0] // 2:
        raise ValueError(f"k_max must be in [0, S/2], got {k_max}")
    best_k = 0
    best_score = -np.inf
    for k in _priority_shifts(k_max):
        score = float(a @ shift_projection(b, k))
        if score > best_score:
            best_score = score
            best_k = k
    return best_k


def _shifted_rows(rows: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(rows)
    n = rows.shape[1]
    if k >= 0:
        out[:, k:] = rows[:, : n - k]
    else:
        out[:, :k] = rows[:, -k:]
    return out


def _shifted_row_normsq(rows: np.ndarray, ks: list[int]) -> np.ndarray:
    """norm^2 of each zero-fill-shifted row, accounting for clipped mass."""
    csum = np.concatenate(
        [np.zeros((rows.shape[0], 1)), np.cumsum(rows**2, axis=1)], axis=1
    )
    n = rows.shape[1]
    out = np.empty((rows.shape[0], len(ks)))
    for col, k in enumerate(ks):
        if k >= 0:
            out[:, col] = csum[:, n - k]
        else:
            out[:, col] = csum[:, n] - csum[:, -k]
    return out


@dataclass(frozen=True)
class SimilarityMatrix:
    """Shift-aware Gaussian affinity matrix with its alignment metadata."""

    w: np.ndarray              # (N, N), symmetric, entries in (0, 1]
    kappa: float               # kernel bandwidth actually used
    aligned_shift: np.ndarray  # (N, N) int, maximizing k0 per ordered pair


# quantiles of the pairwise aligned squared distances used by the "local"
# bandwidth rule: the low quantile tracks angular near-neighbors, the floor
# quantile estimates the additive noise pedestal shared by all pairs
LOCAL_KAPPA_QUANTILE = 0.01
LOCAL_FLOOR_QUANTILE = 0.001


def _aligned_distances(rows: np.ndarray, k_max: int):
    """Best-alignment shifts and squared distances for all ordered pairs."""
    n, size = rows.shape
    ks = _priority_shifts(k_max)
    best_score = np.full((n, n), -np.inf)
    best_k_col = np.zeros((n, n), dtype=np.int64)
    for col, k in enumerate(ks):
        scores = rows @ _shifted_rows(rows, k).T
        better = scores > best_score
        best_score[better] = scores[better]
        best_k_col[better] = col
    ks_arr = np.asarray(ks, dtype=np.int64)
    aligned = ks_arr[best_k_col]

    normsq = np.sum(rows**2, axis=1)
    shifted_normsq = _shifted_row_normsq(rows, ks)
    d2 = normsq[:, None] + shifted_normsq.T[best_k_col, np.arange(n)[None, :]] \
        - 2.0 * best_score
    np.maximum(d2, 0.0, out=d2)

    scale = float(np.mean(normsq))
    offdiag = ~np.eye(n, dtype=bool)
    if scale <= 0.0 or float(d2[offdiag].max()) <= _IDENTICAL_REL * scale:
        raise DegeneracyError(
            "all projections are identical up to shifts; the object appears "
            "rotationally symmetric and the embedding is undefined"
        )
    return d2, aligned


def _resolve_kappa(d2: np.ndarray, kappa) -> tuple[float, float]:
    """Bandwidth and additive distance offset for a kappa mode.

    The offset is nonzero only in "local" mode: it estimates the common
    noise pedestal of the squared distances. Shifting all d^2 by a constant
    multiplies W globally, which cancels in the normalized Laplacian, but
    keeps the kernel numerically well conditioned under noise.
    """
    n = d2.shape[0]
    upper = d2[np.triu_indices(n, k=1)]
    if kappa == "median":
        med = float(np.median(upper))
        if med <= 0.0:
            med = float(upper.mean())
        return 1.0 / med, 0.0
    if kappa == "local":
        floor = float(np.quantile(upper, LOCAL_FLOOR_QUANTILE))
        scale = float(np.quantile(upper, LOCAL_KAPPA_QUANTILE)) - floor
        if scale <= 0.0:
            positive = upper[upper > floor]
            scale = float((positive - floor).min()) if positive.size \
                else max(floor, 1.0)
        return 1.0 / scale, floor
    kappa = float(kappa)
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    return kappa, 0.0


def build_similarity(sino: np.ndarray, k_max: int,
                     kappa: float | str | None = None) -> SimilarityMatrix:
    """Build the shift-aware similarity matrix of a sinogram.

    W_ij = exp(-kappa * ||y_i - shift_{k0(i,j)}(y_j)||^2) where k0 maximizes
    the dot product of y_i with the shifted y_j over [-k_max, k_max]. The
    matrix is symmetrized elementwise by max.

    Bandwidth modes: kappa=None or "median" is the all-pairs median
    heuristic 1 / median({d_ij^2 : i < j}); "local" uses the low quantile
    of the same distances (the near-neighbor scale, much sharper and the
    default for geometry initialization); a positive float fixes it.

    Raises DegeneracyError when all projections are effectively identical
    (e.g. a centrally symmetric object), since the embedding is undefined.
    """
    rows = check_sinogram(sino)
    n, size = rows.shape
    if n < 3:
        raise ValueError(f"need at least 3 projections, got {n}")
    k_max = int(k_max)
    if k_max < 0 or k_max > size // 2:
        raise ValueError(f"k_max must be in [0, S/2], got {k_max}")

    d2, aligned = _aligned_distances(rows, k_max)
    kappa_val, offset = _resolve_kappa(d2, "median" if kappa is None else kappa)

    w = np.exp(-kappa_val * np.maximum(d2 - offset, 0.0))
    w = np.maximum(w, w.T)
    np.fill_diagonal(w, 1.0)
    np.fill_diagonal(aligned, 0)
    return SimilarityMatrix(w=w, kappa=kappa_val, aligned_shift=aligned)


def _connected(w: np.ndarray) -> bool:
    n = w.shape[0]
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        i = stack.pop()
        nbrs = np.nonzero(w[i] > 0.0)[0]
        new = nbrs[~seen[nbrs]]
        seen[new] = True
        stack.extend(new.tolist())
    return bool(seen.all())


@dataclass(frozen=True)
class Embedding2D:
    """2D Laplacian-eigenmap coordinates and their eigenvalues."""

    psi: np.ndarray          # (N, 2)
    eigenvalues: np.ndarray  # the two smallest nonzero Laplacian eigenvalues
    pair_warning: bool = field(default=False)


def laplacian_embed(wm: SimilarityMatrix) -> Embedding2D:
    """Embed via the random-walk-normalized Laplacian L = I - D^-1 W.

    Returns the eigenvectors for the two smallest nonzero eigenvalues,
    skipping the constant one. Column signs are canonicalized so the first
    nonzero coordinate of each column is positive. A warning flag is set
    when the next eigenvalue is nearly degenerate with the selected pair.
    """
    w = np.asarray(wm.w, dtype=np.float64)
    n = w.shape[0]
    if w.ndim != 2 or w.shape[1] != n:
        raise ValueError("similarity matrix must be square")
    if not _connected(w):
        raise GraphConnectivityError("similarity graph is disconnected")
    deg = w.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(deg)
    l_sym = -(w * inv_sqrt[:, None]) * inv_sqrt[None, :]
    np.fill_diagonal(l_sym, l_sym.diagonal() + 1.0)
    l_sym = 0.5 * (l_sym + l_sym.T)
    k_need = min(4, n)
    vals, vecs = np.linalg.eigh(l_sym)
    vals, vecs = vals[:k_need], vecs[:, :k_need]

    pair_warning = False
    if n >= 4:
        gap = vals[3] - vals[2]
        span = max(abs(vals[3]), 1e-300)
        pair_warning = gap <= 1e-6 * span

    # random-walk eigenvectors from the symmetric ones
    psi = vecs[:, 1:3] * inv_sqrt[:, None]
    for col in range(2):
        v = psi[:, col]
        nz = np.nonzero(np.abs(v) > 1e-12 * np.abs(v).max())[0]
        if nz.size and v[nz[0]] < 0:
            psi[:, col] = -v
    return Embedding2D(psi=psi, eigenvalues=vals[1:3].copy(),
                       pair_warning=pair_warning)


def circular_sort(emb: Embedding2D) -> np.ndarray:
    """Indices sorted by atan2(psi_1, psi_2) ascending.

    The starting point and orientation of the returned cycle are arbitrary
    (global rotation/reflection ambiguity of the problem).
    """
    psi = emb.psi
    norms = np.hypot(psi[:, 0], psi[:, 1])
    if np.any(norms <= 1e-15 * max(norms.max(), 1e-300)):
        raise DegeneracyError("embedding point at the origin; cannot sort")
    ang = np.arctan2(psi[:, 0], psi[:, 1])
    return np.argsort(ang, kind="stable")


def assign_angles(order: np.ndarray, n: int) -> np.ndarray:
    """Assign the uniform order-statistics grid 2*pi*i/N along a cyclic order.

    The projection ranked i (0-based) in the circular order receives angle
    2*pi*i/N.
    """
    order = np.asarray(order)
    if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
        raise ValueError("order must be a permutation of 0..N-1")
    angles = np.empty(n, dtype=np.float64)
    angles[order] = TWO_PI * np.arange(n) / n
    return angles


def init_geometry(sino: np.ndarray, k_max: int,
                  kappa: float | str | None = None) -> GeometryEstimate:
    """Shift-aware Laplacian initialization: angles on the 2*pi/N grid, zero shifts.

    The kernel bandwidth defaults to the "local" near-neighbor scale, which
    keeps the similarity graph sharp enough to resolve angular order. With
    k_max=0 this reduces to the standard no-shift Laplacian-eigenmaps
    initialization.
    """
    sino = check_sinogram(sino)
    wm = build_similarity(sino, k_max, kappa="local" if kappa is None else kappa)
    emb = laplacian_embed(wm)
    order = circular_sort(emb)
    angles = assign_angles(order, sino.shape[0])
    return GeometryEstimate(angles=angles, shifts=np.zeros(sino.shape[0], dtype=np.int64))

"""Three-way alternating minimization over shifts, image, and angles.

Each iteration runs exactly one shift update, one FBP reconstruction, and
one local angle grid search, in that order, and stops when the image change
drops below the tolerance or the iteration budget is exhausted.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import evaluate
from .geometry import (
    GeometryEstimate,
    check_image,
    check_sinogram,
    fbp,
    project_many,
    shift_rows,
    wrap_angles,
)
from .simulate import GroundTruth


@dataclass(frozen=True)
class AltMinConfig:
    """Iteration parameters.

    epsilon=None selects the relative default 1e-3 * ||f_hat^(1)||_2, fixed
    after the first iteration's reconstruction. k_max=None selects S // 8.
    """

    t_max: int = 30
    delta: float = math.radians(0.5)
    n_trials: int = 11
    epsilon: float | None = None
    k_max: int | None = None

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")
        if self.n_trials < 3 or self.n_trials % 2 == 0:
            raise ValueError(f"n_trials must be odd and >= 3, got {self.n_trials}")
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.k_max is not None and self.k_max < 0:
            raise ValueError(f"k_max must be >= 0, got {self.k_max}")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    image_hash: str
    image_delta: float
    angle_edge_hits: int
    steps: tuple[str, ...]
    rrmse: float | None = None
    ssim: float | None = None
    cc: float | None = None
    mean_angle_err_deg: float | None = None
    mean_shift_err: float | None = None


@dataclass
class IterationTrace:
    """Per-iteration convergence log of a run."""

    records: list[IterationRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def _image_hash(pixels: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(pixels).tobytes()).hexdigest()


def estimate_shifts(sino: np.ndarray, image: np.ndarray, angles: np.ndarray,
                    k_max: int) -> np.ndarray:
    """Per projection, the integer shift maximizing y_i . shift_k(proj_i).

    proj_i is the re-projection of the current image estimate at the current
    angle estimate. Ties break toward smallest |k|, then negative k.
    """
    sino = check_sinogram(sino)
    image = check_image(image)
    angles = np.asarray(angles, dtype=np.float64)
    k_max = int(k_max)
    if k_max < 0 or k_max > sino.shape[1] // 2:
        raise ValueError(f"k_max must be in [0, S/2], got {k_max}")
    reproj = project_many(image, angles)
    n, size = sino.shape
    best_score = np.full(n, -np.inf)
    best_k = np.zeros(n, dtype=np.int64)
    ks = [0]
    for m in range(1, k_max + 1):
        ks.extend((-m, m))
    shifted = np.empty_like(reproj)
    for k in ks:
        shifted[:] = 0.0
        if k >= 0:
            shifted[:, k:] = reproj[:, : size - k]
        else:
            shifted[:, :k] = reproj[:, -k:]
        scores = np.einsum("ij,ij->i", sino, shifted)
        better = scores > best_score
        best_score[better] = scores[better]
        best_k[better] = k
    return best_k


def reconstruct_step(sino: np.ndarray, shifts: np.ndarray,
                     angles: np.ndarray) -> np.ndarray:
    """Unshift every row by its estimated shift, then FBP at the angles."""
    sino = check_sinogram(sino)
    shifts = np.asarray(shifts)
    unshifted = shift_rows(sino, -shifts.astype(np.int64))
    return fbp(unshifted, angles)


def candidate_losses(sino: np.ndarray, image: np.ndarray, angles: np.ndarray,
                     shifts: np.ndarray, delta: float, n_trials: int):
    """Angle-candidate grids and their data-fit losses.

    Returns (candidates, losses), both (N, n): candidate j of projection i
    is angles[i] + delta*(j - n//2), and its loss is
    ||y_i - shift_{+alpha_i}(proj(image, candidate))||^2.
    """
    sino = check_sinogram(sino)
    image = check_image(image)
    angles = np.asarray(angles, dtype=np.float64)
    shifts = np.asarray(shifts, dtype=np.int64)
    if n_trials < 1 or n_trials % 2 == 0:
        raise ValueError(f"n_trials must be odd and >= 1, got {n_trials}")
    n, size = sino.shape
    half = n_trials // 2
    offsets = delta * (np.arange(n_trials) - half)
    cands = angles[:, None] + offsets[None, :]
    reproj = project_many(image, cands.ravel()).reshape(n, n_trials, size)
    shifted = np.zeros_like(reproj)
    for i in range(n):
        k = int(shifts[i])
        if k >= 0:
            shifted[i, :, k:] = reproj[i, :, : size - k]
        else:
            shifted[i, :, :k] = reproj[i, :, -k:]
    losses = ((sino[:, None, :] - shifted) ** 2).sum(axis=-1)
    return cands, losses


def update_angles(sino: np.ndarray, image: np.ndarray, angles: np.ndarray,
                  shifts: np.ndarray, delta: float, n_trials: int,
                  with_edge_hits: bool = False):
    """Local grid search refining every angle against its observed projection.

    Per projection the n_trials candidates centered at the current estimate
    are scored by MSE between the observed projection and the re-projection
    shifted by +alpha_hat; the minimizer wins, ties toward the candidate
    closest to the current estimate, then the smaller grid index.
    """
    cands, losses = candidate_losses(sino, image, angles, shifts, delta, n_trials)
    half = n_trials // 2
    prio = sorted(range(n_trials), key=lambda j: (abs(j - half), j))
    best_j = np.asarray(prio)[np.argmin(losses[:, prio], axis=1)]
    new_angles = wrap_angles(cands[np.arange(cands.shape[0]), best_j])
    if with_edge_hits:
        edge = int(np.sum((best_j == 0) | (best_j == n_trials - 1))) if n_trials > 1 else 0
        return new_angles, edge
    return new_angles


def _truth_metrics(image: np.ndarray, angles: np.ndarray, shifts: np.ndarray,
                   truth: GroundTruth) -> dict:
    res = evaluate.align(image, truth.image)
    m = evaluate.metrics(res.aligned_image, truth.image)
    ang_err, _, _ = evaluate.angle_error(angles, truth.angles)
    shift_mae, _ = evaluate.shift_error(shifts, truth.projection_shifts)
    return dict(rrmse=m.rrmse, ssim=m.ssim, cc=m.cc,
                mean_angle_err_deg=ang_err, mean_shift_err=shift_mae)


def run_altmin(sino: np.ndarray, init: GeometryEstimate, cfg: AltMinConfig,
               truth: GroundTruth | None = None, snapshot_hook=None):
    """Run the full alternating minimization from an initial geometry.

    Returns (image, geometry, trace). Ground-truth-relative trace metrics,
    when truth is given, are computed after global alignment.
    snapshot_hook(t, image), when given, is called after every iteration.
    """
    sino = check_sinogram(sino)
    n, size = sino.shape
    if init.n != n:
        raise ValueError("initial geometry length does not match sinogram")
    if np.any(init.shifts != 0):
        warnings.warn("initial shifts are not all zero; the algorithm "
                      "expects a zero-shift start", stacklevel=2)
    k_max = cfg.k_max if cfg.k_max is not None else size // 8
    angles = init.angles.copy()
    shifts = init.shifts.copy()
    f_prev = reconstruct_step(sino, shifts, angles)
    epsilon = cfg.epsilon
    trace = IterationTrace()

    for t in range(1, cfg.t_max + 1):
        steps = []
        shifts = estimate_shifts(sino, f_prev, angles, k_max)
        steps.append("shift")
        f_t = reconstruct_step(sino, shifts, angles)
        steps.append("fbp")
        angles, edge_hits = update_angles(sino, f_t, angles, shifts, cfg.delta,
                                          cfg.n_trials, with_edge_hits=True)
        steps.append("angle")

        image_delta = float(np.linalg.norm(f_t - f_prev))
        if epsilon is None:
            epsilon = 1e-3 * float(np.linalg.norm(f_t))
        extra = _truth_metrics(f_t, angles, shifts, truth) if truth is not None else {}
        trace.records.append(IterationRecord(
            iteration=t, image_hash=_image_hash(f_t), image_delta=image_delta,
            angle_edge_hits=edge_hits, steps=tuple(steps), **extra))
        if snapshot_hook is not None:
            snapshot_hook(t, f_t)
        f_prev = f_t
        if image_delta < epsilon:
            break

    geom = GeometryEstimate(angles=angles, shifts=shifts)
    return f_prev, geom, trace

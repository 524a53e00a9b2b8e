"""Alignment of reconstructions to ground truth and the report metrics.

Reconstruction from unknown views is defined only up to a global rotation,
reflection, and translation, so every ground-truth comparison first searches
that group for the transform maximizing the correlation coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter
from scipy.stats import kendalltau

from .errors import DegeneracyError
from .geometry import TWO_PI, check_image, wrap_angle


def rotate_image(pixels: np.ndarray, angle: float) -> np.ndarray:
    """Rotate image content by ``angle`` about the grid center.

    Bilinear interpolation, zero fill outside the source grid.
    """
    pixels = check_image(pixels)
    size = pixels.shape[0]
    c = (size - 1) / 2.0
    coords = np.arange(size, dtype=np.float64) - c
    s, t = np.meshgrid(coords, coords, indexing="ij")
    ca, sa = math.cos(angle), math.sin(angle)
    # inverse map: output point pulled from input at R(-angle) * x
    src_s = ca * s + sa * t + c
    src_t = -sa * s + ca * t + c
    a0 = np.floor(src_s).astype(np.int64)
    b0 = np.floor(src_t).astype(np.int64)
    wa = src_s - a0
    wb = src_t - b0
    out = np.zeros_like(pixels)
    for da, db, w in (
        (0, 0, (1 - wa) * (1 - wb)),
        (1, 0, wa * (1 - wb)),
        (0, 1, (1 - wa) * wb),
        (1, 1, wa * wb),
    ):
        aa, bb = a0 + da, b0 + db
        ok = (aa >= 0) & (aa < size) & (bb >= 0) & (bb < size)
        out[ok] += pixels[aa[ok], bb[ok]] * w[ok]
    return out


def _translate(pixels: np.ndarray, da: int, db: int) -> np.ndarray:
    """Integer translation with zero fill; clipping allowed (no error)."""
    size = pixels.shape[0]
    out = np.zeros_like(pixels)
    src_a = slice(max(0, -da), min(size, size - da))
    src_b = slice(max(0, -db), min(size, size - db))
    dst_a = slice(max(0, da), min(size, size + da))
    dst_b = slice(max(0, db), min(size, size + db))
    out[dst_a, dst_b] = pixels[src_a, src_b]
    return out


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a.ravel() - a.mean()
    b = b.ravel() - b.mean()
    denom = np.linalg.norm(a) * np.linalg.norm(b)
    if denom == 0.0:
        return 0.0
    return float(a @ b / denom)


@dataclass(frozen=True)
class AlignmentResult:
    """Group transform aligning a reconstruction to the ground truth."""

    rotation: float           # radians in [0, 2*pi), applied after reflection
    reflected: bool
    translation: tuple[int, int]
    aligned_image: np.ndarray


def apply_alignment(pixels: np.ndarray, rotation: float, reflected: bool,
                    translation: tuple[int, int]) -> np.ndarray:
    """Apply (reflect, then rotate, then translate) to an image."""
    img = pixels[::-1, :].copy() if reflected else pixels
    img = rotate_image(img, rotation)
    return _translate(img, translation[0], translation[1])


def _best_translation(img: np.ndarray, truth_spec: np.ndarray,
                      pad: int) -> tuple[int, int]:
    spec = np.fft.rfft2(img, s=(pad, pad))
    corr = np.fft.irfft2(truth_spec * np.conj(spec), s=(pad, pad))
    flat = int(np.argmax(corr))
    da, db = divmod(flat, pad)
    if da > pad // 2:
        da -= pad
    if db > pad // 2:
        db -= pad
    return int(da), int(db)


def align(recon: np.ndarray, truth: np.ndarray) -> AlignmentResult:
    """Search rotation x reflection x integer translation maximizing CC.

    Coarse 1-degree rotation grid (identity and horizontal flip), integer
    translation from the cross-correlation peak per candidate, then a local
    0.1-degree refinement over +-1 degree around the winner. Ties break
    toward the smallest rotation, identity before flip.
    """
    recon = check_image(recon)
    truth = check_image(truth)
    if recon.shape != truth.shape:
        raise ValueError(f"shape mismatch: {recon.shape} vs {truth.shape}")
    size = truth.shape[0]
    pad = 2 * size
    truth_spec = np.fft.rfft2(truth, s=(pad, pad))
    flipped = recon[::-1, :].copy()

    def evaluate(rotation: float, reflected: bool):
        base = flipped if reflected else recon
        img = rotate_image(base, rotation)
        da, db = _best_translation(img, truth_spec, pad)
        cc = _pearson(_translate(img, da, db), truth)
        return cc, (da, db)

    best = (-np.inf, 0.0, False, (0, 0))
    for deg in range(360):
        rot = math.radians(deg)
        for reflected in (False, True):
            cc, shift = evaluate(rot, reflected)
            if cc > best[0]:
                best = (cc, rot, reflected, shift)

    coarse_rot, reflected = best[1], best[2]
    for step in range(-10, 11):
        rot = coarse_rot + math.radians(step / 10.0)
        cc, shift = evaluate(rot, reflected)
        if cc > best[0]:
            best = (cc, rot, reflected, shift)

    rotation = wrap_angle(best[1])
    aligned = apply_alignment(recon, rotation, best[2], best[3])
    return AlignmentResult(rotation=rotation, reflected=best[2],
                           translation=best[3], aligned_image=aligned)


@dataclass(frozen=True)
class MetricSet:
    rrmse: float
    ssim: float
    cc: float


def _ssim(a: np.ndarray, b: np.ndarray, data_range: float,
          k1: float = 0.01, k2: float = 0.03, sigma: float = 1.5) -> float:
    # 11x11 Gaussian window (radius 5 at sigma 1.5), Wang et al. constants;
    # the map is cropped to the filter-valid interior before averaging.
    radius = 5
    truncate = radius / sigma

    def gf(x):
        return gaussian_filter(x, sigma=sigma, truncate=truncate)

    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    mu_a, mu_b = gf(a), gf(b)
    saa = gf(a * a) - mu_a**2
    sbb = gf(b * b) - mu_b**2
    sab = gf(a * b) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * sab + c2)
    den = (mu_a**2 + mu_b**2 + c1) * (saa + sbb + c2)
    smap = num / den
    return float(smap[radius:-radius, radius:-radius].mean())


def metrics(aligned: np.ndarray, truth: np.ndarray) -> MetricSet:
    """RRMSE, SSIM, and Pearson CC of an (already aligned) image pair.

    SSIM uses an 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03, and
    dynamic range max(truth) - min(truth).
    """
    aligned = check_image(aligned)
    truth = check_image(truth)
    if aligned.shape != truth.shape:
        raise ValueError(f"shape mismatch: {aligned.shape} vs {truth.shape}")
    truth_norm = float(np.linalg.norm(truth))
    if truth_norm == 0.0 or float(truth.max() - truth.min()) == 0.0:
        raise DegeneracyError("constant ground-truth image: CC undefined")
    rrmse = float(np.linalg.norm(aligned - truth)) / truth_norm
    cc = _pearson(aligned, truth)
    ssim = _ssim(aligned, truth, data_range=float(truth.max() - truth.min()))
    return MetricSet(rrmse=rrmse, ssim=ssim, cc=cc)


def _wrap_pi(x: np.ndarray) -> np.ndarray:
    return np.mod(x + np.pi, TWO_PI) - np.pi


def angle_error(est: np.ndarray, truth: np.ndarray):
    """Mean circular angle error after global rotation/reflection alignment.

    Returns (mean_deg, best_rotation, best_reflection). The rotation offset
    is solved in closed form by the circular mean of the residuals, for both
    orientations of the estimate.
    """
    est = np.asarray(est, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if est.shape != truth.shape or est.ndim != 1:
        raise ValueError("angle arrays must be 1D of equal length")
    if est.shape[0] == 0:
        raise ValueError("empty angle arrays")
    best = None
    for reflected in (False, True):
        ref = -truth if reflected else truth
        resid = est - ref
        delta = math.atan2(np.sin(resid).mean(), np.cos(resid).mean())
        err = float(np.abs(_wrap_pi(resid - delta)).mean())
        if best is None or err < best[0]:
            best = (err, wrap_angle(delta), reflected)
    return math.degrees(best[0]), best[1], best[2]


def shift_error(est: np.ndarray, truth: np.ndarray):
    """(mean absolute error, exact-match fraction) for integer shifts.

    The global group transform can negate the detector axis pairing, so both
    signs of the truth are tried and the better one is reported.
    """
    est = np.asarray(est, dtype=np.float64)
    ref = np.round(np.asarray(truth, dtype=np.float64))
    out = None
    for sign in (1.0, -1.0):
        mae = float(np.abs(est - sign * ref).mean())
        exact = float(np.mean(est == sign * ref))
        if out is None or mae < out[0]:
            out = (mae, exact)
    return out


def circular_order_agreement(order: np.ndarray, true_angles: np.ndarray) -> float:
    """Kendall-style agreement of an estimated cyclic order with true angles.

    Maximizes Kendall's tau over all cut points and both directions of the
    estimated cycle, so a perfect order returns 1.0 regardless of the global
    rotation/reflection ambiguity.
    """
    order = np.asarray(order)
    true_angles = np.asarray(true_angles, dtype=np.float64)
    n = order.shape[0]
    if n < 3:
        raise ValueError("need at least 3 projections")
    true_rank = np.empty(n, dtype=np.int64)
    true_rank[np.argsort(true_angles, kind="stable")] = np.arange(n)
    seq = true_rank[order]
    target = np.arange(n)
    best = -1.0
    for direction in (seq, seq[::-1]):
        for cut in range(n):
            tau = kendalltau(np.roll(direction, -cut), target).statistic
            if tau > best:
                best = float(tau)
    return best

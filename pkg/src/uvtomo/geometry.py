"""Discrete parallel-beam geometry: projector, shift operators, FBP.

Conventions
-----------
* An image is a square (S, S) float64 array ``f[a, b]``. The first index
  maps to the spatial coordinate ``s = a - (S - 1) / 2`` and the second to
  ``t = b - (S - 1) / 2``, so the grid is centered on the array center.
* A projection is a length-S float64 array sampled on detector bins with
  centers ``rho_j = j - (S - 1) / 2`` (spacing 1, same unit as pixels).
* A sinogram is an (N, S) array, one projection per row.
* Angles are in radians, measured from the s-axis, taken over the full
  circle [0, 2*pi).

The projector is pixel-driven with the exact square-pixel footprint: each
pixel is a unit square whose projection onto the detector axis is a
trapezoid (the convolution of two boxes of widths |cos| and |sin|), and
each detector bin receives the exact integral of that trapezoid over the
bin. Mass is conserved exactly for interior-supported images, projections
of piecewise-constant images are exact up to the pixel model itself, and
the backprojector below is the exact adjoint (transpose) of the projector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

TWO_PI = 2.0 * np.pi


def wrap_angle(theta: float) -> float:
    """Wrap a scalar angle to [0, 2*pi).

    Uses IEEE remainder so that inputs differing by an exactly-representable
    multiple of 2*pi wrap to the identical float.
    """
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    r = math.remainder(theta, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:  # remainder can land exactly on 2*pi after the add
        r -= TWO_PI
    return r


def wrap_angles(theta: np.ndarray) -> np.ndarray:
    """Wrap an array of angles to [0, 2*pi)."""
    theta = np.asarray(theta, dtype=np.float64)
    if not np.all(np.isfinite(theta)):
        raise ValueError("angles must be finite")
    out = np.mod(theta, TWO_PI)
    out[out >= TWO_PI] = 0.0
    return out


def check_image(pixels: np.ndarray) -> np.ndarray:
    """Validate an image array: square, 2D, finite. Returns a float64 view."""
    pixels = np.asarray(pixels, dtype=np.float64)
    if pixels.ndim != 2 or pixels.shape[0] != pixels.shape[1]:
        raise ValueError(f"image must be square 2D, got shape {pixels.shape}")
    if pixels.shape[0] < 1:
        raise ValueError("image must be non-empty")
    if not np.all(np.isfinite(pixels)):
        raise ValueError("image contains non-finite values")
    return pixels


def check_sinogram(projections: np.ndarray) -> np.ndarray:
    """Validate a sinogram array: 2D, finite, at least one row."""
    projections = np.asarray(projections, dtype=np.float64)
    if projections.ndim != 2:
        raise ValueError(f"sinogram must be 2D, got shape {projections.shape}")
    if projections.shape[0] == 0:
        raise ValueError("sinogram has no projections")
    if not np.all(np.isfinite(projections)):
        raise ValueError("sinogram contains non-finite values")
    return projections


def support_radius(pixels: np.ndarray) -> float:
    """Radius of the smallest centered disk containing all nonzero pixels."""
    pixels = check_image(pixels)
    s = pixels.shape[0]
    a, b = np.nonzero(pixels)
    if a.size == 0:
        return 0.0
    c = (s - 1) / 2.0
    return float(np.sqrt((a - c) ** 2 + (b - c) ** 2).max())


@dataclass(frozen=True)
class GeometryEstimate:
    """Per-projection angle estimates (radians) and integer detector shifts."""

    angles: np.ndarray
    shifts: np.ndarray

    def __post_init__(self):
        angles = wrap_angles(self.angles)
        shifts = np.asarray(self.shifts)
        if not np.issubdtype(shifts.dtype, np.integer):
            if not np.all(shifts == np.round(shifts)):
                raise ValueError("shifts must be integers")
        shifts = shifts.astype(np.int64)
        if angles.ndim != 1 or shifts.shape != angles.shape:
            raise ValueError("angles and shifts must be 1D arrays of equal length")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "shifts", shifts)

    @property
    def n(self) -> int:
        return self.angles.shape[0]

    def validate_against(self, size: int) -> None:
        if np.any(np.abs(self.shifts) > size // 2):
            raise ValueError(f"|shift| exceeds S/2 = {size // 2}")


@njit(cache=True, inline="always")
def _footprint_cdf(x, half_outer, half_inner):  # pragma: no cover - jitted
    # CDF of the unit-area symmetric trapezoid footprint of a square pixel:
    # outer half-width (|cos|+|sin|)/2, inner (plateau) half-width
    # ||cos|-|sin||/2. Degenerates to a box at axis-aligned angles.
    if x <= -half_outer:
        return 0.0
    if x >= half_outer:
        return 1.0
    ramp = half_outer - half_inner
    if ramp < 1e-12:
        return (x + half_outer) / (2.0 * half_outer)
    peak = 1.0 / (half_outer + half_inner)
    if x < -half_inner:
        d = x + half_outer
        return 0.5 * peak * d * d / ramp
    if x <= half_inner:
        return 0.5 * peak * ramp + peak * (x + half_inner)
    d = half_outer - x
    return 1.0 - 0.5 * peak * d * d / ramp


@njit(cache=True)
def _project_kernel(img, cos_t, sin_t, out):  # pragma: no cover - jitted
    size = img.shape[0]
    c = (size - 1) / 2.0
    for a in range(cos_t.shape[0]):
        ct = cos_t[a]
        st = sin_t[a]
        w1 = abs(ct)
        w2 = abs(st)
        half_outer = 0.5 * (w1 + w2)
        half_inner = 0.5 * abs(w1 - w2)
        reach = 0.5 + half_outer
        for ia in range(size):
            ps = (ia - c) * ct
            for ib in range(size):
                val = img[ia, ib]
                if val == 0.0:
                    continue
                rho = ps + (ib - c) * st
                # detector bins overlapped by the pixel footprint
                x = rho + c
                j_lo = int(math.ceil(x - reach))
                j_hi = int(math.floor(x + reach))
                if j_lo < 0:
                    j_lo = 0
                if j_hi > size - 1:
                    j_hi = size - 1
                for j in range(j_lo, j_hi + 1):
                    d = j - x
                    w = _footprint_cdf(d + 0.5, half_outer, half_inner) \
                        - _footprint_cdf(d - 0.5, half_outer, half_inner)
                    out[a, j] += val * w


@njit(cache=True)
def _backproject_kernel(rows, cos_t, sin_t, out):  # pragma: no cover - jitted
    size = out.shape[0]
    nbins = rows.shape[1]
    c = (size - 1) / 2.0
    cb = (nbins - 1) / 2.0
    for a in range(cos_t.shape[0]):
        ct = cos_t[a]
        st = sin_t[a]
        w1 = abs(ct)
        w2 = abs(st)
        half_outer = 0.5 * (w1 + w2)
        half_inner = 0.5 * abs(w1 - w2)
        reach = 0.5 + half_outer
        for ia in range(size):
            ps = (ia - c) * ct
            for ib in range(size):
                rho = ps + (ib - c) * st
                x = rho + cb
                j_lo = int(math.ceil(x - reach))
                j_hi = int(math.floor(x + reach))
                if j_lo < 0:
                    j_lo = 0
                if j_hi > nbins - 1:
                    j_hi = nbins - 1
                acc = 0.0
                for j in range(j_lo, j_hi + 1):
                    d = j - x
                    w = _footprint_cdf(d + 0.5, half_outer, half_inner) \
                        - _footprint_cdf(d - 0.5, half_outer, half_inner)
                    acc += rows[a, j] * w
                out[ia, ib] += acc


def _trig(thetas: np.ndarray):
    wrapped = np.array([wrap_angle(float(th)) for th in thetas])
    return np.cos(wrapped), np.sin(wrapped)


def project_many(pixels: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Project an image at several angles; returns an (n_angles, S) sinogram.

    Each row is bit-identical to ``project(pixels, theta)`` at the same
    angle: results do not depend on batching.
    """
    pixels = check_image(pixels)
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.ndim != 1:
        raise ValueError("thetas must be 1D")
    cos_t, sin_t = _trig(thetas)
    out = np.zeros((thetas.shape[0], pixels.shape[0]), dtype=np.float64)
    _project_kernel(np.ascontiguousarray(pixels), cos_t, sin_t, out)
    return out


def project(pixels: np.ndarray, theta: float) -> np.ndarray:
    """Discrete Radon projection of an image at a single angle.

    Parameters
    ----------
    pixels : (S, S) array
        Image on the centered grid.
    theta : float
        Projection angle in radians; wrapped internally to [0, 2*pi).

    Returns
    -------
    (S,) array of line-integral samples on the detector bins.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta!r}")
    return project_many(pixels, np.array([theta]))[0]


def backproject_many(rows: np.ndarray, thetas: np.ndarray,
                     size: int | None = None) -> np.ndarray:
    """Sum of unfiltered backprojections of rows[i] at thetas[i].

    Exact adjoint of the projector: every sample point of the forward line
    integration splats its projection value back with the same bilinear
    weights.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError("rows must be 2D")
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.shape[0] != rows.shape[0]:
        raise ValueError("one angle per row required")
    if size is None:
        size = rows.shape[1]
    cos_t, sin_t = _trig(thetas)
    out = np.zeros((size, size), dtype=np.float64)
    _backproject_kernel(np.ascontiguousarray(rows), cos_t, sin_t, out)
    return out


def backproject(samples: np.ndarray, theta: float,
                size: int | None = None) -> np.ndarray:
    """Unfiltered backprojection of a single projection."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 1:
        raise ValueError("projection must be 1D")
    return backproject_many(samples[None, :], np.array([float(theta)]), size=size)


def shift_projection(samples: np.ndarray, k: int) -> np.ndarray:
    """Translate a projection by k detector bins, zero-filling vacated bins.

    Positive k moves content toward higher bin indices. Not circular: mass
    shifted past either detector edge is discarded.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 1:
        raise ValueError("projection must be 1D")
    k = int(k)
    n = samples.shape[0]
    if abs(k) > n:
        raise ValueError(f"|k| = {abs(k)} exceeds projection length {n}")
    out = np.zeros_like(samples)
    if k >= 0:
        out[k:] = samples[: n - k]
    else:
        out[:k] = samples[-k:]
    return out


def shift_rows(sino: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Shift every sinogram row i by ks[i] bins (zero-filled)."""
    sino = np.asarray(sino, dtype=np.float64)
    out = np.zeros_like(sino)
    for i in range(sino.shape[0]):
        out[i] = shift_projection(sino[i], int(ks[i]))
    return out


def shift_image(pixels: np.ndarray, s0: int, t0: int) -> np.ndarray:
    """Integer translation of the pixel grid by (s0, t0), zero fill.

    Raises ClippingError if nonzero pixels would be pushed off the grid.
    """
    from .errors import ClippingError

    pixels = check_image(pixels)
    s0, t0 = int(s0), int(t0)
    size = pixels.shape[0]
    if abs(s0) >= size or abs(t0) >= size:
        raise ClippingError(f"shift ({s0}, {t0}) exceeds grid size {size}")
    out = np.zeros_like(pixels)
    src_a = slice(max(0, -s0), min(size, size - s0))
    src_b = slice(max(0, -t0), min(size, size - t0))
    dst_a = slice(max(0, s0), min(size, size + s0))
    dst_b = slice(max(0, t0), min(size, size + t0))
    retained = np.zeros_like(pixels, dtype=bool)
    retained[src_a, src_b] = True
    if np.any(pixels[~retained] != 0.0):
        raise ClippingError(f"shift ({s0}, {t0}) pushes nonzero pixels off the grid")
    out[dst_a, dst_b] = pixels[src_a, src_b]
    return out


def ramp_filter_rows(sino: np.ndarray, window: str = "ramlak") -> np.ndarray:
    """Apply the Ram-Lak ramp filter to every row of a sinogram.

    Rows are zero-padded to the next power of two >= 2*S before the FFT to
    avoid circular-convolution wraparound. ``window='hann'`` multiplies the
    ramp by a Hann apodization.
    """
    sino = check_sinogram(sino)
    size = sino.shape[1]
    n_pad = 1 << int(np.ceil(np.log2(max(2 * size, 2))))
    freqs = np.fft.rfftfreq(n_pad, d=1.0)
    ramp = np.abs(freqs)
    if window == "hann":
        ramp = ramp * 0.5 * (1.0 + np.cos(np.pi * freqs / freqs[-1]))
    elif window != "ramlak":
        raise ValueError(f"unknown filter window {window!r}")
    padded = np.zeros((sino.shape[0], n_pad), dtype=np.float64)
    padded[:, :size] = sino
    spec = np.fft.rfft(padded, axis=1) * ramp[None, :]
    return np.fft.irfft(spec, n=n_pad, axis=1)[:, :size]


def _angle_weights(angles: np.ndarray) -> np.ndarray:
    """Voronoi quadrature weights for backprojection over the full circle.

    Each projection carries half the angular span between its circular
    neighbors, so the backprojection integral is discretized with the
    correct measure for nonuniformly spaced angles. For a uniform grid
    every weight equals pi/N, matching the classical FBP constant.
    """
    n = angles.shape[0]
    if n == 1:
        return np.array([np.pi])
    wrapped = wrap_angles(angles)
    order = np.argsort(wrapped, kind="stable")
    srt = wrapped[order]
    gaps = np.diff(srt, append=srt[0] + TWO_PI)
    spans = 0.5 * (gaps + np.roll(gaps, 1))
    weights = np.empty(n, dtype=np.float64)
    weights[order] = 0.5 * spans
    return weights


def fbp(sino: np.ndarray, angles: np.ndarray, size: int | None = None,
        window: str = "ramlak") -> np.ndarray:
    """Filtered back-projection onto an (S, S) grid.

    Parameters
    ----------
    sino : (N, S) array
        One projection per row.
    angles : (N,) array
        Projection angles in radians, spanning [0, 2*pi).
    size : int, optional
        Output grid size; defaults to the detector length S.
    window : str
        'ramlak' (default) or 'hann'.

    Linear in the sinogram; the all-zero sinogram maps to the all-zero
    image. Projections are weighted by their Voronoi angular span, which
    reduces to the classical pi/N constant for uniformly spaced angles.
    """
    sino = check_sinogram(sino)
    angles = np.asarray(angles, dtype=np.float64)
    if angles.ndim != 1 or angles.shape[0] != sino.shape[0]:
        raise ValueError("angles must be 1D with one entry per projection")
    filtered = ramp_filter_rows(sino, window=window)
    filtered *= _angle_weights(angles)[:, None]
    return backproject_many(filtered, angles, size=size)


def reproject_all(pixels: np.ndarray, geom: GeometryEstimate) -> np.ndarray:
    """Project an image at every angle of a geometry estimate.

    Shifts in ``geom`` are ignored here; callers apply them explicitly.
    """
    return project_many(pixels, geom.angles)

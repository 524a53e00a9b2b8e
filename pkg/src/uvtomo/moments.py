"""Moment-based joint angle/shift recovery baseline.

Per projection, the detector-domain centroid (first moment) eliminates the
unknown shift; the second-order centered moment yields a pair of candidate
angles related by a reflection ambiguity; the third-order centered moment
picks the branch. Image moments are estimated from four known reference
projections at {0, pi/4, pi/2, 3*pi/4}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, MomentRangeError
from .geometry import GeometryEstimate, check_sinogram, fbp, shift_rows

REFERENCE_ANGLES = (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4)


@dataclass(frozen=True)
class ProjectionMoments:
    """Raw and centroid-centered detector-coordinate moments of a projection."""

    m0: float
    m1: float
    m2: float | None = None
    m3: float | None = None
    m2c: float | None = None  # centered second moment
    m3c: float | None = None  # centered third moment

    @property
    def centroid(self) -> float:
        return self.m1 / self.m0


def projection_moments(p: np.ndarray, max_order: int = 3) -> ProjectionMoments:
    """Moments m_k = sum(rho^k * p) over bin-center coordinates.

    Centered variants are taken about the centroid m1/m0. Requires positive
    total mass.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("projection must be 1D")
    if not 1 <= max_order <= 3:
        raise ValueError(f"max_order must be in [1, 3], got {max_order}")
    size = p.shape[0]
    rho = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    m0 = float(p.sum())
    if m0 <= 0.0:
        raise ValueError("projection mass must be positive for moment analysis")
    m1 = float(rho @ p)
    if max_order == 1:
        return ProjectionMoments(m0=m0, m1=m1)
    centered = rho - m1 / m0
    m2 = float((rho**2) @ p)
    m2c = float((centered**2) @ p)
    if max_order == 2:
        return ProjectionMoments(m0=m0, m1=m1, m2=m2, m2c=m2c)
    m3 = float((rho**3) @ p)
    m3c = float((centered**3) @ p)
    return ProjectionMoments(m0=m0, m1=m1, m2=m2, m3=m3, m2c=m2c, m3c=m3c)


@dataclass(frozen=True)
class ImageMoments:
    """Central image moments recovered from the reference projections."""

    mu20: float
    mu11: float
    mu02: float
    mu30: float
    mu21: float
    mu12: float
    mu03: float

    def m2_curve(self, theta) -> np.ndarray:
        c, s = np.cos(theta), np.sin(theta)
        return self.mu20 * c**2 + 2 * self.mu11 * c * s + self.mu02 * s**2

    def m3_curve(self, theta) -> np.ndarray:
        c, s = np.cos(theta), np.sin(theta)
        return (self.mu30 * c**3 + 3 * self.mu21 * c**2 * s
                + 3 * self.mu12 * c * s**2 + self.mu03 * s**3)


def image_moments_from_references(ref_projs: np.ndarray) -> ImageMoments:
    """Recover central image moments from projections at the reference angles.

    The second-order system (3 unknowns, 4 equations) is solved by least
    squares; the third-order system is square and solved exactly.
    """
    ref_projs = np.asarray(ref_projs, dtype=np.float64)
    if ref_projs.ndim != 2 or ref_projs.shape[0] != 4:
        raise ValueError("expected 4 reference projections, one per reference angle")
    pms = [projection_moments(r, max_order=3) for r in ref_projs]
    thetas = np.asarray(REFERENCE_ANGLES)
    c, s = np.cos(thetas), np.sin(thetas)
    a2 = np.stack([c**2, 2 * c * s, s**2], axis=1)
    b2 = np.array([pm.m2c for pm in pms])
    sol2, _, rank2, _ = np.linalg.lstsq(a2, b2, rcond=None)
    a3 = np.stack([c**3, 3 * c**2 * s, 3 * c * s**2, s**3], axis=1)
    b3 = np.array([pm.m3c for pm in pms])
    if rank2 < 3 or np.linalg.matrix_rank(a3) < 4:
        raise DegeneracyError("reference system is rank-deficient")
    sol3 = np.linalg.solve(a3, b3)
    return ImageMoments(mu20=float(sol2[0]), mu11=float(sol2[1]),
                        mu02=float(sol2[2]), mu30=float(sol3[0]),
                        mu21=float(sol3[1]), mu12=float(sol3[2]),
                        mu03=float(sol3[3]))


def _second_moment_phase(im: ImageMoments):
    mean = 0.5 * (im.mu20 + im.mu02)
    diff = 0.5 * (im.mu20 - im.mu02)
    radius = math.hypot(diff, im.mu11)
    phase = math.atan2(im.mu11, diff)
    return mean, radius, phase


def reflection_partner(theta: float, im: ImageMoments) -> float:
    """The second candidate sharing theta's second moment (mod pi)."""
    _, _, phase = _second_moment_phase(im)
    return (phase - theta) % math.pi


def candidate_angles(p: np.ndarray, im: ImageMoments,
                     clamp: bool = False) -> tuple[float, float]:
    """Solve the second-moment equation for the two candidate angles in [0, pi).

    m2c(theta) traces mean + radius*cos(2*theta - phase); the two roots are
    reflections of each other about phase/2. Raises DegeneracyError for
    isotropic image moments and MomentRangeError when the observed moment
    falls outside the attainable [lambda_min, lambda_max] range (clamped to
    the boundary instead when ``clamp`` is set).
    """
    pm = projection_moments(p, max_order=2)
    mean, radius, phase = _second_moment_phase(im)
    scale = max(abs(im.mu20) + abs(im.mu02), 1e-300)
    if radius <= 1e-12 * scale:
        raise DegeneracyError(
            "isotropic image moments: every angle fits the second moment")
    u = (pm.m2c - mean) / radius
    if abs(u) > 1.0:
        tol = 1e-9 * (mean + radius)
        if abs(pm.m2c - mean) - radius > tol and not clamp:
            raise MomentRangeError(
                f"observed second moment {pm.m2c:.6g} outside attainable range "
                f"[{mean - radius:.6g}, {mean + radius:.6g}]")
        u = min(1.0, max(-1.0, u))
    half = 0.5 * math.acos(u)
    theta_a = (0.5 * phase + half) % math.pi
    theta_b = (0.5 * phase - half) % math.pi
    return theta_a, theta_b


@dataclass(frozen=True)
class BranchChoice:
    angle: float
    undecidable: bool


def disambiguate_third_moment(p: np.ndarray, im: ImageMoments,
                              cands) -> BranchChoice:
    """Pick the candidate (with theta+pi parity partners) matching m3c best.

    Ties resolve toward the first candidate; a point-symmetric image makes
    every branch tie and is reported as undecidable.
    """
    cands = list(cands)
    if not cands:
        raise ValueError("candidate list must be non-empty")
    pm = projection_moments(p, max_order=3)
    expanded = [float(c) % (2 * math.pi) for c in cands]
    expanded += [(float(c) + math.pi) % (2 * math.pi) for c in cands]
    preds = im.m3_curve(np.asarray(expanded))
    scores = np.abs(preds - pm.m3c)
    best = int(np.argmin(scores))
    rho_max = (p.shape[0] - 1) / 2.0
    ref_scale = pm.m0 * rho_max**3
    undecidable = float(scores.max() - scores.min()) <= 1e-9 * ref_scale
    return BranchChoice(angle=expanded[0] if undecidable else expanded[best],
                        undecidable=undecidable)


@dataclass(frozen=True)
class MomentRecovery:
    """Output of the moment pipeline: geometry, reconstruction, diagnostics."""

    geometry: GeometryEstimate
    image: np.ndarray
    centroids: np.ndarray        # raw (real-valued) per-projection centroids
    undecidable: np.ndarray      # per-projection parity-tie flags


def moment_method_pipeline(sino: np.ndarray,
                           ref_projs: np.ndarray) -> MomentRecovery:
    """Full moment-based recovery: center, estimate angles, reconstruct.

    Every projection is centered by its first moment (integer shift estimate
    round(centroid)); image moments come from the reference projections;
    angles are the third-moment-disambiguated second-moment candidates; the
    image is FBP of the centered sinogram at the estimated angles. Candidate
    extraction clamps out-of-range moments (noise robustness).
    """
    sino = check_sinogram(sino)
    n = sino.shape[0]
    im = image_moments_from_references(ref_projs)
    centroids = np.empty(n, dtype=np.float64)
    angles = np.empty(n, dtype=np.float64)
    undecidable = np.zeros(n, dtype=bool)
    for i in range(n):
        pm = projection_moments(sino[i], max_order=1)
        centroids[i] = pm.centroid
        cands = candidate_angles(sino[i], im, clamp=True)
        choice = disambiguate_third_moment(sino[i], im, cands)
        angles[i] = choice.angle
        undecidable[i] = choice.undecidable
    shifts = np.round(centroids).astype(np.int64)
    centered = shift_rows(sino, -shifts)
    image = fbp(centered, angles)
    geom = GeometryEstimate(angles=angles, shifts=shifts)
    return MomentRecovery(geometry=geom, image=image, centroids=centroids,
                          undecidable=undecidable)

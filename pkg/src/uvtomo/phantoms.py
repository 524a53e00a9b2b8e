"""Ground-truth phantom generation and image-file loading."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .geometry import check_image

# Modified (high-contrast) Shepp-Logan ellipse table:
# (x0, y0, semi_a, semi_b, angle_deg, intensity) in unit-disk coordinates.
_SHEPP_LOGAN = [
    (0.0, 0.0, 0.69, 0.92, 0.0, 1.0),
    (0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8),
    (0.22, 0.0, 0.11, 0.31, -18.0, -0.2),
    (-0.22, 0.0, 0.16, 0.41, 18.0, -0.2),
    (0.0, 0.35, 0.21, 0.25, 0.0, 0.1),
    (0.0, 0.1, 0.046, 0.046, 0.0, 0.1),
    (0.0, -0.1, 0.046, 0.046, 0.0, 0.1),
    (-0.08, -0.605, 0.046, 0.023, 0.0, 0.1),
    (0.0, -0.605, 0.023, 0.023, 0.0, 0.1),
    (0.06, -0.605, 0.023, 0.046, 0.0, 0.1),
]

PHANTOM_KINDS = ("shepp_logan", "disks", "from_file")


def _default_support_radius(size: int) -> float:
    # leaves room for shifts up to M = 15 at S >= 128 (S/2 - M - 2)
    return 0.36 * size


# antialiasing supersampling factor for phantom rasterization
_AA = 4


def _fine_grid(size: int, radius: float):
    # subpixel sample coordinates (units of the support radius)
    c = (size - 1) / 2.0
    coords = np.arange(size * _AA) / _AA - (_AA - 1) / (2.0 * _AA)
    coords = (coords - c) / radius
    return np.meshgrid(coords, coords, indexing="ij")


def _downsample(fine: np.ndarray) -> np.ndarray:
    size = fine.shape[0] // _AA
    return fine.reshape(size, _AA, size, _AA).mean(axis=(1, 3))


def shepp_logan(size: int, support_radius: float | None = None) -> np.ndarray:
    """Modified Shepp-Logan phantom scaled into a centered support disk.

    Ellipses are rasterized with subpixel supersampling so edges are
    antialiased (band-limited), which is what FBP can actually recover.
    """
    if support_radius is None:
        support_radius = _default_support_radius(size)
    x, y = _fine_grid(size, support_radius)
    fine = np.zeros_like(x)
    for x0, y0, a, b, ang, val in _SHEPP_LOGAN:
        phi = np.deg2rad(ang)
        xr = (x - x0) * np.cos(phi) + (y - y0) * np.sin(phi)
        yr = -(x - x0) * np.sin(phi) + (y - y0) * np.cos(phi)
        fine[(xr / a) ** 2 + (yr / b) ** 2 <= 1.0] += val
    img = np.clip(_downsample(fine), 0.0, None)
    peak = img.max()
    if peak > 0:
        img /= peak
    return img


def disks(size: int, support_radius: float | None = None,
          seed: int = 7, n_disks: int = 3) -> np.ndarray:
    """Union of seeded non-overlapping disks with distinct intensities."""
    if support_radius is None:
        support_radius = _default_support_radius(size)
    rng = np.random.Generator(np.random.Philox(seed))
    c = (size - 1) / 2.0
    coords = np.arange(size) - c
    s, t = np.meshgrid(coords, coords, indexing="ij")
    img = np.zeros((size, size), dtype=np.float64)
    placed: list[tuple[float, float, float]] = []
    attempts = 0
    while len(placed) < n_disks and attempts < 1000:
        attempts += 1
        r = rng.uniform(0.12, 0.30) * support_radius
        ang = rng.uniform(0.0, 2.0 * np.pi)
        rad_pos = rng.uniform(0.0, support_radius - r)
        cs, ct = rad_pos * np.cos(ang), rad_pos * np.sin(ang)
        if any(np.hypot(cs - ps, ct - pt) < r + pr + 1.0 for ps, pt, pr in placed):
            continue
        val = rng.uniform(0.4, 1.0)
        img[(s - cs) ** 2 + (t - ct) ** 2 <= r**2] = val
        placed.append((cs, ct, r))
    peak = img.max()
    if peak > 0:
        img /= peak
    return img


def from_file(path: str | Path, size: int) -> np.ndarray:
    """Load a grayscale image file, check its size, normalize to [0, 1]."""
    from PIL import Image as PILImage

    try:
        with PILImage.open(path) as im:
            if im.mode not in ("L", "I", "I;16", "F"):
                im = im.convert("F")
            arr = np.asarray(im, dtype=np.float64)
    except OSError as exc:
        raise OSError(f"cannot read image file {path}: {exc}") from exc
    if arr.ndim != 2 or arr.shape != (size, size):
        raise OSError(
            f"image file {path} has shape {arr.shape}, expected ({size}, {size})"
        )
    if arr.min() < 0:
        raise OSError(f"image file {path} contains negative values")
    peak = arr.max()
    if peak > 0:
        arr = arr / peak
    return arr


def make_phantom(kind: str, size: int, path: str | Path | None = None,
                 support_radius: float | None = None, seed: int = 7) -> np.ndarray:
    """Construct a ground-truth phantom image.

    Parameters
    ----------
    kind : str
        One of 'shepp_logan', 'disks', 'from_file'.
    size : int
        Grid size S (>= 32).
    path : str, optional
        Image file for kind='from_file'.
    support_radius : float, optional
        Radius of the centered disk that must contain the object; defaults
        to 0.36 * S. Ignored for 'from_file'.
    seed : int
        Seed for the 'disks' layout.
    """
    if size < 32:
        raise ValueError(f"phantom size must be >= 32, got {size}")
    if kind == "shepp_logan":
        img = shepp_logan(size, support_radius)
    elif kind == "disks":
        img = disks(size, support_radius, seed=seed)
    elif kind == "from_file":
        if path is None:
            raise ValueError("kind='from_file' requires a path")
        img = from_file(path, size)
    else:
        raise ValueError(f"unknown phantom kind {kind!r}; choose from {PHANTOM_KINDS}")
    return check_image(img)

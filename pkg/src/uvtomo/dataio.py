"""File formats: dataset container, run manifests, CSV and PGM emission.

All multi-byte payloads are little-endian; floats are f64. Writes go
through a temp file plus atomic rename.
"""

from __future__ import annotations

import os
import struct
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import DataFormatError
from .simulate import GroundTruth

MAGIC = b"UVT1"
VERSION = 1
_HEADER = struct.Struct("<4sHIIHdiQ")
_FLAG_HAS_TRUTH = 1


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


@dataclass(frozen=True)
class Dataset:
    """In-memory form of a dataset container file."""

    size: int
    n: int
    gamma: float
    m: int
    seed: int
    noisy: np.ndarray
    truth: GroundTruth | None = None


def write_dataset(path: str | Path, ds: Dataset) -> None:
    """Serialize a dataset (noisy sinogram plus optional truth block)."""
    flags = _FLAG_HAS_TRUTH if ds.truth is not None else 0
    header = _HEADER.pack(MAGIC, VERSION, ds.size, ds.n, flags,
                          float(ds.gamma), int(ds.m), int(ds.seed))
    chunks = [header, np.ascontiguousarray(ds.noisy, dtype="<f8").tobytes()]
    if ds.truth is not None:
        t = ds.truth
        chunks.append(np.ascontiguousarray(t.image, dtype="<f8").tobytes())
        chunks.append(np.ascontiguousarray(t.angles, dtype="<f8").tobytes())
        chunks.append(np.ascontiguousarray(t.image_shifts, dtype="<i4").tobytes())
        chunks.append(np.ascontiguousarray(t.clean_sinogram, dtype="<f8").tobytes())
    atomic_write_bytes(path, b"".join(chunks))


def read_dataset(path: str | Path) -> Dataset:
    """Parse a dataset container file, validating magic, version, lengths."""
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read dataset {path}: {exc}") from exc
    if len(blob) < _HEADER.size:
        raise DataFormatError(f"{path}: truncated header")
    magic, version, size, n, flags, gamma, m, seed = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise DataFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise DataFormatError(f"{path}: unsupported version {version}")
    offset = _HEADER.size

    def take(count, dtype):
        nonlocal offset
        nbytes = count * np.dtype(dtype).itemsize
        if offset + nbytes > len(blob):
            raise DataFormatError(f"{path}: truncated payload")
        arr = np.frombuffer(blob, dtype=dtype, count=count, offset=offset)
        offset += nbytes
        return arr

    noisy = take(n * size, "<f8").reshape(n, size).astype(np.float64)
    truth = None
    if flags & _FLAG_HAS_TRUTH:
        image = take(size * size, "<f8").reshape(size, size).astype(np.float64)
        angles = take(n, "<f8").astype(np.float64)
        shifts = take(2 * n, "<i4").reshape(n, 2).astype(np.int64)
        clean = take(n * size, "<f8").reshape(n, size).astype(np.float64)
        alphas = shifts[:, 0] * np.cos(angles) + shifts[:, 1] * np.sin(angles)
        truth = GroundTruth(image=image, angles=angles, image_shifts=shifts,
                            projection_shifts=alphas, clean_sinogram=clean,
                            noisy_sinogram=noisy)
    if offset != len(blob):
        raise DataFormatError(f"{path}: {len(blob) - offset} trailing bytes")
    return Dataset(size=size, n=n, gamma=gamma, m=m, seed=seed,
                   noisy=noisy, truth=truth)


@dataclass
class RunManifest:
    """Resolved reconstruction-run configuration, one key=value per line."""

    method: str = "ours"
    input: str = ""
    output_dir: str = ""
    t_max: int = 30
    delta_deg: float = 0.5
    n_trials: int = 11
    epsilon: float | None = None     # None -> relative default ("auto")
    k_max: int | None = None         # None -> 2M (simulation) or S/8
    kappa: float | None = None       # None -> median heuristic
    seed: int = 0

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                value = "auto"
            lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"


_MANIFEST_TYPES = {
    "method": str, "input": str, "output_dir": str, "t_max": int,
    "delta_deg": float, "n_trials": int, "epsilon": float, "k_max": int,
    "kappa": float, "seed": int,
}
_MANIFEST_OPTIONAL = {"epsilon", "k_max", "kappa"}


def parse_manifest(text: str, source: str = "<manifest>") -> dict:
    """Parse key=value manifest text; unknown keys are rejected."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataFormatError(f"{source}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _MANIFEST_TYPES:
            raise DataFormatError(f"{source}:{lineno}: unknown key {key!r}")
        if value == "auto" and key in _MANIFEST_OPTIONAL:
            out[key] = None
            continue
        try:
            out[key] = _MANIFEST_TYPES[key](value)
        except ValueError as exc:
            raise DataFormatError(f"{source}:{lineno}: bad value for {key}: {exc}")
    return out


def read_manifest(path: str | Path) -> RunManifest:
    values = parse_manifest(Path(path).read_text(encoding="utf-8"), str(path))
    return RunManifest(**values)


def format_float(x: float | None) -> str:
    return "" if x is None else repr(float(x))


TRACE_COLUMNS = ("iteration", "image_delta", "rrmse", "ssim", "cc",
                 "mean_angle_err_deg", "mean_shift_err", "angle_edge_hits")


def trace_to_csv(trace) -> str:
    lines = [",".join(TRACE_COLUMNS)]
    for rec in trace:
        lines.append(",".join([
            str(rec.iteration),
            format_float(rec.image_delta),
            format_float(rec.rrmse),
            format_float(rec.ssim),
            format_float(rec.cc),
            format_float(rec.mean_angle_err_deg),
            format_float(rec.mean_shift_err),
            str(rec.angle_edge_hits),
        ]))
    return "\n".join(lines) + "\n"


def geometry_to_csv(geom) -> str:
    lines = ["index,angle,shift"]
    for i in range(geom.n):
        lines.append(f"{i},{format_float(float(geom.angles[i]))},{int(geom.shifts[i])}")
    return "\n".join(lines) + "\n"


METRICS_COLUMNS = ("method", "gamma", "M", "rrmse", "ssim", "cc",
                   "mean_angle_err_deg")


def metrics_row(method: str, gamma: float, m: int, metric_set,
                mean_angle_err_deg: float | None) -> str:
    return ",".join([
        method,
        format_float(gamma),
        str(int(m)),
        format_float(metric_set.rrmse),
        format_float(metric_set.ssim),
        format_float(metric_set.cc),
        format_float(mean_angle_err_deg),
    ])


def append_metrics_row(path: str | Path, row: str) -> None:
    path = Path(path)
    header = ",".join(METRICS_COLUMNS)
    if path.exists():
        text = path.read_text(encoding="utf-8")
        if not text.endswith("\n"):
            text += "\n"
        atomic_write_text(path, text + row + "\n")
    else:
        atomic_write_text(path, header + "\n" + row + "\n")


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Read a simple comma-separated file; errors carry line numbers."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read CSV {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise DataFormatError(f"{path}:1: empty CSV (missing header)")
    header = lines[0].split(",")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise DataFormatError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(cells)}")
        rows.append(cells)
    return header, rows


def write_pgm16(path: str | Path, pixels: np.ndarray) -> None:
    """Write an image as a 16-bit binary PGM, min-max scaled.

    The applied scaling is recorded in a '<name>.scale.txt' sidecar so the
    quantization is invertible.
    """
    pixels = np.asarray(pixels, dtype=np.float64)
    lo, hi = float(pixels.min()), float(pixels.max())
    span = hi - lo if hi > lo else 1.0
    scaled = np.round((pixels - lo) / span * 65535.0).astype(">u2")
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n65535\n".encode("ascii")
    atomic_write_bytes(path, header + scaled.tobytes())
    atomic_write_text(str(path) + ".scale.txt",
                      f"min={format_float(lo)}\nmax={format_float(hi)}\n")

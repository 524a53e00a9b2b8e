"""Command-line front end: simulate, reconstruct, evaluate, report, selftest.

Exit codes: 0 ok, 2 usage/config error, 3 I/O or file-format error,
4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import dataio, evaluate, graphinit, moments
from .altmin import AltMinConfig, run_altmin
from .errors import ConfigurationError, DataFormatError, DegeneracyError
from .geometry import fbp, project_many
from .moments import REFERENCE_ANGLES
from .phantoms import make_phantom
from .simulate import DistortionConfig, synthesize

METHODS = ("blind", "ours", "oracle", "moments")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uvtomo",
        description="2D tomography with unknown projection angles and shifts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic dataset")
    p.add_argument("--phantom", choices=("shepp_logan", "disks", "from_file"),
                   default="shepp_logan")
    p.add_argument("--file", help="image file for --phantom from_file")
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--gamma", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("reconstruct", help="run a reconstruction method")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--manifest", help="manifest file with defaults")
    p.add_argument("--t-max", type=int)
    p.add_argument("--delta-deg", type=float)
    p.add_argument("--n-trials", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--k-max", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--trace-metrics", action="store_true",
                   help="record per-iteration ground-truth metrics (slower)")
    p.add_argument("--dump-every", type=int,
                   help="dump intermediate images every K iterations")
    p.add_argument("--dump-similarity", action="store_true",
                   help="dump the similarity matrix and embedding as CSV")

    p = sub.add_parser("evaluate", help="align a reconstruction and append metrics")
    p.add_argument("--data", required=True)
    p.add_argument("--recon", required=True, help="reconstruction directory")
    p.add_argument("--out", required=True, help="metrics CSV (appended)")

    p = sub.add_parser("report", help="emit comparison table and plot data")
    p.add_argument("--metrics", nargs="+", required=True)
    p.add_argument("--trace", nargs="*", default=[])
    p.add_argument("--image", nargs="*", default=[],
                   help="reconstruction .npy files to render as 16-bit PGM")
    p.add_argument("--out", required=True, help="output directory")

    sub.add_parser("selftest", help="small end-to-end smoke test")
    return parser


def cmd_simulate(args) -> int:
    img = make_phantom(args.phantom, args.size, path=args.file)
    cfg = DistortionConfig(n=args.n, m=args.m, gamma=args.gamma, seed=args.seed)
    gt = synthesize(img, cfg)
    ds = dataio.Dataset(size=args.size, n=args.n, gamma=args.gamma,
                        m=args.m, seed=args.seed, noisy=gt.noisy_sinogram,
                        truth=gt)
    dataio.write_dataset(args.out, ds)
    from .geometry import support_radius
    from .simulate import empirical_sigma

    sigma = empirical_sigma(gt.clean_sinogram, args.gamma)
    margin = args.size / 2.0 - args.m - 2.0
    print(f"wrote {args.out}: S={args.size} N={args.n} M={args.m} "
          f"gamma={args.gamma} seed={args.seed}")
    print(f"sigma={sigma!r}")
    print(f"support radius {support_radius(img):.1f} <= margin {margin:.1f}")
    return 0


def _resolve_manifest(args, ds) -> dataio.RunManifest:
    # precedence: CLI flags > manifest file > built-in defaults
    manifest = dataio.read_manifest(args.manifest) if args.manifest \
        else dataio.RunManifest()
    manifest.method = args.method
    manifest.input = str(args.data)
    manifest.output_dir = str(args.out)
    manifest.seed = ds.seed
    for flag, key in (("t_max", "t_max"), ("n_trials", "n_trials"),
                      ("epsilon", "epsilon"), ("k_max", "k_max"),
                      ("kappa", "kappa")):
        value = getattr(args, flag)
        if value is not None:
            setattr(manifest, key, value)
    if args.delta_deg is not None:
        manifest.delta_deg = args.delta_deg
    if manifest.k_max is None and args.method == "ours":
        manifest.k_max = 2 * ds.m if ds.m > 0 else ds.size // 8
    return manifest


def _single_row_trace():
    from .altmin import IterationRecord, IterationTrace

    trace = IterationTrace()
    trace.records.append(IterationRecord(
        iteration=1, image_hash="", image_delta=0.0, angle_edge_hits=0,
        steps=("fbp",)))
    return trace


def cmd_reconstruct(args) -> int:
    ds = dataio.read_dataset(args.data)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = _resolve_manifest(args, ds)

    if args.method in ("oracle", "moments") and ds.truth is None:
        raise ConfigurationError(f"{args.method} requires ground truth in the dataset")

    scatter_rows = None
    if args.method == "blind":
        init = graphinit.init_geometry(ds.noisy, k_max=0, kappa=manifest.kappa)
        image = fbp(ds.noisy, init.angles)
        geom = init
        trace = _single_row_trace()
    elif args.method == "oracle":
        from .altmin import reconstruct_step

        true_shifts = np.round(ds.truth.projection_shifts).astype(np.int64)
        image = reconstruct_step(ds.noisy, true_shifts, ds.truth.angles)
        from .geometry import GeometryEstimate

        geom = GeometryEstimate(angles=ds.truth.angles, shifts=true_shifts)
        trace = _single_row_trace()
    elif args.method == "moments":
        refs = project_many(ds.truth.image, np.asarray(REFERENCE_ANGLES))
        rec = moments.moment_method_pipeline(ds.noisy, refs)
        image, geom = rec.image, rec.geometry
        trace = _single_row_trace()
        scatter_rows = ["true_angle,estimated_angle"] + [
            f"{dataio.format_float(float(t))},{dataio.format_float(float(e))}"
            for t, e in zip(ds.truth.angles, geom.angles)
        ]
    else:  # ours
        init = graphinit.init_geometry(ds.noisy, k_max=manifest.k_max,
                                       kappa=manifest.kappa)
        if args.dump_similarity:
            wm = graphinit.build_similarity(ds.noisy, manifest.k_max,
                                            kappa=manifest.kappa)
            emb = graphinit.laplacian_embed(wm)
            np.savetxt(out_dir / "similarity.csv", wm.w, delimiter=",")
            np.savetxt(out_dir / "embedding.csv", emb.psi, delimiter=",")
        cfg = AltMinConfig(t_max=manifest.t_max,
                           delta=math.radians(manifest.delta_deg),
                           n_trials=manifest.n_trials,
                           epsilon=manifest.epsilon,
                           k_max=manifest.k_max)
        truth = ds.truth if (args.trace_metrics and ds.truth is not None) else None
        hook = None
        if args.dump_every:
            def hook(t, img, every=args.dump_every, where=out_dir):
                if t % every == 0:
                    np.save(where / f"iter_{t:03d}.npy", img)
        image, geom, trace = run_altmin(ds.noisy, init, cfg, truth=truth,
                                        snapshot_hook=hook)

    np.save(out_dir / "recon.npy", image)
    dataio.atomic_write_text(out_dir / "geometry.csv", dataio.geometry_to_csv(geom))
    dataio.atomic_write_text(out_dir / "trace.csv", dataio.trace_to_csv(trace))
    dataio.atomic_write_text(out_dir / "manifest.resolved.txt", manifest.to_text())
    if scatter_rows is not None:
        dataio.atomic_write_text(out_dir / "angles_scatter.csv",
                                 "\n".join(scatter_rows) + "\n")
    print(f"wrote {out_dir}/recon.npy ({args.method})")
    return 0


def cmd_evaluate(args) -> int:
    ds = dataio.read_dataset(args.data)
    if ds.truth is None:
        raise ConfigurationError("evaluate requires ground truth in the dataset")
    recon_dir = Path(args.recon)
    image = np.load(recon_dir / "recon.npy")
    manifest = dataio.read_manifest(recon_dir / "manifest.resolved.txt")

    result = evaluate.align(image, ds.truth.image)
    mset = evaluate.metrics(result.aligned_image, ds.truth.image)
    mean_angle_err = None
    geom_path = recon_dir / "geometry.csv"
    if geom_path.exists():
        header, rows = dataio.read_csv(geom_path)
        est = np.array([float(r[header.index("angle")]) for r in rows])
        mean_angle_err, _, _ = evaluate.angle_error(est, ds.truth.angles)
    np.save(recon_dir / "aligned.npy", result.aligned_image)
    row = dataio.metrics_row(manifest.method, ds.gamma, ds.m, mset, mean_angle_err)
    dataio.append_metrics_row(args.out, row)
    print(row)
    return 0


def _format_table(rows: list[dict]) -> str:
    key = lambda r: (float(r["gamma"]), int(r["M"]))
    settings = sorted({key(r) for r in rows})
    present = [m for m in METHODS
               if any(r["method"] == m for r in rows)]
    head = ["gamma", "M"]
    for metric in ("rrmse", "ssim", "cc"):
        head.extend(f"{metric}/{m}" for m in present)
    lines = ["  ".join(f"{h:>12}" for h in head)]
    for gamma, m_val in settings:
        cells = [f"{gamma:>12g}", f"{m_val:>12d}"]
        for metric in ("rrmse", "ssim", "cc"):
            for method in present:
                match = [r for r in rows
                         if key(r) == (gamma, m_val) and r["method"] == method]
                cells.append(f"{float(match[-1][metric]):>12.3f}" if match
                             else f"{'-':>12}")
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows: list[dict] = []
    for path in args.metrics:
        header, raw = dataio.read_csv(path)
        expected = list(dataio.METRICS_COLUMNS)
        if header != expected:
            raise DataFormatError(f"{path}:1: expected header {expected}")
        rows.extend(dict(zip(header, r)) for r in raw)
    if not rows:
        raise DataFormatError("no metrics rows in the input set")
    table = _format_table(rows)
    dataio.atomic_write_text(out_dir / "table.txt", table)
    print(table, end="")

    for path in args.trace:
        header, raw = dataio.read_csv(path)
        for col in ("iteration", "rrmse", "ssim"):
            if col not in header:
                raise DataFormatError(f"{path}:1: missing column {col!r}")
        lines = ["iter,rrmse,ssim"]
        for r in raw:
            rec = dict(zip(header, r))
            lines.append(f"{rec['iteration']},{rec['rrmse']},{rec['ssim']}")
        stem = Path(path).stem
        dataio.atomic_write_text(out_dir / f"{stem}_curve.csv",
                                 "\n".join(lines) + "\n")

    for path in args.image:
        img = np.load(path)
        dataio.write_pgm16(out_dir / (Path(path).stem + ".pgm"), img)
    return 0


def cmd_selftest(args) -> int:
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        img = make_phantom("disks", 64)
        cfg = DistortionConfig(n=48, m=2, gamma=0.02, seed=11)
        gt = synthesize(img, cfg)
        ds = dataio.Dataset(size=64, n=48, gamma=0.02, m=2, seed=11,
                            noisy=gt.noisy_sinogram, truth=gt)
        dataio.write_dataset(tmp / "d.uvt", ds)
        back = dataio.read_dataset(tmp / "d.uvt")
        assert np.array_equal(back.noisy, gt.noisy_sinogram)
        print("dataset round trip: ok")

        init = graphinit.init_geometry(gt.noisy_sinogram, k_max=4)
        agreement = evaluate.circular_order_agreement(
            np.argsort(init.angles, kind="stable"), gt.angles)
        print(f"init circular agreement: {agreement:.3f}")

        image, geom, trace = run_altmin(
            gt.noisy_sinogram, init,
            AltMinConfig(t_max=3, n_trials=5, k_max=4))
        res = evaluate.align(image, gt.image)
        mset = evaluate.metrics(res.aligned_image, gt.image)
        print(f"altmin rrmse={mset.rrmse:.3f} cc={mset.cc:.3f} "
              f"iters={len(trace)}")
        assert mset.cc > 0.5, "selftest reconstruction quality too low"
    print("selftest: ok")
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "reconstruct": cmd_reconstruct,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DegeneracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

import numpy as np

from uvtomo import AltMinConfig, run_altmin
from uvtomo.evaluate import _wrap_pi
from uvtomo.graphinit import init_geometry
from uvtomo.simulate import DistortionConfig, synthesize


def rich_blobs(size=128, seed=3, n_blobs=25, rmin=0.03, rmax=0.10):
    rng = np.random.Generator(np.random.Philox(seed))
    aa = 4
    c = (size - 1) / 2.0
    coords = np.arange(size * aa) / aa - (aa - 1) / (2.0 * aa)
    x, y = np.meshgrid(coords - c, coords - c, indexing="ij")
    sup = 0.36 * size
    fine = np.zeros_like(x)
    for _ in range(n_blobs):
        r = rng.uniform(rmin, rmax) * sup
        ang = rng.uniform(0, 2 * np.pi)
        rad = rng.uniform(0, sup - r)
        cs, ct = rad * np.cos(ang), rad * np.sin(ang)
        val = rng.uniform(0.3, 1.0)
        mask = (x - cs) ** 2 + (y - ct) ** 2 <= r**2
        fine[mask] = np.maximum(fine[mask], val)
    img = fine.reshape(size, aa, size, aa).mean(axis=(1, 3))
    return img / img.max()


def run_case(img, label, n=360, m=5, seed=4):
    gt = synthesize(img, DistortionConfig(n=n, m=m, gamma=0.0, seed=seed))
    init = init_geometry(gt.noisy_sinogram, k_max=2 * m)
    rec, geom, tr = run_altmin(gt.noisy_sinogram, init,
                               AltMinConfig(t_max=30, epsilon=0.0,
                                            n_trials=21, k_max=2 * m))
    best = None
    for refl in (False, True):
        ref = -gt.angles if refl else gt.angles
        resid = geom.angles - ref
        delta = np.arctan2(np.sin(resid).mean(), np.cos(resid).mean())
        errs = np.abs(_wrap_pi(resid - delta))
        if best is None or errs.mean() < best[0].mean():
            best = (errs,)
    deg = np.degrees(best[0])
    resid = geom.shifts - gt.projection_shifts
    basis = np.stack([np.cos(gt.angles), np.sin(gt.angles)], axis=1)
    tau, *_ = np.linalg.lstsq(basis, resid, rcond=None)
    exact = np.mean(geom.shifts == np.round(gt.projection_shifts + basis @ tau))
    exact0 = np.mean(geom.shifts == np.round(gt.projection_shifts))
    print(f"{label}: ang mean={deg.mean():.2f} med={np.median(deg):.2f} "
          f"p90={np.percentile(deg,90):.2f} exact={exact0:.1%}/{exact:.1%} (raw/gauge)")


from probe10 import blobs
run_case(blobs(), "blobs10 (old)")
run_case(rich_blobs(seed=3), "rich25 s3")
run_case(rich_blobs(seed=9), "rich25 s9")
run_case(rich_blobs(seed=3, n_blobs=40, rmin=0.02, rmax=0.07), "rich40 s3")

import numpy as np

from uvtomo import AltMinConfig, circular_order_agreement, run_altmin
from uvtomo.evaluate import _wrap_pi
from uvtomo.graphinit import init_geometry
from uvtomo.simulate import DistortionConfig, synthesize


def ring_blobs(size=128, seed=3, n_ring=7, n_inner=3):
    rng = np.random.Generator(np.random.Philox(seed))
    aa = 4
    c = (size - 1) / 2.0
    coords = np.arange(size * aa) / aa - (aa - 1) / (2.0 * aa)
    x, y = np.meshgrid(coords - c, coords - c, indexing="ij")
    sup = 0.36 * size
    fine = np.zeros_like(x)
    for i in range(n_ring + n_inner):
        if i < n_ring:
            r = rng.uniform(0.10, 0.16) * sup
            rad = rng.uniform(0.68, 0.88) * sup - r
        else:
            r = rng.uniform(0.12, 0.20) * sup
            rad = rng.uniform(0.0, 0.45) * sup
        ang = rng.uniform(0, 2 * np.pi)
        cs, ct = rad * np.cos(ang), rad * np.sin(ang)
        val = rng.uniform(0.3, 1.0)
        mask = (x - cs) ** 2 + (y - ct) ** 2 <= r**2
        fine[mask] = np.maximum(fine[mask], val)
    img = fine.reshape(size, aa, size, aa).mean(axis=(1, 3))
    return img / img.max()


def full_case(img, label, n=360, m=5, seed=4):
    gt = synthesize(img, DistortionConfig(n=n, m=m, gamma=0.0, seed=seed))
    init = init_geometry(gt.noisy_sinogram, k_max=2 * m)
    ag = circular_order_agreement(np.argsort(init.angles, kind="stable"), gt.angles)
    rec, geom, _ = run_altmin(gt.noisy_sinogram, init,
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
    print(f"{label}: init_ag={ag:.3f} ang mean={deg.mean():.2f} "
          f"med={np.median(deg):.2f} p90={np.percentile(deg,90):.2f} "
          f"max={deg.max():.2f} exact={exact0:.1%}/{exact:.1%}")


for seed in (3, 5):
    img = ring_blobs(seed=seed)
    for dseed in (4, 8):
        full_case(img, f"ring s{seed} data{dseed}", seed=dseed)

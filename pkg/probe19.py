import numpy as np

from uvtomo import AltMinConfig, run_altmin
from uvtomo.evaluate import _wrap_pi
from uvtomo.graphinit import init_geometry
from uvtomo.simulate import DistortionConfig, synthesize
from probe10 import blobs

img = blobs()
gt = synthesize(img, DistortionConfig(n=360, m=5, gamma=0.0, seed=4))
init = init_geometry(gt.noisy_sinogram, k_max=10)


def analyze(geom, label):
    # global rotation/reflection alignment of angles
    best = None
    for refl in (False, True):
        ref = -gt.angles if refl else gt.angles
        resid = geom.angles - ref
        delta = np.arctan2(np.sin(resid).mean(), np.cos(resid).mean())
        errs = np.abs(_wrap_pi(resid - delta))
        if best is None or errs.mean() < best[0].mean():
            best = (errs, refl, delta)
    errs, refl, delta = best
    deg = np.degrees(errs)
    print(f"{label}: mean={deg.mean():.2f} med={np.median(deg):.2f} "
          f"p90={np.percentile(deg, 90):.2f} max={deg.max():.2f} refl={refl}")
    # shift gauge fit: alpha_hat ~ alpha + tau . n(theta)
    resid = geom.shifts - gt.projection_shifts
    basis = np.stack([np.cos(gt.angles), np.sin(gt.angles)], axis=1)
    tau, *_ = np.linalg.lstsq(basis, resid, rcond=None)
    fitted = gt.projection_shifts + basis @ tau
    exact_raw = np.mean(geom.shifts == np.round(gt.projection_shifts))
    exact_gauge = np.mean(geom.shifts == np.round(fitted))
    print(f"   tau={np.round(tau, 3)} exact_raw={exact_raw:.2%} "
          f"exact_gauge={exact_gauge:.2%}")


for cfg, label in (
    (AltMinConfig(t_max=30, epsilon=0.0, n_trials=21, k_max=10), "n21 d.5 T30"),
    (AltMinConfig(t_max=60, epsilon=0.0, n_trials=21, k_max=10), "n21 d.5 T60"),
    (AltMinConfig(t_max=60, epsilon=0.0, n_trials=21, delta=np.radians(0.25),
                  k_max=10), "n21 d.25 T60"),
):
    rec, geom, trace = run_altmin(gt.noisy_sinogram, init, cfg)
    analyze(geom, label)

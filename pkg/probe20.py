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
    best = None
    for refl in (False, True):
        ref = -gt.angles if refl else gt.angles
        resid = geom.angles - ref
        delta = np.arctan2(np.sin(resid).mean(), np.cos(resid).mean())
        errs = np.abs(_wrap_pi(resid - delta))
        if best is None or errs.mean() < best[0].mean():
            best = (errs, refl, delta)
    deg = np.degrees(best[0])
    resid = geom.shifts - gt.projection_shifts
    basis = np.stack([np.cos(gt.angles), np.sin(gt.angles)], axis=1)
    tau, *_ = np.linalg.lstsq(basis, resid, rcond=None)
    exact_gauge = np.mean(geom.shifts == np.round(gt.projection_shifts + basis @ tau))
    print(f"{label}: mean={deg.mean():.2f} med={np.median(deg):.2f} "
          f"p90={np.percentile(deg, 90):.2f} max={deg.max():.2f} "
          f"exact_gauge={exact_gauge:.2%}")
    return geom


# wide window single run
for n_trials in (41,):
    rec, geom, _ = run_altmin(gt.noisy_sinogram, init,
                              AltMinConfig(t_max=40, epsilon=0.0,
                                           n_trials=n_trials, k_max=10))
    analyze(geom, f"n{n_trials} d.5 T40")

# continuation schedule
stages = [
    AltMinConfig(t_max=30, epsilon=0.0, n_trials=21, k_max=10),
    AltMinConfig(t_max=20, epsilon=0.0, n_trials=11,
                 delta=np.radians(0.25), k_max=10),
    AltMinConfig(t_max=20, epsilon=0.0, n_trials=11,
                 delta=np.radians(0.125), k_max=10),
]
cur = init
import warnings
for i, cfg in enumerate(stages):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rec, cur, _ = run_altmin(gt.noisy_sinogram, cur, cfg)
    analyze(cur, f"stage{i+1}")

import time

import numpy as np

from uvtomo import AltMinConfig, run_altmin
from uvtomo.graphinit import init_geometry
from uvtomo.simulate import DistortionConfig, synthesize
from probe10 import blobs

img = blobs()
gt = synthesize(img, DistortionConfig(n=360, m=5, gamma=0.0, seed=4))
init = init_geometry(gt.noisy_sinogram, k_max=10)

t0 = time.time()
cfg = AltMinConfig(t_max=100, epsilon=0.0, k_max=10)
rec, geom, trace = run_altmin(gt.noisy_sinogram, init, cfg, truth=gt)
print(f"ran {len(trace)} iterations in {time.time()-t0:.0f}s")
for r in trace.records:
    if r.iteration in (1, 2, 3, 5, 8, 12, 17, 25, 35, 50, 70, 100):
        print(f"t={r.iteration:3d} delta={r.image_delta:9.3f} rrmse={r.rrmse:.3f} "
              f"cc={r.cc:.3f} ang={r.mean_angle_err_deg:6.3f} "
              f"shift_mae={r.mean_shift_err:.3f} edge={r.angle_edge_hits}")

import numpy as np

from uvtomo import AltMinConfig, run_altmin
from uvtomo.geometry import GeometryEstimate
from uvtomo.graphinit import init_geometry
from uvtomo.simulate import DistortionConfig, synthesize
from probe10 import blobs

img = blobs()
gt = synthesize(img, DistortionConfig(n=360, m=5, gamma=0.0, seed=4))


def show(label, trace, its=(1, 2, 3, 5, 10, 20, 30)):
    for r in trace.records:
        if r.iteration in its:
            print(f"  {label} t={r.iteration:3d} rrmse={r.rrmse:.3f} "
                  f"ang={r.mean_angle_err_deg:6.3f} shift_mae={r.mean_shift_err:.3f} "
                  f"edge={r.angle_edge_hits}")


# A: init at truth
init_truth = GeometryEstimate(angles=gt.angles, shifts=np.zeros(360, dtype=np.int64))
_, _, tr = run_altmin(gt.noisy_sinogram, init_truth,
                      AltMinConfig(t_max=30, epsilon=0.0, k_max=10), truth=gt)
print("A: init=truth angles")
show("A", tr)

# B: wider window n=21
init = init_geometry(gt.noisy_sinogram, k_max=10)
_, _, tr = run_altmin(gt.noisy_sinogram, init,
                      AltMinConfig(t_max=30, epsilon=0.0, n_trials=21, k_max=10),
                      truth=gt)
print("B: laplacian init, n=21 (window +-5deg)")
show("B", tr)

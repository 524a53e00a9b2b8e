import numpy as np
from scipy.ndimage import gaussian_filter

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import build_similarity, circular_sort, init_geometry, laplacian_embed
from uvtomo.simulate import DistortionConfig, synthesize
from probe10 import blobs

imgs = {
    "shepp_b": gaussian_filter(make_phantom("shepp_logan", 128), 1.2),
    "shepp": make_phantom("shepp_logan", 128),
    "blobs": blobs(),
}

print("=== local mode with noise-floor subtraction ===")
for iname, img in imgs.items():
    # clean, various N
    for n in (200, 360, 500):
        res = []
        for seed in (5, 7, 11):
            rng = np.random.default_rng(seed)
            th = rng.uniform(0, 2 * np.pi, n)
            sino = project_many(img, th)
            try:
                geom = init_geometry(sino, k_max=0)
                ag = circular_order_agreement(np.argsort(geom.angles, kind="stable"), th)
            except Exception as e:
                ag = float("nan")
            res.append(f"s{seed}:{ag:.3f}")
        print(f"{iname:8s} clean N={n}: " + " ".join(res))
    # noisy
    for gamma, m in ((0.05, 0), (0.06, 0)):
        res = []
        for seed in (1, 2, 3):
            gt = synthesize(img, DistortionConfig(n=500, m=m, gamma=gamma, seed=seed))
            try:
                geom = init_geometry(gt.noisy_sinogram, k_max=0)
                ag = circular_order_agreement(
                    np.argsort(geom.angles, kind="stable"), gt.angles)
            except Exception:
                ag = float("nan")
            res.append(f"s{seed}:{ag:.3f}")
        print(f"{iname:8s} g={gamma} N=500: " + " ".join(res))

print("=== shifted data: shift-aware vs k_max=0 (blurred shepp, N=500) ===")
img = imgs["shepp_b"]
for gamma, m in ((0.0, 10), (0.05, 5), (0.06, 10)):
    gt = synthesize(img, DistortionConfig(n=500, m=m, gamma=gamma, seed=1))
    for km, label in ((2 * m, "aware"), (0, "k0")):
        try:
            geom = init_geometry(gt.noisy_sinogram, k_max=km)
            ag = circular_order_agreement(
                np.argsort(geom.angles, kind="stable"), gt.angles)
        except Exception as e:
            ag = float("nan")
        print(f"g={gamma} M={m} {label}: {ag:.3f}")

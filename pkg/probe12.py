import numpy as np
from scipy.ndimage import gaussian_filter

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import (SimilarityMatrix, build_similarity,
                              circular_sort, laplacian_embed)
from uvtomo.simulate import DistortionConfig, synthesize
from probe10 import blobs


def agree_kappa(sino, th, kappa):
    base = build_similarity(sino, k_max=0, kappa=kappa)
    emb = laplacian_embed(base)
    return circular_order_agreement(circular_sort(emb), th)


def d1nn_scale(sino):
    base = build_similarity(sino, k_max=0)
    d2 = -np.log(np.clip(base.w, 1e-300, None)) / base.kappa
    np.fill_diagonal(d2, np.inf)
    return float(np.median(d2.min(axis=1))), d2


imgs = {
    "shepp": make_phantom("shepp_logan", 128),
    "shepp_b": gaussian_filter(make_phantom("shepp_logan", 128), 1.2),
    "blobs": blobs(),
}

print("=== noiseless, centered, N=500, alpha scan over seeds ===")
for iname, img in imgs.items():
    for seed in (7, 11, 23):
        rng = np.random.default_rng(seed)
        th = rng.uniform(0, 2 * np.pi, 500)
        sino = project_many(img, th)
        d1, _ = d1nn_scale(sino)
        out = []
        for alpha in (4, 8, 12, 16, 24, 40):
            try:
                ag = agree_kappa(sino, th, 1.0 / (alpha * d1))
            except Exception:
                ag = float("nan")
            out.append(f"a{alpha}:{ag:.3f}")
        print(f"{iname:8s} seed{seed:2d} " + " ".join(out))

print("=== noisy gamma=0.06, M=0, N=500 (noise robustness of ordering) ===")
for iname, img in imgs.items():
    for seed in (7, 11):
        gt = synthesize(img, DistortionConfig(n=500, m=0, gamma=0.06, seed=seed))
        d1, _ = d1nn_scale(gt.noisy_sinogram)
        out = []
        for alpha in (4, 8, 12, 16, 24):
            try:
                ag = agree_kappa(gt.noisy_sinogram, gt.angles, 1.0 / (alpha * d1))
            except Exception:
                ag = float("nan")
            out.append(f"a{alpha}:{ag:.3f}")
        print(f"{iname:8s} seed{seed:2d} " + " ".join(out))

import numpy as np
from scipy.ndimage import gaussian_filter

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import build_similarity, circular_sort, laplacian_embed
from uvtomo.simulate import DistortionConfig, synthesize
from probe10 import blobs


def agree_kappa(sino, th, kappa):
    base = build_similarity(sino, k_max=0, kappa=kappa)
    emb = laplacian_embed(base)
    return circular_order_agreement(circular_sort(emb), th)


def d2_matrix(sino):
    base = build_similarity(sino, k_max=0)
    return -np.log(np.clip(base.w, 1e-300, None)) / base.kappa


imgs = {
    "shepp_b": gaussian_filter(make_phantom("shepp_logan", 128), 1.2),
    "blobs": blobs(),
}

cases = []
for iname, img in imgs.items():
    for n in (200, 360, 500):
        for seed in (7, 11):
            rng = np.random.default_rng(seed)
            th = rng.uniform(0, 2 * np.pi, n)
            cases.append((f"{iname} N={n} s{seed} clean", project_many(img, th), th))
    for seed in (7, 11):
        gt = synthesize(img, DistortionConfig(n=500, m=0, gamma=0.06, seed=seed))
        cases.append((f"{iname} N=500 s{seed} g.06", gt.noisy_sinogram, gt.angles))

for label, sino, th in cases:
    d2 = d2_matrix(sino)
    n = d2.shape[0]
    iu = np.triu_indices(n, k=1)
    vals = d2[iu]
    out = []
    for q in (0.01, 0.02, 0.04, 0.08):
        kappa = 1.0 / np.quantile(vals, q)
        try:
            ag = agree_kappa(sino, th, kappa)
        except Exception:
            ag = float("nan")
        out.append(f"q{q}:{ag:.3f}")
    print(f"{label:28s} " + " ".join(out))

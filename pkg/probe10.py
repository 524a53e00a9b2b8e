import numpy as np
from scipy.ndimage import gaussian_filter

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import (SimilarityMatrix, build_similarity,
                              circular_sort, laplacian_embed)


def blobs(size=128, seed=3, n_blobs=10):
    rng = np.random.Generator(np.random.Philox(seed))
    aa = 4
    c = (size - 1) / 2.0
    coords = np.arange(size * aa) / aa - (aa - 1) / (2.0 * aa)
    x, y = np.meshgrid(coords - c, coords - c, indexing="ij")
    sup = 0.36 * size
    fine = np.zeros_like(x)
    for _ in range(n_blobs):
        r = rng.uniform(0.06, 0.18) * sup
        ang = rng.uniform(0, 2 * np.pi)
        rad = rng.uniform(0, sup - r)
        cs, ct = rad * np.cos(ang), rad * np.sin(ang)
        val = rng.uniform(0.3, 1.0)
        mask = (x - cs) ** 2 + (y - ct) ** 2 <= r**2
        fine[mask] = np.maximum(fine[mask], val)
    img = fine.reshape(size, aa, size, aa).mean(axis=(1, 3))
    return img / img.max()


def order_quality(sino, th, kappa):
    base = build_similarity(sino, k_max=0, kappa=kappa)
    emb = laplacian_embed(base)
    order = circular_sort(emb)
    return circular_order_agreement(order, th)


imgs = {
    "shepp": make_phantom("shepp_logan", 128),
    "shepp_b": gaussian_filter(make_phantom("shepp_logan", 128), 1.2),
    "disks": make_phantom("disks", 128),
    "blobs": blobs(),
}

protocols = {}
protocols["grid200"] = 2 * np.pi * np.arange(200) / 200
rng = np.random.default_rng(5)
protocols["rand200"] = rng.uniform(0, 2 * np.pi, 200)
rng = np.random.default_rng(7)
protocols["rand500"] = rng.uniform(0, 2 * np.pi, 500)

for iname, img in imgs.items():
    for pname, th in protocols.items():
        sino = project_many(img, th)
        # nearest-neighbor distance scale
        base = build_similarity(sino, k_max=0)
        d2 = -np.log(np.clip(base.w, 1e-300, None)) / base.kappa
        np.fill_diagonal(d2, np.inf)
        d1 = np.median(d2.min(axis=1))
        out = []
        for alpha in (2.0, 4.0, 8.0, 16.0):
            try:
                ag = order_quality(sino, th, kappa=1.0 / (alpha * d1))
            except Exception as e:
                ag = float("nan")
            out.append(f"a{alpha:g}:{ag:.3f}")
        print(f"{iname:8s} {pname:8s} d1nn2={d1:8.2f}  " + "  ".join(out))

import numpy as np
from scipy.ndimage import gaussian_filter

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import (SimilarityMatrix, build_similarity,
                              circular_sort, laplacian_embed)
from probe10 import blobs


def selftune_w(d2, k=7):
    n = d2.shape[0]
    dd = d2 + np.diag(np.full(n, np.inf))
    sig2 = np.sort(dd, axis=1)[:, k - 1]
    sig = np.sqrt(np.maximum(sig2, 1e-30))
    w = np.exp(-d2 / (sig[:, None] * sig[None, :]))
    np.fill_diagonal(w, 1.0)
    return w


def agree(w, th):
    wm = SimilarityMatrix(w=w, kappa=1.0,
                          aligned_shift=np.zeros(w.shape, dtype=int))
    emb = laplacian_embed(wm)
    return circular_order_agreement(circular_sort(emb), th)


imgs = {
    "shepp": make_phantom("shepp_logan", 128),
    "shepp_b": gaussian_filter(make_phantom("shepp_logan", 128), 1.2),
    "disks": make_phantom("disks", 128),
    "blobs": blobs(),
    "shepp256": make_phantom("shepp_logan", 256),
}

protocols = {}
protocols["grid200"] = 2 * np.pi * np.arange(200) / 200
rng = np.random.default_rng(5)
protocols["rand200"] = rng.uniform(0, 2 * np.pi, 200)
rng = np.random.default_rng(7)
protocols["rand500"] = rng.uniform(0, 2 * np.pi, 500)

for iname, img in imgs.items():
    row = []
    for pname, th in protocols.items():
        sino = project_many(img, th)
        base = build_similarity(sino, k_max=0)
        d2 = -np.log(np.clip(base.w, 1e-300, None)) / base.kappa
        for k in (5, 7, 12):
            try:
                ag = agree(selftune_w(d2, k), th)
            except Exception:
                ag = float("nan")
            row.append(f"{pname}/k{k}:{ag:.3f}")
    print(f"{iname:9s} " + "  ".join(row))

# exact mirror floor for shepp-logan at both sizes
for size in (128, 256):
    img = make_phantom("shepp_logan", size)
    ths = np.array([0.3, 0.9, 1.4, 2.2])
    pa = project_many(img, ths)
    pb = project_many(img, np.pi - ths)
    floor = np.linalg.norm(pa - pb, axis=1)
    # adjacency scale at 1.8 deg
    pc = project_many(img, ths + np.deg2rad(1.8))
    adj = np.linalg.norm(pa - pc, axis=1)
    print(f"S={size}: mirror floor {np.round(floor, 2)} vs adj(1.8deg) {np.round(adj, 2)}")

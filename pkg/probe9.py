import numpy as np

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import (SimilarityMatrix, build_similarity,
                              circular_sort, laplacian_embed)

img = make_phantom("disks", 128)
n = 200
th = 2 * np.pi * np.arange(n) / n  # grid: true order = identity
sino = project_many(img, th)
base = build_similarity(sino, k_max=0)
d2 = -np.log(np.clip(base.w, 1e-300, None)) / base.kappa

keep = np.zeros_like(base.w, dtype=bool)
for i in range(n):
    idx = np.argsort(base.w[i])[::-1]
    idx = idx[idx != i][:8]
    keep[i, idx] = True
keep |= keep.T
w = np.where(keep, base.w, 0.0)
np.fill_diagonal(w, 1.0)

# neighbor composition: how far in index space do kept edges reach?
reach = []
bad_edges = []
for i in range(n):
    nb = np.nonzero(keep[i])[0]
    circ = np.minimum((nb - i) % n, (i - nb) % n)
    reach.append(circ.max())
    for j, cdist in zip(nb, circ):
        if cdist > 12:
            bad_edges.append((i, j, cdist))
print("max index reach of kept edges per node: p50/p90/max:",
      np.percentile(reach, 50), np.percentile(reach, 90), np.max(reach))
print("num far edges (>12 steps):", len(bad_edges), "->", bad_edges[:12])

wm = SimilarityMatrix(w=w, kappa=base.kappa, aligned_shift=base.aligned_shift)
emb = laplacian_embed(wm)
order = circular_sort(emb)
print("agreement:", circular_order_agreement(order, th))
rank = np.empty(n, dtype=int)
rank[order] = np.arange(n)
print("estimated rank sequence along true order:")
print(rank.reshape(10, 20))
deg = w.sum(axis=1)
inv = 1 / np.sqrt(deg)
lsym = -(w * inv[:, None]) * inv[None, :]
np.fill_diagonal(lsym, lsym.diagonal() + 1.0)
vals = np.linalg.eigvalsh(lsym)
print("eigenvalues:", vals[:8])

import numpy as np

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import (SimilarityMatrix, assign_angles, build_similarity,
                              circular_sort, laplacian_embed)

rng = np.random.default_rng(5)
th = rng.uniform(0, 2 * np.pi, 200)
img = make_phantom("disks", 128)
sino = project_many(img, th)
base = build_similarity(sino, k_max=0)
d2 = -np.log(np.clip(base.w, 1e-300, None)) / base.kappa

kappa = 8e-4
w = np.exp(-kappa * d2)
np.fill_diagonal(w, 1.0)
wm = SimilarityMatrix(w=w, kappa=kappa, aligned_shift=base.aligned_shift)
emb = laplacian_embed(wm)

deg = w.sum(axis=1)
inv_sqrt = 1.0 / np.sqrt(deg)
l_sym = -(w * inv_sqrt[:, None]) * inv_sqrt[None, :]
np.fill_diagonal(l_sym, l_sym.diagonal() + 1.0)
vals = np.linalg.eigvalsh(l_sym)
print("smallest 6 eigenvalues:", vals[:6])
print("degree range:", deg.min(), deg.max())

for nm, ref in (("cos", np.cos(th)), ("sin", np.sin(th)),
                ("cos2", np.cos(2 * th)), ("sin2", np.sin(2 * th))):
    c0 = np.corrcoef(emb.psi[:, 0], ref)[0, 1]
    c1 = np.corrcoef(emb.psi[:, 1], ref)[0, 1]
    print(f"corr psi with {nm}: {c0:+.3f} {c1:+.3f}")

order = circular_sort(emb)
print("my agreement:", circular_order_agreement(order, th))

# independent oracle: sklearn SpectralEmbedding on the same W
from sklearn.manifold import SpectralEmbedding

se = SpectralEmbedding(n_components=2, affinity="precomputed")
psi_sk = se.fit_transform(w)
for nm, ref in (("cos", np.cos(th)), ("sin", np.sin(th)),
                ("cos2", np.cos(2 * th)), ("sin2", np.sin(2 * th))):
    c0 = np.corrcoef(psi_sk[:, 0], ref)[0, 1]
    c1 = np.corrcoef(psi_sk[:, 1], ref)[0, 1]
    print(f"sklearn corr {nm}: {c0:+.3f} {c1:+.3f}")
ang_sk = np.arctan2(psi_sk[:, 0], psi_sk[:, 1])
print("sklearn agreement:", circular_order_agreement(np.argsort(ang_sk), th))

# how bad are the largest angular gaps?
srt = np.sort(th)
gaps = np.diff(np.concatenate([srt, [srt[0] + 2 * np.pi]]))
print("largest gaps (deg):", np.degrees(np.sort(gaps)[-5:]))

# embedding angle vs true angle, sorted: count local inversions of my order
est_rank = np.empty(200, dtype=int)
est_rank[order] = np.arange(200)
true_order = np.argsort(th)
seq = est_rank[true_order]
fwd = np.sum(np.diff(seq) % 200 == 1)
print("adjacent-in-truth pairs adjacent in estimate:", fwd, "/ 199")

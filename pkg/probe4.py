import numpy as np

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import (SimilarityMatrix, build_similarity,
                              circular_sort, laplacian_embed)

rng = np.random.default_rng(5)
th = rng.uniform(0, 2 * np.pi, 200)

# sanity: perfect circle kernel on the same random angles
dang = np.abs(np.mod(th[:, None] - th[None, :] + np.pi, 2 * np.pi) - np.pi)
w = np.exp(-(dang / np.deg2rad(10.0)) ** 2)
wm = SimilarityMatrix(w=w, kappa=1.0, aligned_shift=np.zeros((200, 200), dtype=int))
emb = laplacian_embed(wm)
order = circular_sort(emb)
print("ideal circle kernel agreement:", round(circular_order_agreement(order, th), 4))

for name in ("disks", "shepp_logan"):
    img = make_phantom(name, 128)
    sino = project_many(img, th)
    base = build_similarity(sino, k_max=0)
    d2 = -np.log(np.clip(base.w, 1e-300, None)) / base.kappa
    d = np.sqrt(d2)
    # binned distance profile vs angular separation
    bins = np.linspace(0, np.pi, 13)
    prof = []
    for lo, hi in zip(bins[:-1], bins[1:]):
        mask = (dang >= lo) & (dang < hi)
        prof.append(np.median(d[mask]) if mask.any() else np.nan)
    print(f"{name}: d profile by dtheta bin (deg {np.degrees(bins[:-1]).astype(int)}):")
    print("  ", np.round(prof, 1))
    # 5-NN angular composition
    nn_open = 0
    anti = 0
    for i in range(200):
        idx = np.argsort(d[i])
        idx = idx[idx != i][:5]
        seps = dang[i, idx]
        nn_open += np.sum(seps < np.deg2rad(15))
        anti += np.sum(seps > np.deg2rad(150))
    print(f"  5NN: {nn_open/1000:.2%} within 15 deg, {anti/1000:.2%} beyond 150 deg")

import numpy as np

from uvtomo import circular_order_agreement, make_phantom, project_many
from uvtomo.graphinit import (SimilarityMatrix, build_similarity,
                              circular_sort, laplacian_embed)


def agreement_of(w, base, true_angles):
    wm = SimilarityMatrix(w=w, kappa=base.kappa, aligned_shift=base.aligned_shift)
    emb = laplacian_embed(wm)
    order = circular_sort(emb)
    return circular_order_agreement(order, true_angles), emb


rng = np.random.default_rng(5)
true_angles = rng.uniform(0, 2 * np.pi, 200)

for name in ("disks", "shepp_logan"):
    img = make_phantom(name, 128)
    sino = project_many(img, true_angles)
    base = build_similarity(sino, k_max=0)
    ag, emb = agreement_of(base.w, base, true_angles)
    th = true_angles
    cors = {nm: (np.corrcoef(emb.psi[:, 0], ref)[0, 1],
                 np.corrcoef(emb.psi[:, 1], ref)[0, 1])
            for nm, ref in (("cos", np.cos(th)), ("sin", np.sin(th)),
                            ("cos2", np.cos(2 * th)), ("sin2", np.sin(2 * th)))}
    print(f"{name}: agreement={ag:.4f}")
    for nm, (c0, c1) in cors.items():
        print(f"   corr psi with {nm}: {c0:+.3f} {c1:+.3f}")

# ridge removal experiment on shepp-logan: zero out W between near-mirror pairs
img = make_phantom("shepp_logan", 128)
sino = project_many(img, true_angles)
base = build_similarity(sino, k_max=0)
th = true_angles
mir = np.mod(np.pi - th[None, :], 2 * np.pi)
dmir = np.abs(np.mod(th[:, None] - mir + np.pi, 2 * np.pi) - np.pi)
ridge = dmir < np.deg2rad(12)
w = base.w.copy()
w[ridge] = np.exp(-base.kappa * 2000.0)  # pretend mirror pairs are far
np.fill_diagonal(w, 1.0)
w = np.maximum(w, w.T)
ag, _ = agreement_of(w, base, true_angles)
print("shepp_logan with mirror ridge suppressed:", round(ag, 4))

# kappa x mult on the ridge-suppressed version
d2 = -np.log(np.clip(base.w, 1e-300, None)) / base.kappa
for mult in (3, 10):
    w2 = np.exp(-base.kappa * mult * d2)
    w2[ridge] = 0.0
    np.fill_diagonal(w2, 1.0)
    w2 = np.maximum(w2, w2.T)
    ag, _ = agreement_of(w2, base, true_angles)
    print(f"suppressed + kappa x{mult}: {ag:.4f}")

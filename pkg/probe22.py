import numpy as np

from uvtomo import circular_order_agreement
from uvtomo.graphinit import init_geometry
from uvtomo.simulate import DistortionConfig, synthesize
import uvtomo.graphinit as gi
from probe21 import rich_blobs
from probe10 import blobs


def init_ag(img, label, n=360, m=5, seed=4, q=None):
    gt = synthesize(img, DistortionConfig(n=n, m=m, gamma=0.0, seed=seed))
    old = gi.LOCAL_KAPPA_QUANTILE
    if q is not None:
        gi.LOCAL_KAPPA_QUANTILE = q
    try:
        init = init_geometry(gt.noisy_sinogram, k_max=2 * m)
        ag = circular_order_agreement(np.argsort(init.angles, kind="stable"),
                                      gt.angles)
    except Exception as e:
        ag = float("nan")
    finally:
        gi.LOCAL_KAPPA_QUANTILE = old
    print(f"{label} q={q or old}: init agreement={ag:.3f}")


init_ag(blobs(), "blobs10")
for q in (None, 0.02, 0.05):
    init_ag(rich_blobs(seed=3), "rich25", q=q)
for nb, rmin, rmax in ((15, 0.05, 0.14), (18, 0.04, 0.12)):
    img = rich_blobs(seed=3, n_blobs=nb, rmin=rmin, rmax=rmax)
    init_ag(img, f"blobs{nb}")

import numpy as np

from uvtomo import fbp, make_phantom, project_many

img = make_phantom("shepp_logan", 128)
angles = np.linspace(0, 2 * np.pi, 720, endpoint=False)
sino = project_many(img, angles)
rec = fbp(sino, angles)

scale = float((rec * img).sum() / (img * img).sum())
print("projection of energy onto truth (scale):", scale)
resid = np.linalg.norm(rec - scale * img) / np.linalg.norm(img)
print("rrmse after optimal scale:", resid)
print("rrmse raw:", np.linalg.norm(rec - img) / np.linalg.norm(img))

# uniform disk scale check
c = 63.5
yy, xx = np.meshgrid(np.arange(128) - c, np.arange(128) - c, indexing="ij")
disk = (xx**2 + yy**2 <= 30**2).astype(float)
sino_d = project_many(disk, angles)
rec_d = fbp(sino_d, angles)
inner = xx**2 + yy**2 <= 20**2
print("disk recon mean inside (should be ~1):", rec_d[inner].mean())

# error structure: interior vs exterior of support
supp = xx**2 + yy**2 <= 44**2
err = rec - img
print("err norm inside supp:", np.linalg.norm(err[supp]) / np.linalg.norm(img))
print("err norm outside supp:", np.linalg.norm(err[~supp]) / np.linalg.norm(img))

# skimage reference on the same phantom
try:
    from skimage.transform import iradon, radon

    th_deg = np.linspace(0.0, 180.0, 360, endpoint=False)
    sk_sino = radon(img, theta=th_deg, circle=False)
    sk_rec = iradon(sk_sino, theta=th_deg, filter_name="ramp", circle=False)
    # iradon circle=False output is padded; crop center
    h = sk_rec.shape[0]
    lo = (h - 128) // 2
    sk_rec = sk_rec[lo:lo + 128, lo:lo + 128]
    print("skimage roundtrip rrmse:", np.linalg.norm(sk_rec - img) / np.linalg.norm(img))
except Exception as e:
    print("skimage failed:", e)

"""
Ramsey readout and photon shot noise
====================================

Simulate photon counts from a Ramsey sequence and compare the spread of the
field estimate with the analytic sensitivity.
"""

import math

import numpy as np

import nvsk
from nvsk.readout import contrast_and_navg

# bright state gives a photons per shot on average, dark state b
a, b = 2.0, 1.0
t2star, t_o = 2e-6, 1e-6
contrast, n_avg = contrast_and_navg(a, b)
print("contrast", contrast, "mean photons", n_avg)

# best free-precession time once readout overhead is paid
tau = nvsk.optimal_tau(t2star, 1.0, t_o)
print("optimal tau [us]", tau * 1e6)

shots = 200000
counts = nvsk.simulate_ramsey_counts(0.0, tau, nvsk.ReadoutModel(a, b), shots, 7,
                                     math.pi / 2, t2star, 1.0)
cal = nvsk.Calibration(a, b, tau, math.pi / 2, math.exp(-tau / t2star))
est = nvsk.field_estimates(counts, cal)

params = nvsk.ProtocolParams(tau_s=tau, t_i_s=t_o, contrast=contrast, n_avg=n_avg)
rep = nvsk.eta_ramsey_exact(params, t2star)
pred = rep.eta_T_per_sqrtHz / math.sqrt(shots * (tau + t_o))
print("empirical std of mean [T]", est.std(ddof=1) / math.sqrt(shots))
print("predicted               [T]", pred)
for name, val in rep.factors.items():
    print(f"  {name:>20s} {val:.4g}")

# readout noise grows quickly as contrast drops
for c in np.logspace(-3, -1, 5):
    print(f"C={c:.4f} sigma_R={nvsk.sigma_r_from_contrast(c, 0.01):.1f}")

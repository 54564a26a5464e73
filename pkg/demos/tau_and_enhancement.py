"""
Interrogation time and coherence gains
======================================

With overhead the optimal tau drifts from T2*/2 toward T2*, and the payoff of
a longer T2* moves from sqrt(r) toward r.
"""

import numpy as np

import nvsk

t2 = 1e-6
for to in (0.0, 1e-7, 1e-6, 1e-5, 1e-4):
    print(f"t_O={to:.0e}  tau/T2* p=1 {nvsk.optimal_tau(t2, 1, to) / t2:.4f}"
          f"  p=2 {nvsk.optimal_tau(t2, 2, to) / t2:.4f}")

r = 10.0
for to in np.logspace(-8, -3, 6):
    e = nvsk.enhancement(r * t2, t2, to)
    print(f"t_O={to:.0e}  gain {e:.3f}  (sqrt r {np.sqrt(r):.3f}, r {r:.0f})")

# dynamical decoupling against a bath with T2 = T_B
t2_echo = 1e-4
for s in (0.5, 2 / 3):
    print(f"s={s:.3f} k_opt={nvsk.k_opt(t2_echo, t2_echo, 1.0, s)}")

"""
Annealing and irradiation
=========================

How far vacancies wander during an anneal, and what electron dose is needed
to create them.
"""

import nvsk

for temp_c in (700, 800, 900, 1000):
    d = nvsk.vacancy_diffusion(temp_c + 273.15, 2 * 3600)
    print(f"{temp_c} C, 2 h: r_rms {d['r_rms_m'] * 1e6:.3f} um"
          f" (band {d['r_rms_min_m'] * 1e6:.3g} to {d['r_rms_max_m'] * 1e6:.3g})")

for n in (1.0, 10.0, 100.0):
    print(f"[N] {n:>5} ppm -> dose {nvsk.irradiation_dose(n):.3e} e/cm^2")

ip = nvsk.init_power(1.76e14, 3, 1e-6, 532e-9)
print(f"optical init: {ip['energy_J'] * 1e6:.1f} uJ per pulse, {ip['power_W']:.1f} W")

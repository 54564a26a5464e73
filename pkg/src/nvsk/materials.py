"""Vacancy diffusion during annealing and electron-irradiation dose."""

import math

from .constants import constants, PPM_TO_CM3
from .errors import ValidationError

EA_BAND_EV = 0.3


def vacancy_diffusion(temp_k, duration_s, d0_m2s=1.6e-7, ea_ev=2.3):
    """Arrhenius diffusion constant and r_rms = sqrt(6 D t).

    ``band`` holds (D, r_rms) at E_a + 0.3 eV and E_a - 0.3 eV.
    """
    if not temp_k > 0:
        raise ValidationError("temp_k", "must be > 0")
    if not duration_s >= 0:
        raise ValidationError("duration_s", "must be >= 0")
    k = constants()
    kt = k.k_B * temp_k / k.e

    def at(ea):
        d = d0_m2s * math.exp(-ea / kt)
        return d, math.sqrt(6 * d * duration_s)

    d, r = at(ea_ev)
    lo, hi = at(ea_ev + EA_BAND_EV), at(ea_ev - EA_BAND_EV)
    return {"D_m2s": d, "r_rms_m": r,
            "D_min_m2s": lo[0], "D_max_m2s": hi[0],
            "r_rms_min_m": lo[1], "r_rms_max_m": hi[1]}


def irradiation_dose(n_total_ppm, vacancy_yield_per_e_per_um=2e-4, recombination_frac=0.4,
                     nitrogens_per_nv=2.0):
    """Electron dose (cm^-2) leaving [N]/nitrogens_per_nv vacancies."""
    if not (n_total_ppm > 0 and vacancy_yield_per_e_per_um > 0 and nitrogens_per_nv > 0):
        raise ValidationError("n_total_ppm", "inputs must be > 0")
    if not 0 <= recombination_frac < 1:
        raise ValidationError("recombination_frac", "must lie in [0, 1)")
    target = n_total_ppm * PPM_TO_CM3 / nitrogens_per_nv
    per_cm = vacancy_yield_per_e_per_um * 1e4 * (1 - recombination_frac)
    return target / per_cm

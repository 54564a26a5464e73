"""Physical constants and scaling coefficients.

Fundamental constants come from CODATA via :mod:`scipy.constants`.
NV ground-state values follow the usual compiled tables (Felton et al.
for the hyperfine terms, Van Oort and Glasbeek for the dipole couplings).
"""

from dataclasses import dataclass
from functools import lru_cache
import math

from scipy import constants as _sc

# 1 ppm of carbon lattice sites in cm^-3
PPM_TO_CM3 = 1.76e17
# natural abundance of 13C in ppm
C13_NATURAL_PPM = 10700.0
# temperature shift of D (Hz/K)
DD_DT = -74e3
# nuclear g-factors (standard tabulated values, not part of the NV tables)
G_N14 = 0.403761
G_N15 = -0.566378


@dataclass(frozen=True)
class PhysicalConstants:
    g_e: float
    mu_B: float
    mu_N: float
    h: float
    hbar: float
    k_B: float
    c: float
    e: float
    D: float
    A_par_14N: float
    A_perp_14N: float
    P_14N: float
    A_par_15N: float
    A_perp_15N: float
    d_par: float
    d_perp: float

    @property
    def gamma_hz_per_t(self):
        """Electron gyromagnetic ratio g_e mu_B / h in Hz/T."""
        return self.g_e * self.mu_B / self.h

    @property
    def gamma_rad_per_t(self):
        """g_e mu_B / hbar in rad/(s T)."""
        return self.g_e * self.mu_B / self.hbar


@lru_cache(maxsize=None)
def constants():
    """Return the fixed constant set (same object on every call)."""
    return PhysicalConstants(
        g_e=2.003,
        mu_B=_sc.physical_constants["Bohr magneton"][0],
        mu_N=_sc.physical_constants["nuclear magneton"][0],
        h=_sc.h,
        hbar=_sc.hbar,
        k_B=_sc.k,
        c=_sc.c,
        e=_sc.e,
        D=2.870e9,
        A_par_14N=-2.14e6,
        A_perp_14N=-2.70e6,
        P_14N=-5.01e6,
        A_par_15N=3.03e6,
        A_perp_15N=3.65e6,
        d_par=3.5e-3,
        d_perp=0.17,
    )


@dataclass(frozen=True)
class ScalingConstants:
    """Dephasing-rate coefficients in s^-1 per ppm."""
    a_n: float = 101e3
    b_n: float = 6.25e3
    a_c13: float = 0.100e3
    a_nv_perp_group: float = 165e3
    a_nv_same_group: float = 1.5 * 165e3
    a_n_epr: float = 130e3

    def __post_init__(self):
        if not math.isclose(self.a_nv_same_group, 1.5 * self.a_nv_perp_group, rel_tol=1e-15):
            raise ValueError("a_nv_same_group must equal 1.5 * a_nv_perp_group")


SCALING = ScalingConstants()

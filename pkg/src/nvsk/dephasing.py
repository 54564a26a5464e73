"""Itemized T2* / T2 budgets from sample parameters.

Rates add linearly (strictly valid for Lorentzian lines only).
"""

from dataclasses import dataclass, field
import enum
import math

from .constants import SCALING
from .hamiltonian import stark_zeeman_analysis
from .samples import Basis
from .errors import ValidationError


class LineShape(str, enum.Enum):
    LORENTZIAN = "lorentzian"
    GAUSSIAN = "gaussian"


def _inv(rate):
    return math.inf if rate == 0 else 1 / rate


def _nonneg(name, v):
    if not v >= 0:
        raise ValidationError(name, "must be >= 0")


def t2star_nitrogen(n_s0_ppm):
    _nonneg("n_s0_ppm", n_s0_ppm)
    return _inv(SCALING.a_n * n_s0_ppm)


def t2_nitrogen(n_s0_ppm, t2_other_s=None):
    _nonneg("n_s0_ppm", n_s0_ppm)
    rate = SCALING.b_n * n_s0_ppm
    if t2_other_s is not None:
        rate += 1 / t2_other_s
    return _inv(rate)


def c13_dilute(c13_ppm):
    """False above 5% 13C, where the linear scaling is doubtful."""
    return c13_ppm / 1e6 <= 0.05


def t2star_c13(c13_ppm):
    _nonneg("c13_ppm", c13_ppm)
    return _inv(SCALING.a_c13 * c13_ppm)


def t2star_nvnv(nv_parallel_ppm, nv_nonparallel_ppm, varsigma_par=1.0, varsigma_nonpar=1.0):
    for n, v in (("nv_parallel_ppm", nv_parallel_ppm), ("nv_nonparallel_ppm", nv_nonparallel_ppm)):
        _nonneg(n, v)
    for n, v in (("varsigma_par", varsigma_par), ("varsigma_nonpar", varsigma_nonpar)):
        if not 0 <= v <= 1:
            raise ValidationError(n, "must lie in [0, 1]")
    rate = (varsigma_par * SCALING.a_nv_same_group * nv_parallel_ppm
            + varsigma_nonpar * SCALING.a_nv_perp_group * nv_nonparallel_ppm)
    return _inv(rate)


def strain_electric_rate(xi_spread_hz, xi_perp_hz, beta_z_hz):
    """pi * spread * |d nu / d xi_perp| (Lorentzian width to rate)."""
    _nonneg("xi_spread_hz", xi_spread_hz)
    if xi_spread_hz == 0:
        return 0.0
    return math.pi * xi_spread_hz * abs(stark_zeeman_analysis(xi_perp_hz, 0.0, beta_z_hz).dnu_dxi)


@dataclass(frozen=True)
class BudgetEnvironment:
    """Operating conditions that are not material properties.

    Gradient and temperature entries are direct rates (s^-1).
    """
    beta_z_hz: float = 0.0
    gradients_rate: float = 0.0
    temp_rate: float = 0.0
    varsigma_par: float = 1.0
    varsigma_nonpar: float = 1.0
    drive_suppression: float = 1.0
    include_nv0: bool = False

    def __post_init__(self):
        for n in ("gradients_rate", "temp_rate"):
            _nonneg(n, getattr(self, n))
        for n in ("varsigma_par", "varsigma_nonpar", "drive_suppression"):
            if not 0 <= getattr(self, n) <= 1:
                raise ValidationError(n, "must lie in [0, 1]")


# entry name -> scales with the magnetic moment (doubled in DQ)
MAGNETIC = {"N_S0": True, "13C": True, "NV-_par": True, "NV-_nonpar": True, "NV0": True,
            "strain_transverse": True, "strain_axial": False, "gradients": True,
            "temperature": False, "other": False, "T1_floor": True}


@dataclass(frozen=True)
class DephasingBudget:
    entries: dict
    basis: Basis
    bath_drive: bool
    drive_suppression: float
    kind: str = "T2*"
    notes: tuple = field(default=())

    @property
    def total_rate(self):
        return sum(self.entries.values())

    @property
    def total_t2star_s(self):
        return _inv(self.total_rate)

    @property
    def dominant(self):
        return max(self.entries, key=self.entries.get)

    def without(self, name):
        d = dict(self.entries)
        del d[name]
        return DephasingBudget(d, self.basis, self.bath_drive, self.drive_suppression, self.kind)


def total_budget(sample, env=None, basis=Basis.SQ, bath_drive=False):
    """Assemble the itemized 1/T2* budget.

    NV- is split into the group along the bias field (1/4) and the other
    three groups (3/4). In DQ the magnetic entries double and the common
    mode ones (temperature, axial strain) vanish. The transverse strain
    entry also doubles, since nu+ - nu- = 2 sqrt(xi^2 + beta^2).
    """
    env = env or BudgetEnvironment()
    basis = Basis(basis)
    k = SCALING
    nv_par, nv_non = sample.nv_minus_ppm / 4, 3 * sample.nv_minus_ppm / 4
    e = {
        "N_S0": k.a_n * sample.n_s0_ppm,
        "13C": k.a_c13 * sample.c13_ppm,
        "NV-_par": env.varsigma_par * k.a_nv_same_group * nv_par,
        "NV-_nonpar": env.varsigma_nonpar * k.a_nv_perp_group * nv_non,
        "NV0": k.a_n * sample.nv0_ppm if env.include_nv0 else 0.0,
        "strain_transverse": strain_electric_rate(sample.xi_perp_spread_hz, sample.xi_perp_hz,
                                                  env.beta_z_hz),
        "strain_axial": math.pi * sample.mz_spread_hz,
        "gradients": env.gradients_rate,
        "temperature": env.temp_rate,
        "other": 0.0 if math.isinf(sample.t2star_other_s) else 1 / sample.t2star_other_s,
        "T1_floor": 0.0 if math.isinf(sample.t1_s) else 1 / (2 * sample.t1_s),
    }
    if bath_drive:
        e["N_S0"] *= 1 - env.drive_suppression
        e["NV-_nonpar"] *= 1 - env.drive_suppression
    if basis is Basis.DQ:
        e = {n: (2 * r if MAGNETIC[n] else 0.0) if n != "other" else r for n, r in e.items()}
    notes = ("NV0 rate " + ("A_N" if env.include_nv0 else "0"),)
    return DephasingBudget(e, basis, bool(bath_drive), env.drive_suppression, notes=notes)


def lorentzian_fwhm(t2star):
    if not t2star > 0:
        raise ValidationError("t2star", "must be > 0")
    return 1 / (math.pi * t2star)


def gaussian_sigma(t2star):
    if not t2star > 0:
        raise ValidationError("t2star", "must be > 0")
    return 1 / (math.sqrt(2) * math.pi * t2star)


def t2star_from_epr_delta(delta_hz, shape=LineShape.LORENTZIAN):
    """T2* from the peak-to-peak width of a derivative EPR line."""
    if not delta_hz > 0:
        raise ValidationError("delta_hz", "must be > 0")
    if LineShape(shape) is LineShape.LORENTZIAN:
        return 1 / (math.sqrt(3) * math.pi * delta_hz)
    return math.sqrt(2) / (math.pi * delta_hz)

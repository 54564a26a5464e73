"""Precession-time optimization, enhancement curves, nitrogen sweeps."""

from dataclasses import dataclass
import math

import numpy as np

from .constants import SCALING, PPM_TO_CM3, constants
from .sensitivity import eta_ramsey_exact
from .errors import ValidationError

_INVPHI = (math.sqrt(5) - 1) / 2


def golden_section(f, lo, hi, rtol=1e-8, max_iter=500):
    """Minimize a unimodal f on [lo, hi]; stops when the bracket is rtol-narrow."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= rtol * (abs(a) + abs(b)) / 2:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def tau_objective(tau, t2star, p, t_o):
    """e^{(tau/T2*)^p} sqrt(tau + t_O) / tau."""
    return math.exp((tau / t2star) ** p) * math.sqrt(tau + t_o) / tau


def _log_objective(u, p, r):
    # log of the objective in u = tau/T2*, r = t_O/T2*, constants dropped
    return u ** p + 0.5 * math.log(u + r) - math.log(u)


def optimal_tau(t2star, p=1.0, t_o=0.0):
    """Free-precession time minimizing the Ramsey sensitivity."""
    if not (t2star > 0 and p > 0 and t_o >= 0):
        raise ValidationError("t2star", "t2star, p must be > 0 and t_o >= 0")
    r = t_o / t2star
    return t2star * golden_section(lambda u: _log_objective(u, p, r), 1e-3, 3.0, rtol=1e-8)


def enhancement(t2star_new, t2star_ref, t_o=0.0, p=1.0):
    """Sensitivity ratio eta_ref / eta_new, each at its own optimal tau."""
    def best(t2):
        return tau_objective(optimal_tau(t2, p, t_o), t2, p, t_o)
    return best(t2star_ref) / best(t2star_new)


def kappa(e_conv, e0=0.0, eplus=0.0, a_nv_minus=None, a_nv0=0.0):
    """Dephasing rate per ppm of total nitrogen (s^-1 ppm^-1)."""
    a_nv_minus = SCALING.a_nv_perp_group if a_nv_minus is None else a_nv_minus
    return SCALING.a_n * (1 - e_conv - e0 - eplus) + a_nv_minus * e_conv + a_nv0 * e0


@dataclass(frozen=True)
class NitrogenSweep:
    n_ppm: np.ndarray
    t2star_s: np.ndarray
    n_photons: np.ndarray
    eta: np.ndarray
    kappa: float
    knee_ppm: float


def nitrogen_sweep(template, n_range, protocol, volume_cm3=1e-3, include_nv0=False):
    """Sweep total nitrogen at fixed efficiencies.

    1/T2* = kappa [N] + 1/T2*_other; the sensor count is
    [N] E_conv in a ``volume_cm3`` volume; tau is re-optimized per point.
    """
    n = np.asarray(n_range, dtype=float)
    if np.any(n <= 0):
        raise ValidationError("n_range", "concentrations must be > 0")
    e = template.e_conv
    e0 = template.nv0_ppm / template.n_total_ppm if template.n_total_ppm > 0 else 0.0
    kap = kappa(e, e0, 0.0, a_nv0=SCALING.a_n if include_nv0 else 0.0)
    other = 0.0 if math.isinf(template.t2star_other_s) else 1 / template.t2star_other_s
    t2 = 1 / (kap * n + other)
    nsens = n * e * PPM_TO_CM3 * volume_cm3
    etas = []
    for t2i, ni in zip(t2, nsens):
        tau = optimal_tau(t2i, protocol.p_exponent, protocol.t_o_s)
        q = protocol.replace(tau_s=tau, n_sensors=max(ni, 1.0))
        etas.append(eta_ramsey_exact(q, t2i).eta_T_per_sqrtHz)
    knee = math.inf if other == 0 else other / kap
    return NitrogenSweep(n, t2, nsens * protocol.n_avg, np.array(etas), kap, knee)


def init_power(n_sensors, m_photons_per_nv, t2star, wavelength):
    """Optical energy per initialization and the mean power over T2*."""
    if not all(v > 0 for v in (n_sensors, m_photons_per_nv, t2star, wavelength)):
        raise ValidationError("n_sensors", "all inputs must be > 0")
    k = constants()
    energy = n_sensors * m_photons_per_nv * k.h * k.c / wavelength
    return {"energy_J": energy, "power_W": energy / t2star}

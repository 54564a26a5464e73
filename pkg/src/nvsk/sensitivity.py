"""Magnetic sensitivity formulas with factor breakdown (T/sqrt(Hz))."""

from dataclasses import dataclass, field
import math

from .constants import constants
from .samples import Protocol, ProtocolParams
from .errors import ValidationError


@dataclass(frozen=True)
class SensitivityReport:
    """eta = projection_limit * dephasing * readout * overhead."""
    eta_T_per_sqrtHz: float
    projection_limit: float
    dephasing_factor: float
    readout_factor: float
    overhead_factor: float
    protocol: Protocol
    inputs_echo: ProtocolParams
    flags: tuple = ()
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def factors(self):
        return {
            "projection_limit": self.projection_limit,
            "dephasing_factor": self.dephasing_factor,
            "readout_factor": self.readout_factor,
            "overhead_factor": self.overhead_factor,
        }


def _report(proj, deph, read, over, p, flags=(), **extra):
    return SensitivityReport(proj * deph * read * over, proj, deph, read, over,
                             p.protocol, p, tuple(flags), extra)


def hbar_over_gmu(delta_ms=1):
    k = constants()
    return k.hbar / (delta_ms * k.g_e * k.mu_B)


def overhead_factor(t_i, tau, t_r):
    if not tau > 0:
        raise ValidationError("tau", "must be > 0")
    return math.sqrt((t_i + tau + t_r) / tau)


def eta_spin_projection(n, tau, delta_ms=1):
    if not n >= 1:
        raise ValidationError("n", "must be >= 1")
    if not tau > 0:
        raise ValidationError("tau", "must be > 0")
    return hbar_over_gmu(delta_ms) / math.sqrt(n * tau)


def dephasing_factor(tau, t2, p):
    x = (tau / t2) ** p
    return math.inf if x > 700 else math.exp(x)


def eta_ramsey_exact(p, t2star):
    """Ramsey sensitivity with readout factor sqrt(1 + 1/(C^2 n_avg))."""
    proj = eta_spin_projection(p.n_sensors, p.tau_s, p.delta_ms)
    cn = p.contrast ** 2 * p.n_avg
    read = math.inf if cn == 0 else math.sqrt(1 + 1 / cn)
    return _report(proj, dephasing_factor(p.tau_s, t2star, p.p_exponent), read,
                   overhead_factor(p.t_i_s, p.tau_s, p.t_r_s), p)


def eta_ramsey_shot(p, t2star):
    """Shot-noise-limited Ramsey form, readout factor 1/(C sqrt(n_avg)).

    Flags ``c2n_not_small`` when C^2 n_avg > 0.1, where the
    approximation behind this form is poor.
    """
    proj = eta_spin_projection(p.n_sensors, p.tau_s, p.delta_ms)
    cn = p.contrast ** 2 * p.n_avg
    read = math.inf if cn == 0 else 1 / math.sqrt(cn)
    flags = ("c2n_not_small",) if cn > 0.1 else ()
    return _report(proj, dephasing_factor(p.tau_s, t2star, p.p_exponent), read,
                   overhead_factor(p.t_i_s, p.tau_s, p.t_r_s), p, flags)


def cw_optimal_detuning(linewidth):
    """Detuning of steepest CW-ODMR slope for a Lorentzian line."""
    return linewidth / (2 * math.sqrt(3))


def eta_cw_odmr(linewidth, contrast, rate):
    if not (linewidth > 0 and contrast > 0 and rate > 0):
        raise ValidationError("linewidth", "linewidth, contrast and rate must be > 0")
    k = constants()
    return 4 / (3 * math.sqrt(3)) * k.h / (k.g_e * k.mu_B) * linewidth / (contrast * math.sqrt(rate))


def eta_pulsed_odmr(t2star, contrast, n_photons, t_i=0.0, t_r=0.0):
    """Pulsed ODMR with pi-pulse length T2*."""
    if not (t2star > 0 and contrast > 0 and n_photons > 0):
        raise ValidationError("t2star", "t2star, contrast and n_photons must be > 0")
    return (8 / (3 * math.sqrt(3)) * hbar_over_gmu(1) / (contrast * math.sqrt(n_photons))
            * math.sqrt(t_i + t2star + t_r) / t2star)


def eta_hahn_echo(p, t2, phase_locked=True):
    """Hahn-echo AC sensitivity; pi/2 and the unlocked sqrt(2) sit in the projection factor."""
    proj = math.pi / 2 * eta_spin_projection(p.n_sensors, p.tau_s, p.delta_ms)
    if not phase_locked:
        proj *= math.sqrt(2)
    cn = p.contrast ** 2 * p.n_avg
    read = math.inf if cn == 0 else math.sqrt(1 + 1 / cn)
    return _report(proj, dephasing_factor(p.tau_s, t2, p.p_exponent), read,
                   overhead_factor(p.t_i_s, p.tau_s, p.t_r_s), p)


def eta_multipulse(p, t2, k, s, phase_locked=True):
    """CPMG-type sensitivity with tau = (k/2) T_B and coherence k^s T2."""
    if int(k) != k or k < 1:
        raise ValidationError("k", "must be an integer >= 1")
    if not 0 <= s < 1:
        raise ValidationError("s", "must lie in [0, 1)")
    if not (p.t_b_s > 0 and math.isfinite(p.t_b_s)):
        raise ValidationError("t_b_s", "finite AC period required")
    tau = k / 2 * p.t_b_s
    q = p.replace(tau_s=tau)
    return eta_hahn_echo(q, t2 * k ** s, phase_locked)


def k_opt_real(t2, t_b, p, s):
    """Stationary point of the zero-overhead multipulse objective."""
    base = (1 / (2 * p * (1 - s))) * (2 * t2 / t_b) ** p
    return base ** (1 / (p * (1 - s)))


def _multi_objective(k, t2, t_b, p, s, t_o):
    tau = k * t_b / 2
    return math.exp((tau / (k ** s * t2)) ** p) * math.sqrt(tau + t_o) / tau


def k_opt(t2, t_b, p, s, t_o=0.0):
    """Integer pulse count: better of floor/ceil of the closed form, at least 1."""
    kr = k_opt_real(t2, t_b, p, s)
    if kr <= 1:
        return 1
    lo, hi = max(1, math.floor(kr)), max(1, math.ceil(kr))
    f = lambda k: _multi_objective(k, t2, t_b, p, s, t_o)
    return lo if f(lo) <= f(hi) else hi

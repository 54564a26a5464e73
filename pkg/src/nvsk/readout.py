"""Closed-form readout-noise metrics."""

import math

from .errors import DegenerateContrastError, DomainError, IndeterminateError, ZeroSlopeError

_EPS = 1e-12


def sigma_r(a, b):
    """Readout noise relative to spin projection, sqrt(1 + 2(a+b)/(a-b)^2)."""
    if not (a >= 0 and b >= 0):
        raise DomainError("photon numbers must be >= 0")
    if a == b:
        raise DegenerateContrastError("a = b carries no spin information")
    if a < b:
        raise DomainError("need a > b")
    return math.sqrt(1 + 2 * (a + b) / (a - b) ** 2)


def sigma_r_from_contrast(c, n_avg):
    """sqrt(1 + 1/(C^2 n_avg))."""
    if not 0 < c <= 1:
        raise DomainError("contrast must lie in (0, 1]")
    if not n_avg > 0:
        raise DomainError("n_avg must be > 0")
    if math.isinf(n_avg):
        return 1.0
    return math.sqrt(1 + 1 / (c * c * n_avg))


def contrast_and_navg(a, b):
    return (a - b) / (a + b), (a + b) / 2


def fidelity(a, b):
    return 1 / sigma_r(a, b)


def noise_quotient(a, b, phase):
    """Delta N / |d<N>/d phi| for the two-mode coherent-state readout."""
    s = math.sin(phase)
    if abs(s) < _EPS:
        raise ZeroSlopeError("fringe slope vanishes at this phase")
    if a == b:
        raise DegenerateContrastError("a = b carries no spin information")
    proj = (a - b) ** 2 / 4 * s * s
    shot = b * math.cos(phase / 2) ** 2 + a * math.sin(phase / 2) ** 2
    return math.sqrt((proj + shot) / proj)


def spin_projection_quotient(phase, vartheta=0.0):
    """Delta S_z / |d<S_z>/d phi|, identically 1 away from the common zeros."""
    if abs(math.sin(phase - vartheta)) < _EPS:
        raise IndeterminateError("0/0 at sin(phi - vartheta) = 0")
    return 1.0

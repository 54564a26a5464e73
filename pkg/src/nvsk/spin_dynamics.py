"""Pseudo-spin-1/2 Ramsey and echo dynamics plus a photon-readout Monte Carlo.

Basis convention: index 0 is |down> (m_s = +-1, dark, b photons) and
index 1 is |up> (m_s = 0, bright, a photons). sigma_z = +1 on |down>.
The state starts in |up>.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
import os

import numpy as np

from .constants import constants
from .errors import LinearizationError, ValidationError

CHUNK = 1 << 16


@dataclass(frozen=True)
class SpinState:
    c_up: complex
    c_down: complex
    flags: tuple = ()

    def __post_init__(self):
        norm = abs(self.c_up) ** 2 + abs(self.c_down) ** 2
        if abs(norm - 1) > 1e-12:
            raise ValidationError("amplitudes", f"norm {norm!r} != 1")

    @property
    def sz(self):
        """<S_z> in units of hbar/2."""
        return abs(self.c_down) ** 2 - abs(self.c_up) ** 2

    @property
    def p_up(self):
        return abs(self.c_up) ** 2

    @classmethod
    def from_phase(cls, phase):
        """State after a Ramsey sequence with net phase phi - vartheta."""
        return cls(complex(0, math.sin(phase / 2)), complex(math.cos(phase / 2), 0))


UP = SpinState(1 + 0j, 0j)


@dataclass(frozen=True)
class ReadoutModel:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a >= self.b >= 0) or not math.isfinite(self.a):
            raise ValidationError("a", "need a >= b >= 0")

    @property
    def contrast(self):
        return (self.a - self.b) / (self.a + self.b)

    @property
    def n_avg(self):
        return (self.a + self.b) / 2


def gamma_e(delta_ms=1):
    """Precession rate per tesla, rad/(s T)."""
    return delta_ms * constants().gamma_rad_per_t


def ramsey_expectation(phi, vartheta):
    """<S_z> in units of hbar/2."""
    return np.cos(np.asarray(phi) - vartheta)


def _half_pi_y():
    return np.array([[1, -1], [1, 1]], dtype=complex) / math.sqrt(2)


def _free(phi):
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])


def _half_pi_phase(vartheta):
    e = np.exp(1j * vartheta)
    return np.array([[1, -1 / e], [e, 1]], dtype=complex) / math.sqrt(2)


def propagate_ramsey(b_sense, tau, b1_rabi, vartheta, delta_ms=1):
    """Apply pi/2 - free precession - pi/2(vartheta) to |up>."""
    g = gamma_e(delta_ms)
    phi = g * b_sense * tau
    psi = np.array([0, 1], dtype=complex)
    psi = _half_pi_phase(vartheta) @ (_free(phi) @ (_half_pi_y() @ psi))
    flags = ()
    if b1_rabi <= 0 or abs(g * b_sense) / b1_rabi >= 1e-2:
        flags = ("rwa_violated",)
    psi = psi / np.linalg.norm(psi)
    return SpinState(complex(psi[1]), complex(psi[0]), flags)


def fid_signal(tau_grid, t2star, p=1.0, fringe_freq=0.0, hyperfine=None):
    """Free-induction decay sum_k w_k cos(2 pi (f0 + k Delta) tau) exp(-(tau/T2*)^p).

    ``hyperfine`` is ``(splitting_hz, weights)``; line offsets k run
    symmetrically about f0 and the weights are normalised to sum to one.
    """
    if not t2star > 0 or not p > 0:
        raise ValidationError("t2star", "t2star and p must be > 0")
    tau = np.asarray(tau_grid, dtype=float)
    env = np.exp(-(np.abs(tau) / t2star) ** p)
    if hyperfine is None:
        return np.cos(2 * np.pi * fringe_freq * tau) * env
    split, w = hyperfine
    w = np.asarray(w, dtype=float)
    w = w / w.sum()
    ks = np.arange(w.size) - (w.size - 1) / 2
    sig = sum(wk * np.cos(2 * np.pi * (fringe_freq + k * split) * tau) for wk, k in zip(w, ks))
    return sig * env


def absorption_spectrum(tau_grid, signal, pad=1):
    """Real part of the one-sided Fourier transform of a uniformly sampled FID.

    The first sample carries trapezoid weight 1/2. Returns (freq, spectrum)
    for non-negative frequencies.
    """
    tau = np.asarray(tau_grid, dtype=float)
    y = np.array(signal, dtype=float)
    dt = tau[1] - tau[0]
    y[0] *= 0.5
    n = y.size * pad
    spec = np.fft.rfft(y, n=n).real * dt
    return np.fft.rfftfreq(n, dt), spec


def fwhm(freq, spec):
    """Full width at half maximum of the dominant peak, linear interpolation."""
    i = int(np.argmax(spec))
    half = spec[i] / 2
    j = i
    while j > 0 and spec[j] > half:
        j -= 1
    lo = freq[j] + (half - spec[j]) * (freq[j + 1] - freq[j]) / (spec[j + 1] - spec[j])
    j = i
    while j < len(spec) - 1 and spec[j] > half:
        j += 1
    hi = freq[j - 1] + (half - spec[j - 1]) * (freq[j] - freq[j - 1]) / (spec[j] - spec[j - 1])
    return hi - lo


def hahn_echo_phase(b_ac_amplitude, t_b, tau, phase_locked=True, field_phase=0.0, delta_ms=1):
    """Phase from B(t) = B_ac sin(2 pi t / T_B + field_phase) under a Hahn echo.

    The sign of the precession flips at tau/2. For an unlocked field the
    RMS over a uniform field phase is returned.
    """
    if not tau > 0:
        raise ValidationError("tau", "must be > 0")
    if b_ac_amplitude == 0 or math.isinf(t_b):
        return 0.0
    w = 2 * math.pi / t_b
    amp = 4 * gamma_e(delta_ms) * b_ac_amplitude / w * math.sin(w * tau / 4) ** 2
    if phase_locked:
        return -amp * math.cos(w * tau / 2 + field_phase)
    return amp / math.sqrt(2)


def _threads():
    try:
        return max(1, int(os.environ.get("NVSK_THREADS", "0")) or (os.cpu_count() or 1))
    except ValueError:
        return 1


def _chunk_rng(seed, index):
    # key = seed, counter = chunk index in the top word
    bg = np.random.Philox(key=int(seed) & ((1 << 64) - 1), counter=int(index) << 192)
    return np.random.Generator(bg)


def _run_chunks(shots, seed, fn):
    n = int(shots)
    if n < 1:
        raise ValidationError("shots", "must be >= 1")
    sizes = [min(CHUNK, n - i) for i in range(0, n, CHUNK)]
    jobs = list(enumerate(sizes))

    def work(job):
        idx, size = job
        return fn(_chunk_rng(seed, idx), size)

    nt = min(_threads(), len(jobs))
    if nt == 1:
        parts = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(nt) as ex:
            parts = list(ex.map(work, jobs))
    return np.concatenate(parts)


def monte_carlo_readout(state, model, shots, seed):
    """Per shot: Born branch (up -> a, down -> b) then a Poisson photon count."""
    p_up = state.p_up

    def chunk(rng, n):
        up = rng.random(n) < p_up
        return rng.poisson(np.where(up, model.a, model.b))

    return _run_chunks(shots, seed, chunk)


def _dephasing_phase(rng, n, x, p):
    # quasi-static detuning phase with E[cos] = exp(-x^p)
    if x == 0:
        return np.zeros(n)
    if p == 1:
        return x * rng.standard_cauchy(n)
    if p == 2:
        return math.sqrt(2) * x * rng.standard_normal(n)
    from scipy.stats import levy_stable
    return levy_stable.rvs(p, 0.0, scale=x, size=n, random_state=rng)


def simulate_ramsey_counts(b_sense, tau, model, shots, seed, vartheta=math.pi / 2,
                           t2star=math.inf, p=1.0, delta_ms=1):
    """Photon counts of repeated Ramsey measurements on one sensor.

    Ensemble dephasing enters as a random quasi-static phase per shot,
    drawn so the fringe visibility is exp(-(tau/T2*)^p).
    """
    if not 0 < p <= 2:
        raise ValidationError("p", "dephasing sampler needs 0 < p <= 2")
    phi = gamma_e(delta_ms) * b_sense * tau
    x = 0.0 if math.isinf(t2star) else tau / t2star

    def chunk(rng, n):
        d = _dephasing_phase(rng, n, x, p)
        p_up = np.sin((phi + d - vartheta) / 2) ** 2
        up = rng.random(n) < p_up
        return rng.poisson(np.where(up, model.a, model.b))

    return _run_chunks(shots, seed, chunk)


@dataclass(frozen=True)
class Calibration:
    a: float
    b: float
    tau: float
    vartheta: float
    visibility: float = 1.0
    delta_ms: int = 1


def field_estimates(counts, calibration):
    """Linearized field estimate for each entry of ``counts`` (T)."""
    cal = calibration
    s = math.sin(cal.vartheta)
    if abs(s) < 1e-12:
        raise LinearizationError("vartheta = 0: the linear term of <S_z> vanishes")
    if cal.a <= cal.b:
        raise ValidationError("a", "need a > b to invert the counts")
    n = np.asarray(counts, dtype=float)
    if n.size == 0:
        raise ValidationError("counts", "empty")
    # up (m_s = 0) gives a photons and sigma_z = -1
    sz = -(n - (cal.a + cal.b) / 2) / ((cal.a - cal.b) / 2)
    dphi = (sz / cal.visibility - math.cos(cal.vartheta)) / s
    return dphi / (gamma_e(cal.delta_ms) * cal.tau)


def estimate_field(counts, calibration):
    """Field estimate from the mean of the counts (T)."""
    return float(np.mean(field_estimates(counts, calibration)))

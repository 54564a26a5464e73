"""Diamond sample and measurement-protocol descriptors.

Samples are read from JSON documents with four top-level groups::

    {
      "concentrations_ppm": {"n_total": 27, "n_s0": ..., "nv_minus": ..., "nv0": ..., "c13": ...},
      "efficiencies": {"e_conv": 0.063, "chi": ..., "zeta": ...},
      "strain": {"xi_perp_hz": 1e4, "xi_perp_spread_hz": 0, "mz_spread_hz": 0},
      "relaxation": {"t2star_other_s": null, "t1_s": 6e-3}
    }

Missing optional values are filled in and listed in ``defaults_used``.
"""

from dataclasses import dataclass, field, asdict, fields
import enum
import json
import math
import os

from .constants import C13_NATURAL_PPM
from .errors import ParseError, ValidationError, ReportIOError

DEFAULT_ZETA = 0.7
DEFAULT_XI_PERP_HZ = 10e3
DEFAULT_T1_S = 6e-3
_REL = 1e-9


class Protocol(str, enum.Enum):
    RAMSEY = "Ramsey"
    CWODMR = "CWODMR"
    PULSED_ODMR = "PulsedODMR"
    HAHN_ECHO = "HahnEcho"
    CPMG = "CPMG"


class Basis(str, enum.Enum):
    SQ = "SQ"
    DQ = "DQ"


def _finite_nonneg(name, v, allow_inf=False):
    if v is None:
        return
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(name, f"expected a number, got {v!r}")
    if math.isnan(v) or (math.isinf(v) and not allow_inf):
        raise ValidationError(name, "must be finite")
    if v < 0:
        raise ValidationError(name, "must be >= 0")


@dataclass(frozen=True)
class DiamondSample:
    """Material descriptor. Concentrations in ppm of carbon sites.

    ``mz_spread_hz`` is the ensemble spread of the axial strain term
    M_z; it is common mode in the double-quantum basis.
    ``t2star_other_s`` of ``inf`` means no residual mechanism.
    """
    n_total_ppm: float
    n_s0_ppm: float
    nv_minus_ppm: float
    nv0_ppm: float
    c13_ppm: float = C13_NATURAL_PPM
    e_conv: float = 0.0
    chi: float = 0.0
    zeta: float = DEFAULT_ZETA
    xi_perp_hz: float = DEFAULT_XI_PERP_HZ
    xi_perp_spread_hz: float = 0.0
    mz_spread_hz: float = 0.0
    t2star_other_s: float = math.inf
    t1_s: float = DEFAULT_T1_S
    defaults_used: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("n_total_ppm", "n_s0_ppm", "nv_minus_ppm", "nv0_ppm", "c13_ppm",
                     "xi_perp_hz", "xi_perp_spread_hz", "mz_spread_hz"):
            _finite_nonneg(name, getattr(self, name))
        for name in ("e_conv", "chi", "zeta"):
            v = getattr(self, name)
            _finite_nonneg(name, v)
            if v > 1:
                raise ValidationError(name, "must lie in [0, 1]")
        for name in ("t2star_other_s", "t1_s"):
            v = getattr(self, name)
            _finite_nonneg(name, v, allow_inf=True)
            if v == 0:
                raise ValidationError(name, "must be > 0")
        if self.c13_ppm > 1e6:
            raise ValidationError("c13_ppm", "cannot exceed 1e6 ppm")
        if self.n_total_ppm + self.c13_ppm + self.n_s0_ppm + self.nv_minus_ppm + self.nv0_ppm == 0:
            raise ValidationError("concentrations_ppm", "all concentrations are zero")
        tol = _REL * max(self.n_total_ppm, 1e-300)
        if self.nv_minus_ppm + self.nv0_ppm > self.n_total_ppm + tol:
            raise ValidationError("nv_minus_ppm", "nv_minus + nv0 exceeds n_total")
        if self.n_s0_ppm + self.nv_minus_ppm + self.nv0_ppm > self.n_total_ppm + tol:
            raise ValidationError("n_s0_ppm", "n_s0 + nv_minus + nv0 exceeds n_total")
        if self.n_total_ppm > 0 and not math.isclose(
                self.e_conv, self.nv_minus_ppm / self.n_total_ppm, rel_tol=_REL, abs_tol=1e-300):
            raise ValidationError("e_conv", "inconsistent with nv_minus_ppm / n_total_ppm")
        nv = self.nv_minus_ppm + self.nv0_ppm
        if nv > 1e-200 and not math.isclose(self.zeta, self.nv_minus_ppm / nv, rel_tol=_REL):
            raise ValidationError("zeta", "inconsistent with nv_minus / (nv_minus + nv0)")

    @classmethod
    def build(cls, n_total_ppm, *, n_s0_ppm=None, nv_minus_ppm=None, nv0_ppm=None,
              c13_ppm=None, e_conv=None, chi=None, zeta=None, xi_perp_hz=None,
              xi_perp_spread_hz=None, mz_spread_hz=None, t2star_other_s=None, t1_s=None):
        """Construct a sample, deriving whatever can be derived.

        nv_minus and e_conv determine each other through n_total; nv0
        follows from zeta; the remaining nitrogen is taken as N_S0.
        Every value filled from a default is recorded in ``defaults_used``.
        """
        used = []
        _finite_nonneg("n_total_ppm", n_total_ppm)
        for name, v in (("e_conv", e_conv), ("chi", chi), ("zeta", zeta)):
            _finite_nonneg(name, v)
            if v is not None and v > 1:
                raise ValidationError(name, "must lie in [0, 1]")
        if nv_minus_ppm is None:
            nv_minus_ppm = (e_conv or 0.0) * n_total_ppm
        if e_conv is None:
            e_conv = nv_minus_ppm / n_total_ppm if n_total_ppm > 0 else 0.0
        if zeta is None:
            if nv0_ppm is not None and nv_minus_ppm + nv0_ppm > 0:
                zeta = nv_minus_ppm / (nv_minus_ppm + nv0_ppm)
            else:
                zeta = DEFAULT_ZETA
                used.append("zeta")
        if nv0_ppm is None:
            nv0_ppm = nv_minus_ppm * (1.0 - zeta) / zeta if zeta > 0 else 0.0
        if chi is None:
            chi = e_conv / zeta if zeta > 0 else 0.0
        if n_s0_ppm is None:
            n_s0_ppm = max(n_total_ppm - nv_minus_ppm - nv0_ppm, 0.0)
        if c13_ppm is None:
            c13_ppm = C13_NATURAL_PPM
            used.append("c13_ppm")
        if xi_perp_hz is None:
            xi_perp_hz = DEFAULT_XI_PERP_HZ
            used.append("xi_perp_hz")
        if t1_s is None:
            t1_s = DEFAULT_T1_S
            used.append("t1_s")
        return cls(
            n_total_ppm=n_total_ppm, n_s0_ppm=n_s0_ppm, nv_minus_ppm=nv_minus_ppm,
            nv0_ppm=nv0_ppm, c13_ppm=c13_ppm, e_conv=e_conv, chi=min(chi, 1.0), zeta=zeta,
            xi_perp_hz=xi_perp_hz,
            xi_perp_spread_hz=0.0 if xi_perp_spread_hz is None else xi_perp_spread_hz,
            mz_spread_hz=0.0 if mz_spread_hz is None else mz_spread_hz,
            t2star_other_s=math.inf if t2star_other_s is None else t2star_other_s,
            t1_s=t1_s, defaults_used=tuple(used),
        )

    def replace(self, **changes):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d.update(changes)
        return DiamondSample(**d)

    def to_descriptor(self):
        inf = lambda v: None if math.isinf(v) else v
        return {
            "concentrations_ppm": {
                "n_total": self.n_total_ppm, "n_s0": self.n_s0_ppm,
                "nv_minus": self.nv_minus_ppm, "nv0": self.nv0_ppm, "c13": self.c13_ppm,
            },
            "efficiencies": {"e_conv": self.e_conv, "chi": self.chi, "zeta": self.zeta},
            "strain": {
                "xi_perp_hz": self.xi_perp_hz,
                "xi_perp_spread_hz": self.xi_perp_spread_hz,
                "mz_spread_hz": self.mz_spread_hz,
            },
            "relaxation": {"t2star_other_s": inf(self.t2star_other_s), "t1_s": inf(self.t1_s)},
        }


_GROUPS = {
    "concentrations_ppm": {"n_total": "n_total_ppm", "n_s0": "n_s0_ppm",
                           "nv_minus": "nv_minus_ppm", "nv0": "nv0_ppm", "c13": "c13_ppm"},
    "efficiencies": {"e_conv": "e_conv", "chi": "chi", "zeta": "zeta"},
    "strain": {"xi_perp_hz": "xi_perp_hz", "xi_perp_spread_hz": "xi_perp_spread_hz",
               "mz_spread_hz": "mz_spread_hz"},
    "relaxation": {"t2star_other_s": "t2star_other_s", "t1_s": "t1_s"},
}


def sample_from_descriptor(doc):
    """Validate a parsed descriptor mapping and build the sample."""
    if not isinstance(doc, dict):
        raise ParseError("sample descriptor must be a JSON object")
    unknown = set(doc) - set(_GROUPS)
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown top-level key")
    if "concentrations_ppm" not in doc:
        raise ValidationError("concentrations_ppm", "missing")
    kw = {}
    for group, keys in _GROUPS.items():
        sub = doc.get(group, {})
        if not isinstance(sub, dict):
            raise ValidationError(group, "must be an object")
        for k, v in sub.items():
            if k not in keys:
                raise ValidationError(f"{group}.{k}", "unknown key")
            if v is None and group == "relaxation":
                v = math.inf
            kw[keys[k]] = v
    if "n_total_ppm" not in kw:
        raise ValidationError("concentrations_ppm.n_total", "missing")
    n_total = kw.pop("n_total_ppm")
    return DiamondSample.build(n_total, **kw)


def load_sample(path):
    """Read and validate a sample descriptor file."""
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ReportIOError(str(exc)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return sample_from_descriptor(doc)


def save_sample(sample, path):
    """Write a sample descriptor; ``load_sample`` reads it back exactly."""
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(sample.to_descriptor(), f, indent=2)
            f.write("\n")
    except OSError as exc:
        raise ReportIOError(str(exc)) from exc


@dataclass(frozen=True)
class ProtocolParams:
    """Measurement descriptor (SI units)."""
    protocol: Protocol = Protocol.RAMSEY
    tau_s: float = 1e-6
    t_i_s: float = 0.0
    t_r_s: float = 0.0
    contrast: float = 0.03
    n_avg: float = 0.01
    n_sensors: float = 1.0
    delta_ms: int = 1
    p_exponent: float = 1.0
    basis: Basis = Basis.SQ
    k_pulses: int = 1
    s_scaling: float = 0.0
    t_b_s: float = math.inf
    rate_R_hz: float = 0.0
    linewidth_hz: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol(self.protocol))
        object.__setattr__(self, "basis", Basis(self.basis))
        for name in ("tau_s", "t_i_s", "t_r_s", "n_avg", "rate_R_hz", "linewidth_hz"):
            _finite_nonneg(name, getattr(self, name))
        _finite_nonneg("t_b_s", self.t_b_s, allow_inf=True)
        if self.tau_s + self.t_i_s + self.t_r_s == 0:
            raise ValidationError("tau_s", "tau, t_I and t_R cannot all be zero")
        if not 0 <= self.contrast <= 1:
            raise ValidationError("contrast", "must lie in [0, 1]")
        if not self.n_sensors >= 1:
            raise ValidationError("n_sensors", "must be >= 1")
        if self.delta_ms not in (1, 2):
            raise ValidationError("delta_ms", "must be 1 or 2")
        if (self.basis is Basis.DQ) != (self.delta_ms == 2):
            raise ValidationError("delta_ms", "DQ basis requires delta_ms = 2, SQ requires 1")
        if not self.p_exponent > 0:
            raise ValidationError("p_exponent", "must be > 0")
        if int(self.k_pulses) != self.k_pulses or self.k_pulses < 1:
            raise ValidationError("k_pulses", "must be an integer >= 1")
        if not 0 <= self.s_scaling < 1:
            raise ValidationError("s_scaling", "must lie in [0, 1)")

    @property
    def t_o_s(self):
        return self.t_i_s + self.t_r_s

    def replace(self, **changes):
        d = asdict(self)
        d.update(changes)
        if changes.get("basis") is not None and "delta_ms" not in changes:
            d["delta_ms"] = 2 if Basis(changes["basis"]) is Basis.DQ else 1
        return ProtocolParams(**d)

import json
import math

import pytest

from nvsk import (constants, DiamondSample, ProtocolParams, load_sample, save_sample,
                  save_report, total_budget, ParseError, ValidationError, SCALING, eta_ramsey_exact)
from nvsk.errors import ReportIOError
from nvsk.reporting import read_report


def test_constants_values():
    k = constants()
    assert k.D == 2.870e9
    assert k.d_perp == 0.17
    assert 2.002 <= k.g_e <= 2.004
    assert k.gamma_hz_per_t == pytest.approx(2.802e10, rel=1e-3)
    assert constants() is constants()


def test_constants_signs():
    k = constants()
    assert k.A_par_14N == pytest.approx(-2.14e6)
    assert k.A_perp_14N < 0 and k.P_14N < 0
    assert k.A_par_15N > 0 and k.A_perp_15N > 0
    for name in ("g_e", "mu_B", "h", "hbar", "k_B", "c", "D", "d_par", "d_perp"):
        assert getattr(k, name) > 0


def test_scaling_chain():
    assert SCALING.a_nv_same_group == 1.5 * SCALING.a_nv_perp_group
    assert SCALING.a_nv_perp_group == pytest.approx(math.sqrt(8 / 3) * SCALING.a_n, rel=0.01)


def _write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return p


def test_load_literature_row(tmp_path):
    p = _write(tmp_path, {"concentrations_ppm": {"n_total": 27}, "efficiencies": {"e_conv": 0.063}})
    s = load_sample(p)
    assert s.nv_minus_ppm == pytest.approx(1.701)
    assert s.c13_ppm == 10700
    assert s.zeta == 0.7 and s.xi_perp_hz == 10e3
    assert {"c13_ppm", "zeta", "xi_perp_hz"} <= set(s.defaults_used)


def test_all_zero_rejected(tmp_path):
    p = _write(tmp_path, {"concentrations_ppm": {"n_total": 0, "c13": 0}})
    with pytest.raises(ValidationError):
        load_sample(p)


def test_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load_sample(_write(tmp_path, "{not json"))


def test_validation_names_field(tmp_path):
    p = _write(tmp_path, {"concentrations_ppm": {"n_total": 1, "nv_minus": 0.1},
                          "efficiencies": {"e_conv": 0.5}})
    with pytest.raises(ValidationError) as exc:
        load_sample(p)
    assert exc.value.field == "e_conv"
    p = _write(tmp_path, {"concentrations_ppm": {"n_total": 1, "c13": -3}})
    with pytest.raises(ValidationError) as exc:
        load_sample(p)
    assert exc.value.field == "c13_ppm"
    p = _write(tmp_path, {"concentrations_ppm": {"n_total": 1, "nv_minus": 0.8, "nv0": 0.5}})
    with pytest.raises(ValidationError):
        load_sample(p)
    p = _write(tmp_path, {"concentrations_ppm": {"n_total": 1}, "bogus": {}})
    with pytest.raises(ValidationError):
        load_sample(p)


def test_zeta_consistency():
    with pytest.raises(ValidationError) as exc:
        DiamondSample(n_total_ppm=1, n_s0_ppm=0, nv_minus_ppm=0.1, nv0_ppm=0.1, e_conv=0.1,
                      zeta=0.7)
    assert exc.value.field == "zeta"


def test_round_trip(tmp_path):
    s = DiamondSample.build(3.3, e_conv=0.0123456789, c13_ppm=123.456, xi_perp_spread_hz=1.5e5,
                            mz_spread_hz=7.0, t2star_other_s=1.3e-5)
    p = tmp_path / "x.json"
    save_sample(s, p)
    assert load_sample(p) == s


def test_protocol_invariants():
    with pytest.raises(ValidationError):
        ProtocolParams(basis="DQ", delta_ms=1)
    with pytest.raises(ValidationError):
        ProtocolParams(tau_s=0, t_i_s=0, t_r_s=0)
    with pytest.raises(ValidationError):
        ProtocolParams(contrast=1.5)
    q = ProtocolParams().replace(basis="DQ")
    assert q.delta_ms == 2


def test_save_report_budget(tmp_path, n1_sample):
    b = total_budget(n1_sample)
    p = tmp_path / "b.csv"
    save_report(b, p)
    first = p.read_bytes()
    meta, header, rows = read_report(p)
    assert header == ["mechanism", "rate_per_s"]
    got = {r[0]: float(r[1]) for r in rows}
    assert got == b.entries
    assert meta["tool"].startswith("nvsk")
    save_report(b, p)
    assert p.read_bytes() == first


def test_save_report_sensitivity(tmp_path):
    r = eta_ramsey_exact(ProtocolParams(), 1e-6)
    p = tmp_path / "r.csv"
    save_report(r, p)
    meta, header, rows = read_report(p)
    assert float(rows[0][1]) == r.eta_T_per_sqrtHz
    assert meta["protocol"] == "Ramsey"


def test_save_report_empty_and_unwritable(tmp_path):
    p = tmp_path / "e.csv"
    save_report(None, p)
    meta, header, rows = read_report(p)
    assert header and rows == []
    with pytest.raises(ReportIOError):
        save_report(None, tmp_path / "missing" / "dir" / "e.csv")
    with pytest.raises(OSError):
        save_report(None, tmp_path / "missing" / "e.csv")

import io
import json
import math
import subprocess
import sys

import pytest

from nvsk.cli import dispatch
from nvsk.reporting import read_report


def run(args, tmp_path, name="o.csv"):
    out = tmp_path / name
    code = dispatch(list(args) + ["--out", str(out)])
    return code, out


@pytest.fixture
def sample_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"concentrations_ppm": {"n_total": 1.0, "nv_minus": 0.0, "nv0": 0.0,
                                                    "c13": 100.0}}))
    return str(p)


def test_budget(tmp_path, sample_file):
    code, out = run(["budget", "--sample", sample_file, "--basis", "dq", "--bath-drive"], tmp_path)
    assert code == 0
    meta, head, rows = read_report(out)
    assert head[0] == "mechanism"
    got = {r[0]: float(r[1]) for r in rows}
    assert got["N_S0"] == 0 and got["13C"] == 2 * 100 * 100.0
    assert "sample_default.zeta" in meta


def test_optimize_tau(tmp_path):
    code, out = run(["optimize-tau", "--t2star", "1e-6", "--p", "1", "--overhead", "0"], tmp_path)
    assert code == 0
    _, head, rows = read_report(out)
    assert float(rows[0][head.index("tau_opt_s")]) == pytest.approx(5e-7, rel=1e-6)


def test_usage_errors(tmp_path, capsys):
    assert dispatch(["budget", "--nope"]) == 2
    assert dispatch(["optimize-tau", "--t2star", "1e-6", "--grid", "p=1:2:0"]) == 2
    assert dispatch(["optimize-tau", "--t2star", "1e-6", "--grid", "p=1:2:2",
                     "--grid", "overhead=0:1:2"]) == 2
    assert dispatch(["budget"]) == 2
    assert "usage" in capsys.readouterr().err


def test_validation_error(tmp_path):
    assert dispatch(["optimize-tau", "--t2star", "-1"]) == 1
    bad = tmp_path / "b.json"
    bad.write_text('{"concentrations_ppm": {"n_total": 0, "c13": 0}}')
    assert dispatch(["budget", "--sample", str(bad)]) == 1


def test_enhancement_sweep(tmp_path):
    for to in ("1e-6", "1e-5", "1e-4"):
        code, out = run(["enhancement", "--overhead", to, "--ratio", "1",
                         "--grid", "ratio=1:100:12"], tmp_path, f"e{to}.csv")
        assert code == 0
        _, head, rows = read_report(out)
        for r in rows:
            ratio, e = float(r[head.index("ratio")]), float(r[head.index("enhancement")])
            assert math.sqrt(ratio) * (1 - 1e-9) <= e <= ratio * (1 + 1e-9)


def test_cpmg_k_sweep(tmp_path):
    from nvsk import k_opt
    t2, tb = 1e-4, 1e-4
    code, out = run(["sensitivity", "--protocol", "cpmg", "--t2", str(t2), "--t-b", str(tb),
                     "--s", str(2 / 3), "--n-sensors", "1e12", "--grid", "k=1:60:60"], tmp_path)
    assert code == 0
    _, head, rows = read_report(out)
    etas = [float(r[head.index("eta_T_per_sqrtHz")]) for r in rows]
    ks = [int(r[0]) for r in rows]
    assert ks[etas.index(min(etas))] == k_opt(t2, tb, 1, 2 / 3)


def test_all_subcommands(tmp_path, sample_file):
    cmds = [
        ["levels", "--b", "1e-3", "--theta-deg", "30"],
        ["levels", "--b", "5e-4", "--nucleus", "n14"],
        ["sensitivity", "--protocol", "ramsey", "--t2star", "1e-6", "--n-sensors", "1e12"],
        ["sensitivity", "--protocol", "ramsey-shot", "--sample", sample_file],
        ["sensitivity", "--protocol", "cwodmr", "--linewidth", "1e6", "--rate", "1e12",
         "--contrast", "0.01"],
        ["sensitivity", "--protocol", "pulsedodmr", "--t2star", "3e-6", "--n-photons", "1e6"],
        ["sensitivity", "--protocol", "hahnecho", "--t2", "1e-4", "--unlocked"],
        ["optimize-pulses", "--t2", "1e-4", "--t-b", "2e-4"],
        ["sweep-nitrogen", "--sample", sample_file, "--n-steps", "5"],
        ["simulate", "--shots", "100", "--summary"],
        ["simulate", "--shots", "10"],
        ["anneal"],
        ["irradiate", "--sample", sample_file],
        ["anneal", "--grid", "temp_c=600:1200:4"],
    ]
    for i, c in enumerate(cmds):
        code, out = run(c, tmp_path, f"c{i}.csv")
        assert code == 0, c
        _, head, rows = read_report(out)
        assert head and rows


def test_cw_values(tmp_path):
    code, out = run(["sensitivity", "--protocol", "cwodmr", "--linewidth", "1e6", "--rate", "1e12",
                     "--contrast", "0.01"], tmp_path)
    _, head, rows = read_report(out)
    assert float(rows[0][1]) == pytest.approx(2.75e-9, rel=0.01)
    assert float(rows[0][head.index("optimal_detuning_hz")]) == pytest.approx(1e6 / (2 * math.sqrt(3)))


def test_golden_stability(tmp_path, monkeypatch):
    args = ["simulate", "--shots", "150000", "--seed", "42", "--t2star", "2e-6", "--summary"]
    monkeypatch.setenv("NVSK_THREADS", "1")
    _, a = run(args, tmp_path, "a.csv")
    monkeypatch.setenv("NVSK_THREADS", "5")
    _, b = run(args, tmp_path, "b.csv")
    _, c = run(args, tmp_path, "c.csv")
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_round_trip_floats(tmp_path):
    code, out = run(["optimize-tau", "--t2star", "1.2345678901234567e-6", "--overhead", "3e-7"],
                    tmp_path)
    from nvsk import optimal_tau
    _, head, rows = read_report(out)
    assert float(rows[0][head.index("tau_opt_s")]) == optimal_tau(1.2345678901234567e-6, 1.0, 3e-7)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nvsk", "irradiate", "--n-total", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "7.333333333333334e+16" in r.stdout

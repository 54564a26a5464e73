"""Command-line front end emitting CSV tables.

Every subcommand accepts ``--sample``, ``--out``, ``--seed``, ``--format``
and at most one ``--grid NAME=start:stop:steps`` sweep over a numeric
option (``NAME`` is the option name without dashes, e.g. ``t2star``).
"""

import argparse
import copy
import math
import sys

import numpy as np

from . import __version__
from .errors import NVSKError
from .reporting import render_table, write_text

USAGE_ERROR, VALIDATION_ERROR = 2, 1


class UsageError(Exception):
    pass


def _f(s):
    return float(s)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global")
    g.add_argument("--sample", help="sample descriptor (JSON)")
    g.add_argument("--out", help="write CSV here instead of stdout")
    g.add_argument("--seed", type=int, default=0, help="u64 seed for simulations")
    g.add_argument("--format", choices=["csv"], default="csv")
    g.add_argument("--grid", action="append", default=[], metavar="NAME=START:STOP:STEPS",
                   help="sweep one numeric option linearly (append ':log' for log spacing)")
    return p


def _protocol_opts(p, tau=True):
    if tau:
        p.add_argument("--tau", type=_f, default=None, help="interrogation time (s); default optimal")
    p.add_argument("--t-i", type=_f, default=0.0, help="initialization time (s)")
    p.add_argument("--t-r", type=_f, default=0.0, help="readout time (s)")
    p.add_argument("--contrast", type=_f, default=0.03)
    p.add_argument("--n-avg", type=_f, default=0.01, help="photons per NV per readout")
    p.add_argument("--p", type=_f, default=1.0, help="stretch exponent")
    p.add_argument("--basis", choices=["sq", "dq"], default="sq")


def build_parser():
    common = _common()
    ap = argparse.ArgumentParser(prog="nvsk", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"nvsk {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("levels", parents=[common], help="transition frequencies")
    s.add_argument("--b", type=_f, default=0.0, help="field magnitude (T)")
    s.add_argument("--theta-deg", type=_f, default=0.0)
    s.add_argument("--phi-deg", type=_f, default=0.0)
    s.add_argument("--nucleus", choices=["none", "n14", "n15"], default="none")
    for n in ("ex", "ey", "ez"):
        s.add_argument(f"--{n}", type=_f, default=0.0, help="electric field (V/m)")
    for n in ("mz", "mx", "my", "nx", "ny"):
        s.add_argument(f"--{n}", type=_f, default=0.0, help="strain coupling (Hz)")

    s = sub.add_parser("budget", parents=[common], help="itemized T2* budget")
    s.add_argument("--basis", choices=["sq", "dq"], default="sq")
    s.add_argument("--bath-drive", action="store_true")
    s.add_argument("--drive-suppression", type=_f, default=1.0)
    s.add_argument("--beta-z", type=_f, default=0.0, help="axial Zeeman coupling (Hz)")
    s.add_argument("--gradients-rate", type=_f, default=0.0)
    s.add_argument("--temp-rate", type=_f, default=0.0)
    s.add_argument("--varsigma-par", type=_f, default=1.0)
    s.add_argument("--varsigma-nonpar", type=_f, default=1.0)
    s.add_argument("--include-nv0", action="store_true")

    s = sub.add_parser("sensitivity", parents=[common], help="protocol sensitivity")
    s.add_argument("--protocol", default="ramsey",
                   choices=["ramsey", "ramsey-shot", "cwodmr", "pulsedodmr", "hahnecho", "cpmg"])
    _protocol_opts(s)
    s.add_argument("--t2star", type=_f, default=None, help="T2* (s); from --sample if omitted")
    s.add_argument("--t2", type=_f, default=None, help="T2 (s), echo protocols")
    s.add_argument("--n-sensors", type=_f, default=1.0)
    s.add_argument("--k", type=_f, default=None, help="pulse count; default optimal")
    s.add_argument("--s", type=_f, default=0.0, help="coherence scaling exponent")
    s.add_argument("--t-b", type=_f, default=None, help="AC period (s)")
    s.add_argument("--unlocked", action="store_true")
    s.add_argument("--rate", type=_f, default=None, help="CW photon rate (1/s)")
    s.add_argument("--linewidth", type=_f, default=None, help="CW linewidth (Hz)")
    s.add_argument("--n-photons", type=_f, default=None, help="pulsed ODMR photon number")

    s = sub.add_parser("optimize-tau", parents=[common], help="optimal precession time")
    s.add_argument("--t2star", type=_f, required=True)
    s.add_argument("--p", type=_f, default=1.0)
    s.add_argument("--overhead", type=_f, default=0.0, help="t_I + t_R (s)")

    s = sub.add_parser("enhancement", parents=[common], help="sensitivity gain from longer T2*")
    s.add_argument("--ratio", type=_f, required=True, help="T2*_new / T2*_ref")
    s.add_argument("--t2star-ref", type=_f, default=1e-6)
    s.add_argument("--overhead", type=_f, default=0.0)
    s.add_argument("--p", type=_f, default=1.0)

    s = sub.add_parser("optimize-pulses", parents=[common], help="optimal CPMG pulse count")
    s.add_argument("--t2", type=_f, required=True)
    s.add_argument("--t-b", type=_f, required=True)
    s.add_argument("--p", type=_f, default=1.0)
    s.add_argument("--s", type=_f, default=2 / 3)
    s.add_argument("--overhead", type=_f, default=0.0)

    s = sub.add_parser("sweep-nitrogen", parents=[common], help="sensitivity versus [N]")
    _protocol_opts(s, tau=False)
    s.add_argument("--n-min", type=_f, default=0.01)
    s.add_argument("--n-max", type=_f, default=100.0)
    s.add_argument("--n-steps", type=int, default=41)
    s.add_argument("--volume-cm3", type=_f, default=1e-3)
    s.add_argument("--include-nv0", action="store_true")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo Ramsey readout")
    s.add_argument("--b-sense", type=_f, default=0.0)
    s.add_argument("--tau", type=_f, default=1e-6)
    s.add_argument("--t2star", type=_f, default=math.inf)
    s.add_argument("--p", type=_f, default=1.0)
    s.add_argument("--a", type=_f, default=2.0)
    s.add_argument("--b", type=_f, default=1.0)
    s.add_argument("--vartheta", type=_f, default=math.pi / 2)
    s.add_argument("--shots", type=int, default=1000)
    s.add_argument("--summary", action="store_true")

    s = sub.add_parser("anneal", parents=[common], help="vacancy diffusion")
    s.add_argument("--temp-c", type=_f, default=800.0)
    s.add_argument("--hours", type=_f, default=12.0)
    s.add_argument("--d0", type=_f, default=1.6e-7)
    s.add_argument("--ea", type=_f, default=2.3)

    s = sub.add_parser("irradiate", parents=[common], help="electron irradiation dose")
    s.add_argument("--n-total", type=_f, default=None, help="ppm; from --sample if omitted")
    s.add_argument("--vacancy-yield", type=_f, default=2e-4, help="per electron per um")
    s.add_argument("--recombination", type=_f, default=0.4)
    s.add_argument("--nitrogens-per-nv", type=_f, default=2.0)
    return ap


def _sample(ns, required=True):
    from .samples import load_sample
    if ns.sample is None:
        if required:
            raise UsageError(f"{ns.command} needs --sample")
        return None
    return load_sample(ns.sample)


def _levels(ns):
    from .hamiltonian import (FieldEnvironment, build_hamiltonian, transition_frequencies_exact,
                              transition_frequencies_perturbative)
    from .errors import DomainError
    th, ph = math.radians(ns.theta_deg), math.radians(ns.phi_deg)
    env = FieldEnvironment.polar(ns.b, th, ph, e_vec_Vpm=(ns.ex, ns.ey, ns.ez),
                                 strain=(ns.mz, ns.mx, ns.my, ns.nx, ns.ny))
    h = build_hamiltonian(env, ns.nucleus)
    rows = [(lab, f, "exact") for lab, f in transition_frequencies_exact(h)]
    if ns.nucleus == "none":
        try:
            nup, num = transition_frequencies_perturbative(ns.b, th)
            rows += [("nu_minus", num, "perturbative"), ("nu_plus", nup, "perturbative")]
        except DomainError:
            pass
    return ["transition", "frequency_hz", "method"], rows, {}


def _budget(ns):
    from .dephasing import BudgetEnvironment, total_budget
    sample = _sample(ns)
    env = BudgetEnvironment(beta_z_hz=ns.beta_z, gradients_rate=ns.gradients_rate,
                            temp_rate=ns.temp_rate, varsigma_par=ns.varsigma_par,
                            varsigma_nonpar=ns.varsigma_nonpar,
                            drive_suppression=ns.drive_suppression, include_nv0=ns.include_nv0)
    b = total_budget(sample, env, ns.basis.upper(), ns.bath_drive)
    rows = [(k, v, 1 / v if v else math.inf) for k, v in b.entries.items()]
    rows.append(("total", b.total_rate, b.total_t2star_s))
    meta = {"dominant": b.dominant, "note": b.notes[0]}
    for d in sample.defaults_used:
        meta[f"sample_default.{d}"] = getattr(sample, d)
    return ["mechanism", "rate_per_s", "t2star_s"], rows, meta


def _params(ns, protocol, tau, t2star=None):
    from .samples import ProtocolParams
    dq = ns.basis == "dq"
    return ProtocolParams(
        protocol=protocol, tau_s=tau, t_i_s=ns.t_i, t_r_s=ns.t_r, contrast=ns.contrast,
        n_avg=ns.n_avg, n_sensors=getattr(ns, "n_sensors", 1.0), delta_ms=2 if dq else 1,
        p_exponent=ns.p, basis="DQ" if dq else "SQ",
        k_pulses=int(ns.k) if getattr(ns, "k", None) else 1, s_scaling=getattr(ns, "s", 0.0),
        t_b_s=ns.t_b if getattr(ns, "t_b", None) else math.inf)


def _sensitivity(ns):
    from . import sensitivity as S
    from .dephasing import total_budget
    from .optimize import optimal_tau
    meta = {}
    t2star = ns.t2star
    if t2star is None and ns.sample is not None:
        t2star = total_budget(_sample(ns), basis=ns.basis.upper()).total_t2star_s
        meta["t2star_from_sample"] = t2star
    head = ["protocol", "eta_T_per_sqrtHz", "projection_limit", "dephasing_factor",
            "readout_factor", "overhead_factor"]
    proto = ns.protocol
    if proto == "cwodmr":
        if ns.linewidth is None and t2star is None:
            raise UsageError("cwodmr needs --linewidth or --t2star")
        lw = ns.linewidth if ns.linewidth is not None else 1 / (math.pi * t2star)
        if ns.rate is None:
            raise UsageError("cwodmr needs --rate")
        eta = S.eta_cw_odmr(lw, ns.contrast, ns.rate)
        return (head + ["linewidth_hz", "contrast", "rate_hz", "optimal_detuning_hz"],
                [(proto, eta, "", "", "", "", lw, ns.contrast, ns.rate,
                  S.cw_optimal_detuning(lw))], meta)
    if proto == "pulsedodmr":
        if t2star is None:
            raise UsageError("pulsedodmr needs --t2star or --sample")
        n_ph = ns.n_photons if ns.n_photons is not None else ns.n_sensors * ns.n_avg
        eta = S.eta_pulsed_odmr(t2star, ns.contrast, n_ph, ns.t_i, ns.t_r)
        return (head + ["t2star_s", "contrast", "n_photons", "t_i_s", "t_r_s"],
                [(proto, eta, "", "", "", "", t2star, ns.contrast, n_ph, ns.t_i, ns.t_r)], meta)
    if proto in ("ramsey", "ramsey-shot"):
        if t2star is None:
            raise UsageError(f"{proto} needs --t2star or --sample")
        tau = ns.tau if ns.tau is not None else optimal_tau(t2star, ns.p, ns.t_i + ns.t_r)
        p = _params(ns, "Ramsey", tau)
        fn = S.eta_ramsey_exact if proto == "ramsey" else S.eta_ramsey_shot
        rep, coh = fn(p, t2star), t2star
    else:
        if ns.t2 is None:
            raise UsageError(f"{proto} needs --t2")
        if proto == "hahnecho":
            tau = ns.tau if ns.tau is not None else optimal_tau(ns.t2, ns.p, ns.t_i + ns.t_r)
            rep = S.eta_hahn_echo(_params(ns, "HahnEcho", tau), ns.t2, not ns.unlocked)
        else:
            if ns.t_b is None:
                raise UsageError("cpmg needs --t-b")
            k = int(ns.k) if ns.k else S.k_opt(ns.t2, ns.t_b, ns.p, ns.s, ns.t_i + ns.t_r)
            if not ns.k:
                meta["k_default"] = "optimal"
            ns = copy.copy(ns)
            ns.k = k
            p = _params(ns, "CPMG", k * ns.t_b / 2)
            rep = S.eta_multipulse(p, ns.t2, k, ns.s, not ns.unlocked)
        coh = ns.t2
    inp = rep.inputs_echo
    row = [proto, rep.eta_T_per_sqrtHz, rep.projection_limit, rep.dephasing_factor,
           rep.readout_factor, rep.overhead_factor, inp.tau_s, coh, inp.t_i_s, inp.t_r_s,
           inp.contrast, inp.n_avg, inp.n_sensors, inp.delta_ms, inp.p_exponent,
           inp.k_pulses, inp.s_scaling, inp.t_b_s]
    if rep.flags:
        meta["flags"] = ";".join(rep.flags)
    return (head + ["tau_s", "coherence_s", "t_i_s", "t_r_s", "contrast", "n_avg",
                    "n_sensors", "delta_ms", "p", "k", "s", "t_b_s"], [row], meta)


def _optimize_tau(ns):
    from .optimize import optimal_tau, tau_objective
    t = optimal_tau(ns.t2star, ns.p, ns.overhead)
    return (["t2star_s", "p", "overhead_s", "tau_opt_s", "objective"],
            [(ns.t2star, ns.p, ns.overhead, t, tau_objective(t, ns.t2star, ns.p, ns.overhead))], {})


def _enhancement(ns):
    from .optimize import enhancement
    r = ns.ratio
    e = enhancement(r * ns.t2star_ref, ns.t2star_ref, ns.overhead, ns.p)
    return (["ratio", "overhead_s", "enhancement", "sqrt_ratio"],
            [(r, ns.overhead, e, math.sqrt(r))], {"t2star_ref_s": ns.t2star_ref, "p": ns.p})


def _optimize_pulses(ns):
    from .sensitivity import k_opt, k_opt_real
    return (["t2_s", "t_b_s", "p", "s", "k_opt_real", "k_opt"],
            [(ns.t2, ns.t_b, ns.p, ns.s, k_opt_real(ns.t2, ns.t_b, ns.p, ns.s),
              k_opt(ns.t2, ns.t_b, ns.p, ns.s, ns.overhead))], {})


def _sweep_nitrogen(ns):
    from .optimize import nitrogen_sweep
    from .samples import ProtocolParams
    tmpl = _sample(ns)
    if ns.n_steps < 2 or not 0 < ns.n_min < ns.n_max:
        raise UsageError("need 0 < n-min < n-max and n-steps >= 2")
    grid = np.geomspace(ns.n_min, ns.n_max, ns.n_steps)
    dq = ns.basis == "dq"
    proto = ProtocolParams(t_i_s=ns.t_i, t_r_s=ns.t_r, contrast=ns.contrast, n_avg=ns.n_avg,
                           p_exponent=ns.p, basis="DQ" if dq else "SQ", delta_ms=2 if dq else 1)
    sw = nitrogen_sweep(tmpl, grid, proto, ns.volume_cm3, ns.include_nv0)
    rows = list(zip(sw.n_ppm, sw.t2star_s, sw.n_photons, sw.eta))
    return (["n_total_ppm", "t2star_s", "n_photons", "eta_T_per_sqrtHz"], rows,
            {"kappa_per_s_ppm": sw.kappa, "knee_ppm": sw.knee_ppm})


def _simulate(ns):
    from .spin_dynamics import (ReadoutModel, Calibration, simulate_ramsey_counts,
                                field_estimates)
    model = ReadoutModel(ns.a, ns.b)
    counts = simulate_ramsey_counts(ns.b_sense, ns.tau, model, ns.shots, ns.seed, ns.vartheta,
                                    ns.t2star, ns.p)
    if not ns.summary:
        return ["shot", "count"], list(enumerate(counts.tolist())), {}
    vis = 1.0 if math.isinf(ns.t2star) else math.exp(-(ns.tau / ns.t2star) ** ns.p)
    est = field_estimates(counts, Calibration(ns.a, ns.b, ns.tau, ns.vartheta, vis))
    return (["shots", "mean_count", "var_count", "b_estimate_T", "b_std_per_shot_T"],
            [(ns.shots, float(counts.mean()), float(counts.var(ddof=1)) if ns.shots > 1 else 0.0,
              float(est.mean()), float(est.std(ddof=1)) if ns.shots > 1 else 0.0)], {})


def _anneal(ns):
    from .materials import vacancy_diffusion
    r = vacancy_diffusion(ns.temp_c + 273.15, ns.hours * 3600, ns.d0, ns.ea)
    return (["temp_c", "hours"] + list(r), [[ns.temp_c, ns.hours] + list(r.values())], {})


def _irradiate(ns):
    from .materials import irradiation_dose
    n = ns.n_total
    if n is None:
        n = _sample(ns).n_total_ppm
    d = irradiation_dose(n, ns.vacancy_yield, ns.recombination, ns.nitrogens_per_nv)
    return ["n_total_ppm", "dose_per_cm2"], [(n, d)], {}


HANDLERS = {
    "levels": _levels, "budget": _budget, "sensitivity": _sensitivity,
    "optimize-tau": _optimize_tau, "enhancement": _enhancement,
    "optimize-pulses": _optimize_pulses, "sweep-nitrogen": _sweep_nitrogen,
    "simulate": _simulate, "anneal": _anneal, "irradiate": _irradiate,
}
_GLOBAL = {"sample", "out", "seed", "format", "grid", "command"}


def _parse_grid(spec, ns):
    name, eq, rng = spec.partition("=")
    name = name.strip().lstrip("-").replace("-", "_")
    parts = rng.split(":")
    if not eq or len(parts) not in (3, 4):
        raise UsageError(f"bad --grid {spec!r}; expected NAME=START:STOP:STEPS")
    if name in _GLOBAL or not hasattr(ns, name):
        raise UsageError(f"--grid: unknown option {name!r} for {ns.command}")
    cur = getattr(ns, name)
    if isinstance(cur, bool) or not (cur is None or isinstance(cur, (int, float))):
        raise UsageError(f"--grid: option {name!r} is not numeric")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad --grid {spec!r}") from None
    if steps < 1:
        raise UsageError("--grid needs at least one step")
    if len(parts) == 4:
        if parts[3] != "log" or start <= 0 or stop <= 0:
            raise UsageError("log grid needs ':log' and positive bounds")
        vals = np.geomspace(start, stop, steps)
    else:
        vals = np.linspace(start, stop, steps)
    if isinstance(cur, int) and not isinstance(cur, bool) or name in ("k", "shots", "n_steps"):
        vals = [int(round(v)) for v in vals]
    return name, [v if isinstance(v, int) else float(v) for v in vals]


def run(ns):
    """Evaluate a parsed namespace; returns CSV text."""
    handler = HANDLERS[ns.command]
    if len(ns.grid) > 1:
        raise UsageError("only one --grid sweep is allowed")
    meta = {"seed": ns.seed, "command": ns.command}
    for k, v in sorted(vars(ns).items()):
        if k not in _GLOBAL:
            meta[f"arg.{k}"] = v
    if ns.sample:
        meta["sample"] = ns.sample
    if not ns.grid:
        head, rows, extra = handler(ns)
        meta.update(extra)
        return render_table(head, rows, meta)
    name, vals = _parse_grid(ns.grid[0], ns)
    meta["grid"] = ns.grid[0]
    all_rows, head = [], None
    for v in vals:
        sub = copy.copy(ns)
        setattr(sub, name, v)
        h, rows, extra = handler(sub)
        head = [f"grid_{name}"] + h
        all_rows += [[v] + list(r) for r in rows]
        for k, x in extra.items():
            meta.setdefault(k, x)
    return render_table(head, all_rows, meta)


def dispatch(argv=None):
    """Run the CLI; returns 0 on success, 1 on validation errors, 2 on usage errors."""
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = run(ns)
        if ns.out:
            write_text(text, ns.out)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"nvsk: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (NVSKError, ValueError) as exc:
        print(f"nvsk: validation error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR
    return 0


def main():
    sys.exit(dispatch())

"""CSV output with '#' metadata lines above a mandatory header."""

import csv
import io
import math
import os

from . import __version__
from .errors import ReportIOError


def fmt(v):
    """Shortest round-trip text for numbers, plain str otherwise."""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(float(v))
    if hasattr(v, "item"):
        return fmt(v.item())
    if hasattr(v, "value"):
        return str(v.value)
    return str(v)


def render_table(header, rows, meta=None):
    out = io.StringIO()
    out.write(f"# tool=nvsk version={__version__}\n")
    for k, v in (meta or {}).items():
        out.write(f"# {k}={fmt(v)}\n")
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return out.getvalue()


def write_text(text, path):
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as exc:
        raise ReportIOError(f"{path}: {exc}") from exc


def report_table(report):
    """(header, rows, meta) for a SensitivityReport or DephasingBudget."""
    from .dephasing import DephasingBudget
    from .sensitivity import SensitivityReport
    if report is None:
        return ["quantity", "value"], [], {}
    if isinstance(report, DephasingBudget):
        rows = [(k, v) for k, v in report.entries.items()]
        meta = {"basis": report.basis.value, "bath_drive": report.bath_drive,
                "drive_suppression": report.drive_suppression, "kind": report.kind}
        if rows:
            meta["total_t2star_s"] = report.total_t2star_s
            meta["dominant"] = report.dominant
        for n in report.notes:
            meta.setdefault("note", n)
        return ["mechanism", "rate_per_s"], rows, meta
    if isinstance(report, SensitivityReport):
        rows = [("eta_T_per_sqrtHz", report.eta_T_per_sqrtHz)]
        rows += list(report.factors.items())
        meta = {"protocol": report.protocol.value}
        for k, v in vars(report.inputs_echo).items():
            meta[f"input.{k}"] = v
        if report.flags:
            meta["flags"] = ";".join(report.flags)
        return ["quantity", "value"], rows, meta
    raise TypeError(f"cannot report {type(report).__name__}")


def save_report(report, path):
    """Write a report as CSV; ``None`` gives a header-only file."""
    header, rows, meta = report_table(report)
    write_text(render_table(header, rows, meta), path)


def read_report(path):
    """Read back (metadata, header, rows as lists of strings)."""
    meta, lines = {}, []
    with open(path, encoding="utf-8", newline="") as f:
        for line in f:
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                meta[k] = v
            else:
                lines.append(line)
    rows = list(csv.reader(lines))
    return meta, rows[0], rows[1:]

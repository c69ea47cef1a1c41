"""Run reports: a human-readable text form and a JSON document.

Polynomials serialize as integer coefficient arrays starting at degree 0,
matrices as ``{"labels": [...], "entries": [[coeffs, ...], ...]}``.
"""
from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from .cycleinv import CycleInventory, InvariantTuple, q_determinant_formula
from .homalg import Comparison
from .polymat import QMatrix, QPoly, UniCertificate, render_poly


@dataclass
class Report:
    command: list[str]
    input_digest: str
    results: dict[str, Any] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)


def digest(blobs) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(hashlib.sha256(b).digest())
    return h.hexdigest()


def to_data(value):
    """Plain JSON-compatible form of a result value."""
    if isinstance(value, QPoly):
        return list(value.coeffs) or [0]
    if isinstance(value, QMatrix):
        return {
            "labels": list(value.labels),
            "entries": [[to_data(value[i, j]) for j in range(value.n)] for i in range(value.n)],
        }
    if isinstance(value, UniCertificate):
        return {"P": to_data(value.P), "Q": to_data(value.Q), "D": to_data(value.D)}
    if isinstance(value, CycleInventory):
        return {
            "counts": {str(k): c for k, c in value.counts.items()},
            "cycles": [list(c) for c in value.cycles],
            "oc": value.oc,
            "ec": value.ec,
        }
    if isinstance(value, InvariantTuple):
        return {
            "simples": value.simples,
            "oc": value.oc,
            "ec": value.ec,
            "snf_q1": list(value.snf_q1),
            "det_q1": value.det_q1,
        }
    if isinstance(value, Comparison):
        return {"verdict": value.verdict.value, "differing": list(value.differing)}
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_data(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_data(v) for v in value]
    return value


def matrix_from_data(data) -> QMatrix:
    return QMatrix([[QPoly(c) for c in row] for row in data["entries"]], data["labels"])


def _grid(labels, cells) -> list[str]:
    head = [""] + list(labels)
    table = [head] + [[lab] + row for lab, row in zip(labels, cells)]
    widths = [max(len(r[k]) for r in table) for k in range(len(head))]
    return ["  " + "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in table]


def _text(value) -> list[str]:
    if isinstance(value, QPoly):
        return [render_poly(value)]
    if isinstance(value, QMatrix):
        cells = [[render_poly(value[i, j]) for j in range(value.n)] for i in range(value.n)]
        return _grid(value.labels, cells)
    if isinstance(value, UniCertificate):
        out = []
        for name in ("P", "Q", "D"):
            out.append(f"  {name}:")
            out += ["  " + line for line in _text(getattr(value, name))]
        return out
    if isinstance(value, CycleInventory):
        if not value.counts:
            return ["no cycles with full zero relations; det = 1"]
        out = [f"length {k}: {c}" for k, c in value.counts.items()]
        out += ["cycle: " + " ".join(c) for c in value.cycles]
        out.append(f"oc = {value.oc}, ec = {value.ec}")
        out.append("det = " + render_poly(q_determinant_formula(value)))
        return out
    if isinstance(value, InvariantTuple):
        return [str(value.as_tuple())]
    if isinstance(value, Comparison):
        tail = f" (differ: {', '.join(value.differing)})" if value.differing else ""
        return [value.verdict.value + tail]
    if isinstance(value, bool):
        return ["true" if value else "false"]
    if isinstance(value, enum.Enum):
        return [str(value.value)]
    if isinstance(value, str):
        return value.rstrip("\n").split("\n")
    if isinstance(value, (list, tuple)):
        if value and all(isinstance(v, QPoly) for v in value):
            return [", ".join(render_poly(v) for v in value)]
        if all(isinstance(v, str) for v in value):
            return [" ".join(value)] if len(value) < 2 or all(" " not in v for v in value) else list(value)
        return [json.dumps(to_data(value))]
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            out += _field(str(k), v)
        return out
    return [str(value)]


def _field(name: str, value) -> list[str]:
    lines = _text(value)
    if len(lines) == 1 and not isinstance(value, (QMatrix, UniCertificate)):
        return [f"{name}: {lines[0]}"]
    return [f"{name}:"] + lines


def emit_text(report: Report) -> str:
    out = []
    for k, v in report.results.items():
        out += _field(k, v)
    out += [f"warning: {d}" for d in report.diagnostics]
    return "\n".join(out) + "\n"


def emit_json(report: Report) -> str:
    doc = {
        "command": list(report.command),
        "input_digest": report.input_digest,
        "results": to_data(report.results),
        "diagnostics": list(report.diagnostics),
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def emit_report(report: Report) -> tuple[str, str]:
    return emit_text(report), emit_json(report)


def report_from_json(text: str) -> Report:
    doc = json.loads(text)
    return Report(doc["command"], doc["input_digest"], doc["results"], doc["diagnostics"])

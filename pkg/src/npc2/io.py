"""Complex/subcomplex files and report serialization.

Complex files are JSON::

    {"name": "...", "comment": "...",
     "vertices": [0, 1, 2], "triangles": [[0, 1, 2]],
     "edges": [[2, 3]],            # optional; faces of triangles are implied
     "lengths": {"0-1": 3.0}}      # optional; missing lengths default to 1

Subcomplex files list simplices of a parent complex; faces of listed
simplices are implied.
"""

from __future__ import annotations

import dataclasses
import json
import math
import re
from functools import singledispatch
from pathlib import Path

import numpy as np

from npc2.collapse import CollapseCertificate, Move
from npc2.complex import (
    Complex2,
    Subcomplex,
    UnknownSimplex,
    ValidationError,
    ValidationProblem,
    closure,
    validate,
)
from npc2.groups import GroupPresentation
from npc2.harness import ScanReport
from npc2.homology import HomologyResult
from npc2.metric import CurvatureReport, MetricAssignment
from npc2.verdict import TriVerdict, Verdict

SCHEMA_VERSION = 1
_LENGTH_KEY = re.compile(r"^\s*(-?\d+)\s*-\s*(-?\d+)\s*$")


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def _read(source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, str) and not source.lstrip().startswith(("{", "[")):
        return Path(source).read_text()
    return source


def _load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    if not isinstance(doc, dict):
        raise ParseError("document", "top level must be an object")
    return doc


def _int_list(doc, key, arity=None) -> list:
    items = doc.get(key, [])
    if not isinstance(items, list):
        raise ParseError(f"field {key!r}", "must be a list")
    out = []
    for i, item in enumerate(items):
        where = f"field {key!r} item {i}"
        if arity is None:
            if isinstance(item, bool) or not isinstance(item, int):
                raise ParseError(where, f"expected an integer, got {item!r}")
            out.append(item)
        else:
            if (not isinstance(item, list) or len(item) != arity
                    or any(isinstance(x, bool) or not isinstance(x, int) for x in item)):
                raise ParseError(where, f"expected {arity} integers, got {item!r}")
            out.append(item)
    return out


def parse_complex(source) -> tuple[Complex2, MetricAssignment]:
    """Parse a complex file (path or JSON text) into a validated complex and metric."""
    doc = _load_json(_read(source))
    if "vertices" not in doc:
        raise ParseError("field 'vertices'", "is required")
    vertices = _int_list(doc, "vertices")
    triangles = [tuple(sorted(t)) for t in _int_list(doc, "triangles", 3)]
    edges = {tuple(sorted(e)) for e in _int_list(doc, "edges", 2)}
    for t in triangles:
        if len(set(t)) == 3:
            edges.update({(t[0], t[1]), (t[0], t[2]), (t[1], t[2])})
    c = validate({"vertices": vertices, "edges": sorted(edges), "triangles": triangles})
    raw_lengths = doc.get("lengths", {}) or {}
    if not isinstance(raw_lengths, dict):
        raise ParseError("field 'lengths'", "must be an object")
    lengths = {}
    for key, value in raw_lengths.items():
        where = f"field 'lengths' key {key!r}"
        match = _LENGTH_KEY.match(str(key))
        if not match:
            raise ParseError(where, "expected 'i-j'")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(where, f"length must be a number, got {value!r}")
        e = tuple(sorted((int(match.group(1)), int(match.group(2)))))
        if e not in c.edge_set:
            raise ValidationError([ValidationProblem(e, f"length given for missing edge {e}")])
        lengths[e] = float(value)
    return c, MetricAssignment.for_complex(c, lengths)


def dump_complex(c: Complex2, m: MetricAssignment | None = None, name: str | None = None,
                 comment: str | None = None) -> str:
    covered = {e for t in c.triangles for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))}
    doc: dict = {
        "vertices": list(c.vertices),
        "triangles": [list(t) for t in c.triangles],
        "edges": [list(e) for e in c.edges if e not in covered],
    }
    if m is not None and not m.is_default:
        doc["lengths"] = {f"{a}-{b}": m[(a, b)] for a, b in c.edges}
    if name:
        doc["name"] = name
    if comment:
        doc["comment"] = comment
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def parse_subcomplex(source, parent: Complex2) -> Subcomplex:
    doc = _load_json(_read(source))
    seeds = [(v,) for v in _int_list(doc, "vertices")]
    seeds += [tuple(e) for e in _int_list(doc, "edges", 2)]
    seeds += [tuple(t) for t in _int_list(doc, "triangles", 3)]
    try:
        return closure(parent, seeds)
    except UnknownSimplex as exc:
        raise ValidationError([ValidationProblem(None, str(exc))]) from exc


def dump_subcomplex(s: Subcomplex, parent_ref: str | None = None) -> str:
    doc = {
        "parent": parent_ref,
        "vertices": list(s.vertices),
        "edges": [list(e) for e in s.edges],
        "triangles": [list(t) for t in s.triangles],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


# --- machine format -------------------------------------------------------------


def _num(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return float(f"{x:.15g}")


def jsonable(obj):
    """Convert results into plain JSON data with deterministic ordering."""
    if isinstance(obj, Verdict):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, Move):
        return obj.to_dict()
    if isinstance(obj, (Subcomplex, Complex2)):
        return {"vertices": list(obj.vertices), "edges": [list(e) for e in obj.edges],
                "triangles": [list(t) for t in obj.triangles]}
    if isinstance(obj, GroupPresentation):
        return {"generators": list(obj.generators), "relators": [list(r) for r in obj.relators],
                "text": obj.format()}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return [jsonable(x) for x in sorted(obj)]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@singledispatch
def to_machine(result) -> dict:
    return {"kind": type(result).__name__, "value": jsonable(result)}


@to_machine.register
def _(d: dict):
    return {"kind": "summary", **jsonable(d)}


@to_machine.register
def _(r: CurvatureReport):
    return {
        "kind": "curvature",
        "tol": _num(r.tol),
        "assume_flat_ok": r.assume_flat_ok,
        "metric": "default unit lengths" if r.default_metric else "given",
        "vertices": [
            {"vertex": v, "systole": _num(r.systoles[v]), "verdict": r.verdicts[v]}
            for v in sorted(r.systoles)
        ],
        "nonpositively_curved": r.nonpositively_curved,
        "failing": r.failing,
        "marginal": r.marginal,
        "inconclusive": r.inconclusive,
    }


@to_machine.register
def _(r: HomologyResult):
    return {"kind": "homology", "betti": list(r.betti), "torsion": [list(t) for t in r.torsion]}


@to_machine.register
def _(v: TriVerdict):
    return {"kind": "verdict", "value": v.value.value, "witness": jsonable(v.witness),
            "certificate": jsonable(v.certificate), "budget_spent": jsonable(v.budget_spent)}


@to_machine.register
def _(cert: CollapseCertificate):
    return {"kind": "collapse-certificate", "terminal": cert.terminal,
            "moves": [m.to_dict() for m in cert.moves]}


@to_machine.register
def _(p: GroupPresentation):
    return {"kind": "presentation", **jsonable(p),
            "basepoint": p.origin.get("basepoint"),
            "generator_edges": jsonable(p.origin.get("generator_edges", []))}


@to_machine.register
def _(r: ScanReport):
    return {
        "kind": "scan",
        "verdict": r.verdict,
        "pairs_tested": r.pairs_tested,
        "y_candidates": r.y_candidates,
        "z_candidates": r.z_candidates,
        "y_not_injective": r.y_not_injective,
        "y_skipped_unknown": r.y_skipped_unknown,
        "caps": {"max_y_size": r.max_y_size, "max_z_size": r.max_z_size},
        "budget": jsonable(r.budget),
        "violation_classes": len(r.violation_classes),
        "violations": [
            {"y": jsonable(v.y), "z": jsonable(v.z), "witness": jsonable(v.verdict.witness),
             "certificate": jsonable(v.verdict.certificate)}
            for v in r.violations
        ],
        "unknowns": [
            {"y": jsonable(u.y), "z": jsonable(u.z), "certificate": jsonable(u.verdict.certificate),
             "budget_spent": jsonable(u.verdict.budget_spent)}
            for u in r.unknowns
        ],
    }


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.12g}"


@singledispatch
def to_human(result) -> str:
    return json.dumps(jsonable(result), indent=1, sort_keys=True)


@to_human.register
def _(r: CurvatureReport):
    lines = [f"link condition (tol {r.tol:g}, metric: "
             f"{'default unit lengths' if r.default_metric else 'given'})",
             f"{'vertex':>8}  {'systole':>16}  {'systole/pi':>12}  verdict"]
    for v in sorted(r.systoles):
        s = r.systoles[v]
        lines.append(f"{v:>8}  {_fmt(s):>16}  {_fmt(s / math.pi):>12}  {r.verdicts[v]}")
    if r.failing:
        lines.append(f"not nonpositively curved: {len(r.failing)} vertex link(s) have short loops")
    elif r.inconclusive:
        lines.append(f"inconclusive: {len(r.marginal)} flat vertex link(s) at exactly 2*pi "
                     "(use --assume-flat-ok)")
    else:
        lines.append("nonpositively curved")
    return "\n".join(lines)


@to_human.register
def _(r: HomologyResult):
    names = ("H0", "H1", "H2")
    parts = []
    for name, b, t in zip(names, r.betti, r.torsion):
        summands = ["Z"] * b + [f"Z/{d}" for d in t]
        parts.append(f"{name} = {' + '.join(summands) if summands else '0'}")
    return "\n".join(parts)


@to_human.register
def _(v: TriVerdict):
    lines = [f"verdict: {v.value.value}"]
    if v.witness is not None:
        lines.append(f"witness: {json.dumps(jsonable(v.witness), sort_keys=True)}")
    if v.certificate:
        lines.append(f"certificate: {json.dumps(jsonable(v.certificate), sort_keys=True)}")
    if v.budget_spent:
        lines.append(f"budget spent: {json.dumps(jsonable(v.budget_spent), sort_keys=True)}")
    return "\n".join(lines)


@to_human.register
def _(cert: CollapseCertificate):
    lines = [f"collapse to vertex {cert.terminal} in {len(cert.moves)} moves"]
    for i, m in enumerate(cert.moves):
        lines.append(f"{i:>4}  {m.kind}  {' '.join(map(str, m.operands))}")
    return "\n".join(lines)


@to_human.register
def _(p: GroupPresentation):
    return p.format()


@to_human.register
def _(r: ScanReport):
    lines = [
        f"scan verdict: {r.verdict}",
        f"pairs tested: {r.pairs_tested} ({r.y_candidates} Y candidates, {r.z_candidates} Z candidates)",
        f"Y rejected as not pi1-injective: {r.y_not_injective}; Y skipped (undecided): {r.y_skipped_unknown}",
        f"caps: max Y size {r.max_y_size}, max Z size {r.max_z_size}",
        f"violations: {len(r.violations)} in {len(r.violation_classes)} class(es); unknowns: {len(r.unknowns)}",
    ]
    for v in r.violations[:20]:
        where = list(v.z.triangles) or list(v.z.edges)
        if v.loop:
            lines.append(f"  loop {v.loop} ({v.verdict.witness['word']}) dies in Z = {where}")
        else:
            lines.append(f"  free rank drops in Z = {where} (no short loop found)")
    return "\n".join(lines)


def emit_report(result, fmt: str = "human", **extra) -> str:
    if fmt == "machine":
        doc = {"schema_version": SCHEMA_VERSION, **to_machine(result), **jsonable(extra)}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if fmt == "human":
        text = to_human(result)
        if extra:
            text += "\n" + "\n".join(f"{k}: {jsonable(v)}" for k, v in sorted(extra.items()))
        return text + "\n"
    raise ValueError(f"unknown format {fmt!r}")

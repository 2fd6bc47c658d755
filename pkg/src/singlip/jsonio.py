"""JSON schemas for curves, graphs and computed reports.

Every document carries a top-level "format" tag.  Rationals travel as
{"num": p, "den": q} objects; parsers also accept "p/q" strings and bare
integers for convenience.  In strict mode unknown fields are rejected;
otherwise they are collected as warnings.
"""

from __future__ import annotations

import json
from typing import Optional

from .errors import InputError
from .exactnum import as_rational, rational_to_json
from .strands import PuiseuxBranch
from .surfgraph import DualGraph, KNOWN_FLAGS
from .tower import Arrow, BlowupEvent, DualTree

CURVE_FORMAT = "singlip.curve/1"
GRAPH_FORMAT = "singlip.graph/1"
TOWER_FORMAT = "singlip.tower/1"


def _check_fields(obj: dict, allowed: set, where: str, strict: bool,
                  warnings: list):
    unknown = sorted(set(obj) - allowed)
    if unknown:
        msg = f"unknown fields {unknown} in {where}"
        if strict:
            raise InputError(msg)
        warnings.append(msg)


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from None
    if not isinstance(doc, dict) or "format" not in doc:
        raise InputError("document must be a JSON object with a 'format' field")
    return doc


def parse_curve(doc: dict, strict: bool = False,
                warnings: Optional[list] = None) -> list[PuiseuxBranch]:
    warnings = warnings if warnings is not None else []
    if doc.get("format") != CURVE_FORMAT:
        raise InputError(f"expected format {CURVE_FORMAT!r}, got {doc.get('format')!r}")
    _check_fields(doc, {"format", "branches"}, "curve document", strict, warnings)
    branches = doc.get("branches")
    if not isinstance(branches, list) or not branches:
        raise InputError("field 'branches' must be a non-empty list")
    out = []
    for i, b in enumerate(branches):
        where = f"branches[{i}]"
        if not isinstance(b, dict):
            raise InputError(f"{where} must be an object")
        _check_fields(b, {"denominator", "terms"}, where, strict, warnings)
        terms = []
        for j, t in enumerate(b.get("terms", ())):
            _check_fields(t, {"exp", "coeff"}, f"{where}.terms[{j}]",
                          strict, warnings)
            try:
                terms.append((as_rational(t["exp"]), as_rational(t["coeff"])))
            except KeyError as exc:
                raise InputError(f"{where}.terms[{j}] missing {exc}") from None
        branch = PuiseuxBranch.from_terms(terms)
        if "denominator" in b and b["denominator"] != branch.denominator:
            raise InputError(
                f"{where}: declared denominator {b['denominator']} differs "
                f"from the minimal one {branch.denominator}")
        out.append(branch)
    return out


def curve_to_json(curve: list[PuiseuxBranch]) -> dict:
    return {"format": CURVE_FORMAT, "branches": [b.to_json() for b in curve]}


def parse_graph(doc: dict, strict: bool = False,
                warnings: Optional[list] = None) -> DualGraph:
    warnings = warnings if warnings is not None else []
    if doc.get("format") != GRAPH_FORMAT:
        raise InputError(f"expected format {GRAPH_FORMAT!r}, got {doc.get('format')!r}")
    _check_fields(doc, {"format", "vertices", "edges", "arrows"},
                  "graph document", strict, warnings)
    g = DualGraph()
    for i, v in enumerate(doc.get("vertices", ())):
        where = f"vertices[{i}]"
        _check_fields(v, {"id", "self_intersection", "genus", "rate",
                          "multiplicities", "flags"}, where, strict, warnings)
        try:
            vid = v["id"]
            self_int = v["self_intersection"]
        except KeyError as exc:
            raise InputError(f"{where} missing {exc}") from None
        if not isinstance(self_int, int) or self_int >= 0:
            raise InputError(f"{where}: self_intersection must be a negative integer")
        rate = v.get("rate")
        mults = v.get("multiplicities", {})
        if not all(isinstance(m, int) and m >= 0 for m in mults.values()):
            raise InputError(f"{where}: multiplicities must be non-negative integers")
        flags = v.get("flags", [])
        bad = set(flags) - KNOWN_FLAGS
        if bad:
            raise InputError(f"{where}: unknown flags {sorted(bad)}")
        g.add_vertex(vid, self_int, genus=v.get("genus", 0),
                     rate=None if rate is None else as_rational(rate),
                     multiplicities=mults, flags=flags)
    for i, e in enumerate(doc.get("edges", ())):
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"edges[{i}] must be a two-element list")
        g.add_edge(e[0], e[1])
    for i, a in enumerate(doc.get("arrows", ())):
        where = f"arrows[{i}]"
        _check_fields(a, {"vertex", "name", "multiplicity", "kind"},
                      where, strict, warnings)
        try:
            g.add_arrow(a["vertex"], a["name"], a.get("multiplicity", 1),
                        a.get("kind", "function"))
        except KeyError as exc:
            raise InputError(f"{where} missing {exc}") from None
    if not g.vertices:
        raise InputError("graph document has no vertices")
    return g


def graph_to_json(g: DualGraph) -> dict:
    vertices = []
    for vid, v in g.vertices.items():
        entry = {"id": vid, "self_intersection": v.self_intersection,
                 "genus": v.genus,
                 "rate": None if v.rate is None else rational_to_json(v.rate),
                 "multiplicities": dict(sorted(v.multiplicities.items())),
                 "flags": sorted(v.flags)}
        vertices.append(entry)
    return {"format": GRAPH_FORMAT,
            "vertices": vertices,
            "edges": [[a, b] for a, b in g.edges],
            "arrows": [{"vertex": a.vertex, "name": a.name,
                        "multiplicity": a.multiplicity, "kind": a.kind}
                       for a in g.arrows]}


def tower_to_json(tree: DualTree, events: Optional[list[BlowupEvent]] = None) -> dict:
    out = {"format": TOWER_FORMAT,
           "vertices": [{"id": v.index,
                         "self_intersection": v.self_intersection,
                         "rate": rational_to_json(v.rate),
                         "rate_vector": list(v.rate_vector),
                         "multiplicities": dict(sorted(v.multiplicities.items()))}
                        for v in tree.vertices],
           "edges": sorted([list(e) for e in tree.edges]),
           "arrows": [{"vertex": a.vertex, "name": a.name,
                       "multiplicity": a.multiplicity, "kind": a.kind,
                       **({"branch": a.branch} if a.branch is not None else {})}
                      for a in tree.arrows]}
    if events is not None:
        out["events"] = [{"index": e.index,
                          "center": [str(x) for x in e.center],
                          "branches": [list(b) for b in e.branches_through]}
                         for e in events]
    return out


def parse_tower(doc: dict) -> DualTree:
    if doc.get("format") != TOWER_FORMAT:
        raise InputError(f"expected format {TOWER_FORMAT!r}, got {doc.get('format')!r}")
    from .tower import TowerVertex
    tree = DualTree()
    for v in doc.get("vertices", ()):
        vec = tuple(v["rate_vector"])
        tree.vertices.append(TowerVertex(v["id"], v["self_intersection"], vec,
                                         {k: m for k, m in
                                          v.get("multiplicities", {}).items()}))
    for a, b in doc.get("edges", ()):
        tree.add_edge(a, b)
    for a in doc.get("arrows", ()):
        tree.arrows.append(Arrow(a["vertex"], a["name"], a["multiplicity"],
                                 a.get("kind", "function"), a.get("branch")))
    return tree


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"

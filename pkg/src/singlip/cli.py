"""Command-line front end.

Subcommands mirror the library: ``curve`` operations take curve JSON,
``graph`` operations take resolution-graph JSON, ``verify`` checks the
consistency invariants of any supported document, and ``fixtures`` ships
the built-in examples.  Exit codes: 0 success, 1 domain error or failed
verification, 2 malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import carrousel, decomp, dot, fixtures, jsonio, surfgraph, tower
from .errors import DomainError, InputError
from .strands import contact_matrix, horn_jump_profile

EVENT_CAP_ENV = "SINGLIP_EVENT_CAP"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_curve(path: str, strict: bool):
    doc = jsonio.load_document(_read(path))
    return jsonio.parse_curve(doc, strict=strict)


def _load_graph(path: str, strict: bool):
    doc = jsonio.load_document(_read(path))
    return jsonio.parse_graph(doc, strict=strict)


def _event_cap(args) -> int:
    if args.event_cap is not None:
        return args.event_cap
    env = os.environ.get(EVENT_CAP_ENV)
    return int(env) if env else tower.DEFAULT_EVENT_CAP


def _emit(args, json_doc, text_lines, dot_text=None) -> None:
    if args.format == "json":
        sys.stdout.write(jsonio.dumps(json_doc))
    elif args.format == "dot":
        if dot_text is None:
            raise InputError("no DOT form for this command")
        sys.stdout.write(dot_text)
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


# -- curve commands -----------------------------------------------------------

def cmd_curve_contacts(args) -> int:
    curve = _load_curve(args.input, args.strict)
    matrix = contact_matrix(curve)
    finite = sorted(matrix.finite_values())
    lines = [f"strands: {matrix.size}",
             "contacts: " + ", ".join(str(v) for v in finite)]
    for row in matrix.entries:
        lines.append(" ".join("inf" if v is None else str(v) for v in row))
    doc = {"format": "singlip.contacts/1", **matrix.to_json()}
    _emit(args, doc, lines)
    return 0


def _render_carrousel(node, indent=0, label=None):
    pad = "  " * indent
    prefix = f"[{label}] " if label is not None else ""
    if node.is_leaf():
        return [f"{pad}{prefix}strand {node.leaf}"]
    deco = ""
    if node.n is not None:
        deco = f"  (m={node.m} n={node.n}"
        deco += f" r={node.r} s={node.s})" if node.r is not None else ")"
    lines = [f"{pad}{prefix}q={node.weight}{deco}"]
    for child in node.children:
        lines.extend(_render_carrousel(child, indent + 1, child.edge_label))
    return lines


def cmd_curve_carrousel(args) -> int:
    curve = _load_curve(args.input, args.strict)
    t = carrousel.decorate(carrousel.build_carrousel_tree(contact_matrix(curve)))
    if args.reduce:
        t = carrousel.reduce_to_eggers(t)
    doc = {"format": "singlip.carrousel/1", **t.to_json()}
    _emit(args, doc, _render_carrousel(t.root), dot.carrousel_to_dot(t))
    return 0


def cmd_curve_horns(args) -> int:
    curve = _load_curve(args.input, args.strict)
    profile = horn_jump_profile(contact_matrix(curve), args.base)
    lines = ["thresholds: " + ", ".join(str(t) for t in profile.thresholds),
             "counts: " + ", ".join(str(c) for c in profile.counts)]
    _emit(args, {"format": "singlip.horns/1", **profile.to_json()}, lines)
    return 0


def cmd_curve_resolve(args) -> int:
    curve = _load_curve(args.input, args.strict)
    events, tree = tower.resolve_curve(curve, event_cap=_event_cap(args))
    lines = []
    for v in tree.vertices:
        lines.append(f"E{v.index + 1}: self={v.self_intersection} rate={v.rate} "
                     + " ".join(f"{k}={m}" for k, m in sorted(v.multiplicities.items())))
    lines.append("edges: " + ", ".join(f"E{a + 1}-E{b + 1}"
                                       for a, b in sorted(tree.edges)))
    lines.append("arrows: " + ", ".join(
        f"{a.name}@E{a.vertex + 1}({a.multiplicity})" for a in tree.arrows))
    _emit(args, jsonio.tower_to_json(tree, events), lines, dot.tree_to_dot(tree))
    return 0


def cmd_curve_equiv(args) -> int:
    trees = []
    for path in (args.first, args.second):
        curve = _load_curve(path, args.strict)
        trees.append(carrousel.build_carrousel_tree(contact_matrix(curve)))
    equal = carrousel.trees_isomorphic(*trees)
    _emit(args, {"format": "singlip.equiv/1", "equivalent": equal},
          [f"equivalent: {'true' if equal else 'false'}"])
    return 0


# -- graph commands -----------------------------------------------------------

def cmd_graph_mult(args) -> int:
    graph = _load_graph(args.input, args.strict)
    divisor = surfgraph.solve_multiplicities(graph, args.arrow,
                                             strict=not args.allow_fractional)
    lines = [f"{vid}: {m}" for vid, m in divisor.coefficients.items()]
    _emit(args, {"format": "singlip.divisor/1", "name": args.arrow,
                 **divisor.to_json()}, lines)
    return 0


def cmd_graph_laufer(args) -> int:
    curve = _load_curve(args.input, args.strict)
    _, tree = tower.resolve_curve(curve, event_cap=_event_cap(args))
    prepared = surfgraph.laufer_parity_prepare(tree)
    cover = surfgraph.laufer_double_cover(prepared)
    lines = []
    for vid, v in cover.vertices.items():
        lines.append(f"E{vid + 1}: self={v.self_intersection} genus={v.genus} "
                     + " ".join(f"{k}={m}" for k, m in sorted(v.multiplicities.items())))
    lines.append("edges: " + ", ".join(f"E{a + 1}-E{b + 1}"
                                       for a, b in sorted(cover.edges)))
    _emit(args, jsonio.graph_to_json(cover), lines, dot.graph_to_dot(cover))
    return 0


def cmd_graph_pencil(args) -> int:
    graph = _load_graph(args.input, args.strict)
    gens = []
    for entry in args.gen:
        name, _, power = entry.partition(":")
        power = int(power) if power else 1
        base = surfgraph.solve_multiplicities(graph, name)
        gens.append(surfgraph.Divisor(
            {k: power * v for k, v in base.coefficients.items()},
            tuple((v, power * m) for v, m in base.strict_arrows)))
    if len(gens) < 2:
        raise InputError("graph pencil needs at least two --gen entries")
    generic = surfgraph.pencil_min(graph, gens)
    # a base point needs the generic strict transform through the curve and
    # frozen there by a strictly lower-order generator
    base_vertices = [vid for vid, _ in generic.strict_arrows
                     if surfgraph.has_base_point(gens, vid)]
    lines = ["generic: " + " ".join(f"{k}:{v}" for k, v in
                                    generic.coefficients.items()),
             "base points on: " + ", ".join(str(v) for v in base_vertices)]
    resolved_doc = {}
    if args.resolve and base_vertices:
        g2, steps = surfgraph.resolve_pencil(graph, gens[0], gens[1],
                                             base_vertices[0])
        chain = [s.vertex for s in steps]
        lines.append("chain: " + ", ".join(
            f"{v}({g2.vertices[v].self_intersection})" for v in chain))
        resolved_doc = {"resolved": jsonio.graph_to_json(g2),
                        "chain": [str(v) for v in chain]}
    _emit(args, {"format": "singlip.pencil/1",
                 "generic": generic.to_json(),
                 "base_points": [str(v) for v in base_vertices],
                 **resolved_doc}, lines)
    return 0


def cmd_graph_thickthin(args) -> int:
    graph = _load_graph(args.input, args.strict)
    tt = decomp.thick_thin(graph)
    lines = []
    for l_node, zone in tt.thick_zones:
        lines.append(f"thick[{l_node}]: " + ", ".join(sorted(map(str, zone))))
    for zone in tt.thin_zones:
        lines.append("thin: " + ", ".join(sorted(map(str, zone))))
    lines.append(f"metrically conical: "
                 f"{'true' if tt.metrically_conical else 'false'}")
    doc = {"format": "singlip.thickthin/1",
           "thick": [{"l_node": str(l), "zone": sorted(map(str, z))}
                     for l, z in tt.thick_zones],
           "thin": [sorted(map(str, z)) for z in tt.thin_zones],
           "metrically_conical": tt.metrically_conical}
    _emit(args, doc, lines)
    return 0


def cmd_graph_decompose(args) -> int:
    graph = _load_graph(args.input, args.strict)
    d = decomp.build_decomposition(graph, args.mode)
    lines = [p.describe() + " on {" + ", ".join(sorted(map(str, p.support))) + "}"
             for p in sorted(d.pieces.values(), key=lambda p: p.pid)]
    _emit(args, {"format": "singlip.decomposition/1", **d.to_json()}, lines,
          dot.decomposition_to_dot(graph, d))
    return 0


def cmd_graph_signature(args) -> int:
    build = (decomp.inner_signature if args.metric == "inner"
             else decomp.outer_signature)
    first = build(_load_graph(args.input, args.strict))
    if args.second:
        second = build(_load_graph(args.second, args.strict))
        equal = decomp.signatures_equal(first, second)
        _emit(args, {"format": "singlip.signature/1", "metric": args.metric,
                     "equal": equal},
              [f"equal: {'true' if equal else 'false'}"])
        return 0
    doc = first.to_json()
    lines = [f"{args.metric} signature, {len(doc['nodes'])} pieces:"]
    for node in doc["nodes"]:
        extras = [f"{k}={node[k]}" for k in ("mult", "selfint") if k in node]
        lines.append(f"  {node['id']}: {node['kind']}"
                     f"({','.join(node['rates'])})"
                     + (" " + " ".join(extras) if extras else ""))
    lines.append("adjacency: " + ", ".join(f"{a}-{b}" for a, b in doc["edges"]))
    _emit(args, {"format": "singlip.signature/1", **doc}, lines)
    return 0


# -- verify and fixtures ------------------------------------------------------

def _verify_graph(graph) -> list[str]:
    problems = []
    if not graph.is_connected():
        problems.append("graph is not connected")
    if not graph.is_negative_definite():
        problems.append("intersection matrix is not negative definite")
    for name in sorted({a.name for a in graph.arrows}):
        coeffs = {vid: v.multiplicities.get(name)
                  for vid, v in graph.vertices.items()}
        if any(c is None for c in coeffs.values()):
            continue  # divisor not stored; nothing to check against
        arrows = [(a.vertex, a.multiplicity) for a in graph.arrows
                  if a.name == name]
        residuals = graph.laufer_residuals(coeffs, arrows)
        for vid, r in residuals.items():
            if r != 0:
                problems.append(f"laufer residual {r} for {name!r} at {vid}")
    return problems


def cmd_verify(args) -> int:
    doc = jsonio.load_document(_read(args.input))
    fmt = doc["format"]
    problems: list[str] = []
    if fmt == jsonio.CURVE_FORMAT:
        curve = jsonio.parse_curve(doc, strict=args.strict)
        matrix = contact_matrix(curve)
        for j, k, l in matrix.check_ultrametric():
            problems.append(f"ultrametric violation at strands ({j},{k},{l})")
    elif fmt == jsonio.GRAPH_FORMAT:
        problems = _verify_graph(jsonio.parse_graph(doc, strict=args.strict))
    elif fmt == jsonio.TOWER_FORMAT:
        report = tower.verify_tower(jsonio.parse_tower(doc))
        problems = report.problems()
    else:
        raise InputError(f"cannot verify documents of format {fmt!r}")
    for p in problems:
        print(p)
    print("ok" if not problems else f"failed: {len(problems)} problem(s)")
    return 1 if problems else 0


def cmd_fixtures_list(args) -> int:
    for name in fixtures.fixture_names():
        print(f"{name} ({fixtures.fixture_kind(name)})")
    return 0


def cmd_fixtures_dump(args) -> int:
    obj = fixtures.load_fixture(args.name)
    if fixtures.fixture_kind(args.name) == "curve":
        sys.stdout.write(jsonio.dumps(jsonio.curve_to_json(obj)))
    else:
        sys.stdout.write(jsonio.dumps(jsonio.graph_to_json(obj)))
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singlip",
        description="Lipschitz-geometry invariants of curve and surface "
                    "singularities from exact combinatorial data")
    parser.add_argument("--format", choices=("text", "json", "dot"),
                        default="text", help="output format")
    parser.add_argument("--strict", action="store_true",
                        help="reject unknown JSON fields")
    parser.add_argument("--event-cap", type=int, default=None,
                        help=f"blow-up event cap (or ${EVENT_CAP_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", help="plane curve germ operations")
    csub = curve.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("contacts", help="contact matrix of the strands")
    p.add_argument("input")
    p.set_defaults(func=cmd_curve_contacts)
    p = csub.add_parser("carrousel", help="decorated carrousel tree")
    p.add_argument("input")
    p.add_argument("--reduce", action="store_true",
                   help="apply the Eggers reduction")
    p.set_defaults(func=cmd_curve_carrousel)
    p = csub.add_parser("horns", help="horn jump profile of one strand")
    p.add_argument("input")
    p.add_argument("--base", type=int, required=True, help="base strand index")
    p.set_defaults(func=cmd_curve_horns)
    p = csub.add_parser("resolve", help="minimal embedded resolution tower")
    p.add_argument("input")
    p.set_defaults(func=cmd_curve_resolve)
    p = csub.add_parser("equiv", help="decide outer Lipschitz equivalence")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_curve_equiv)

    graph = sub.add_parser("graph", help="resolution graph operations")
    gsub = graph.add_subparsers(dest="subcommand", required=True)
    p = gsub.add_parser("mult", help="solve total-transform multiplicities")
    p.add_argument("input")
    p.add_argument("--arrow", required=True, help="arrow (function) name")
    p.add_argument("--allow-fractional", action="store_true")
    p.set_defaults(func=cmd_graph_mult)
    p = gsub.add_parser("laufer", help="double cover graph of z^2 + f(x,y) "
                                       "from curve input")
    p.add_argument("input")
    p.set_defaults(func=cmd_graph_laufer)
    p = gsub.add_parser("pencil", help="generic member and base points of a pencil")
    p.add_argument("input")
    p.add_argument("--gen", action="append", default=[],
                   help="generator as NAME[:POWER], repeatable")
    p.add_argument("--resolve", action="store_true",
                   help="blow up the first base point until resolved")
    p.set_defaults(func=cmd_graph_pencil)
    p = gsub.add_parser("thickthin", help="thick-thin decomposition")
    p.add_argument("input")
    p.set_defaults(func=cmd_graph_thickthin)
    p = gsub.add_parser("decompose", help="geometric decomposition")
    p.add_argument("input")
    p.add_argument("--mode", choices=decomp.MODES, required=True)
    p.set_defaults(func=cmd_graph_decompose)
    p = gsub.add_parser("signature", help="classification signature")
    p.add_argument("input")
    p.add_argument("second", nargs="?", default=None,
                   help="second graph: compare signatures instead")
    p.add_argument("--metric", choices=("inner", "outer"), required=True)
    p.set_defaults(func=cmd_graph_signature)

    p = sub.add_parser("verify", help="run the consistency verifier")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify)

    fix = sub.add_parser("fixtures", help="built-in example data")
    fsub = fix.add_subparsers(dest="subcommand", required=True)
    p = fsub.add_parser("list")
    p.set_defaults(func=cmd_fixtures_list)
    p = fsub.add_parser("dump")
    p.add_argument("name")
    p.set_defaults(func=cmd_fixtures_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Node classification, thick-thin decomposition, and the geometric
decompositions of surface germs into standard pieces.

All operations work on decorated resolution graphs.  Pieces are the
standard metric models: B(q) (cone fibered with rate q), D(q) (disc fiber),
A(q,q') (annular, two rates), and conical = B(1).  A decomposition is a
partition of the graph's vertices into piece supports; strings between two
pieces with empty interior are supported on the edge itself.

The thick part of a germ is read off the graph as one zone per L-node (the
L-node, its attached bamboos, and the interiors of strings running from it
to other nodes); everything else is thin.  A string joining two L-nodes
stays thin: it is exactly the configuration of the non-conical A_k germs,
whose thin piece contains no node at all.

The inner (resp. outer) geometric decomposition keeps one B-piece per inner
(resp. outer) node and one A-piece per string between nodes; special
P-nodes contribute frozen A(q,q)-pieces in the inner decomposition.  The
same decompositions arise from the initial per-vertex pieces by running the
amalgamation rules, which is checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .errors import DomainError, InputError
from .exactnum import rational_to_json
from .surfgraph import DualGraph, L_NODE, DELTA_NODE, P_NODE
from .tower import DualTree, GENERIC_LINEAR

MODES = ("initial", "inner", "outer")


@dataclass(frozen=True)
class NodeFlags:
    is_L: bool
    is_Delta: bool
    is_P: bool
    is_special_P: bool
    is_inner_node: bool
    is_outer_node: bool


def _require_rates(graph: DualGraph):
    missing = [v.id for v in graph.vertices.values() if v.rate is None]
    if missing:
        raise InputError(f"vertices without inner rates: {missing}")


def classify_nodes(graph: DualGraph) -> dict:
    """Per-vertex node flags from the stored L/Delta/P decorations.

    A special P-node is a P-node of valence two whose rate strictly exceeds
    both neighbor rates.  Inner nodes are vertices of valence >= 3, positive
    genus, L-nodes or special P-nodes; outer nodes replace "special P" by
    "P".
    """
    _require_rates(graph)
    out = {}
    for vid, v in graph.vertices.items():
        is_l = L_NODE in v.flags
        is_d = DELTA_NODE in v.flags
        is_p = P_NODE in v.flags
        nbrs = graph.neighbors(vid)
        special = (is_p and len(nbrs) == 2
                   and all(graph.vertices[w].rate < v.rate for w in nbrs))
        big = len(nbrs) >= 3 or v.genus > 0 or is_l
        out[vid] = NodeFlags(is_l, is_d, is_p, special,
                             big or special, big or is_p)
    return out


# -- thick-thin ---------------------------------------------------------------

@dataclass(frozen=True)
class ThickThin:
    thick_zones: tuple          # (l_node, frozenset of vertices) per L-node
    thin_zones: tuple           # frozenset of vertices per zone

    @property
    def metrically_conical(self) -> bool:
        return not self.thin_zones


def _is_node_for_thick_thin(graph: DualGraph, vid) -> bool:
    v = graph.vertices[vid]
    return graph.valence(vid) >= 3 or v.genus > 0 or L_NODE in v.flags


def thick_thin(graph: DualGraph) -> ThickThin:
    """Thick zones (one per L-node) and the thin complement."""
    if not graph.is_connected():
        raise InputError("thick_thin needs a connected graph")
    l_nodes = [vid for vid, v in graph.vertices.items() if L_NODE in v.flags]
    if not l_nodes:
        raise DomainError("graph has no L-node")
    for vid in l_nodes:
        for w in graph.neighbors(vid):
            if L_NODE in graph.vertices[w].flags:
                raise DomainError(f"adjacent L-nodes {vid!r} and {w!r}")

    thick: dict = {vid: {vid} for vid in l_nodes}
    for vid in l_nodes:
        for start in graph.neighbors(vid):
            chain = []
            prev, cur = vid, start
            while not _is_node_for_thick_thin(graph, cur):
                chain.append(cur)
                nxt = [w for w in graph.neighbors(cur) if w != prev]
                if not nxt:
                    break  # bamboo: ends at a leaf
                if len(nxt) > 1:
                    raise InputError(f"non-node vertex {cur!r} with valence > 2")
                prev, cur = cur, nxt[0]
            else:
                # chain ended at a node: interiors of strings to an L-node
                # stay thin, strings to any other node thicken
                if L_NODE in graph.vertices[cur].flags:
                    continue
            thick[vid].update(chain)

    claimed = set().union(*thick.values()) if thick else set()
    rest = [vid for vid in graph.vertices if vid not in claimed]
    zones = []
    seen = set()
    for vid in rest:
        if vid in seen:
            continue
        comp = {vid}
        queue = [vid]
        seen.add(vid)
        while queue:
            x = queue.pop()
            for w in graph.neighbors(x):
                if w not in claimed and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        zones.append(frozenset(comp))
    zones.sort(key=lambda z: sorted(map(str, z)))
    return ThickThin(tuple((vid, frozenset(thick[vid])) for vid in l_nodes),
                     tuple(zones))


def is_metrically_conical(graph: DualGraph) -> bool:
    return thick_thin(graph).metrically_conical


def thin_zone_rate(graph: DualGraph, zone) -> Fraction:
    """Minimal inner rate over the zone, the contact rate of its fast loops."""
    rates = []
    for vid in zone:
        r = graph.vertices[vid].rate
        if r is None:
            raise InputError(f"vertex {vid!r} in thin zone has no rate")
        rates.append(r)
    q = min(rates)
    if q <= 1:
        raise DomainError(f"thin zone rate {q} not > 1; inconsistent input")
    return q


# -- pieces and decompositions ------------------------------------------------

@dataclass(frozen=True)
class Piece:
    pid: int
    kind: str                    # "B" | "D" | "A" | "conical"
    rates: tuple                 # (q,) or (q, q') with q <= q'
    support: frozenset = frozenset()
    edge_support: frozenset = frozenset()
    special: bool = False
    node: object = None          # central vertex for node pieces

    def rate_label(self) -> str:
        return "(" + ",".join(str(q) for q in self.rates) + ")"

    def describe(self) -> str:
        kind = {"conical": "B"}.get(self.kind, self.kind)
        label = kind + self.rate_label()
        return ("special " + label) if self.special else label

    def to_json(self) -> dict:
        return {"id": self.pid, "kind": self.kind,
                "rates": [rational_to_json(q) for q in self.rates],
                "special": self.special,
                "support": sorted(map(str, self.support)),
                "edge_support": sorted(map(str, self.edge_support))}


@dataclass
class Decomposition:
    mode: str
    pieces: dict = field(default_factory=dict)
    adjacency: set = field(default_factory=set)

    def add_piece(self, piece: Piece):
        self.pieces[piece.pid] = piece

    def join(self, a: int, b: int):
        if a != b:
            self.adjacency.add(frozenset((a, b)))

    def neighbors(self, pid: int) -> list[int]:
        out = []
        for pair in self.adjacency:
            if pid in pair:
                other = next(iter(pair - {pid}), pid)
                out.append(other)
        return sorted(out)

    def by_kind(self, kind: str) -> list[Piece]:
        return sorted((p for p in self.pieces.values() if p.kind == kind),
                      key=lambda p: p.pid)

    def supports_partition(self, graph_vertices) -> bool:
        seen = []
        for p in self.pieces.values():
            seen.extend(p.support)
        return sorted(map(str, seen)) == sorted(map(str, graph_vertices))

    def summary(self) -> list[str]:
        return sorted(p.describe() for p in self.pieces.values())

    def to_json(self) -> dict:
        return {"mode": self.mode,
                "pieces": [self.pieces[k].to_json() for k in sorted(self.pieces)],
                "adjacency": sorted(sorted(pair) for pair in self.adjacency)}


def csquare_decomposition(tree: DualTree) -> Decomposition:
    """Per-vertex geometric decomposition of the plane attached to a tower:
    one piece per exceptional curve (conical at the root, D at arrowless
    leaves, A(q,q) at arrowless valence-2 vertices, B otherwise) and one
    A(q,q')-piece per edge."""
    d = Decomposition("csquare")
    pid = 0
    vertex_piece = {}
    for v in tree.vertices:
        q = v.rate
        arrows = tree.arrows_at(v.index)
        valence = len(tree.adjacency(v.index))
        if v.index == tree.root:
            piece = Piece(pid, "conical", (Fraction(1),),
                          frozenset([v.index]), node=v.index)
        elif valence == 1 and not arrows:
            piece = Piece(pid, "D", (q,), frozenset([v.index]), node=v.index)
        elif valence == 2 and not arrows:
            piece = Piece(pid, "A", (q, q), frozenset([v.index]), node=v.index)
        else:
            piece = Piece(pid, "B", (q,), frozenset([v.index]), node=v.index)
        d.add_piece(piece)
        vertex_piece[v.index] = pid
        pid += 1
    for a, b in sorted(tree.edges):
        qa, qb = tree.vertices[a].rate, tree.vertices[b].rate
        piece = Piece(pid, "A", tuple(sorted((qa, qb))),
                      edge_support=frozenset([(min(a, b), max(a, b))]))
        d.add_piece(piece)
        d.join(pid, vertex_piece[a])
        d.join(pid, vertex_piece[b])
        pid += 1
    return d


def _merge_piece(d: Decomposition, keep: Piece, drop_ids: Sequence[int]):
    for pid in drop_ids:
        nbrs = d.neighbors(pid)
        for w in nbrs:
            d.adjacency.discard(frozenset((pid, w)))
            if w not in drop_ids and w != keep.pid:
                d.join(keep.pid, w)
        del d.pieces[pid]
    d.pieces[keep.pid] = keep


def amalgamate(d: Decomposition, protected: frozenset = frozenset()) -> Decomposition:
    """Run the amalgamation rules to a stable state in canonical order.

    Rules: adjacent A-pieces sharing a rate merge; a D absorbs across its
    A-collar; a D melts into an adjacent B (or conical) piece of the same
    rate; adjacent all-rate-1 pieces merge into a conical piece.  Protected
    pieces are never removed or changed (a protected B may still absorb).
    The canonical order is highest eliminated rate first, then lowest piece
    id, which makes the result reproducible; confluence under relabeling is
    checked by the tests.
    """
    d = Decomposition(d.mode, dict(d.pieces), set(d.adjacency))

    def candidates():
        out = []
        for pair in d.adjacency:
            a, b = sorted(pair)
            if a not in d.pieces or b not in d.pieces:
                continue
            pa, pb = d.pieces[a], d.pieces[b]
            for x, y in ((pa, pb), (pb, pa)):
                # rule: A(q,q') u A(q',q'') = A(q,q'')
                if (x.kind == "A" and y.kind == "A"
                        and x.pid not in protected and y.pid not in protected):
                    shared = set(x.rates) & set(y.rates)
                    if shared:
                        s = max(shared)
                        out.append((s, min(x.pid, y.pid), "AA", x.pid, y.pid, s))
                        break
                # rule: A(q,q') u D(q') = D(q)
                if (x.kind == "A" and y.kind == "D"
                        and x.pid not in protected and y.pid not in protected
                        and y.rates[0] in x.rates):
                    out.append((y.rates[0], min(x.pid, y.pid), "AD",
                                x.pid, y.pid, y.rates[0]))
                    break
                # rule: D(q) glues into B(q) / conical piece of the same rate
                if (x.kind == "D" and y.kind in ("B", "conical")
                        and x.pid not in protected and not y.special
                        and x.rates[0] == y.rates[0]):
                    out.append((x.rates[0], x.pid, "DB", x.pid, y.pid, None))
                    break
                # rule: rate-1 pieces merge into a conical piece
                if (x.kind in ("conical", "B", "D", "A") and y.kind == "conical"
                        and x.pid not in protected and y.pid not in protected
                        and all(q == 1 for q in x.rates)):
                    out.append((Fraction(1), min(x.pid, y.pid), "CC",
                                x.pid, y.pid, None))
                    break
        return out

    while True:
        cand = candidates()
        if not cand:
            return d
        cand.sort(key=lambda c: (-c[0], c[1]))
        _, _, rule, xa, xb, shared = cand[0]
        px, py = d.pieces[xa], d.pieces[xb]
        keep_id = min(xa, xb)
        support = px.support | py.support
        edges = px.edge_support | py.edge_support
        if rule == "AA":
            rx = list(px.rates)
            ry = list(py.rates)
            rx.remove(shared)
            ry.remove(shared)
            rates = tuple(sorted((rx[0], ry[0])))
            new = Piece(keep_id, "A", rates, support, edges)
            _merge_piece(d, new, [p for p in (xa, xb) if p != keep_id])
        elif rule == "AD":
            other = [q for q in px.rates if q != shared]
            low = other[0] if other else shared
            new = Piece(keep_id, "D", (low,), support, edges)
            _merge_piece(d, new, [p for p in (xa, xb) if p != keep_id])
        elif rule == "DB":
            new = replace(py, support=support, edge_support=edges)
            _merge_piece(d, new, [xa])
        else:  # CC
            new = Piece(keep_id, "conical", (Fraction(1),), support, edges)
            _merge_piece(d, new, [p for p in (xa, xb) if p != keep_id])


def _mode_nodes(graph: DualGraph, mode: str) -> dict:
    flags = classify_nodes(graph)
    nodes = {}
    for vid, f in flags.items():
        v = graph.vertices[vid]
        base = graph.valence(vid) >= 3 or v.genus > 0 or f.is_L
        if mode == "inner":
            take = base or f.is_special_P
        elif mode == "outer":
            take = base or f.is_P
        elif mode == "initial":
            take = base or f.is_P or f.is_Delta
        else:
            raise InputError(f"unknown decomposition mode {mode!r}")
        if take:
            nodes[vid] = f
    return nodes


def build_decomposition(graph: DualGraph, mode: str) -> Decomposition:
    """Inner, outer or initial geometric decomposition of the germ.

    B-pieces biject with the mode's nodes (each node plus its attached
    bamboos); A-pieces biject with the strings and edges joining two nodes.
    In inner mode a special P-node contributes a frozen A(q,q)-piece
    instead of a B-piece.
    """
    _require_rates(graph)
    if not graph.is_connected():
        raise InputError("decomposition needs a connected graph")
    nodes = _mode_nodes(graph, mode)
    if not nodes:
        raise DomainError("graph has no nodes for this mode")

    d = Decomposition(mode)
    pid = 0
    piece_of_node = {}
    for vid in graph.vertices:
        if vid not in nodes:
            continue
        v = graph.vertices[vid]
        f = nodes[vid]
        support = {vid}
        for start in graph.neighbors(vid):
            chain = []
            prev, cur = vid, start
            while cur not in nodes:
                chain.append(cur)
                nxt = [w for w in graph.neighbors(cur) if w != prev]
                if not nxt:
                    support.update(chain)  # bamboo
                    break
                if len(nxt) > 1:
                    raise InputError(f"non-node vertex {cur!r} with valence > 2")
                prev, cur = cur, nxt[0]
        special = (mode == "inner" and f.is_special_P
                   and not (graph.valence(vid) >= 3 or v.genus > 0 or f.is_L))
        if special:
            piece = Piece(pid, "A", (v.rate, v.rate), frozenset(support),
                          special=True, node=vid)
        elif v.rate == 1:
            piece = Piece(pid, "B", (Fraction(1),), frozenset(support), node=vid)
        else:
            piece = Piece(pid, "B", (v.rate,), frozenset(support), node=vid)
        d.add_piece(piece)
        piece_of_node[vid] = pid
        pid += 1

    # direct edges between nodes become A-pieces supported on the edge
    for i, (a, b) in enumerate(graph.edges):
        if a in piece_of_node and b in piece_of_node:
            qa, qb = graph.vertices[a].rate, graph.vertices[b].rate
            piece = Piece(pid, "A", tuple(sorted((qa, qb))),
                          edge_support=frozenset([("edge", i)]))
            d.add_piece(piece)
            d.join(pid, piece_of_node[a])
            d.join(pid, piece_of_node[b])
            pid += 1

    # strings between two nodes become A-pieces on their interior vertices
    seen_strings = set()
    for vid in piece_of_node:
        for start in graph.neighbors(vid):
            if start in nodes:
                continue
            chain = []
            prev, cur = vid, start
            while cur not in nodes:
                chain.append(cur)
                nxt = [w for w in graph.neighbors(cur) if w != prev]
                if not nxt:
                    chain = None  # bamboo, already in the node's B-piece
                    break
                prev, cur = cur, nxt[0]
            if chain is None:
                continue
            key = frozenset(chain)
            if key in seen_strings:
                continue
            seen_strings.add(key)
            qa, qb = graph.vertices[vid].rate, graph.vertices[cur].rate
            piece = Piece(pid, "A", tuple(sorted((qa, qb))), frozenset(chain))
            d.add_piece(piece)
            d.join(pid, piece_of_node[vid])
            d.join(pid, piece_of_node[cur])
            pid += 1

    if not d.supports_partition(list(graph.vertices)):
        raise DomainError("piece supports do not partition the vertices")
    return d


# -- classification signatures ------------------------------------------------

def _decomposition_graph(graph: DualGraph, d: Decomposition, metric: str) -> nx.Graph:
    g = nx.Graph()
    mults = {}
    for p in d.pieces.values():
        if p.node is not None:
            m = graph.vertices[p.node].multiplicities.get(GENERIC_LINEAR)
            if m is None:
                raise InputError(
                    f"vertex {p.node!r} lacks generic-linear multiplicities")
            mults[p.pid] = m
    if metric == "inner":
        scale = math.gcd(*mults.values()) if mults else 1
    else:
        scale = 1
    for p in d.pieces.values():
        attrs = {"kind": "special-A" if p.special else p.kind,
                 "rates": tuple(str(q) for q in p.rates)}
        if p.pid in mults:
            attrs["mult"] = Fraction(mults[p.pid], scale)
        if metric == "outer" and p.node is not None:
            attrs["selfint"] = graph.vertices[p.node].self_intersection
        g.add_node(p.pid, **attrs)
    for pair in d.adjacency:
        a, b = sorted(pair)
        g.add_edge(a, b)
    return g


@dataclass(frozen=True)
class Signature:
    metric: str
    graph: nx.Graph

    def to_json(self) -> dict:
        nodes = []
        for n in sorted(self.graph.nodes):
            a = dict(self.graph.nodes[n])
            a["id"] = n
            if "mult" in a:
                a["mult"] = str(a["mult"])
            a["rates"] = list(a["rates"])
            nodes.append(a)
        return {"metric": self.metric, "nodes": nodes,
                "edges": sorted([sorted(e) for e in self.graph.edges])}


def inner_signature(graph: DualGraph) -> Signature:
    """Inner Lipschitz classification data: the inner decomposition graph
    with per-piece rates and scale-normalised generic-linear multiplicities."""
    d = build_decomposition(graph, "inner")
    return Signature("inner", _decomposition_graph(graph, d, "inner"))


def outer_signature(graph: DualGraph) -> Signature:
    """Outer classification data: the outer decomposition graph with rate,
    self-intersection and generic-linear multiplicity at every node piece."""
    d = build_decomposition(graph, "outer")
    return Signature("outer", _decomposition_graph(graph, d, "outer"))


def signatures_equal(a: Signature, b: Signature) -> bool:
    if a.metric != b.metric:
        return False
    def node_match(x, y):
        return x == y
    return nx.is_isomorphic(a.graph, b.graph, node_match=node_match)

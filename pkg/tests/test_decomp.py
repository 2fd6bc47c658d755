from fractions import Fraction as F

import pytest

from singlip import (amalgamate, build_decomposition, classify_nodes,
                     csquare_decomposition, inner_signature,
                     is_metrically_conical, outer_signature, resolve_curve,
                     signatures_equal, thick_thin, thin_zone_rate)
from singlip.errors import DomainError, InputError
from singlip.fixtures import (curve_32_74, curve_cusp_53, graph_a_k, graph_d4,
                              graph_e8, graph_e8_nash,
                              graph_minimal_singularity, load_fixture)


def test_classify_nodes_minimal_singularity():
    g = graph_minimal_singularity()
    flags = classify_nodes(g)
    assert flags["m4"].is_special_P and flags["m4"].is_inner_node
    assert flags["m7"].is_special_P
    assert not flags["m2"].is_special_P  # P-node but valence 3
    assert flags["m2"].is_inner_node
    assert not flags["m9"].is_inner_node and not flags["m9"].is_outer_node
    inner = [v for v, f in flags.items() if f.is_inner_node]
    assert len(inner) == 9
    outer = [v for v, f in flags.items() if f.is_outer_node]
    assert set(outer) == set(inner)


def test_special_p_definition_on_contested_vertex():
    # the rate-3 valence-2 vertex with neighbor rates (2,2): when it carries
    # polar components the stated definition does make it special, which is
    # why the fixture leaves it unflagged (its source figure does not mark
    # it special); this exercises the definition itself
    g = graph_minimal_singularity()
    g.vertices["m9"].flags.add("P")
    flags = classify_nodes(g)
    assert flags["m9"].is_special_P
    assert flags["m9"].is_outer_node


def test_classify_requires_rates():
    g = graph_a_k(4)  # interior vertices carry no rates
    with pytest.raises(InputError):
        classify_nodes(g)


def test_thick_thin_e8():
    tt = thick_thin(graph_e8())
    assert len(tt.thick_zones) == 1
    (l_node, zone), = tt.thick_zones
    assert l_node == "E5" and zone == frozenset({"E5", "E4", "E3", "E2"})
    (thin,) = tt.thin_zones
    assert thin == frozenset({"E1", "E6", "E7", "E8"})
    assert not tt.metrically_conical


def test_thick_thin_d4_conical():
    tt = thick_thin(graph_d4())
    assert tt.thin_zones == ()
    assert tt.metrically_conical
    assert tt.thick_zones[0][1] == frozenset({"E1", "E2", "E3", "E4"})


def test_thick_thin_briancon_speder():
    tt = thick_thin(load_fixture("briancon-speder-tneq0"))
    assert len(tt.thick_zones) == 3 and len(tt.thin_zones) == 1
    tt = thick_thin(load_fixture("briancon-speder-t0"))
    assert len(tt.thick_zones) == 1 and len(tt.thin_zones) == 1


def test_metrically_conical_ade():
    expected = {"a1": True, "a2": False, "a3": False, "a4": False,
                "a5": False, "d4": True, "d5": False, "e6": False,
                "e7": False, "e8": False}
    got = {name: is_metrically_conical(load_fixture(name)) for name in expected}
    assert got == expected


def test_thick_thin_errors():
    g = graph_d4()
    g.vertices["E1"].flags.discard("L")
    with pytest.raises(DomainError):
        thick_thin(g)  # no L-node
    g2 = graph_d4()
    g2.vertices["E2"].flags.add("L")
    with pytest.raises(DomainError):
        thick_thin(g2)  # adjacent L-nodes


def test_thin_zone_rate():
    g = graph_e8()
    (zone,) = thick_thin(g).thin_zones
    assert thin_zone_rate(g, zone) == F(5, 3)
    assert thin_zone_rate(g, frozenset({"E7"})) == 2
    with pytest.raises(DomainError):
        thin_zone_rate(g, frozenset({"E5"}))  # rate 1 inside a thin zone


def test_csquare_53_tower():
    _, tree = resolve_curve(curve_cusp_53())
    d = csquare_decomposition(tree)
    assert sorted(p.describe() for p in d.pieces.values()) == [
        "A(1,3/2)", "A(3/2,3/2)", "A(3/2,5/3)", "A(5/3,2)", "B(1)", "B(5/3)",
        "D(2)"]
    a = amalgamate(d)
    assert a.summary() == ["A(1,5/3)", "B(1)", "B(5/3)"]
    conical = a.by_kind("conical")
    assert len(conical) == 1 and conical[0].rates == (F(1),)


def test_csquare_single_event_tower():
    from singlip import PuiseuxBranch
    _, tree = resolve_curve([PuiseuxBranch.from_terms([(F(2), F(1))])])
    d = csquare_decomposition(tree)
    assert [p.kind for p in d.pieces.values()] == ["conical"]


def test_amalgamate_fig17_shape():
    _, tree = resolve_curve(curve_32_74())
    a = amalgamate(csquare_decomposition(tree))
    assert a.summary() == ["A(1,3/2)", "A(3/2,7/4)", "B(1)", "B(3/2)", "B(7/4)"]


def test_amalgamate_identity_when_stable():
    _, tree = resolve_curve(curve_32_74())
    a = amalgamate(csquare_decomposition(tree))
    again = amalgamate(a)
    assert again.summary() == a.summary()
    assert {p.support for p in again.pieces.values()} == {
        p.support for p in a.pieces.values()}


def test_amalgamate_respects_protection():
    _, tree = resolve_curve(curve_cusp_53())
    d = csquare_decomposition(tree)
    protected = frozenset(p.pid for p in d.pieces.values() if p.kind == "D")
    a = amalgamate(d, protected)
    assert "D(2)" in a.summary()


def test_build_decomposition_e8_inner():
    d = build_decomposition(graph_e8(), "inner")
    assert d.summary() == ["A(1,5/3)", "B(1)", "B(5/3)"]
    supports = {p.describe(): p.support for p in d.pieces.values()}
    assert supports["B(1)"] == frozenset({"E5"})
    assert supports["A(1,5/3)"] == frozenset({"E2", "E3", "E4"})
    assert supports["B(5/3)"] == frozenset({"E1", "E6", "E7", "E8"})


def test_build_decomposition_e8_outer_and_initial():
    g = graph_e8_nash()
    outer = build_decomposition(g, "outer")
    assert outer.summary() == ["A(1,5/3)", "A(5/3,10/3)", "B(1)", "B(10/3)",
                               "B(5/3)"]
    a_pieces = {p.rates: p.support for p in outer.pieces.values()
                if p.kind == "A"}
    assert a_pieces[(F(5, 3), F(10, 3))] == frozenset({"E8", "E9"})
    initial = build_decomposition(g, "initial")
    assert initial.summary() == outer.summary()
    inner = build_decomposition(g, "inner")
    assert inner.summary() == ["A(1,5/3)", "B(1)", "B(5/3)"]


def test_build_decomposition_minimal_singularity_inner():
    d = build_decomposition(graph_minimal_singularity(), "inner")
    b_pieces = [p for p in d.pieces.values() if p.kind == "B"]
    rates = sorted(p.rates[0] for p in b_pieces)
    assert rates == [1, 1, 1, 1, 1, 2, 2]
    special = sorted(p.rates[0] for p in d.pieces.values() if p.special)
    assert special == [2, F(5, 2)]


def test_partition_property_all_modes():
    for name in ("e8", "e8-nash", "minimal-singularity"):
        g = load_fixture(name)
        for mode in ("inner", "outer", "initial"):
            d = build_decomposition(g, mode)
            assert d.supports_partition(list(g.vertices))


def test_inner_b_pieces_biject_with_inner_nodes():
    for name in ("e8", "e8-nash", "minimal-singularity", "d4"):
        g = load_fixture(name)
        flags = classify_nodes(g)
        d = build_decomposition(g, "inner")
        node_pieces = [p for p in d.pieces.values()
                       if p.kind == "B" or p.special]
        inner_nodes = [v for v, f in flags.items() if f.is_inner_node]
        assert len(node_pieces) == len(inner_nodes)
        outer_nodes = [v for v, f in flags.items() if f.is_outer_node]
        do = build_decomposition(g, "outer")
        outer_pieces = [p for p in do.pieces.values()
                        if p.kind == "B" or p.special]
        assert len(outer_pieces) == len(outer_nodes)


def test_outer_refines_inner():
    for name in ("e8", "e8-nash", "minimal-singularity"):
        g = load_fixture(name)
        inner = build_decomposition(g, "inner")
        outer = build_decomposition(g, "outer")
        outer_supports = [p.support for p in outer.pieces.values() if p.support]
        for p in inner.pieces.values():
            if not p.support:
                continue
            cover = [s for s in outer_supports if s <= p.support]
            assert cover and frozenset().union(*cover) == p.support


def test_thick_part_equals_rate_one_pieces():
    for name in ("e8", "e8-nash", "d4", "minimal-singularity",
                 "briancon-speder-t0", "briancon-speder-tneq0"):
        g = load_fixture(name)
        if any(v.rate is None for v in g.vertices.values()):
            continue
        tt = thick_thin(g)
        thick = set().union(*(z for _, z in tt.thick_zones))
        d = build_decomposition(g, "inner")
        rate_one = set()
        for p in d.pieces.values():
            if p.kind == "B" and p.rates == (F(1),):
                rate_one |= p.support
            if p.kind == "A" and p.rates[0] == 1:
                rate_one |= p.support
        assert rate_one == thick


def test_conical_iff_single_piece_inner():
    for name in ("a1", "d4", "e8", "a2", "briancon-speder-t0"):
        g = load_fixture(name)
        if any(v.rate is None for v in g.vertices.values()):
            continue
        d = None
        try:
            d = build_decomposition(g, "inner")
        except DomainError:
            pass
        if d is not None:
            single_b = (len(d.pieces) == 1
                        and all(q == 1 for p in d.pieces.values()
                                for q in p.rates))
            assert is_metrically_conical(g) == single_b


def test_signatures():
    e8 = inner_signature(graph_e8())
    assert signatures_equal(e8, inner_signature(graph_e8()))
    assert not signatures_equal(e8, inner_signature(graph_d4()))
    scaled = graph_e8()
    for v in scaled.vertices.values():
        v.multiplicities["h"] *= 3
    assert signatures_equal(e8, inner_signature(scaled))

    outer = outer_signature(graph_e8_nash())
    assert signatures_equal(outer, outer_signature(graph_e8_nash()))
    assert not signatures_equal(e8, outer)
    bumped = graph_e8_nash()
    bumped.vertices["E10"].self_intersection = -2
    assert not signatures_equal(outer, outer_signature(bumped))


def test_signature_requires_multiplicities():
    g = graph_e8()
    for v in g.vertices.values():
        v.multiplicities.clear()
    with pytest.raises(InputError):
        inner_signature(g)


def test_thin_zone_rate_requires_rates():
    g = load_fixture("a4")  # interior vertices carry no rates
    (zone,) = thick_thin(g).thin_zones
    with pytest.raises(InputError):
        thin_zone_rate(g, zone)


def test_amalgamated_csquare_matches_node_construction():
    # running the rewriting rules on the per-vertex pieces of a tower gives
    # the same decomposition as the direct node-based construction on the
    # corresponding graph (root as L-node, branch arrows as Delta-curves)
    from singlip import resolve_curve, tower_to_graph
    from singlip.fixtures import load_fixture

    for name in ("cusp-53", "curve-32-74", "carrousel-example"):
        _, tree = resolve_curve(load_fixture(name))
        flags = {tree.root: ("L",)}
        for a in tree.arrows:
            if a.kind == "branch":
                flags[a.vertex] = tuple(set(flags.get(a.vertex, ())) | {"Delta"})
        g = tower_to_graph(tree, flags=flags)
        direct = build_decomposition(g, "initial")
        rewritten = amalgamate(csquare_decomposition(tree))
        assert direct.summary() == rewritten.summary()
        assert ({p.support for p in direct.pieces.values() if p.support}
                == {p.support for p in rewritten.pieces.values() if p.support})

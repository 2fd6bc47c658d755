import random
from fractions import Fraction as F

import pytest

from helpers import random_curve
from singlip import (PuiseuxBranch, Resolution, blow_all_double_points,
                     coincidence_exponent, extend_arrow_chain, resolve_curve,
                     verify_tower)
from singlip.errors import InputError, ResourceCapExceeded
from singlip.fixtures import (curve_32_74, curve_carrousel_example,
                              curve_cusp_53)
from singlip.tower import Arrow, DualTree, TowerVertex


def branch(*terms):
    return PuiseuxBranch.from_terms([(F(e), F(c)) for e, c in terms])


def test_cusp_53_tower_matches_figure():
    events, tree = resolve_curve(curve_cusp_53())
    assert len(events) == 4
    assert [v.self_intersection for v in tree.vertices] == [-3, -3, -2, -1]
    assert [v.rate for v in tree.vertices] == [1, 2, F(3, 2), F(5, 3)]
    assert tree.edges == {(0, 2), (1, 3), (2, 3)}
    (arrow,) = [a for a in tree.arrows if a.kind == "branch"]
    assert arrow.vertex == 3
    assert events[0].center == ("origin",)
    assert [v.multiplicities["f"] for v in tree.vertices] == [3, 5, 9, 15]
    assert [v.multiplicities["h"] for v in tree.vertices] == [1, 1, 2, 3]
    assert verify_tower(tree).ok


def test_smooth_branches_one_event():
    _, tree = resolve_curve([branch((1, 5))])
    assert len(tree.vertices) == 1
    assert tree.arrows_at(0, "f")
    # smooth but tangent to the x-axis also resolves with one blow-up
    _, tree = resolve_curve([branch((2, 1))])
    assert len(tree.vertices) == 1
    assert verify_tower(tree).ok
    assert tree.vertices[0].multiplicities["f"] == 1


def test_carrousel_curve_tower_rates():
    _, tree = resolve_curve(curve_carrousel_example())
    rates = {v.rate for v in tree.vertices}
    assert {F(3, 2), F(13, 6), F(5, 2)} <= rates
    assert verify_tower(tree).ok
    # arrows of the two branches sit at the vertices whose rates are the
    # branches' deepest characteristic exponents
    arrows = {a.branch: tree.vertices[a.vertex].rate
              for a in tree.arrows if a.kind == "branch"}
    assert arrows == {0: F(13, 6), 1: F(5, 2)}


def test_rate_vectors_stay_unreduced():
    _, tree = resolve_curve(curve_32_74())
    assert [v.rate for v in tree.vertices] == [1, 2, F(3, 2), 2, F(7, 4)]
    # the fourth vertex is (4,2), not (2,1): its satellite child is 7/4
    assert tree.vertices[3].rate_vector == (4, 2)
    assert verify_tower(tree).ok


def test_tree_contacts_match_strand_contacts():
    # the conjugate-strand contact between these branches (realized only
    # between opposite twists) must still drive the shared centers
    from singlip.tower import branch_contact
    curve = [branch(("3/2", 1)), branch(("3/2", -1), (2, 1))]
    res = Resolution(curve)
    assert branch_contact(res.tree, 0, 1) == 2
    assert coincidence_exponent(curve[0], curve[1]) == 2


def test_all_double_points_blowup_rates():
    _, tree = resolve_curve(curve_cusp_53())
    t2 = blow_all_double_points(tree)
    assert sorted(v.rate for v in t2.vertices) == sorted(
        [F(1), F(4, 3), F(3, 2), F(8, 5), F(5, 3), F(7, 4), F(2), F(2)])
    assert verify_tower(t2).ok
    assert [v.self_intersection for v in t2.vertices].count(-4) == 4


def test_arrow_chain_rates():
    _, tree = resolve_curve(curve_cusp_53())
    (idx,) = [i for i, a in enumerate(tree.arrows) if a.kind == "branch"]
    out = extend_arrow_chain(tree, idx, 5)
    chain_rates = [v.rate for v in out.vertices[4:]]
    assert chain_rates == [F(2), F(7, 3), F(8, 3), F(3), F(10, 3)]
    assert out.arrows[idx].vertex == len(out.vertices) - 1
    assert verify_tower(out).ok


def test_verify_flags_printed_figure_inconsistency():
    # the minimal resolution tree of y^3 + z^5 with the leaf printed as -2
    # violates the Laufer-zero condition at that leaf (residual 3)
    tree = DualTree()
    mults = [3, 5, 9, 15]
    selfints = [-2, -3, -2, -1]  # -2 at the first leaf instead of -3
    vectors = [(1, 1), (2, 1), (3, 2), (5, 3)]
    for i in range(4):
        tree.vertices.append(TowerVertex(i, selfints[i], vectors[i],
                                         {"f": mults[i]}))
    tree.add_edge(0, 2)
    tree.add_edge(2, 3)
    tree.add_edge(1, 3)
    tree.arrows.append(Arrow(3, "f", 1, "branch", 0))
    report = verify_tower(tree)
    assert not report.ok
    assert report.laufer["f"][0] == 3
    assert any("vertex 0" in p for p in report.problems())


def test_event_cap():
    with pytest.raises(ResourceCapExceeded):
        resolve_curve(curve_cusp_53(), event_cap=2)


def test_duplicate_branch_rejected():
    with pytest.raises(InputError):
        resolve_curve([branch((2, 1)), branch((2, 1))])


def test_curvette_oracle_fixture_curves():
    for curve in (curve_cusp_53(), curve_32_74(), curve_carrousel_example()):
        res = Resolution(curve)
        for v in res.tree.vertices:
            g1, g2 = res.curvette_pair(v.index)
            assert coincidence_exponent(g1, g2) == v.rate


def test_unimodular_after_every_prefix():
    rng = random.Random(5)
    for _ in range(10):
        curve = random_curve(rng)
        res = Resolution(curve, record_determinants=True)
        assert res.prefix_determinants
        assert all(d in (1, -1) for d in res.prefix_determinants)


def test_coefficient_rescaling_gives_isomorphic_tree():
    rng = random.Random(6)
    for _ in range(10):
        curve = random_curve(rng)
        scaled = [PuiseuxBranch.from_terms(
            [(e, c * F(rng.choice([1, 2, 3]), rng.choice([1, 2])))
             for e, c in b.terms]) for b in curve]
        _, t1 = resolve_curve(curve)
        _, t2 = resolve_curve(scaled)
        assert t1.edges == t2.edges
        assert [v.rate for v in t1.vertices] == [v.rate for v in t2.vertices]
        assert ([v.self_intersection for v in t1.vertices]
                == [v.self_intersection for v in t2.vertices])
        assert ([v.multiplicities for v in t1.vertices]
                == [v.multiplicities for v in t2.vertices])

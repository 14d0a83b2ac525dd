from math import gcd

import pytest

from tropmon.constructions import (
    affine_glue,
    construct_type,
    echo_presentation,
    rank2_slopes,
    realize_rank2,
    triangle_type,
)
from tropmon.errors import InvalidConeData, NotBipartite, NotPositive, NotSharp
from tropmon.presentations import Bipartition, Presentation, Relation, find_bipartition, sanitize
from tropmon.torification import lattice_monoid, toric_equal, torify
from tropmon.tropical_types import AFFINE, orthant_presentation, tropical_monoid, validate

from corpus import presentation_corpus

MAIN = Presentation(("e0", "e1", "e2", "e3"), (
    Relation({"e0": 1, "e2": 1}, {"e1": 2}),
    Relation({"e1": 1, "e3": 1}, {"e2": 2}),
    Relation({"e0": 1, "e3": 1}, {"e1": 1, "e2": 1})))
V123 = Presentation(("v1", "v2", "v3"), (Relation({"v1": 2, "v2": 1}, {"v3": 3}),))


def main_report():
    S, B = sanitize(MAIN, copy_names={"e1": "f1", "e2": "f2"})
    return S, construct_type(S, B)


def test_main_example_slopes():
    S, rep = main_report()
    assert rep.slope_table() == {
        "e0": [1, 0, 1, 0, 0], "e3": [0, 1, 1, 0, 0], "f1": [0, 1, 0, 1, 0],
        "f2": [1, 0, 0, 0, 1], "e1": [2, 0, 1, 1, 0], "e2": [0, 2, 1, 0, 1]}
    assert validate(rep.type) == []
    assert rep.witness.satisfies(orthant_presentation(rep.type))
    assert rep.presentation_echo == S
    assert toric_equal(rep.monoid, torify(MAIN))
    assert toric_equal(rep.monoid, lattice_monoid([(1, 0), (1, 3)]))


def test_main_example_faces_grow_along_paths():
    _, rep = main_report()
    tau = rep.type
    assert len(tau.vertices) == 7
    for e in tau.edges:
        assert tau.face(e.source) <= e.face == tau.face(e.target) or e.target == "v0"
    assert tau.face("v0") == frozenset(range(5))
    assert tau.face("v1") == tau.face("v2") == frozenset()


def test_single_relation_example():
    P = Presentation(("a1", "a2"), (Relation({"a1": 1}, {"a2": 1}),))
    rep = construct_type(P, find_bipartition(P))
    assert [v.id for v in rep.type.vertices] == ["v1", "v2", "v0"]
    assert rep.slope_table() == {"a1": [1], "a2": [1]}
    assert rep.presentation_echo == P
    assert rep.monoid.rank == 1 and rep.monoid.hilbert == ((1,),)


def test_v123_pipeline():
    S, B = sanitize(V123)
    rep = construct_type(S, B)
    assert toric_equal(rep.monoid, lattice_monoid([(1, 0), (1, 3)]))
    assert echo_presentation(rep.type).relations == S.relations


def test_trace_mentions_every_edge():
    _, rep = main_report()
    text = rep.trace()
    assert all(f"edge {e.id}:" in text for e in rep.type.edges)
    assert text.count("coordinate") == 5


def test_construct_errors():
    with pytest.raises(NotBipartite):
        construct_type(MAIN, Bipartition(("e0", "e3"), ("e1", "e2")))
    P = Presentation(("a", "b"), (Relation({"a": 1, "b": 1}, {}),))
    with pytest.raises(NotPositive) as exc:
        construct_type(P, Bipartition(("a", "b"), ()))
    assert set(exc.value.generators) == {"a", "b"}
    # second relation only has generators on the right
    P = Presentation(("a", "b", "c"), (Relation({"a": 1}, {"b": 1}), Relation({}, {"c": 1})))
    with pytest.raises((NotSharp, NotPositive)):
        construct_type(P, Bipartition(("a",), ("b", "c")))


def test_not_sharp_reports_relation():
    # the trivial relation 0 = 0 leaves coordinate 1 unreached by both paths
    Q = Presentation(("a", "b"), (Relation({"a": 1}, {"b": 1}), Relation({}, {})))
    with pytest.raises(NotSharp) as exc:
        construct_type(Q, Bipartition(("a",), ("b",)))
    assert exc.value.relation == 1


def test_construct_on_corpus():
    for P in presentation_corpus(60, seed=3):
        S, B = sanitize(P)
        rep = construct_type(S, B)
        assert toric_equal(rep.monoid, torify(P))
        assert rep.presentation_echo == S


@pytest.mark.parametrize("k,m,triple", [(1, 3, (2, 1, 3)), (1, 1, (0, 1, 1)), (1, 2, (1, 1, 2)),
                                        (2, 3, (1, 1, 3))])
def test_rank2_slopes(k, m, triple):
    assert rank2_slopes(k, m) == triple
    rep = realize_rank2(k, m)
    assert tuple(e.slope[0] for e in rep.type.edges) == triple


def test_realize_rank2_all_small_cones():
    for m in range(1, 9):
        for k in range(1, m + 1):
            if gcd(k, m) != 1:
                continue
            rep = realize_rank2(k, m)
            assert toric_equal(rep.monoid, lattice_monoid([(1, 0), (k, m)]))
            assert toric_equal(torify(rep.presentation_echo), rep.monoid)
        assert len(realize_rank2(1, m).monoid.hilbert) == m + 1


def test_realize_rank2_other_auxiliary_vector():
    rep = realize_rank2(1, 3, (1, 2))
    assert toric_equal(rep.monoid, lattice_monoid([(1, 0), (1, 3)]))


@pytest.mark.parametrize("k,m,v3", [(2, 4, None), (0, 3, None), (4, 3, None), (1, 3, (1, 3)),
                                    (1, 3, (-1, 1))])
def test_realize_rank2_invalid(k, m, v3):
    with pytest.raises(InvalidConeData):
        realize_rank2(k, m, v3)


def test_triangle_with_zero_slope_keeps_apex_at_origin():
    tau = triangle_type(0, 1, 1)
    assert tau.face("u2") == frozenset()
    assert validate(tau) == []


def test_affine_glue_main_example():
    _, rep = main_report()
    g = affine_glue(rep)
    assert g.mode == AFFINE
    assert len(g.vertices) == 6 and len(g.edges) == 6 and g.graph_genus() == 1
    assert validate(g) == []
    assert toric_equal(tropical_monoid(g), rep.monoid)
    assert toric_equal(tropical_monoid(affine_glue(rep.type)), rep.monoid)


def test_affine_glue_on_corpus():
    for P in presentation_corpus(40, seed=8):
        rep = construct_type(*sanitize(P))
        g = affine_glue(rep)
        assert g.graph_genus() == 1
        assert toric_equal(tropical_monoid(g), rep.monoid)

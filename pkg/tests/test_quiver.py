import json
from fractions import Fraction

import pytest

from clusterdual.checks import figure_arrows
from clusterdual.quiver import (
    GluingSpec,
    Quiver,
    QuiverError,
    Vertex,
    amalgamate,
    coxeter_words,
    punctured_disk_quiver,
    quiver_to_seed,
    seed_to_quiver,
    triangle_quiver,
)


def test_rank3_triangle_matches_hand_transcription():
    q = triangle_quiver(3)
    assert q.arrows == figure_arrows()
    assert set(q.mutable) == {"M1_1", "M1_2", "M2_1"}


@pytest.mark.parametrize("r", range(1, 9))
def test_triangle_counts(r):
    q = triangle_quiver(r)
    assert len(q.labels) == (r + 5) * r // 2
    assert len(q.mutable) == (r - 1) * r // 2
    assert len(q.frozen) == 3 * r


@pytest.mark.parametrize("r", range(2, 7))
def test_interior_vertices_are_balanced(r):
    # each interior point sits in six small triangles: three arrows in, three out
    q = triangle_quiver(r)
    for v in q.mutable:
        out = [w for (a, b), w in q.arrows.items() if a == v]
        into = [w for (a, b), w in q.arrows.items() if b == v]
        assert sorted(out) == sorted(into) == [1, 1, 1]


def test_half_arrows_run_along_sides():
    q = triangle_quiver(4)
    for (a, b), w in q.arrows.items():
        same_side = q.is_frozen(a) and q.is_frozen(b) and a[0] == b[0]
        assert w == (Fraction(1, 2) if same_side else 1)


def test_rank1_disk_is_oriented_four_cycle():
    q = punctured_disk_quiver(1)
    assert len(q.labels) == 4 and len(q.mutable) == 2
    assert all(w == 1 for w in q.arrows.values()) and len(q.arrows) == 4
    succ = {a: b for a, b in q.arrows}
    v, seen = q.labels[0], []
    for _ in range(4):
        seen.append(v)
        v = succ[v]
    assert v == q.labels[0] and len(set(seen)) == 4


@pytest.mark.parametrize("r,total,mutable", [(1, 4, 2), (2, 10, 6), (3, 18, 12)])
def test_disk_sizes(r, total, mutable):
    q = punctured_disk_quiver(r)
    assert (len(q.labels), len(q.mutable)) == (total, mutable)
    # mutable vertices only carry integer arrows after gluing
    for (a, b), w in q.arrows.items():
        if not (q.is_frozen(a) and q.is_frozen(b)):
            assert w.denominator == 1


def test_coxeter_words_are_longest_length():
    for r in range(1, 7):
        w1, w2 = coxeter_words(r)
        assert len(w1) == len(w2) == r * (r + 1) // 2


def test_amalgamation_adds_weights_and_multiplies_variables():
    a = Quiver.from_weights([Vertex("a1", True), Vertex("a2", True)], {("a1", "a2"): Fraction(1, 2)})
    b = Quiver.from_weights([Vertex("b1", True), Vertex("b2", True)], {("b1", "b2"): Fraction(1, 2)})
    res = amalgamate(a, b, GluingSpec((("a1", "b1"), ("a2", "b2")), frozenset({"a1~b1"})))
    assert res.quiver.arrows == {("a1~b1", "a2~b2"): 1}
    assert res.quiver.mutable == ("a1~b1",)
    assert str(res.variable_map["a1~b1"]) in ("a1*b1", "b1*a1")


def test_amalgamation_errors():
    a = Quiver.from_weights([Vertex("a1", False), Vertex("a2", True)], {("a1", "a2"): 1})
    b = Quiver.from_weights([Vertex("b1", True)], {})
    with pytest.raises(QuiverError):
        amalgamate(a, b, GluingSpec((("a1", "b1"),)))
    with pytest.raises(QuiverError):
        amalgamate(a, a, GluingSpec(()))
    with pytest.raises(QuiverError):
        amalgamate(a, b, GluingSpec((("a2", "b1"),), frozenset({"zzz"})))


def test_quiver_validation():
    with pytest.raises(QuiverError):
        Quiver.from_weights([Vertex("a", False), Vertex("b", False)], {("a", "b"): Fraction(1, 2)})
    with pytest.raises(QuiverError):
        Quiver.from_weights([Vertex("a", True)], {("a", "a"): 1})
    with pytest.raises(QuiverError):
        triangle_quiver(0)


@pytest.mark.parametrize("q", [triangle_quiver(3), punctured_disk_quiver(2)])
def test_json_and_seed_round_trips(q):
    assert Quiver.from_json(json.loads(json.dumps(q.to_json()))) == q
    s = quiver_to_seed(q)
    assert seed_to_quiver(s) == q
    assert s.m == len(q.mutable)

"""Weighted quivers, the triangle quiver for PGL(r+1), amalgamation and the
once-punctured-disk quiver.

Triangle vertices use lattice coordinates ``(a, b)`` for the point
``a*(1, 0) + b*(cos 60, sin 60)`` in a triangle of side ``N = r + 1``. The
corners are ``(0, 0)`` (bottom left), ``(N, 0)`` (bottom right) and
``(0, N)`` (top). Side vertices are named ``L1..Lr`` (bottom-left corner to
top), ``B1..Br`` (bottom-left to bottom-right) and ``R1..Rr`` (bottom-right
to top); interior vertices are ``M{a}_{b}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .exact import RatFunc, as_fraction, fraction_str
from .seed import Seed

HALF = Fraction(1, 2)


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    label: str
    frozen: bool = False


@dataclass(frozen=True, eq=False)
class Quiver:
    """Vertices plus antisymmetric arrow weights.

    ``arrows`` stores each pair once, oriented so the weight is positive:
    ``{(a, b): w}`` means ``w`` arrows from ``a`` to ``b``. ``meta`` carries
    construction notes and is ignored by equality.
    """

    vertices: tuple[Vertex, ...]
    arrows: Mapping[tuple[str, str], Fraction]
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        labels = [v.label for v in self.vertices]
        if len(set(labels)) != len(labels):
            raise QuiverError("vertex labels must be distinct")
        frozen = {v.label: v.frozen for v in self.vertices}
        clean = {}
        for (a, b), w in self.arrows.items():
            w = as_fraction(w)
            if a not in frozen or b not in frozen:
                raise QuiverError(f"arrow {a}->{b} uses an unknown vertex")
            if a == b:
                raise QuiverError(f"self-arrow at {a}")
            if w < 0:
                a, b, w = b, a, -w
            if w == 0:
                continue
            if (b, a) in clean or (a, b) in clean:
                raise QuiverError(f"pair {a},{b} given twice")
            if not (frozen[a] and frozen[b]) and w.denominator != 1:
                raise QuiverError(f"weight {w} on {a}->{b} must be an integer")
            if (2 * w).denominator != 1:
                raise QuiverError(f"weight {w} on {a}->{b} is not in (1/2)Z")
            clean[(a, b)] = w
        object.__setattr__(self, "arrows", clean)

    @classmethod
    def from_weights(cls, vertices: Iterable[Vertex], weights: Mapping[tuple[str, str], Fraction], meta=None):
        """Build from a possibly redundant weight map, summing both orientations."""
        total: dict[tuple[str, str], Fraction] = {}
        for (a, b), w in weights.items():
            key, sign = ((a, b), 1) if a < b else ((b, a), -1)
            total[key] = total.get(key, Fraction(0)) + sign * as_fraction(w)
        return cls(tuple(vertices), total, dict(meta or {}))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.vertices)

    @property
    def mutable(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.vertices if not v.frozen)

    @property
    def frozen(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.vertices if v.frozen)

    def is_frozen(self, label: str) -> bool:
        for v in self.vertices:
            if v.label == label:
                return v.frozen
        raise KeyError(label)

    def weight(self, a: str, b: str) -> Fraction:
        if (a, b) in self.arrows:
            return self.arrows[(a, b)]
        if (b, a) in self.arrows:
            return -self.arrows[(b, a)]
        return Fraction(0)

    def relabel(self, mapping: Mapping[str, str]) -> "Quiver":
        rename = lambda lab: mapping.get(lab, lab)  # noqa: E731
        return Quiver(
            tuple(Vertex(rename(v.label), v.frozen) for v in self.vertices),
            {(rename(a), rename(b)): w for (a, b), w in self.arrows.items()},
            dict(self.meta),
        )

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.arrows == other.arrows

    def __hash__(self):
        return hash((frozenset(self.vertices), frozenset(self.arrows.items())))

    def to_json(self) -> dict:
        return {
            "vertices": [{"label": v.label, "frozen": v.frozen} for v in self.vertices],
            "arrows": [
                {"from": a, "to": b, "weight": fraction_str(w)} for (a, b), w in sorted(self.arrows.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Quiver":
        vertices = tuple(Vertex(v["label"], bool(v.get("frozen", False))) for v in data["vertices"])
        weights = {(a["from"], a["to"]): as_fraction(a["weight"]) for a in data["arrows"]}
        return cls.from_weights(vertices, weights)

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.mutable)} mutable, {len(self.arrows)} arrows)"


def quiver_to_seed(q: Quiver, multipliers: Optional[Sequence[int]] = None, track_variables: bool = True) -> Seed:
    """Seed with ``eps_hat_ij = weight(i, j)``; mutable vertices come first in quiver order."""
    if multipliers is not None and any(d != 1 for d in multipliers):
        raise QuiverError("quivers describe simply-laced data; all multipliers must be 1")
    order = list(q.mutable) + list(q.frozen)
    eps = [[q.weight(a, b) for b in order] for a in order]
    return Seed.initial(eps, len(q.mutable), None, order, track_variables)


def seed_to_quiver(s: Seed) -> Quiver:
    if any(d != 1 for d in s.multipliers):
        raise QuiverError("only seeds with all multipliers 1 are quivers")
    vertices = tuple(Vertex(lab, i >= s.m) for i, lab in enumerate(s.labels))
    arrows = {}
    for i in range(s.n):
        for j in range(i + 1, s.n):
            if s.epsilon_hat[i][j]:
                arrows[(s.labels[i], s.labels[j])] = s.epsilon_hat[i][j]
    return Quiver(vertices, arrows)


# ---------------------------------------------------------------------------
# triangle quiver


def triangle_point_label(a: int, b: int, r: int) -> str:
    N = r + 1
    if a == 0:
        return f"L{b}"
    if b == 0:
        return f"B{a}"
    if a + b == N:
        return f"R{b}"
    return f"M{a}_{b}"


def triangle_quiver(r: int) -> Quiver:
    """Quiver of the triangle for PGL(r+1).

    Every small triangle of the subdivision contributes a weight-1/2
    oriented 3-cycle: upward triangles clockwise, downward ones
    counterclockwise. All three edge directions in use are
    ``(-1, 0)``, ``(1, -1)`` and ``(0, 1)``. Arrows at the corners are
    dropped.
    """
    if not isinstance(r, int) or r < 1:
        raise QuiverError("rank must be a positive integer")
    N = r + 1
    corners = {(0, 0), (N, 0), (0, N)}
    points = [(a, b) for b in range(N + 1) for a in range(N + 1 - b) if (a, b) not in corners]
    weights: dict[tuple, Fraction] = {}

    def add(p, q):
        if p in corners or q in corners:
            return
        weights[(p, q)] = weights.get((p, q), Fraction(0)) + HALF

    for b in range(N):
        for a in range(N - b):
            # upward triangle (a,b), (a+1,b), (a,b+1)
            p, q, s = (a, b), (a + 1, b), (a, b + 1)
            add(q, p)
            add(p, s)
            add(s, q)
            if a + b + 2 <= N:
                # downward triangle (a+1,b), (a,b+1), (a+1,b+1)
                p, q, s = (a + 1, b), (a, b + 1), (a + 1, b + 1)
                add(s, q)
                add(q, p)
                add(p, s)

    def on_side(p):
        a, b = p
        return a == 0 or b == 0 or a + b == N

    vertices = tuple(Vertex(triangle_point_label(a, b, r), on_side((a, b))) for a, b in points)
    named = {
        (triangle_point_label(*p, r), triangle_point_label(*q, r)): w for (p, q), w in weights.items()
    }
    return Quiver.from_weights(vertices, named, {"shape": "triangle", "rank": r})


# ---------------------------------------------------------------------------
# amalgamation


@dataclass(frozen=True)
class GluingSpec:
    """Pairs ``(vertex of first quiver, vertex of second quiver)`` to identify,
    and the glued labels (``"a~b"``) to make mutable afterwards."""

    pairs: tuple[tuple[str, str], ...]
    defrost: frozenset[str] = frozenset()

    @staticmethod
    def glued_label(a: str, b: str) -> str:
        return f"{a}~{b}"


@dataclass(frozen=True)
class Amalgamation:
    quiver: Quiver
    variable_map: dict[str, RatFunc]


def amalgamate(a: Quiver, b: Quiver, gluing: GluingSpec) -> Amalgamation:
    """Glue ``a`` and ``b`` along frozen vertex pairs, adding arrow weights.

    The variable map sends a glued vertex to the product of its two
    preimages and every other vertex to itself.
    """
    if set(a.labels) & set(b.labels):
        raise QuiverError("quiver labels must be disjoint; relabel first")
    left = [p for p, _ in gluing.pairs]
    right = [q for _, q in gluing.pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise QuiverError("gluing pairs must be disjoint")
    for p, q in gluing.pairs:
        if not a.is_frozen(p) or not b.is_frozen(q):
            raise QuiverError(f"cannot glue mutable vertex in pair ({p}, {q})")
    glued = {GluingSpec.glued_label(p, q) for p, q in gluing.pairs}
    unknown = set(gluing.defrost) - glued
    if unknown:
        raise QuiverError(f"defrost names vertices that are not glued: {sorted(unknown)}")
    rename = {}
    for p, q in gluing.pairs:
        rename[p] = rename[q] = GluingSpec.glued_label(p, q)

    vertices = []
    seen = set()
    for v in (*a.vertices, *b.vertices):
        lab = rename.get(v.label, v.label)
        if lab in seen:
            continue
        seen.add(lab)
        frozen = v.frozen and lab not in gluing.defrost
        vertices.append(Vertex(lab, frozen))
    weights: dict = {}
    for q in (a, b):
        for (s, t), w in q.arrows.items():
            key = (rename.get(s, s), rename.get(t, t))
            weights[key] = weights.get(key, Fraction(0)) + w
    meta = {"amalgamated": [dict(a.meta), dict(b.meta)]}
    quiver = Quiver.from_weights(vertices, weights, meta)

    source_labels = [*a.labels, *b.labels]
    xs = dict(zip(source_labels, RatFunc.symbols(source_labels)))
    vmap = {}
    for v in quiver.vertices:
        if v.label in glued:
            p, q = next((p, q) for p, q in gluing.pairs if GluingSpec.glued_label(p, q) == v.label)
            vmap[v.label] = xs[p] * xs[q]
        else:
            vmap[v.label] = xs[v.label]
    return Amalgamation(quiver, vmap)


# ---------------------------------------------------------------------------
# once-punctured disk


def coxeter_words(r: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Reduced words for the longest element of type A_r built from a bipartite Coxeter element.

    Odd nodes are black, even nodes white. For even Coxeter number the same
    word ``c^(h/2)`` is returned twice; otherwise the alternating words
    ``bwb...`` and ``wbw...`` with ``h`` factors.
    """
    black = tuple(i for i in range(1, r + 1) if i % 2)
    white = tuple(i for i in range(1, r + 1) if not i % 2)
    h = r + 1
    if h % 2 == 0:
        word = (black + white) * (h // 2)
        return word, word
    first, second = [], []
    for t in range(h):
        first.extend(black if t % 2 == 0 else white)
        second.extend(white if t % 2 == 0 else black)
    return tuple(first), tuple(second)


def punctured_disk_quiver(r: int) -> Quiver:
    """Quiver for the once-punctured disk with two marked points, type A_r.

    Two triangle quivers are glued along both diagonals (puncture to each
    marked point). In the first triangle the corners are bottom-left = top
    marked point, top = puncture, bottom-right = bottom marked point; in the
    second, bottom-left = bottom marked point, top = puncture, bottom-right =
    top marked point. Vertices are matched in order from the marked point
    towards the puncture, and every glued vertex becomes mutable.
    """
    t1 = triangle_quiver(r)
    t2 = triangle_quiver(r)
    t1 = t1.relabel({lab: f"t1.{lab}" for lab in t1.labels})
    t2 = t2.relabel({lab: f"t2.{lab}" for lab in t2.labels})
    pairs = []
    for k in range(1, r + 1):
        pairs.append((f"t1.L{k}", f"t2.R{k}"))  # diagonal to the top marked point
    for k in range(1, r + 1):
        pairs.append((f"t1.R{k}", f"t2.L{k}"))  # diagonal to the bottom marked point
    defrost = frozenset(GluingSpec.glued_label(p, q) for p, q in pairs)
    result = amalgamate(t1, t2, GluingSpec(tuple(pairs), defrost))
    words = coxeter_words(r)
    meta = {"shape": "punctured-disk", "rank": r, "words": [list(words[0]), list(words[1])]}
    return Quiver(result.quiver.vertices, result.quiver.arrows, meta)


def quiver_dumps(q: Quiver) -> str:
    return json.dumps(q.to_json(), indent=2)

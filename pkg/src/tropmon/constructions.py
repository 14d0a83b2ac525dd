"""Tropical types realising a given toric monoid.

:func:`construct_type` turns a bipartite positive presentation into a
representable tropical type of genus 0 whose tropical presentation is the
input again.  :func:`realize_rank2` builds a triangle type to ``R_+`` for a
two-dimensional cone and :func:`affine_glue` closes the genus-0 type into a
genus-1 type to affine space.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd
from typing import Optional, Sequence

from .errors import InvalidConeData, NotBipartite, NotPositive, NotSharp
from .presentations import Bipartition, Presentation, Relation, is_bipartite, torified_zero_generators
from .torification import ToricMonoid
from .tropical_types import (
    AFFINE,
    DualWitness,
    Edge,
    TropicalType,
    Vertex,
    is_representable,
    tropical_monoid,
)

JUNCTION = "v0"


@dataclass(frozen=True)
class ConstructionReport:
    type: TropicalType
    witness: DualWitness
    presentation_echo: Presentation
    monoid: ToricMonoid

    def slope_table(self) -> dict:
        return {e.id: list(e.slope) for e in self.type.edges}

    def trace(self) -> str:
        """Which relation drives which coordinate, and the slope of each edge."""
        P = self.presentation_echo
        lines = [f"coordinate {i}: {r}" for i, r in enumerate(P.relations)]
        lines += [f"edge {e.id}: {e.source} -> {e.target} slope {list(e.slope)} face {sorted(e.face)}"
                  for e in self.type.edges]
        return "\n".join(lines)


def _path(leaf: str, prefix: str, gens, coeffs, n):
    """Vertices and edges of one leg of the construction graph.

    ``coeffs[g][i]`` is the coefficient of ``g`` in relation ``i``.  Faces
    grow along the path by the coordinates where the slope is positive.
    """
    if not gens:
        return [], [], frozenset()
    names = [leaf] + [f"{prefix}{j}" for j in range(1, len(gens))] + [JUNCTION]
    face = frozenset()
    verts, edges = [Vertex(leaf, 0, face)], []
    for j, g in enumerate(gens):
        slope = tuple(coeffs[g])
        nxt = face | {i for i in range(n) if slope[i] > 0}
        edges.append(Edge(names[j], names[j + 1], slope, nxt, g))
        if names[j + 1] != JUNCTION:
            verts.append(Vertex(names[j + 1], 0, nxt))
        face = nxt
    return verts, edges, face


def construct_type(P: Presentation, B: Bipartition) -> ConstructionReport:
    """Two paths, one per side of the bipartition, meeting at ``v0``.

    Coordinate ``i`` of ``R^n_+`` belongs to relation ``i``; the slope of the
    edge for generator ``g`` records the coefficients of ``g``.  Left-side
    edges run ``v1 -> v0`` and right-side edges ``v2 -> v0``.
    """
    if not is_bipartite(P, B):
        raise NotBipartite("relations must have left generators on the left, right on the right")
    zero = torified_zero_generators(P)
    if zero:
        raise NotPositive(f"generators {zero} vanish in the torification", zero)
    n = len(P.relations)
    coeffs = {g: [0] * n for g in P.generators}
    for i, r in enumerate(P.relations):
        for g, c in r.lhs.items():
            coeffs[g][i] = c
        for g, c in r.rhs.items():
            coeffs[g][i] = c
    lv, le, lface = _path("v1", "a", B.left, coeffs, n)
    rv, re, rface = _path("v2", "b", B.right, coeffs, n)
    for i in range(n):
        if i not in lface or i not in rface:
            raise NotSharp(f"relation {i} needs a generator on each side", relation=i)
    top = frozenset(range(n))
    tau = TropicalType(n, tuple(lv + rv + [Vertex(JUNCTION, 0, top)]), tuple(le + re))
    witness = is_representable(tau)
    if witness is None:
        raise NotSharp("no strictly positive point in the moduli cone")
    echo = echo_presentation(tau)
    echo = Presentation(P.generators, echo.relations)
    return ConstructionReport(tau, witness, echo, tropical_monoid(tau))


def echo_presentation(tau: TropicalType) -> Presentation:
    """Eliminate vertex coordinates from a two-path construction type.

    Walking each path from its leaf, ``f`` at each vertex is a combination of
    edge lengths; equating the two expressions for ``f(v0)`` coordinate by
    coordinate gives one relation per coordinate, read on edge names.
    """
    def walk(leaf):
        pos = {i: {} for i in range(tau.n)}
        v = leaf
        while v != JUNCTION:
            e = next(e for e in tau.edges if e.source == v)
            for i in e.face:
                if e.slope[i]:
                    pos[i][e.id] = pos[i].get(e.id, 0) + e.slope[i]
            v = e.target
        return pos

    ids = tau.vertex_ids
    left = walk("v1") if "v1" in ids else {i: {} for i in range(tau.n)}
    right = walk("v2") if "v2" in ids else {i: {} for i in range(tau.n)}
    rels = tuple(Relation(left[i], right[i]) for i in range(tau.n))
    return Presentation(tuple(e.id for e in tau.edges), rels)


# ---------------------------------------------------------------------------
# rank two


def triangle_type(m1: int, m2: int, m3: int) -> TropicalType:
    """Triangle to ``R_+``: ``v0 -m1-> u2 -m2-> u3`` and ``v0 -m3-> u3``.

    Faces follow the slopes out of ``v0``, so ``m1 = 0`` keeps the apex at
    the origin.
    """
    apex = frozenset({0}) if m1 > 0 else frozenset()
    verts = (Vertex("v0"), Vertex("u2", 0, apex), Vertex("u3", 0, frozenset({0})))
    edges = (Edge("v0", "u2", (m1,), apex, "e1"),
             Edge("u2", "u3", (m2,), frozenset({0}), "e2"),
             Edge("v0", "u3", (m3,), frozenset({0}), "e3"))
    return TropicalType(1, verts, edges)


def rank2_slopes(k: int, m: int, v3: Sequence[int] = (1, 1)) -> tuple:
    """The primitive ``(m1, m2, m3) >= 0`` with ``m1 v1 + m2 v2 = m3 v3``."""
    if not (0 < k <= m) or gcd(k, m) != 1:
        raise InvalidConeData(f"need 0 < k <= m with gcd(k, m) = 1, got ({k}, {m})")
    a, b = (int(x) for x in v3)
    # spanning: Z(1,0) + Z(k,m) + Z(a,b) = Z^2 iff gcd(m, b) = 1
    if gcd(m, b) != 1:
        raise InvalidConeData(f"v3 = ({a}, {b}) does not complete the lattice with (1,0), ({k},{m})")
    # kernel of the columns (1,0), (k,m), (a,b)
    kern = (k * b - a * m, -b, m)
    g = gcd(gcd(kern[0], kern[1]), kern[2])
    w = [x // g for x in kern]
    if w[2] > 0:
        w = [-x for x in w]
    m1, m2, m3 = w[0], w[1], -w[2]
    if m1 < 0 or m2 < 0 or m3 <= 0:
        raise InvalidConeData(f"v3 = ({a}, {b}) is not inside cone((1,0), ({k},{m}))")
    return m1, m2, m3


def realize_rank2(k: int, m: int, v3: Optional[Sequence[int]] = None) -> ConstructionReport:
    """Triangle type whose tropical monoid is ``cone((1,0),(k,m)) ∩ Z^2``."""
    m1, m2, m3 = rank2_slopes(k, m, (1, 1) if v3 is None else v3)
    tau = triangle_type(m1, m2, m3)
    witness = is_representable(tau)
    if witness is None:
        raise InvalidConeData("triangle type is not representable")
    echo = Presentation(("e1", "e2", "e3"),
                        (Relation({"e1": m1, "e2": m2}, {"e3": m3}),))
    return ConstructionReport(tau, witness, echo, tropical_monoid(tau))


# ---------------------------------------------------------------------------
# affine targets


def affine_glue(report) -> TropicalType:
    """Identify the leaves ``v1`` and ``v2`` and forget all faces.

    Accepts a :class:`ConstructionReport` or the type it carries.  The
    single cycle through the glued leaf gives back one relation per
    coordinate, so the affine tropical monoid is unchanged.
    """
    tau = report.type if isinstance(report, ConstructionReport) else report
    ids = tau.vertex_ids
    keep = "v1" if "v1" in ids else JUNCTION
    lose = "v2" if "v2" in ids else JUNCTION
    ren = {lose: keep} if lose != keep else {}

    def r(v):
        return ren.get(v, v)
    verts = tuple(Vertex(v.id, v.genus) for v in tau.vertices if v.id not in ren)
    edges = tuple(replace(e, source=r(e.source), target=r(e.target), face=frozenset())
                  for e in tau.edges)
    return TropicalType(tau.n, verts, edges, (), AFFINE)


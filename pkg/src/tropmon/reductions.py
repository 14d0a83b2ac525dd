"""Reductions for types to ``R_+`` and the bounded search over such types.

Monogenisation and contraction of zero-slope edges bring a representable
type into a normal form whose tropical monoid has rank ``|V| - 1``.  The
unparalleled monoid then bounds the number of generators by the number of
vertex pairs, which is what rules out cones over polygons with many
vertices (:func:`kgon_obstruction`).
"""

from __future__ import annotations

import itertools
import json
import os
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb, lcm
from typing import Iterator, Optional, Sequence

from .errors import (
    InvalidBounds,
    NotConvex,
    NotLattice,
    NotMonogenic,
    PreconditionFailed,
    ReductionError,
)
from .exact_linalg import ConeRep, _Cone, extreme_rays, matrix_rank, primitive
from .presentations import Presentation, Relation
from .torification import (
    FpMonoidImage,
    ToricMonoid,
    _signatures,
    free_factor_split,
    groupification_rank,
    integralize,
    lattice_monoid,
    saturate,
    toric_equal,
)
from .tropical_types import (
    DualWitness,
    Edge,
    TropicalType,
    Vertex,
    _cycle_coefficients,
    _is_monogenic,
    _orthant_matrix,
    check_valid,
    is_monogenic,
    is_representable,
    length_gen,
    monogenic_presentation,
    orthant_presentation,
    position_gen,
    validate,
)

INACCESSIBLE = "inaccessible"
INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# monogenic and expansive normal form


def _require_rank_one(tau: TropicalType):
    check_valid(tau)
    if tau.mode != "orthant" or tau.n != 1:
        raise NotMonogenic("reductions are defined for orthant types with n = 1")


def monogenize(tau: TropicalType) -> TropicalType:
    """Make ``tau`` monogenic without changing its tropical monoid.

    Every vertex off the origin whose outward slopes are all ``>= 0`` gets a
    new vertex at the origin joined to it by a slope-1 edge ``s[v]``.  Then all
    vertices at the origin are glued into the first one.
    """
    _require_rank_one(tau)
    if is_monogenic(tau):
        return tau
    verts = list(tau.vertices)
    edges = list(tau.edges)
    taken = set(tau.vertex_ids) | {e.id for e in edges}
    for v in tau.vertices:
        if v.face and all(m[0] >= 0 for _, m, _ in tau.outward(v.id)):
            name = f"s[{v.id}]"
            while name in taken:
                name += "'"
            taken.add(name)
            verts.append(Vertex(name))
            edges.append(Edge(name, v.id, (1,), frozenset({0}), name))
    roots = [v.id for v in verts if not v.face]
    keep = roots[0]
    glue = set(roots[1:])

    def r(x):
        return keep if x in glue else x
    verts = [v for v in verts if v.id not in glue]
    edges = [replace(e, source=r(e.source), target=r(e.target)) for e in edges]
    return TropicalType(1, tuple(verts), tuple(edges), tuple(replace(l, at=r(l.at)) for l in tau.legs))


def is_expansive(tau: TropicalType) -> bool:
    return all(any(e.slope) for e in tau.edges)


def expansive_reduce(tau: TropicalType):
    """Contract every zero-slope edge; returns ``(reduced type, |E0|)``.

    Zero loops are deleted and zero bridges merge their endpoints.  Merged
    vertices must share their face; the root (the vertex at the origin) is
    kept as representative of its class.
    """
    if not is_monogenic(tau):
        raise NotMonogenic("expansive_reduce expects a monogenic type")
    ids = tau.vertex_ids
    parent = {v: v for v in ids}
    order = {v: i for i, v in enumerate(ids)}
    root = next(v.id for v in tau.vertices if not v.face)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    zero = [e for e in tau.edges if not any(e.slope)]
    for e in zero:
        a, b = find(e.source), find(e.target)
        if a == b:
            continue
        if tau.face(a) != tau.face(b):
            raise ReductionError(f"zero-slope edge {e.id} joins vertices with different faces")
        # keep the root, otherwise the earlier vertex
        if b == root or (a != root and order[b] < order[a]):
            a, b = b, a
        parent[b] = a
    zero_ids = {e.id for e in zero}
    verts = tuple(v for v in tau.vertices if find(v.id) == v.id)
    edges = tuple(replace(e, source=find(e.source), target=find(e.target))
                  for e in tau.edges if e.id not in zero_ids)
    legs = tuple(replace(l, at=find(l.at)) for l in tau.legs)
    return TropicalType(1, verts, edges, legs), len(zero)


def _hypotheses(tau: TropicalType, witness=None) -> list:
    failures = []
    if tau.mode != "orthant" or tau.n != 1:
        return ["target is not R_+"]
    if not is_monogenic(tau):
        failures.append("not monogenic")
    if not is_expansive(tau):
        failures.append("not expansive")
    if witness is None and is_representable(tau) is None:
        failures.append("not representable")
    return failures


def check_rank_formula(tau: TropicalType, witness: Optional[DualWitness] = None):
    """Return ``(rank of the tropical monoid, |V|)``; equal up to one."""
    check_valid(tau)
    failures = _hypotheses(tau, witness)
    if failures:
        raise PreconditionFailed(failures)
    return groupification_rank(orthant_presentation(tau)), len(tau.vertices)


# ---------------------------------------------------------------------------
# unparalleled monoid


def pair_generator(u: str, v: str) -> str:
    return f"l[{u}~{v}]"


def parallel_classes(tau: TropicalType) -> dict:
    """Edges grouped by unordered endpoint pair, keyed in vertex order."""
    order = {v: i for i, v in enumerate(tau.vertex_ids)}
    groups = {}
    for e in tau.edges:
        key = tuple(sorted((e.source, e.target), key=order.get))
        groups.setdefault(key, []).append(e)
    return groups


def unparalleled_presentation(tau: TropicalType) -> Presentation:
    """Monogenic presentation plus ``(m_p / |m_e|) l_p = l_e`` for every
    class ``p`` of at least two parallel edges, ``m_p`` the lcm of their
    absolute slopes."""
    P = monogenic_presentation(tau)
    gens = list(P.generators)
    rels = list(P.relations)
    for (u, v), es in parallel_classes(tau).items():
        if len(es) < 2:
            continue
        g = pair_generator(u, v)
        mp = lcm(*(abs(e.slope[0]) for e in es))
        gens.append(g)
        for e in es:
            rels.append(Relation({g: mp // abs(e.slope[0])}, {length_gen(e.id): 1}))
    return Presentation(tuple(gens), tuple(rels))


def unparalleled_monoid(tau: TropicalType, witness: Optional[DualWitness] = None) -> FpMonoidImage:
    """Integral torsion-free image of the unparalleled presentation (not saturated)."""
    check_valid(tau)
    failures = _hypotheses(tau, witness)
    if failures:
        raise PreconditionFailed(failures)
    return integralize(unparalleled_presentation(tau))


# ---------------------------------------------------------------------------
# polygon obstruction


@dataclass(frozen=True)
class ObstructionCertificate:
    monoid_rank: int
    extremal_ray_count: int
    free_factor_count: int
    forced_vertex_count: int
    generator_bound: int
    verdict: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def certificate(monoid: ToricMonoid) -> ObstructionCertificate:
    """Apply the vertex-pair bound to a toric monoid.

    A representable type to ``R_+`` realising it, after reduction and with
    any ``N`` factors split off, has ``rank + 1`` vertices and hence at most
    ``C(rank + 1, 2)`` generators; every extremal ray needs one.
    """
    rays = len(extreme_rays(monoid.cone())) if monoid.rank else 0
    _, free = free_factor_split(monoid)
    forced = monoid.rank + 1
    bound = comb(forced, 2)
    verdict = INACCESSIBLE if free == 0 and rays > bound else INCONCLUSIVE
    return ObstructionCertificate(monoid.rank, rays, free, forced, bound, verdict)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Strict hull vertices in counter-clockwise order (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_cone(polygon) -> ConeRep:
    return ConeRep(3, rays=[(x, y, 1) for x, y in polygon])


def kgon_obstruction(polygon: Sequence[Sequence[int]]) -> ObstructionCertificate:
    """Certificate for the cone over ``polygon x {1}``.

    The polygon is given by its vertices, which must be lattice points in
    strictly convex position.
    """
    pts = []
    for p in polygon:
        if len(p) != 2 or not all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
                                  for x in p):
            raise NotLattice(f"{p!r} is not a point of Z^2")
        pts.append((int(p[0]), int(p[1])))
    if len(set(pts)) != len(pts):
        raise NotConvex("repeated vertex")
    hull = convex_hull(pts)
    if len(pts) < 3 or len(hull) != len(pts):
        raise NotConvex("vertices are not in strictly convex position")
    monoid = lattice_monoid([(x, y, 1) for x, y in hull])
    return certificate(monoid)


# ---------------------------------------------------------------------------
# enumeration of types to R_+


def _slope_options(slope_bound: int, multiplicity_bound: int) -> list:
    opts = [()]
    for size in range(1, multiplicity_bound + 1):
        opts += list(itertools.combinations_with_replacement(range(1, slope_bound + 1), size))
    return opts


class _Enumerator:
    """Canonical monogenic expansive representable types with ``N`` vertices.

    After ordering vertices by position, every edge of such a type runs from
    a lower to a higher vertex with positive slope, the root ``v0`` comes
    first, and every other vertex has an edge from below.  Conversely each
    such labelled graph is representable with ``f(v_i) = i``.  A labelled
    graph is kept iff it is lexicographically minimal among its relabellings
    that preserve these properties.
    """

    def __init__(self, vertex_count, slope_bound, multiplicity_bound):
        self.N = vertex_count
        self.pairs = list(itertools.combinations(range(vertex_count), 2))
        self.index = {p: k for k, p in enumerate(self.pairs)}
        self.options = _slope_options(slope_bound, multiplicity_bound)
        self.rank = {o: k for k, o in enumerate(self.options)}
        self.perms = []
        for rest in itertools.permutations(range(1, vertex_count)):
            pi = (0,) + rest
            if pi == tuple(range(vertex_count)):
                continue
            self.perms.append(pi)

    def shards(self) -> int:
        return len(self.options) if self.pairs else 1

    def labelled(self, shard: Optional[int] = None) -> Iterator[tuple]:
        if not self.pairs:
            yield ()
            return
        first = self.options if shard is None else [self.options[shard]]
        for head in first:
            for tail in itertools.product(self.options, repeat=len(self.pairs) - 1):
                yield (head,) + tail

    def monogenic(self, code) -> bool:
        for j in range(1, self.N):
            if not any(code[self.index[(i, j)]] for i in range(j)):
                return False
        return True

    def canonical(self, code) -> bool:
        ranks = [self.rank[o] for o in code]
        for pi in self.perms:
            new = [0] * len(code)
            ok = True
            for k, (i, j) in enumerate(self.pairs):
                if code[k]:
                    a, b = pi[i], pi[j]
                    if a > b:
                        ok = False
                        break
                    new[self.index[(a, b)]] = ranks[k]
            if ok and new < ranks:
                return False
        return True

    def types(self, shard: Optional[int] = None) -> Iterator[tuple]:
        """Canonical codes, one tuple of slopes per vertex pair."""
        for code in self.labelled(shard):
            if self.monogenic(code) and self.canonical(code):
                yield code


def type_from_code(N: int, code: Sequence[Sequence[int]]) -> TropicalType:
    verts = [Vertex("v0")] + [Vertex(f"v{i}", 0, frozenset({0})) for i in range(1, N)]
    edges = []
    for (i, j), slopes in zip(itertools.combinations(range(N), 2), code):
        for m in slopes:
            edges.append(Edge(f"v{i}", f"v{j}", (m,), frozenset({0}), f"e{len(edges)}"))
    return TropicalType(1, tuple(verts), tuple(edges))


def position_witness(tau: TropicalType) -> DualWitness:
    """``f(v_i) = D i`` and ``l_e = D (j - i) / m_e`` for an enumerated type,
    with ``D`` the lcm of the slopes so that all values are integers."""
    D = lcm(*(e.slope[0] for e in tau.edges)) if tau.edges else 1
    pos = {v.id: int(v.id[1:]) for v in tau.vertices}
    vals = {length_gen(e.id): D * (pos[e.target] - pos[e.source]) // e.slope[0]
            for e in tau.edges}
    for v in tau.vertices:
        if v.face:
            vals[position_gen(v.id, 0)] = D * pos[v.id]
    return DualWitness(vals)


def enumerate_types(vertex_count: int, slope_bound: int, multiplicity_bound: int,
                    shard: Optional[int] = None) -> Iterator[TropicalType]:
    """All monogenic expansive representable types to ``R_+`` up to
    isomorphism, with ``|V| = vertex_count``, slopes in ``[-B, B]`` and at most
    ``M`` parallel edges per vertex pair.  Deterministic order; legs are not
    enumerated since they do not affect the monoid."""
    _check_bounds(vertex_count, slope_bound, multiplicity_bound)
    en = _Enumerator(vertex_count, slope_bound, multiplicity_bound)
    for code in en.types(shard):
        yield type_from_code(vertex_count, code)


def _check_bounds(vertex_count, slope_bound, multiplicity_bound):
    for name, x in (("vertex_count", vertex_count), ("slope_bound", slope_bound),
                    ("multiplicity_bound", multiplicity_bound)):
        if not isinstance(x, int) or x < 1:
            raise InvalidBounds(f"{name} must be a positive integer, got {x!r}")


def position_images(tau: TropicalType) -> FpMonoidImage:
    """Images of the orthant generators in positions of the non-root vertices.

    Edge lengths are determined by positions, ``l_e = (f(v_j) - f(v_i)) / m``,
    and positions are free, so this is the integral image of the orthant
    presentation after clearing the common denominator.
    """
    others = [v.id for v in tau.vertices if v.face]
    col = {v: k for k, v in enumerate(others)}
    D = lcm(*(abs(e.slope[0]) for e in tau.edges)) if tau.edges else 1
    r = len(others)
    images = {}
    for e in tau.edges:
        x = [0] * r
        if e.target in col:
            x[col[e.target]] += D // e.slope[0]
        if e.source in col:
            x[col[e.source]] -= D // e.slope[0]
        images[length_gen(e.id)] = tuple(x)
    for v in others:
        images[position_gen(v, 0)] = tuple(D * int(k == col[v]) for k in range(r))
    return FpMonoidImage(r, images)


def _monoid_key(M: ToricMonoid):
    sig = Counter(_signatures(M).values()) if M.rank else Counter()
    return (M.rank, len(M.hilbert), tuple(sorted(sig.items())))


def _shard_records(args):
    vertex_count, slope_bound, multiplicity_bound, shard = args
    out = []
    cache = {}
    for tau in enumerate_types(vertex_count, slope_bound, multiplicity_bound, shard):
        images = position_images(tau)
        key = frozenset(images.vectors())
        if key not in cache:
            cache[key] = saturate(images)
        out.append((tau, cache[key]))
    return out


def search_types(vertex_count: int, slope_bound: int, multiplicity_bound: int,
                 out: Optional[str] = None, jobs: int = 1) -> dict:
    """Enumerate types, compute tropical monoids, keep one type per monoid.

    The enumeration is split into shards by the slopes between ``v0`` and
    ``v1``; shards are merged in order, so the result does not depend on
    ``jobs``.  With ``out`` the run is appended to a JSON catalog.
    """
    _check_bounds(vertex_count, slope_bound, multiplicity_bound)
    en = _Enumerator(vertex_count, slope_bound, multiplicity_bound)
    tasks = [(vertex_count, slope_bound, multiplicity_bound, s if en.pairs else None)
             for s in range(en.shards())]
    if jobs > 1 and len(tasks) > 1:
        from multiprocessing import Pool
        with Pool(jobs) as pool:
            parts = pool.map(_shard_records, tasks)
    else:
        parts = [_shard_records(t) for t in tasks]

    records, buckets = [], {}
    types = 0
    for part in parts:
        for tau, M in part:
            types += 1
            key = _monoid_key(M)
            bucket = buckets.setdefault(key, [])
            if any(toric_equal(M, other) for other in bucket):
                continue
            bucket.append(M)
            records.append({"type": tau.to_dict(),
                            "monoid": ToricMonoid(M.rank, M.hilbert).to_dict(),
                            "witness": position_witness(tau).to_dict()})
    summary = {
        "bounds": {"vertex_count": vertex_count, "slope_bound": slope_bound,
                   "multiplicity_bound": multiplicity_bound},
        "types": types,
        "representable": types,
        "distinct_monoids": len(records),
        "duplicates": types - len(records),
    }
    run = {"bounds": summary["bounds"], "summary": summary, "records": records}
    if out is not None:
        append_run(out, run)
    return run


def append_run(path: str, run: dict) -> None:
    """Add ``run`` to the catalog unless a run with the same bounds exists."""
    catalog = {"runs": []}
    if os.path.exists(path):
        with open(path) as fh:
            catalog = json.load(fh)
    if any(r["bounds"] == run["bounds"] for r in catalog["runs"]):
        return
    catalog["runs"].append(run)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(catalog, fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# fast checks used by the sweeps


def rank_sweep_check(tau: TropicalType, witness: DualWitness) -> Optional[str]:
    """Check the rank formula for an enumerated type without Hilbert bases.

    The witness is verified exactly against the orthant presentation; being
    positive on every generator, it shows the images span a pointed cone, so
    no units appear before sharpening and the group rank is the rank of the
    integral image.  That rank is computed twice, from the orthant and from
    the monogenic presentation.  Returns a description of the failure or None.
    """
    violations = validate(tau)
    if violations:
        return f"invalid: {violations[0]}"
    if not _is_monogenic(tau) or not is_expansive(tau):
        return "not monogenic and expansive"
    gens, rows = _orthant_matrix(tau)
    vals = witness.values
    if any(g not in vals or vals[g] <= 0 for g in gens):
        return "witness fails"
    if any(sum(c * vals[g] for g, c in zip(gens, row) if c) for row in rows):
        return "witness fails"
    V = len(tau.vertices)
    r_orth = len(gens) - matrix_rank(rows, len(gens))
    lengths = [length_gen(e.id) for e in tau.edges]
    idx = {g: k for k, g in enumerate(lengths)}
    cycle_rows = []
    for coeffs in _cycle_coefficients(tau, 0):
        row = [0] * len(lengths)
        for g, c in coeffs.items():
            row[idx[g]] = c
        cycle_rows.append(row)
    r_mono = len(lengths) - matrix_rank(cycle_rows, len(lengths))
    if r_orth != V - 1 or r_mono != V - 1:
        return f"rank {r_orth}/{r_mono} != {V - 1}"
    return None


def ray_count(tau: TropicalType, cache: Optional[dict] = None) -> int:
    """Number of extremal rays of the tropical monoid of an enumerated type."""
    M = position_images(tau)
    key = frozenset(primitive(v) for v in M.vectors())
    if cache is not None and key in cache:
        return cache[key]
    cone = _Cone(sorted(key), M.rank)
    n = len(cone.extreme())
    if cache is not None:
        cache[key] = n
    return n


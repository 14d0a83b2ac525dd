"""Torification of finitely presented monoids and toric monoid utilities.

The pipeline is: integralise and remove torsion (:func:`integralize`), then
saturate and sharpen (:func:`saturate`).  Toric monoids are stored by their
Hilbert basis inside ``Z^rank``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import NotSharp
from .exact_linalg import (
    ConeRep,
    _Cone,
    _facets,
    _hilbert_full,
    _snf,
    apply_right,
    determinant,
    dot,
    integer_kernel,
    lattice_split,
    matrix_rank,
    primitive,
)
from .presentations import Presentation


@dataclass(frozen=True)
class FpMonoidImage:
    """Submonoid of ``Z^rank`` generated by the images of named generators."""

    rank: int
    images: dict

    def __post_init__(self):
        object.__setattr__(self, "images", {g: tuple(v) for g, v in self.images.items()})

    def vectors(self) -> list:
        """Distinct nonzero images, sorted."""
        return sorted({v for v in self.images.values() if any(v)})

    def to_dict(self):
        return {"rank": self.rank, "images": {g: list(v) for g, v in self.images.items()}}

    @classmethod
    def from_dict(cls, data):
        return cls(data["rank"], {g: tuple(v) for g, v in data["images"].items()})


@dataclass(frozen=True)
class ToricMonoid:
    """Sharp saturated monoid ``cone(hilbert) ∩ Z^rank``."""

    rank: int
    hilbert: tuple
    generator_images: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "hilbert", tuple(sorted(tuple(h) for h in self.hilbert)))
        object.__setattr__(self, "generator_images",
                           {g: tuple(v) for g, v in self.generator_images.items()})

    def cone(self) -> ConeRep:
        return ConeRep(self.rank, rays=self.hilbert)

    def to_dict(self):
        return {"rank": self.rank, "hilbert": [list(h) for h in self.hilbert],
                "generator_images": {g: list(v) for g, v in self.generator_images.items()}}

    @classmethod
    def from_dict(cls, data):
        return cls(data["rank"], tuple(tuple(h) for h in data["hilbert"]),
                   {g: tuple(v) for g, v in data.get("generator_images", {}).items()})


# ---------------------------------------------------------------------------
# pipeline


def integralize(P: Presentation) -> FpMonoidImage:
    """Image of ``N^G/R`` in the torsion-free part of its groupification.

    That group is ``Z^G / sat<lhs - rhs>``, identified with ``Z^rank`` through
    the Smith normal form of the relation matrix.
    """
    n = len(P.generators)
    k, V, _ = lattice_split(P.relation_matrix(), n)
    images = {g: tuple(V[i][k:]) for i, g in enumerate(P.generators)}
    return FpMonoidImage(n - k, images)


def _group_coordinates(vectors, rank):
    """Coordinates on the lattice generated (not saturated) by ``vectors``."""
    a = [list(v) for v in vectors]
    if not a:
        return 0, lambda x: ()
    _, V, _ = _snf(a, len(a), rank)
    d = [a[i][i] for i in range(min(len(a), rank)) if a[i][i]]
    k = len(d)
    if k == rank and all(x == 1 for x in d):
        return k, tuple

    def coords(x):
        y = apply_right(x, V, range(k))
        return tuple(yi // di for yi, di in zip(y, d))
    return k, coords


def _lineality_quotient(vectors, k):
    """Map killing the lineality space of cone(vectors) in ``Z^k``."""
    gens = sorted({primitive(v) for v in vectors if any(v)})
    normals = _facets(gens, k)
    if k == 0 or matrix_rank(normals, k) == k:
        return k, lambda y: tuple(y)
    lin = integer_kernel(normals, k) if normals else [
        tuple(int(i == j) for j in range(k)) for i in range(k)]
    l, V, _ = lattice_split(lin, k)
    return k - l, lambda y: apply_right(y, V, range(l, k))


def units_rank(M: FpMonoidImage) -> int:
    """Dimension of the lineality space of the cone spanned by the images."""
    vecs = M.vectors()
    k, coords = _group_coordinates(vecs, M.rank)
    r, _ = _lineality_quotient([coords(v) for v in vecs], k)
    return k - r


def is_sharp(M: FpMonoidImage) -> bool:
    """True iff the saturation of ``M`` already has no nontrivial units."""
    return units_rank(M) == 0


def saturate(M: FpMonoidImage) -> ToricMonoid:
    """Saturate ``M`` in its groupification and sharpen.

    The result is the torification of ``M``; ``generator_images`` records
    where each generator of ``M`` lands (possibly at 0).
    """
    vecs = M.vectors()
    k, coords = _group_coordinates(vecs, M.rank)
    r, quot = _lineality_quotient([coords(v) for v in vecs], k)
    images = {g: quot(coords(v)) if any(v) else (0,) * r for g, v in M.images.items()}
    gens = sorted({primitive(v) for v in images.values() if any(v)})
    if r == 0 or not gens:
        return ToricMonoid(r, (), images)
    cone = _Cone(gens, r)
    ext = [cone.gens[i] for i in cone.extreme()]
    hb = _hilbert_full(ext, cone.normals, r)
    return ToricMonoid(r, tuple(hb), images)


def torify(P: Presentation) -> ToricMonoid:
    """The toric monoid associated to a presentation."""
    return saturate(integralize(P))


def groupification_rank(P: Presentation) -> int:
    """Rank of the groupification of ``torify(P)``, without a Hilbert basis."""
    M = integralize(P)
    return M.rank - units_rank(M)


# ---------------------------------------------------------------------------
# constructors


def lattice_monoid(rays, rank=None) -> ToricMonoid:
    """The monoid of lattice points of ``cone(rays)``.

    When the rays do not span the ambient space the monoid is expressed in
    coordinates on the saturated span.
    """
    rays = [tuple(r) for r in rays]
    if rank is None:
        rank = len(rays[0])
    cone = _Cone(rays, rank)
    if not cone.pointed:
        raise NotSharp("cone is not pointed")
    if cone.k == 0:
        return ToricMonoid(0, ())
    ext = [cone.gens[i] for i in cone.extreme()]
    hb = _hilbert_full(ext, cone.normals, cone.k)
    return ToricMonoid(cone.k, tuple(hb))


def free_monoid(k: int) -> ToricMonoid:
    return ToricMonoid(k, tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))


def direct_sum(P: ToricMonoid, Q: ToricMonoid) -> ToricMonoid:
    zq, zp = (0,) * Q.rank, (0,) * P.rank
    hb = [tuple(h) + zq for h in P.hilbert] + [zp + tuple(h) for h in Q.hilbert]
    return ToricMonoid(P.rank + Q.rank, tuple(hb))


# ---------------------------------------------------------------------------
# isomorphism


def _normals(P: ToricMonoid):
    return _facets(sorted({primitive(h) for h in P.hilbert}), P.rank)


def _signatures(P: ToricMonoid):
    normals = _normals(P)
    return {h: tuple(sorted(dot(n, h) for n in normals)) for h in P.hilbert}


def _inverse(rows):
    """Inverse of a square integer matrix over Q."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def _independent_subset(vectors, r):
    chosen = []
    for v in vectors:
        if matrix_rank(chosen + [v], r) == len(chosen) + 1:
            chosen.append(v)
            if len(chosen) == r:
                break
    return chosen


def toric_equal(P: ToricMonoid, Q: ToricMonoid) -> bool:
    """True iff some ``GL_r(Z)`` map sends the Hilbert basis of P onto that of Q."""
    if P.rank != Q.rank or len(P.hilbert) != len(Q.hilbert):
        return False
    r = P.rank
    if r == 0:
        return True
    sp, sq = _signatures(P), _signatures(Q)
    if Counter(sp.values()) != Counter(sq.values()):
        return False
    # map a basis built from the rarest signatures first
    freq = Counter(sp.values())
    ordered = sorted(P.hilbert, key=lambda h: (freq[sp[h]], h))
    basis = _independent_subset(ordered, r)
    inv = _inverse([[b[i] for b in basis] for i in range(r)])
    target = set(Q.hilbert)
    by_sig = {}
    for q in Q.hilbert:
        by_sig.setdefault(sq[q], []).append(q)
    options = [by_sig[sp[b]] for b in basis]

    def attempt(images, depth):
        if depth == r:
            # T = Qcols * Pcols^{-1}
            T = [[sum(images[k][i] * inv[k][j] for k in range(r)) for j in range(r)]
                 for i in range(r)]
            if any(x.denominator != 1 for row in T for x in row):
                return False
            T = [[int(x) for x in row] for row in T]
            if abs(determinant(T)) != 1:
                return False
            return all(tuple(dot(row, h) for row in T) in target for h in P.hilbert)
        for q in options[depth]:
            if q in images:
                continue
            if matrix_rank(images + [q], r) != depth + 1:
                continue
            if attempt(images + [q], depth + 1):
                return True
        return False

    return attempt([], 0)


# ---------------------------------------------------------------------------
# structure


def free_factor_split(P: ToricMonoid):
    """Split ``P ≅ P' ⊕ N^k`` maximally; returns ``(P', k)``.

    A Hilbert basis element ``h`` splits off exactly when the others span a
    hyperplane whose primitive normal pairs to 1 with ``h``.
    """
    hb = [tuple(h) for h in P.hilbert]
    r = P.rank
    count = 0
    changed = True
    while changed and hb:
        changed = False
        for h in hb:
            others = [x for x in hb if x != h]
            if matrix_rank(others, r) != r - 1:
                continue
            if others:
                normal, = integer_kernel(others, r)
            else:
                normal = (1,)
            if abs(dot(normal, h)) != 1:
                continue
            if others:
                k, V, _ = lattice_split(others, r)
                hb = [apply_right(x, V, range(k)) for x in others]
            else:
                hb = []
            r -= 1
            count += 1
            changed = True
            break
    return ToricMonoid(r, tuple(hb)), count


def _positive_functional(cone: _Cone):
    return [sum(col) for col in zip(*cone.normals)] if cone.normals else [1] * cone.k


def minimal_generator_count(M: Union[FpMonoidImage, ToricMonoid]) -> int:
    """Size of the unique minimal generating set of a sharp monoid."""
    if isinstance(M, ToricMonoid):
        return len(M.hilbert)
    if not is_sharp(M):
        raise NotSharp("monoid has nontrivial units")
    vecs = M.vectors()
    if not vecs:
        return 0
    cone = _Cone(vecs, M.rank)
    u = _positive_functional(cone)
    ys = [cone.coords(v) for v in vecs]
    return sum(1 for i in range(len(ys)) if not _is_sum_of(ys, u, i))


def _is_sum_of(ys, u, target) -> bool:
    """Is ``ys[target]`` an N-combination of the other entries?

    ``u`` is positive on every entry, so the search depth is bounded by
    ``u(target)``.
    """
    goal = ys[target]
    others = [ys[j] for j in range(len(ys)) if j != target and dot(u, ys[j]) <= dot(u, goal)]

    @lru_cache(maxsize=None)
    def reach(rem, start):
        if not any(rem):
            return True
        hr = dot(u, rem)
        for pos in range(start, len(others)):
            y = others[pos]
            if dot(u, y) <= hr and reach(tuple(a - b for a, b in zip(rem, y)), pos):
                return True
        return False

    return reach(tuple(goal), 0)

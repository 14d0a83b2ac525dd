"""Tropical types of maps to orthants ``R^n_+`` and to affine space ``R^n``.

Faces of the orthant are stored as sets of coordinate indices (0-based).
Each edge stores its slope for one reference orientation ``source ->
target``; the reverse slope is always the negation.  Multidegrees are never
stored: they are derived from slopes, so balancing holds by construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import InvalidType, NotMonogenic
from .exact_linalg import strict_lp_feasible
from .presentations import Presentation, Relation
from .torification import ToricMonoid, torify

ORTHANT = "orthant"
AFFINE = "affine"


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0
    face: frozenset = frozenset()
    # only used to check user-supplied multidegrees in validate()
    degree: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "face", frozenset(self.face))
        if self.degree is not None:
            object.__setattr__(self, "degree", tuple(self.degree))


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    slope: tuple
    face: frozenset = frozenset()
    id: Optional[str] = None
    # optional slope for target -> source, checked for antisymmetry
    reverse_slope: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "slope", tuple(int(x) for x in self.slope))
        object.__setattr__(self, "face", frozenset(self.face))
        if self.reverse_slope is not None:
            object.__setattr__(self, "reverse_slope", tuple(self.reverse_slope))

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Leg:
    at: str
    marking: int
    slope: tuple
    face: frozenset = frozenset()
    id: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "slope", tuple(int(x) for x in self.slope))
        object.__setattr__(self, "face", frozenset(self.face))


@dataclass(frozen=True)
class TropicalType:
    n: int
    vertices: tuple
    edges: tuple = ()
    legs: tuple = ()
    mode: str = ORTHANT

    def __post_init__(self):
        if self.mode not in (ORTHANT, AFFINE):
            raise ValueError(f"unknown target mode {self.mode!r}")
        object.__setattr__(self, "vertices", tuple(self.vertices))
        edges = tuple(e if e.id is not None else replace(e, id=f"e{i}")
                      for i, e in enumerate(self.edges))
        legs = tuple(l if l.id is not None else replace(l, id=f"leg{i}")
                     for i, l in enumerate(self.legs))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "legs", legs)

    # -- lookups ---------------------------------------------------------

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def face(self, vid: str) -> frozenset:
        return self.vertex(vid).face

    @property
    def vertex_ids(self) -> tuple:
        return tuple(v.id for v in self.vertices)

    def outward(self, vid: str):
        """Yield ``(edge, slope oriented away from vid, other endpoint)``.

        A loop contributes both of its orientations.
        """
        for e in self.edges:
            if e.source == vid:
                yield e, e.slope, e.target
            if e.target == vid:
                yield e, tuple(-x for x in e.slope), e.source

    def degree(self, vid: str) -> tuple:
        """Multidegree ``d_v``: the sum of outward slopes of edges and legs."""
        d = [0] * self.n
        for _, m, _ in self.outward(vid):
            for i, x in enumerate(m):
                d[i] += x
        for l in self.legs:
            if l.at == vid:
                for i, x in enumerate(l.slope):
                    d[i] += x
        return tuple(d)

    def components(self) -> int:
        ids = self.vertex_ids
        parent = {v: v for v in ids}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for e in self.edges:
            if e.source in parent and e.target in parent:
                parent[find(e.source)] = find(e.target)
        return len({find(v) for v in ids})

    def graph_genus(self) -> int:
        """First Betti number ``|E| - |V| + #components``."""
        return len(self.edges) - len(self.vertices) + self.components()

    # -- serialisation -------------------------------------------------------

    def to_dict(self) -> dict:
        out = {"n": self.n, "mode": self.mode, "vertices": [], "edges": [], "legs": []}
        orth = self.mode == ORTHANT
        for v in self.vertices:
            d = {"id": v.id, "genus": v.genus}
            if orth:
                d["face"] = sorted(v.face)
            out["vertices"].append(d)
        for e in self.edges:
            d = {"id": e.id, "from": e.source, "to": e.target, "slope": list(e.slope)}
            if orth:
                d["face"] = sorted(e.face)
            out["edges"].append(d)
        for l in self.legs:
            d = {"id": l.id, "at": l.at, "marking": l.marking, "slope": list(l.slope)}
            if orth:
                d["face"] = sorted(l.face)
            out["legs"].append(d)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "TropicalType":
        verts = [Vertex(str(v["id"]), int(v.get("genus", 0)), frozenset(v.get("face", ())),
                        tuple(v["degree"]) if "degree" in v else None)
                 for v in data["vertices"]]
        edges = [Edge(str(e["from"]), str(e["to"]), tuple(e["slope"]),
                      frozenset(e.get("face", ())), e.get("id"),
                      tuple(e["reverse_slope"]) if "reverse_slope" in e else None)
                 for e in data.get("edges", [])]
        legs = [Leg(str(l["at"]), int(l.get("marking", 0)), tuple(l["slope"]),
                    frozenset(l.get("face", ())), l.get("id"))
                for l in data.get("legs", [])]
        return cls(int(data["n"]), tuple(verts), tuple(edges), tuple(legs),
                   data.get("mode", ORTHANT))


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    detail: str = ""

    def __str__(self):
        return f"{self.kind} at {self.where}" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class DualWitness:
    """Rational values on presentation generators certifying representability."""

    values: dict = field(default_factory=dict)

    def satisfies(self, P: Presentation, strict: Optional[Iterable[str]] = None) -> bool:
        """Check every relation exactly and positivity on ``strict`` (default: all)."""
        vals = self.values
        if any(g not in vals for g in P.generators):
            return False
        for r in P.relations:
            if sum(c * vals[g] for g, c in r.lhs.items()) != sum(c * vals[g] for g, c in r.rhs.items()):
                return False
        names = P.generators if strict is None else strict
        return all(vals[g] > 0 for g in names)

    def to_dict(self) -> dict:
        return {g: _frac_str(x) for g, x in self.values.items()}

    @classmethod
    def from_dict(cls, data: Mapping) -> "DualWitness":
        return cls({g: Fraction(x) for g, x in data.items()})


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def length_gen(eid: str) -> str:
    return f"l[{eid}]"


def position_gen(vid: str, i: int) -> str:
    return f"f[{vid},{i}]"


# ---------------------------------------------------------------------------
# validation


def validate(tau: TropicalType) -> list:
    """All violated invariants of ``tau``; an empty list means valid."""
    out = []
    ids = [v.id for v in tau.vertices]
    known = set(ids)
    if len(known) != len(ids):
        out.append(Violation("DuplicateId", "vertices"))
    if not tau.vertices:
        out.append(Violation("Empty", "graph", "a tropical type needs a vertex"))
    orth = tau.mode == ORTHANT
    faces = {v.id: v.face for v in tau.vertices}

    def check_face(where, face):
        if any(not (0 <= i < tau.n) for i in face):
            out.append(Violation("FaceRange", where, f"{sorted(face)} not inside [0, {tau.n})"))
        if not orth and face:
            out.append(Violation("AffineFace", where, "affine targets carry no faces"))

    for v in tau.vertices:
        if v.genus < 0:
            out.append(Violation("Genus", v.id, f"genus {v.genus} < 0"))
        check_face(v.id, v.face)

    for e in tau.edges:
        where = f"edge {e.id}"
        if e.source not in known or e.target not in known:
            out.append(Violation("UnknownVertex", where))
            continue
        if len(e.slope) != tau.n:
            out.append(Violation("SlopeLength", where, f"{len(e.slope)} != {tau.n}"))
            continue
        check_face(where, e.face)
        if e.reverse_slope is not None and tuple(e.reverse_slope) != tuple(-x for x in e.slope):
            out.append(Violation("Antisymmetry", where,
                                 f"reverse slope {list(e.reverse_slope)} != -{list(e.slope)}"))
        if orth:
            for end in (e.source, e.target):
                if not faces[end] <= e.face:
                    out.append(Violation("FaceMonotonicity", where,
                                         f"face of {end} not contained in edge face"))
            support = {i for i, x in enumerate(e.slope) if x}
            if not support <= e.face:
                out.append(Violation("SlopeSupport", where,
                                     f"support {sorted(support)} outside face {sorted(e.face)}"))

    for l in tau.legs:
        where = f"leg {l.id}"
        if l.at not in known:
            out.append(Violation("UnknownVertex", where))
            continue
        if len(l.slope) != tau.n:
            out.append(Violation("SlopeLength", where, f"{len(l.slope)} != {tau.n}"))
            continue
        check_face(where, l.face)
        if orth:
            if not faces[l.at] <= l.face:
                out.append(Violation("FaceMonotonicity", where))
            support = {i for i, x in enumerate(l.slope) if x}
            if not support <= l.face:
                out.append(Violation("SlopeSupport", where))

    if not out:
        for v in tau.vertices:
            if v.degree is not None and tuple(v.degree) != tau.degree(v.id):
                out.append(Violation("Balancing", v.id,
                                     f"given degree {list(v.degree)} != {list(tau.degree(v.id))}"))
        if tau.vertices and tau.components() != 1:
            out.append(Violation("Disconnected", "graph"))
    return out


def check_valid(tau: TropicalType) -> None:
    violations = validate(tau)
    if violations:
        raise InvalidType(violations)


# ---------------------------------------------------------------------------
# presentations


def rearrange(coeffs: Mapping[str, int]) -> Optional[Relation]:
    """Turn ``sum c_g g = 0`` into a relation with non-negative sides."""
    lhs = {g: c for g, c in coeffs.items() if c > 0}
    rhs = {g: -c for g, c in coeffs.items() if c < 0}
    if not lhs and not rhs:
        return None
    return Relation(lhs, rhs)


def orthant_presentation(tau: TropicalType) -> Presentation:
    """Generators are edge lengths and vertex coordinates; one relation per
    edge and coordinate of its face, imposing the slope along the edge."""
    check_valid(tau)
    if tau.mode != ORTHANT:
        raise ValueError("orthant_presentation needs an orthant-mode type")
    return _orthant_presentation(tau)


def _orthant_generators(tau: TropicalType) -> list:
    gens = [length_gen(e.id) for e in tau.edges]
    for v in tau.vertices:
        gens += [position_gen(v.id, i) for i in sorted(v.face)]
    return gens


def _orthant_terms(tau: TropicalType):
    """``(head, tail, length, slope)`` for each edge and coordinate of its
    face; ``head = tail + slope * length`` with absent positions read as 0."""
    faces = {v.id: v.face for v in tau.vertices}
    for e in tau.edges:
        ell = length_gen(e.id)
        for i in sorted(e.face):
            head = position_gen(e.target, i) if i in faces[e.target] else None
            tail = position_gen(e.source, i) if i in faces[e.source] else None
            yield head, tail, ell, e.slope[i]


def _orthant_presentation(tau: TropicalType) -> Presentation:
    rels = []
    for head, tail, ell, m in _orthant_terms(tau):
        lhs, rhs = {}, {}
        if head:
            lhs[head] = lhs.get(head, 0) + 1
        if tail:
            rhs[tail] = rhs.get(tail, 0) + 1
        if m > 0:
            rhs[ell] = m
        elif m < 0:
            lhs[ell] = -m
        if lhs or rhs:
            rels.append(Relation(lhs, rhs))
    return Presentation(tuple(_orthant_generators(tau)), tuple(rels))


def _orthant_matrix(tau: TropicalType):
    """Generators and relation matrix of the orthant presentation, built
    without the intermediate relations."""
    gens = _orthant_generators(tau)
    idx = {g: k for k, g in enumerate(gens)}
    rows = []
    for head, tail, ell, m in _orthant_terms(tau):
        if not (head or tail or m):
            continue
        row = [0] * len(gens)
        if head:
            row[idx[head]] += 1
        if tail:
            row[idx[tail]] -= 1
        row[idx[ell]] -= m
        rows.append(row)
    return gens, rows


def spanning_tree(tau: TropicalType):
    """BFS spanning tree from the first vertex, preferring earlier edges.

    Returns ``parent`` mapping each non-root vertex to ``(parent, edge)``.
    """
    root = tau.vertices[0].id
    parent = {root: None}
    queue = deque([root])
    adj = {v: [] for v in tau.vertex_ids}
    for e in tau.edges:
        if not e.is_loop:
            adj[e.source].append((e, e.target))
            adj[e.target].append((e, e.source))
    while queue:
        x = queue.popleft()
        for e, y in adj[x]:
            if y not in parent:
                parent[y] = (x, e)
                queue.append(y)
    return parent


def fundamental_cycles(tau: TropicalType) -> list:
    """Cycle basis as lists of ``(edge, sign)``; sign +1 means the edge is
    traversed along its reference orientation."""
    parent = spanning_tree(tau)
    tree = {p[1].id for p in parent.values() if p is not None}

    def to_root(x):
        path = []
        while parent[x] is not None:
            p, e = parent[x]
            path.append((x, p, e))
            x = p
        return path

    cycles = []
    for e in tau.edges:
        if e.id in tree:
            continue
        if e.is_loop:
            cycles.append([(e, 1)])
            continue
        # e goes a -> b; then walk b up to the common ancestor and down to a
        up_b, up_a = to_root(e.target), to_root(e.source)
        anc_a = {x for x, _, _ in up_a} | {up_a[-1][1] if up_a else e.source}
        cyc = [(e, 1)]
        stop = None
        for x, p, te in up_b:
            if x in anc_a:
                stop = x
                break
            cyc.append((te, 1 if te.source == x else -1))
            stop = p
        if not up_b:
            stop = e.target
        down = []
        for x, p, te in up_a:
            if x == stop:
                break
            down.append((te, 1 if te.target == x else -1))
        cyc += list(reversed(down))
        cycles.append(cyc)
    return cycles


def _cycle_coefficients(tau: TropicalType, coord: int) -> list:
    """Signed slope sums around each fundamental cycle, by length generator."""
    out = []
    for cyc in fundamental_cycles(tau):
        coeffs = {}
        for e, s in cyc:
            g = length_gen(e.id)
            coeffs[g] = coeffs.get(g, 0) + s * e.slope[coord]
        out.append(coeffs)
    return out


def _cycle_relations(tau: TropicalType, coord: int) -> list:
    rels = []
    for coeffs in _cycle_coefficients(tau, coord):
        r = rearrange(coeffs)
        if r is not None:
            rels.append(r)
    return rels


def is_monogenic(tau: TropicalType) -> bool:
    """Exactly one vertex over the origin; every other vertex has an adjacent
    edge whose outward slope is negative.  Only meaningful for ``n == 1``."""
    check_valid(tau)
    return _is_monogenic(tau)


def _is_monogenic(tau: TropicalType) -> bool:
    if tau.mode != ORTHANT or tau.n != 1:
        return False
    roots = [v for v in tau.vertices if not v.face]
    if len(roots) != 1:
        return False
    root = roots[0].id
    for v in tau.vertices:
        if v.id == root:
            continue
        if not any(m[0] < 0 for _, m, _ in tau.outward(v.id)):
            return False
    return True


def monogenic_presentation(tau: TropicalType) -> Presentation:
    """Edge-length presentation with one relation per fundamental cycle."""
    if not is_monogenic(tau):
        raise NotMonogenic("monogenic presentation needs a monogenic type to R_+")
    gens = tuple(length_gen(e.id) for e in tau.edges)
    return Presentation(gens, tuple(_cycle_relations(tau, 0)))


def affine_presentation(tau: TropicalType) -> Presentation:
    """Edge lengths subject to ``n`` relations per fundamental cycle."""
    check_valid(tau)
    if tau.mode != AFFINE:
        raise ValueError("affine_presentation needs an affine-mode type")
    gens = tuple(length_gen(e.id) for e in tau.edges)
    rels = []
    for i in range(tau.n):
        rels += _cycle_relations(tau, i)
    # coordinate-major order above; regroup by cycle for readability
    return Presentation(gens, tuple(rels))


def tropical_monoid(tau: TropicalType) -> ToricMonoid:
    if tau.mode == AFFINE:
        return torify(affine_presentation(tau))
    return torify(orthant_presentation(tau))


# ---------------------------------------------------------------------------
# representability


def combinatorial_obstructions(tau: TropicalType) -> list:
    """Relative-interior conditions that involve slopes only.

    A leg at ``v`` must move into the interior of its face: coordinates in
    ``I(l) \\ I(v)`` need positive slope, coordinates in ``I(v)`` need
    non-negative slope.  An edge whose face has a coordinate that vanishes
    at both endpoints would run along the boundary of its face.
    """
    out = []
    for l in tau.legs:
        fv = tau.face(l.at)
        for i in l.face:
            m = l.slope[i]
            if (i in fv and m < 0) or (i not in fv and m <= 0):
                out.append(f"leg {l.id} leaves its face in coordinate {i}")
    for e in tau.edges:
        ends = tau.face(e.source) | tau.face(e.target)
        for i in e.face - ends:
            out.append(f"edge {e.id} stays on the boundary in coordinate {i}")
    return out


def is_representable(tau: TropicalType) -> Optional[DualWitness]:
    """A witness with strictly positive lengths and coordinates, or None."""
    check_valid(tau)
    if tau.mode != ORTHANT:
        raise ValueError("representability is defined here for orthant targets")
    if combinatorial_obstructions(tau):
        return None
    P = orthant_presentation(tau)
    n = len(P.generators)
    u = strict_lp_feasible(P.relation_matrix(), range(n), ncols=n)
    if u is None:
        return None
    return DualWitness(dict(zip(P.generators, u)))

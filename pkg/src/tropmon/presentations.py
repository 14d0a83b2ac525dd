"""Finitely presented commutative monoids and presentation surgery."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .exact_linalg import strict_lp_feasible


def _clean(word: Mapping[str, int]) -> dict:
    out = {}
    for g, c in word.items():
        c = int(c)
        if c < 0:
            raise ValueError(f"negative coefficient {c} for {g!r}")
        if c:
            out[g] = c
    return out


@dataclass(frozen=True)
class Relation:
    """``lhs = rhs`` with both sides non-negative integer combinations."""

    lhs: dict
    rhs: dict

    def __post_init__(self):
        object.__setattr__(self, "lhs", _clean(self.lhs))
        object.__setattr__(self, "rhs", _clean(self.rhs))

    def support(self) -> set:
        return set(self.lhs) | set(self.rhs)

    def __str__(self):
        return f"{_word_str(self.lhs)} = {_word_str(self.rhs)}"


def _word_str(w):
    if not w:
        return "0"
    return " + ".join(g if c == 1 else f"{c}{g}" for g, c in w.items())


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        rels = tuple(r if isinstance(r, Relation) else Relation(*r) for r in self.relations)
        object.__setattr__(self, "relations", rels)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        known = set(self.generators)
        for r in rels:
            missing = r.support() - known
            if missing:
                raise ValueError(f"relation {r} uses unknown generators {sorted(missing)}")

    def relation_matrix(self) -> list:
        """Rows ``lhs - rhs`` indexed by generator order."""
        idx = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for r in self.relations:
            row = [0] * len(self.generators)
            for g, c in r.lhs.items():
                row[idx[g]] += c
            for g, c in r.rhs.items():
                row[idx[g]] -= c
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {"generators": list(self.generators),
                "relations": [{"lhs": dict(r.lhs), "rhs": dict(r.rhs)}
                              for r in self.relations]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Presentation":
        rels = [Relation(r.get("lhs", {}), r.get("rhs", {})) for r in data.get("relations", [])]
        return cls(tuple(data["generators"]), tuple(rels))

    def __str__(self):
        rels = ", ".join(str(r) for r in self.relations)
        return f"<{', '.join(self.generators)} | {rels}>"


@dataclass(frozen=True)
class Bipartition:
    left: tuple
    right: tuple = field(default=())

    def to_dict(self):
        return {"left": list(self.left), "right": list(self.right)}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(data["left"]), tuple(data.get("right", ())))


def is_bipartite(P: Presentation, B: Bipartition) -> bool:
    left, right = set(B.left), set(B.right)
    if left & right or left | right != set(P.generators):
        return False
    return all(set(r.lhs) <= left and set(r.rhs) <= right for r in P.relations)


def find_bipartition(P: Presentation) -> Optional[Bipartition]:
    """The bipartition read off from relation sides, if one exists.

    Generators that occur in no relation go to the left part.
    """
    lhs = set().union(*(r.lhs for r in P.relations)) if P.relations else set()
    rhs = set().union(*(r.rhs for r in P.relations)) if P.relations else set()
    if lhs & rhs:
        return None
    return Bipartition(tuple(g for g in P.generators if g not in rhs),
                       tuple(g for g in P.generators if g in rhs))


def torified_zero_generators(P: Presentation) -> list:
    """Generators whose image in the torification of ``N^G/R`` is zero.

    ``g`` survives iff some ``u >= 0`` vanishing on every ``lhs - rhs`` has
    ``u(g) > 0``.  Each witness found also certifies every other generator
    on which it is positive, which keeps the number of LPs small.
    """
    eq = P.relation_matrix()
    n = len(P.generators)
    alive = set()
    zero = []
    for i in range(n):
        if i in alive:
            continue
        u = strict_lp_feasible(eq, [i], range(n), ncols=n)
        if u is None:
            zero.append(P.generators[i])
        else:
            alive.update(j for j in range(n) if u[j] > 0)
    return sorted(zero, key=P.generators.index)


def drop_generators(P: Presentation, drop: Iterable[str]) -> Presentation:
    """Delete generators everywhere; relations that become ``0 = 0`` go too."""
    drop = set(drop)
    gens = tuple(g for g in P.generators if g not in drop)
    rels = []
    for r in P.relations:
        lhs = {g: c for g, c in r.lhs.items() if g not in drop}
        rhs = {g: c for g, c in r.rhs.items() if g not in drop}
        if lhs or rhs:
            rels.append(Relation(lhs, rhs))
    return Presentation(gens, tuple(rels))


def _dedupe(rels: Sequence[Relation]) -> tuple:
    out = []
    for r in rels:
        if r not in out:
            out.append(r)
    return tuple(out)


def _fresh(name: str, taken: set, suffix: str) -> str:
    cand = name + suffix
    while cand in taken:
        cand += suffix
    taken.add(cand)
    return cand


def sanitize(P: Presentation, uniform: bool = False,
             copy_names: Optional[Mapping[str, str]] = None):
    """Rewrite ``P`` as a bipartite, positive presentation with the same torification.

    Torified-zero generators are dropped first.  By default only generators
    occurring on both a left and a right hand side are doubled: the copy
    takes over the left-hand occurrences and a relation ``copy = original``
    is appended.  ``uniform=True`` doubles every generator instead (names
    ``g_1``/``g_2``).  ``copy_names`` overrides the name of individual copies.

    Returns ``(presentation, bipartition)``.
    """
    copy_names = dict(copy_names or {})
    P = drop_generators(P, torified_zero_generators(P))
    taken = set(P.generators) | set(copy_names.values())

    if uniform:
        one = {g: copy_names.get(g) or _fresh(g, taken, "_1") for g in P.generators}
        two = {g: _fresh(g, taken, "_2") for g in P.generators}
        rels = [Relation({one[g]: c for g, c in r.lhs.items()},
                         {two[g]: c for g, c in r.rhs.items()}) for r in P.relations]
        rels += [Relation({one[g]: 1}, {two[g]: 1}) for g in P.generators]
        left = tuple(one[g] for g in P.generators)
        right = tuple(two[g] for g in P.generators)
        out = Presentation(left + right, _dedupe(rels))
        return out, Bipartition(left, right)

    lhs_gens = set().union(*(r.lhs for r in P.relations)) if P.relations else set()
    rhs_gens = set().union(*(r.rhs for r in P.relations)) if P.relations else set()
    both = [g for g in P.generators if g in lhs_gens and g in rhs_gens]
    copy = {g: copy_names.get(g) or _fresh(g, taken, "'") for g in both}
    rels = [Relation({copy.get(g, g): c for g, c in r.lhs.items()}, r.rhs)
            for r in P.relations]
    rels += [Relation({copy[g]: 1}, {g: 1}) for g in both]
    gens = P.generators + tuple(copy[g] for g in both)
    right = tuple(g for g in gens if g in rhs_gens)
    left = tuple(g for g in gens if g not in rhs_gens)
    return Presentation(gens, _dedupe(rels)), Bipartition(left, right)


def congruent_bounded(P: Presentation, u: Mapping[str, int], v: Mapping[str, int],
                      max_total: int = 12, max_states: int = 100_000) -> Optional[bool]:
    """Decide ``u = v`` in ``N^G/R`` by breadth-first search over rewrites.

    Only words whose total degree stays at most ``max_total`` are explored,
    so ``False`` means "not equal within the bound".  Returns None when the
    state budget runs out.
    """
    gens = P.generators
    start = tuple(int(u.get(g, 0)) for g in gens)
    goal = tuple(int(v.get(g, 0)) for g in gens)
    moves = []
    for r in P.relations:
        a = tuple(r.lhs.get(g, 0) for g in gens)
        b = tuple(r.rhs.get(g, 0) for g in gens)
        moves += [(a, b), (b, a)]
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if w == goal:
            return True
        for a, b in moves:
            if all(x >= y for x, y in zip(w, a)):
                nxt = tuple(x - y + z for x, y, z in zip(w, a, b))
                if sum(nxt) <= max_total and nxt not in seen:
                    if len(seen) >= max_states:
                        return None
                    seen.add(nxt)
                    queue.append(nxt)
    return False

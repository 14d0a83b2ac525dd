"""Exact integer and rational linear algebra.

Everything here works with Python ``int`` and :class:`fractions.Fraction`;
there is no floating point anywhere in the package.  Vectors are tuples of
ints, matrices are either :class:`IntMatrix` values or plain lists of rows.

The cone routines (facets, extreme rays, Hilbert bases) use brute-force
enumeration over subsets of generators.  That is exact and adequate for the
ranks this package deals with (at most about six).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import ConeNotPointed

Vector = tuple


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError("rows*cols does not match the number of entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def to_rows(self) -> list:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols))
                for j in range(other.cols)] for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)

    def transpose(self) -> "IntMatrix":
        r = self.to_rows()
        return IntMatrix.from_rows([[r[i][j] for i in range(self.rows)]
                                    for j in range(self.cols)], self.rows)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return determinant(self.to_rows())

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows)
                   for j in range(self.cols) if i != j)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def matrix_rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    """Rank over Q by fraction-free elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    n = len(a[0]) if ncols is None else ncols
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank]
        for i in range(rank + 1, len(a)):
            c = a[i][col]
            if c:
                pc = p[col]
                a[i] = [x * pc - c * y for x, y in zip(a[i], p)]
        rank += 1
        if rank == len(a):
            break
    return rank


def _snf(a: list, m: int, n: int):
    """In-place Smith normal form.  Returns (U, V, Vinv) with U a V == D."""
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]
        Vi[j], Vi[k] = Vi[k], Vi[j]

    def add_row(dst, src, c):
        ra, rs = a[dst], a[src]
        a[dst] = [x + c * y for x, y in zip(ra, rs)]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]
        # inverse of the column operation acts on rows of Vinv
        Vi[src] = [x - c * y for x, y in zip(Vi[src], Vi[dst])]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // p
                    if q:
                        add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    q = x // p
                    if q:
                        add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return U, V, Vi


def smith_normal_form(M: IntMatrix):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular, the diagonal of ``D`` is non-negative
    and each diagonal entry divides the next.
    """
    a = M.to_rows()
    U, V, _ = _snf(a, M.rows, M.cols)
    return (IntMatrix.from_rows(U, M.rows), IntMatrix.from_rows(a, M.cols),
            IntMatrix.from_rows(V, M.cols))


def _snf_rank(a, m, n):
    return sum(1 for i in range(min(m, n)) if a[i][i])


def lattice_split(vectors: Sequence[Sequence[int]], dim: int):
    """Split ``Z^dim`` along the saturated span of ``vectors``.

    Returns ``(k, V, Vinv)``: ``k`` is the rank of the span, ``x -> (x V)[:k]``
    gives coordinates on the saturated span (whose basis is the first ``k``
    rows of ``Vinv``) and ``x -> (x V)[k:]`` is a surjection onto
    ``Z^(dim-k)`` whose kernel is exactly the saturated span.
    """
    a = [list(v) for v in vectors]
    U, V, Vi = _snf(a, len(a), dim)
    return _snf_rank(a, len(a), dim), V, Vi


def apply_right(x: Sequence[int], V: Sequence[Sequence[int]], cols: range) -> tuple:
    """Compute the selected entries of the row vector ``x @ V``."""
    return tuple(sum(xi * V[i][j] for i, xi in enumerate(x) if xi) for j in cols)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list:
    """A Z-basis of ``{x in Z^ncols : A x = 0}`` (automatically saturated)."""
    a = [list(r) for r in rows]
    U, V, _ = _snf(a, len(a), ncols)
    k = _snf_rank(a, len(a), ncols)
    return [tuple(V[i][j] for i in range(ncols)) for j in range(k, ncols)]


# ---------------------------------------------------------------------------
# vectors


def primitive(v: Sequence[int]) -> tuple:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _hyperplane_normal(rows: Sequence[Sequence[int]], d: int) -> Optional[tuple]:
    """Primitive normal to d-1 vectors in Z^d, or None if they are dependent."""
    if d == 1:
        return (1,)
    if d == 2:
        (a, b), = rows
        n = (-b, a)
    elif d == 3:
        (a1, a2, a3), (b1, b2, b3) = rows
        n = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    else:
        n = []
        for k in range(d):
            minor = [[r[j] for j in range(d) if j != k] for r in rows]
            n.append((-1) ** k * determinant(minor))
        n = tuple(n)
    if not any(n):
        return None
    return primitive(n)


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class ConeRep:
    """A rational polyhedral cone in ``R^rank``.

    Either ``rays`` (generators) or ``inequalities`` (covectors ``h`` with
    ``h . x >= 0``) must be given; both may be.
    """

    rank: int
    rays: Optional[tuple] = None
    inequalities: Optional[tuple] = None

    def __post_init__(self):
        if self.rays is None and self.inequalities is None:
            raise ValueError("a cone needs rays or inequalities")
        if self.rays is not None:
            object.__setattr__(self, "rays", tuple(
                primitive(tuple(int(x) for x in r)) for r in self.rays if any(r)))
        if self.inequalities is not None:
            object.__setattr__(self, "inequalities", tuple(
                tuple(int(x) for x in h) for h in self.inequalities))
        for v in (self.rays or ()) + (self.inequalities or ()):
            if len(v) != self.rank:
                raise ValueError("vector length does not match cone rank")

    @classmethod
    def from_rays(cls, rays: Iterable[Sequence[int]], rank: Optional[int] = None):
        rays = [tuple(r) for r in rays]
        if rank is None:
            if not rays:
                raise ValueError("rank required for an empty ray list")
            rank = len(rays[0])
        return cls(rank, rays=tuple(rays))

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[Sequence[int]], rank: Optional[int] = None):
        ineqs = [tuple(h) for h in ineqs]
        if rank is None:
            rank = len(ineqs[0])
        return cls(rank, inequalities=tuple(ineqs))

    def generators(self) -> tuple:
        """Ray generators, computing them from inequalities if needed."""
        if self.rays is not None:
            return self.rays
        return _rays_from_inequalities(self.inequalities, self.rank)

    def contains(self, x: Sequence[int]) -> bool:
        if self.inequalities is not None:
            return all(dot(h, x) >= 0 for h in self.inequalities)
        return _Cone.of(self.rays, self.rank).contains(x)


def _rays_from_inequalities(ineqs, r):
    if r == 0:
        return ()
    if matrix_rank(ineqs, r) < r:
        raise ConeNotPointed("inequalities do not cut out a pointed cone")
    rays = set()
    for sub in itertools.combinations(ineqs, r - 1):
        n = _hyperplane_normal(sub, r) if r > 1 else (1,)
        if n is None:
            continue
        for cand in (n, tuple(-x for x in n)):
            if all(dot(h, cand) >= 0 for h in ineqs):
                rays.add(cand)
    return tuple(sorted(rays))


class _Cone:
    """Full-dimensional working form of a cone given by generators.

    ``coords`` maps ambient vectors to coordinates on the saturated span of
    the generators; all facet work happens in those coordinates.
    """

    def __init__(self, gens, ambient):
        self.ambient = ambient
        gens = sorted({primitive(g) for g in gens if any(g)})
        self.k, self._V, self._Vi = lattice_split(gens, ambient) if gens else (0, None, None)
        if self.k == ambient:
            self._identity = True
            self.gens = [tuple(g) for g in gens]
        else:
            self._identity = False
            self.gens = [self.coords(g) for g in gens]
        self.ambient_gens = [tuple(g) for g in gens]
        self.normals = _facets(self.gens, self.k)
        self.pointed = self.k == 0 or matrix_rank(self.normals, self.k) == self.k

    @classmethod
    def of(cls, gens, ambient):
        return cls(gens, ambient)

    def coords(self, x):
        if self._identity:
            return tuple(x)
        return apply_right(x, self._V, range(self.k))

    def lift(self, y):
        if self._identity:
            return tuple(y)
        return tuple(sum(y[i] * self._Vi[i][j] for i in range(self.k))
                     for j in range(self.ambient))

    def in_span(self, x) -> bool:
        if self._identity:
            return True
        if self._V is None:
            return not any(x)
        return not any(apply_right(x, self._V, range(self.k, self.ambient)))

    def contains(self, x) -> bool:
        if not self.in_span(x):
            return False
        y = self.coords(x)
        return all(dot(n, y) >= 0 for n in self.normals)

    def extreme(self) -> list:
        """Indices of generators spanning extremal rays (pointed cones only)."""
        if self.k == 0:
            return []
        if self.k == 1:
            return [0] if len(self.gens) == 1 else []
        out = []
        for idx, g in enumerate(self.gens):
            tight = [n for n in self.normals if dot(n, g) == 0]
            if len(tight) >= self.k - 1 and matrix_rank(tight, self.k) == self.k - 1:
                out.append(idx)
        return out


def _facets(gens, d) -> list:
    """Primitive inward facet normals of the full-dimensional cone(gens)."""
    if d == 0:
        return []
    if d == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens}
        return [(1,)] if signs == {1} else ([(-1,)] if signs == {-1} else [])
    found = set()
    for sub in itertools.combinations(gens, d - 1):
        n = _hyperplane_normal(sub, d)
        if n is None or n in found or tuple(-x for x in n) in found:
            continue
        pos = neg = False
        for g in gens:
            s = dot(n, g)
            if s > 0:
                pos = True
            elif s < 0:
                neg = True
            if pos and neg:
                break
        if pos and neg:
            continue
        found.add(n if not neg else tuple(-x for x in n))
    return sorted(found)


def _cone_of(C: ConeRep) -> _Cone:
    return _Cone(C.generators(), C.rank)


def facet_normals(C: ConeRep) -> list:
    """Inward facet normals of ``C`` as ambient covectors (full-dimensional C)."""
    cone = _cone_of(C)
    if cone.k != C.rank:
        raise ValueError("facet normals are only defined here for full-dimensional cones")
    return list(cone.normals)


def is_pointed(C: ConeRep) -> bool:
    try:
        return _cone_of(C).pointed
    except ConeNotPointed:
        return False


def extreme_rays(C: ConeRep) -> list:
    """Primitive generators of the extremal rays of ``C``, sorted.

    A cone with a nonzero lineality space has no one-dimensional faces, so
    the result is empty for such cones, as it is for the zero cone.
    """
    try:
        cone = _cone_of(C)
    except ConeNotPointed:
        return []
    if not cone.pointed:
        return []
    return sorted(cone.ambient_gens[i] for i in cone.extreme())


def cone_contains(C: ConeRep, x: Sequence[int]) -> bool:
    return C.contains(x)


# ---------------------------------------------------------------------------
# exact linear programming


def nonnegative_solution(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None):
    """Find ``x >= 0`` with ``A x = b`` exactly, or return None.

    Phase one of the simplex method over Q with Bland's rule, so it always
    terminates.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    rows = []
    for r, bi in zip(A, b):
        r = [Fraction(x) for x in r]
        bi = Fraction(bi)
        if bi < 0:
            r = [-x for x in r]
            bi = -bi
        rows.append(r)
        rows[-1].append(bi)
    # tableau columns: 0..n-1 structural, n..n+m-1 artificial, last rhs
    T = []
    for i, r in enumerate(rows):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(r[:n] + art + [r[n]])
    basis = list(range(n, n + m))
    width = n + m
    cost = [Fraction(0)] * (width + 1)
    for r in T:
        for j in range(n):
            cost[j] -= r[j]
        cost[width] -= r[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(T):
            if r[enter] > 0:
                ratio = r[width] / r[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # cannot happen in phase one, objective bounded below
            break
        i = best[1]
        piv = T[i][enter]
        T[i] = [x / piv for x in T[i]]
        pr = T[i]
        for k, r in enumerate(T):
            if k != i and r[enter]:
                c = r[enter]
                T[k] = [x - c * y for x, y in zip(r, pr)]
        c = cost[enter]
        cost = [x - c * y for x, y in zip(cost, pr)]
        basis[i] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][width]
    return tuple(x)


def strict_lp_feasible(eq: Sequence[Sequence[int]], strict: Iterable[int],
                       nonneg: Iterable[int] = (), ncols: Optional[int] = None):
    """Solve ``eq u = 0`` with ``u_i > 0`` on ``strict`` and ``u_i >= 0`` on ``nonneg``.

    Variables in neither set are free.  Because the solution set is a cone,
    strict positivity is imposed as ``u_i >= 1``.  Returns an exact rational
    witness tuple, or None when infeasible.
    """
    n = ncols if ncols is not None else (len(eq[0]) if eq else 0)
    strict = set(strict)
    nonneg = set(nonneg) - strict
    # columns: one per bounded variable, two per free variable
    cols = []
    for i in range(n):
        cols.append((i, 1))
        if i not in strict and i not in nonneg:
            cols.append((i, -1))
    A = [[row[i] * s for (i, s) in cols] for row in eq]
    b = [-sum(row[i] for i in strict) for row in eq]
    w = nonnegative_solution(A, b, len(cols))
    if w is None:
        return None
    u = [Fraction(0)] * n
    for (i, s), val in zip(cols, w):
        u[i] += s * val
    for i in strict:
        u[i] += 1
    return tuple(u)


# ---------------------------------------------------------------------------
# Hilbert bases


def _triangulate(gens: list, d: int) -> list:
    """Pulling triangulation of a pointed full-dimensional cone.

    ``gens`` must be the primitive extremal ray generators.  Returns index
    tuples of simplicial subcones covering the cone.
    """
    if len(gens) == d:
        return [tuple(range(d))]
    if d == 1:
        return [(0,)]
    normals = _facets(gens, d)
    apex = gens[0]
    out = []
    for n in normals:
        if dot(n, apex) == 0:
            continue
        idx = [i for i, g in enumerate(gens) if dot(n, g) == 0]
        # project the facet injectively by dropping a coordinate where n != 0
        drop = next(k for k in range(d) if n[k])
        sub = [tuple(x for k, x in enumerate(gens[i]) if k != drop) for i in idx]
        for simplex in _triangulate(sub, d - 1):
            out.append((0,) + tuple(idx[s] for s in simplex))
    return out


def _parallelepiped_points(cols: list, d: int) -> list:
    """Lattice points of the half-open fundamental parallelepiped of cols."""
    A = [[cols[j][i] for j in range(d)] for i in range(d)]
    a = [row[:] for row in A]
    _, V, _ = _snf(a, d, d)
    s = [a[i][i] for i in range(d)]
    top = s[-1]
    pts = []
    for y in itertools.product(*(range(si) for si in s)):
        # lambda = V diag(1/s) y, written over the common denominator top
        num = [sum(V[i][j] * y[j] * (top // s[j]) for j in range(d)) % top
               for i in range(d)]
        if not any(num):
            continue
        pts.append(tuple(sum(A[i][j] * num[j] for j in range(d)) // top
                         for i in range(d)))
    return pts


def _hilbert_full(gens: list, normals: list, d: int) -> list:
    if d == 0:
        return []
    if d == 1:
        return [gens[0]]
    cand = set(gens)
    for simplex in _triangulate(gens, d):
        cand.update(_parallelepiped_points([gens[i] for i in simplex], d))
    height = [sum(col) for col in zip(*normals)]
    order = sorted(cand, key=lambda x: (dot(height, x), x))
    basis = []
    for x in order:
        hx = dot(height, x)
        reducible = False
        for h in basis:
            if dot(height, h) >= hx:
                break
            diff = [xi - hi for xi, hi in zip(x, h)]
            if all(dot(n, diff) >= 0 for n in normals):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return basis


def hilbert_basis(C: ConeRep) -> list:
    """Minimal generating set of ``cone(C) ∩ Z^rank``, lexicographically sorted."""
    cone = _cone_of(C)
    if not cone.pointed:
        raise ConeNotPointed("cone has a nonzero lineality space")
    ext = [cone.gens[i] for i in cone.extreme()]
    basis = _hilbert_full(ext, cone.normals, cone.k)
    return sorted(cone.lift(y) for y in basis)

"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line with what was
checked and how long it took, and fails if the check or the time limit fails.
"""

import itertools
import random
import time
from functools import lru_cache
from math import comb, gcd

import pytest

from tropmon.constructions import affine_glue, construct_type, realize_rank2
from tropmon.exact_linalg import (
    ConeRep,
    IntMatrix,
    cone_contains,
    hilbert_basis,
    is_pointed,
    matrix_rank,
    smith_normal_form,
)
from tropmon.presentations import Bipartition, Presentation, Relation, sanitize
from tropmon.reductions import (
    INACCESSIBLE,
    INCONCLUSIVE,
    enumerate_types,
    expansive_reduce,
    kgon_obstruction,
    position_witness,
    rank_sweep_check,
    ray_count,
    unparalleled_monoid,
)
from tropmon.torification import (
    direct_sum,
    free_factor_split,
    free_monoid,
    groupification_rank,
    integralize,
    lattice_monoid,
    minimal_generator_count,
    saturate,
    toric_equal,
    torify,
    units_rank,
)
from tropmon.tropical_types import (
    AFFINE,
    TropicalType,
    orthant_presentation,
    tropical_monoid,
)

from corpus import enumerated, presentation_corpus, unparalleled_corpus, zero_slope_variants


@pytest.fixture
def report(capsys):
    """Print one verdict line for the running criterion."""
    def _report(number, ok, detail, elapsed, limit=None):
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        budget = f" < {limit:g}s" if limit is not None else ""
        with capsys.disabled():
            print(f"\ncriterion {number}: {status} {detail} [{elapsed:.2f}s{budget}]")
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {limit}s"
    return _report


MAIN = Presentation(("e0", "e1", "e2", "e3"), (
    Relation({"e0": 1, "e2": 1}, {"e1": 2}),
    Relation({"e1": 1, "e3": 1}, {"e2": 2}),
    Relation({"e0": 1, "e3": 1}, {"e1": 1, "e2": 1})))

MAIN_SANITIZED = Presentation(("e0", "e1", "e2", "e3", "f1", "f2"), (
    Relation({"e0": 1, "f2": 1}, {"e1": 2}),
    Relation({"f1": 1, "e3": 1}, {"e2": 2}),
    Relation({"e0": 1, "e3": 1}, {"e1": 1, "e2": 1}),
    Relation({"f1": 1}, {"e1": 1}),
    Relation({"f2": 1}, {"e2": 1})))

MAIN_SLOPES = {
    "e0": [1, 0, 1, 0, 0], "e3": [0, 1, 1, 0, 0], "f1": [0, 1, 0, 1, 0],
    "f2": [1, 0, 0, 0, 1], "e1": [2, 0, 1, 1, 0], "e2": [0, 2, 1, 0, 1]}


def test_criterion_1_main_construction(report):
    t = time.perf_counter()
    M = torify(MAIN)
    checks = {
        "rank 2": M.rank == 2,
        "4 Hilbert elements": len(M.hilbert) == 4,
        "cone((1,0),(1,3))": toric_equal(M, lattice_monoid([(1, 0), (1, 3)])),
    }
    S, B = sanitize(MAIN, copy_names={"e1": "f1", "e2": "f2"})
    checks["sanitized presentation"] = S == MAIN_SANITIZED
    checks["bipartition"] = B == Bipartition(("e0", "e3", "f1", "f2"), ("e1", "e2"))
    rep = construct_type(S, B)
    checks["six slopes"] = rep.slope_table() == MAIN_SLOPES
    checks["representable"] = rep.witness.satisfies(orthant_presentation(rep.type))
    checks["monoid"] = toric_equal(rep.monoid, M)
    failed = [k for k, v in checks.items() if not v]
    report(1, not failed, f"main construction pipeline; failed: {failed or 'none'}",
           time.perf_counter() - t, 1)


@lru_cache(maxsize=None)
def construction_corpus():
    out = []
    for P in presentation_corpus(500):
        S, B = sanitize(P)
        out.append((P, S, construct_type(S, B)))
    return out


def test_criterion_2_universality_sweep(report):
    t = time.perf_counter()
    failures = []
    corpus = construction_corpus()
    for k, (P, S, rep) in enumerate(corpus):
        # the echo is read off the type; equal generator names give the renaming
        if not toric_equal(rep.monoid, torify(P)):
            failures.append((k, "monoid"))
        elif rep.presentation_echo != S:
            failures.append((k, "echo"))
        elif not rep.witness.satisfies(orthant_presentation(rep.type)):
            failures.append((k, "witness"))
    sizes = {len(P.generators) for P, _, _ in corpus}
    ok = len(corpus) >= 500 and not failures and max(sizes) <= 5
    report(2, ok, f"{len(corpus)} random presentations, {len(failures)} failures {failures[:3]}",
           time.perf_counter() - t, 120)


def test_criterion_3_rank_two_cones(report):
    t = time.perf_counter()
    cones = failures = 0
    for m in range(1, 9):
        for k in range(1, m + 1):
            if gcd(k, m) != 1:
                continue
            cones += 1
            if not toric_equal(realize_rank2(k, m).monoid, lattice_monoid([(1, 0), (k, m)])):
                failures += 1
    triple = tuple(e.slope[0] for e in realize_rank2(1, 3).type.edges)
    ok = failures == 0 and triple == (2, 1, 3)
    report(3, ok, f"{cones} cones with m <= 8, {failures} failures, (1,3) slopes {triple}",
           time.perf_counter() - t, 10)


def test_criterion_4_rank_formula(report):
    t = time.perf_counter()
    counts = {}
    violations = []
    sampled = 0
    for nv in (1, 2, 3, 4):
        for k, tau in enumerate(enumerate_types(nv, 3, 2)):
            counts[nv] = k + 1
            w = position_witness(tau)
            bad = rank_sweep_check(tau, w)
            if bad:
                violations.append((nv, k, bad))
                continue
            # independent route on a subsample: full group rank and units
            if k % 1000 == 0:
                sampled += 1
                P = orthant_presentation(tau)
                if groupification_rank(P) != nv - 1 or units_rank(integralize(P)) != 0:
                    violations.append((nv, k, "subsample"))
    detail = (f"types by |V| {counts}, {sampled} cross-checked, "
              f"{len(violations)} violations {violations[:3]}")
    report(4, not violations, detail, time.perf_counter() - t, 300)


def test_criterion_5_expansive_splitting(report):
    t = time.perf_counter()
    checked = 0
    violations = []
    for tau in enumerated(3, 2, 2):
        for var in zero_slope_variants(tau):
            checked += 1
            red, k = expansive_reduce(var)
            if not toric_equal(tropical_monoid(var), direct_sum(tropical_monoid(red), free_monoid(k))):
                violations.append(var)
    report(5, checked > 0 and not violations,
           f"{checked} types with zero-slope edges, {len(violations)} violations",
           time.perf_counter() - t)


def test_criterion_6_unparalleled_bounds(report):
    t = time.perf_counter()
    corpus = unparalleled_corpus()
    violations = 0
    for tau in corpus:
        M = unparalleled_monoid(tau, position_witness(tau))
        if minimal_generator_count(M) > comb(len(tau.vertices), 2):
            violations += 1
        elif not toric_equal(saturate(M), tropical_monoid(tau)):
            violations += 1
    report(6, not violations, f"{len(corpus)} types, {violations} violations",
           time.perf_counter() - t)


HEPTAGON = [(0, 0), (1, 0), (2, 1), (2, 2), (1, 3), (0, 3), (-1, 1)]
HEXAGON = [(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]
SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_criterion_7_seven_gon(report):
    t = time.perf_counter()
    hept = kgon_obstruction(HEPTAGON)
    ok = (hept.verdict == INACCESSIBLE and hept.extremal_ray_count == 7
          and hept.generator_bound == 6 and hept.free_factor_count == 0)
    ok = ok and kgon_obstruction(SQUARE).verdict == INCONCLUSIVE
    ok = ok and kgon_obstruction(HEXAGON).verdict == INCONCLUSIVE
    cache = {}
    most = 0
    bad = 0
    for tau in enumerate_types(4, 3, 2):
        n = ray_count(tau, cache)
        most = max(most, n)
        if n >= 7 and free_factor_split(tropical_monoid(tau))[1] == 0:
            bad += 1
    ok = ok and bad == 0
    report(7, ok, f"heptagon {hept.verdict} ({hept.extremal_ray_count} > {hept.generator_bound}); "
                  f"|V|=4 search: max {most} extremal rays over {len(cache)} cones, {bad} counterexamples",
           time.perf_counter() - t, 300)


def brute_irreducibles(C, bound):
    # rays are in the positive orthant, so the coordinate sum is a grading
    pts = [p for p in itertools.product(range(bound + 1), repeat=C.rank)
           if 0 < sum(p) <= bound and cone_contains(C, p)]
    pset = set(pts)
    return sorted(p for p in pts
                  if not any(tuple(a - b for a, b in zip(p, q)) in pset for q in pts if q != p))


def test_criterion_8_kernel_oracles(report):
    t = time.perf_counter()
    rng = random.Random(20240611)
    cones = mismatches = 0
    while cones < 50:
        r = rng.choice([1, 2, 3, 3])
        rays = [tuple(rng.randint(0, 3) for _ in range(r)) for _ in range(rng.randint(r, r + 2))]
        C = ConeRep.from_rays(rays, r)
        if not C.rays or not is_pointed(C) or matrix_rank(C.rays, r) != r:
            continue
        cones += 1
        small = [h for h in hilbert_basis(C) if sum(h) <= 10]
        if small != brute_irreducibles(C, 10):
            mismatches += 1
    snf_bad = 0
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        M = IntMatrix.from_rows(rows, n)
        U, D, V = smith_normal_form(M)
        diag = [D[i, i] for i in range(min(m, n))]
        ok = (U @ M @ V == D and abs(U.det()) == 1 and abs(V.det()) == 1 and D.is_diagonal()
              and all(d >= 0 for d in diag)
              and all((a == 0 and b == 0) or (a and b % a == 0) for a, b in zip(diag, diag[1:])))
        snf_bad += not ok
    report(8, mismatches == 0 and snf_bad == 0,
           f"{cones} cones vs brute force ({mismatches} mismatches), 100 SNFs ({snf_bad} bad)",
           time.perf_counter() - t, 60)


def drop_cycle_edge(g):
    """An affine tree: remove one edge through the glued leaf."""
    e = next(e for e in g.edges if "v1" in (e.source, e.target))
    return TropicalType(g.n, g.vertices, tuple(x for x in g.edges if x is not e), (), AFFINE)


def test_criterion_9_affine_variant(report):
    t = time.perf_counter()
    violations = []
    corpus = construction_corpus()
    for k, (_, _, rep) in enumerate(corpus):
        g = affine_glue(rep)
        if g.mode != AFFINE or g.graph_genus() != 1:
            violations.append((k, "genus"))
        elif not toric_equal(tropical_monoid(g), rep.monoid):
            violations.append((k, "monoid"))
        tree = drop_cycle_edge(g)
        if tree.graph_genus() != 0 or not toric_equal(tropical_monoid(tree), free_monoid(len(tree.edges))):
            violations.append((k, "tree"))
    report(9, not violations, f"{len(corpus)} glued types and their trees, {len(violations)} violations "
                              f"{violations[:3]}", time.perf_counter() - t)

"""Exact computations with toric monoids and tropical types of maps to orthants."""

from .errors import *  # noqa: F401,F403
from .exact_linalg import (
    ConeRep,
    IntMatrix,
    cone_contains,
    extreme_rays,
    facet_normals,
    hilbert_basis,
    is_pointed,
    lattice_split,
    nonnegative_solution,
    smith_normal_form,
    strict_lp_feasible,
)
from .presentations import (
    Bipartition,
    Presentation,
    Relation,
    congruent_bounded,
    find_bipartition,
    is_bipartite,
    sanitize,
    torified_zero_generators,
)
from .torification import (
    FpMonoidImage,
    ToricMonoid,
    direct_sum,
    free_factor_split,
    free_monoid,
    integralize,
    is_sharp,
    lattice_monoid,
    minimal_generator_count,
    saturate,
    toric_equal,
    torify,
)
from .tropical_types import (
    DualWitness,
    Edge,
    Leg,
    TropicalType,
    Vertex,
    Violation,
    affine_presentation,
    is_monogenic,
    is_representable,
    monogenic_presentation,
    orthant_presentation,
    tropical_monoid,
    validate,
)
from .constructions import ConstructionReport, affine_glue, construct_type, realize_rank2
from .reductions import (
    ObstructionCertificate,
    check_rank_formula,
    expansive_reduce,
    kgon_obstruction,
    monogenize,
    search_types,
    unparalleled_monoid,
)

__version__ = "0.1.0"

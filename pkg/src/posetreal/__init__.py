"""Exact geometric realizations of finite posets, their subdivisions, and nerves of covers."""
from posetreal.errors import (
    BaseMismatch,
    DeltaNotGrid,
    DirectedCycle,
    InvalidMetric,
    LabelClash,
    NotCovered,
    NotInRealization,
    NotInjective,
    NotMonotone,
    NotStarRefinement,
    PosetError,
    PreconditionFailed,
    SizeBound,
    TooFar,
    ZeroLebesgue,
)
from posetreal.kernels import BACKEND
from posetreal.poset import (
    Adjoined,
    MonotoneMap,
    Poset,
    Preposet,
    Star,
    antichain,
    chain,
    codeleted_prejoin,
    cone,
    dual,
    dual_cone,
    hmc,
    inclusion_poset,
    is_atomic,
    is_conditionally_complete,
    join,
    mapping_cylinder,
    ordinal_sum,
    powerset_poset,
)
from posetreal.subdivision import Interval, barycentric, canonical, iterate_canonical
from posetreal.realization import (
    RPoint,
    coords,
    d3_upper,
    dist,
    dist_chain_formula,
    h_down,
    h_up,
    map_point,
)
from posetreal.covers import (
    Cover,
    FiniteMetric,
    bonding,
    cover_from_balls,
    ip,
    lebesgue,
    nerve,
    nerve_pou,
    star_refines,
    vd,
)
from posetreal.homology import Complex, z2_betti, z2_reduced_betti
from posetreal.approximation import (
    SampledMap,
    hahn_phi,
    lcu_pair,
    monotone_approx,
    nerve_tower,
)

__version__ = "0.1.0"

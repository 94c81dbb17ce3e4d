"""Exact computations for constant-slope piecewise-linear multimodal maps:
itineraries, bifurcation equations, exceptional isentropes and codimension-one
hyperbolic maps."""

from .algebra import (
    AlgebraicNumber,
    AlgValue,
    DyadicPoly,
    IntPoly,
    NotDivisible,
    RatFunc,
    divide_exact,
    isolate_real_roots,
    refine,
    sign_at,
)
from .bifurcation import (
    BIMODAL,
    BadItinerary,
    BifurcationEq,
    Chart,
    LinearFormOrbit,
    coefficient_structure_check,
    derive_bifurcation_eq,
    eq11_residual,
    interval_chart,
    symbolic_orbit,
    w_bound_check,
)
from .exceptional import (
    Codim1Report,
    ExceptionalRecord,
    FactorMismatch,
    SingularAtLambda,
    cascade_search,
    classify_turning_point,
    codim1_analyze,
    extract_factor,
    hyperbolic_approx_obstruction,
    nonrigidity_scan,
    renormalization_check,
)
from .itinerary import (
    CollidedTurningPoints,
    Itinerary,
    LengthMismatch,
    RealizationInterval,
    is_compatible,
    itinerary_of,
    realization_interval,
)
from .pwl import (
    AmbiguousBranch,
    BimodalMap,
    CombData,
    InfeasibleMap,
    MalformedSigma,
    OrbitPoint,
    PLMap,
    Symbol,
    entropy,
    evaluate,
    feasibility,
    orbit,
    turning_points,
    turning_values,
    validate_space,
)

__version__ = "0.1.0"

"""Cohomology rings of no-k-equal manifolds via k-forests, cup-lengths and TC_s bounds."""

from .forest import (
    ContractError,
    DegreeBasis,
    Forest,
    SignedForest,
    ValidationReport,
    build_forest,
    canonical_sign_form,
    degree,
    enumerate_all,
    enumerate_basic,
    is_basic,
    validate_forest,
)
from .invariants import (
    TcBoundsReport,
    WitnessCertificate,
    betti,
    conn_plus_one,
    cup_length,
    determination_predicates,
    elementary_generator,
    hdim,
    tc_bounds,
    zcl,
)
from .params import Parameters, ParameterError
from .ring import (
    CohomologyClass,
    FormalSum,
    Graph,
    Zero,
    ZeroReason,
    expand_relation_R,
    multiply,
    reduce_mod2,
    relation_space,
    straighten,
    superpose,
    unit,
)
from .serialize import ParseError, emit_class, parse_class

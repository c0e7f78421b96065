"""Exact MacLane chains, extensions of valuations and their ball geometry."""

from .balls import (
    BallData,
    BallStage,
    NoSolution,
    ball_chain,
    etendue,
    geometry,
    is_unique_extension,
    jump_set,
    mu_of_min_poly,
    root_distances,
    solve_ball,
    stage_ball_data,
)
from .basefield import BaseField, RatFunc
from .chain import (
    Chain,
    KeyViolation,
    ValueViolation,
    augment,
    eval_chain,
    gauss,
    invariants,
    is_key,
    lift_residual,
    residual_polynomial,
    same_valuation,
)
from .extend import (
    Branch,
    ExtensionReport,
    InvariantViolation,
    LimitDetected,
    StageBoundExceeded,
    approximant,
    extensions,
)
from .oracle import oracle_extension_count
from .parsing import ParseError, parse_poly, parse_scalar
from .pclab import (
    Fixed,
    IncreasingThroughHorizon,
    NonSimpleSeed,
    PCSequence,
    ValueProfile,
    classify,
    from_hensel,
    from_series,
    limit_degree,
    profile,
)
from .poly import NewtonPolygon, Poly, newton_polygon, phi_expansion, separable_decompose
from .values import INF, ValueGroup, group_index, value

__version__ = "0.1.0"

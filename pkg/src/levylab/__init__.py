"""Concentration of measure and almost-invariance experiments at desk scale.

The package computes exact concentration functions on finite
metric-measure spaces, deviation profiles on Hamming products, invariance
defects of finitely supported measures on word-metric groups, and runs the
amplification pipeline that pushes almost-invariant measures forward onto
the step-function model of measurable maps into a group.
"""

__version__ = "0.1.0"

from .amplify import (
    DefectResult,
    L0Measure,
    Schedule,
    ScheduleReport,
    ScheduleRow,
    TelescopeResult,
    l0_defect,
    l0_expectation,
    push_forward,
    run_schedule,
    telescoping_bound,
)
from .errors import (
    CarrierMismatch,
    DimensionMismatch,
    EmptyTuple,
    GridBlowup,
    InvalidElement,
    InvalidFunctionTable,
    InvalidMeasure,
    InvalidSchedule,
    InvalidSpace,
    LengthMismatch,
    LevyLabError,
    LipschitzViolation,
    NegativeEps,
    NonPositiveEps,
    OutOfRange,
    SpaceTooLarge,
    TooLargeForExact,
    WrongKind,
)
from .families import (
    BLFamily,
    GroupCarrier,
    L0Carrier,
    cell_window_family,
    compose_with_translation,
    disagreement_family,
    disagreement_member,
    eval_member,
    invariance_defect,
    pullback_family,
    pullback_member,
    splice,
    spot_check_lipschitz,
    wordlen_clamp_family,
)
from .hamming import (
    DiscreteBase,
    HammingProduct,
    ProfileResult,
    fraction_differing,
    hamming_distance,
    lipschitz_profile,
    product_space,
    sample_product,
    talagrand_bound,
)
from .mean_transfer import (
    MeanApprox,
    phi_equivariance_check,
    phi_eval,
    phi_member,
    transfer_defect,
)
from .mmspace import (
    FiniteMMSpace,
    alpha_profile,
    concentration_alpha_exact,
    deviation_mass,
    expectation,
    median,
    weighted_deviation_mass,
    weighted_median,
)
from .stepmaps import (
    PiecewiseMap,
    StepMap,
    as_piecewise,
    disagreement,
    grid_approximate,
    h_embed,
    identity_map,
    in_neighborhood,
    pointwise_translate,
    step_op,
)
from .wordgroups import (
    CyclicGroup,
    FinSuppMeasure,
    FreeGroup2,
    WordGroup,
    ZdGroup,
    ball_uniform,
    folner_measure,
    make_group,
    translate_measure,
    translation_defect,
)

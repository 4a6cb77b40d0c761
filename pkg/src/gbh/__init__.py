"""Weighted step-up FDR procedures for one- and two-way classified hypotheses."""

from .core import (
    Layout,
    OneWayLayout,
    ProportionTable,
    PValueSet,
    RejectionSet,
    TruthMask,
    TwoWayCellsLayout,
    TwoWayOnePerCellLayout,
    WeightAssignment,
    fdp,
    make_pvalue_set,
    null_proportions,
    power,
)
from .errors import (
    BadAlpha,
    BadLambda,
    EmptyGroup,
    GbhError,
    LayoutMismatch,
    LengthMismatch,
    OutOfRange,
    UnequalCells,
    VariantMismatch,
)
from .simgen import (
    OneWaySimConfig,
    SimSummary,
    TwoWaySimConfig,
    expected_pi0,
    gen_oneway,
    gen_twoway,
    run_replications,
)
from .stepup import StepUpConfig, plain_bh, stepup_reference, weighted_bh, weighted_pvalues
from .weights_adaptive import (
    AdaptiveGBH,
    AdaptiveVariant,
    CountTable,
    LslGBH,
    NaiveAdaptiveBH,
    OracleGBH,
    PlainBH,
    ProcedureSpec,
    TstGBH,
    adaptive_weights,
    lsl_pi0,
    oneway_adaptive_weights,
    run_procedure,
    storey_pi0,
    threshold_counts,
    tst_pi0,
    twoway_cells_adaptive_weights,
    twoway_oneper_adaptive_weights,
)
from .weights_oracle import (
    OracleVariant,
    oneway_oracle_weights,
    oracle_weights,
    twoway_cells_oracle_weights,
    twoway_oneper_oracle_weights,
    verify_weight_identity,
)

__version__ = "0.1.0"

"""Exact model checking, probability analysis, and runtime monitoring for
frequency formulas over finite event series."""

from .analysis import (
    CompatibilityVerdict,
    check_compatibility,
    completion_probability,
    completion_probability_weighted,
    frequency_lcd,
    joint_frequency_exists,
    next_outcome_distribution,
    observed_frequency,
    realization_points,
    realization_points_by_peak,
    step_probability_update,
)
from .core import (
    BadProbability,
    FormulaError,
    FreqLogicError,
    FrequencySpec,
    IncompatiblePrefix,
    Model,
    ModelFileError,
    NextBeyondHorizon,
    NonIntegralCount,
    NonPropositional,
    NonUnitMass,
    SeriesComplete,
    SeriesIncomplete,
    SpecError,
    UnknownAtom,
    UnknownLaw,
    WorldBeyondObservation,
    as_probability,
    count_admissible,
    extends,
    iter_admissible,
    load_model,
    load_model_file,
    outcome_counts,
    parse_probability,
    validate_spec,
)
from .formula import (
    And,
    Atom,
    BlackBox,
    Circle,
    Comparator,
    Formula,
    Next,
    Not,
    Or,
    Star,
    WhiteBox,
    atoms_of,
    expand_indexed_next,
    is_propositional,
    parse,
    render,
)
from .laws import (
    LawReport,
    check_all_laws,
    check_law,
    formula_family,
    list_laws,
    next_horizon,
    pinned_model,
    random_models,
)
from .monitor import (
    Monitor,
    MonitorConfig,
    StepReport,
    SummaryReport,
    load_trace,
)
from .semantics import (
    OBSERVED,
    Engine,
    EvalContext,
    Evaluator,
    Member,
    compare_measure,
    count_compatible,
    evaluate,
    explain,
    max_index,
    next_value_atomic,
    star_measure,
)

__version__ = "0.1.0"

"""Numerics for the archetypal functional equation y(x) = E y(alpha (x - beta))."""

from ._archetypal import (
    AffineFit,
    AlternationReport,
    AlternationRow,
    ApplyResult,
    Atom,
    CanonicalCdf,
    CdfDiagnostics,
    CheckReport,
    DegenerateError,
    EmpiricalCdf,
    Error,
    GridFunction,
    IterateRecord,
    IterateResult,
    Marginal,
    MartingaleReport,
    MeasureSpec,
    MomentError,
    NotApplicableError,
    NotASolutionError,
    Path,
    RegimeError,
    RngStream,
    SeriesConfig,
    SeriesDraw,
    SpecError,
    SpectrumGrid,
    Step,
    StoppedRun,
    WaldReport,
    alternation_probe,
    apply_derivative_operator,
    apply_operator,
    apply_operator_with_stats,
    beta_charfn,
    canonical_cdf,
    charfn,
    check_affine_uniqueness,
    check_canonical,
    check_limit_equality,
    check_max_principle,
    check_subcritical_collapse,
    classify,
    default_s_values,
    fourier_iterate,
    iterate_operator,
    martingale_check,
    operator_residual,
    preset,
    preset_names,
    reversed_series_support_bound,
    reversed_tail_sum,
    run_suite,
    sample_pairs,
    sample_upsilon_batch,
    sample_upsilon_reversed_batch,
    series_support_bound,
    simulate,
    stopping_time_negative,
    suite_names,
    validate,
    wald_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

"""Taylor coefficients of a zero of 1 + b z^beta + sum_i a_i z^{gamma_i}, with exact oracles."""

from .combinatorics import MultiIndex, OrderedMultiset, multiset_partitions, set_partitions, stirling1, stirling2
from .derivations import D, Derivation, PolyT, TruncSeriesT, big_C, big_F
from .gkz import GkzConfig, XCoefficient, recovery_formula_coeff, recovery_vs_main, x_series_coeff
from .report import Check, Report
from .roots import (
    AlphaBranch,
    AlphaMonomial,
    ProblemSpec,
    SeriesTable,
    alpha_branch,
    coeff_closed,
    coeff_recursive,
    formula_forms_agree,
    residual_check,
    taylor_table,
)
from .scalars import UniPoly, XiElement

__all__ = [
    "AlphaBranch", "AlphaMonomial", "Check", "D", "Derivation", "GkzConfig", "MultiIndex",
    "OrderedMultiset", "PolyT", "ProblemSpec", "Report", "RootSeriesRegressor", "SeriesTable",
    "TruncSeriesT", "UniPoly", "XCoefficient", "XiElement", "alpha_branch", "big_C", "big_F",
    "coeff_closed", "coeff_recursive", "formula_forms_agree", "multiset_partitions",
    "recovery_formula_coeff", "recovery_vs_main", "residual_check", "set_partitions",
    "stirling1", "stirling2", "taylor_table", "x_series_coeff",
]
__version__ = "0.1.0"


def __getattr__(name):
    # scikit-learn is slow to import; load the estimator only when asked for
    if name == "RootSeriesRegressor":
        from .estimator import RootSeriesRegressor
        return RootSeriesRegressor
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

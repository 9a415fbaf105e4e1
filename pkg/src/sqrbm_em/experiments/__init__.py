"""Paired multi-run comparisons of the optimisers, with tables and learning curves."""

from .harness import ExperimentResult, VariantSummary, run_experiment
from .plan import (
    ExperimentPlan,
    PlanSuite,
    Shape,
    load_plans,
    parse_plans,
    plans_to_dict,
    preset_plans,
)
from .report import (
    CURVE_COLUMNS,
    RESULT_FILES,
    TABLE_COLUMNS,
    ComparisonTable,
    compare_table,
    emit_curves,
    load_results,
    write_curves_csv,
    write_results_dir,
)

__all__ = [
    "CURVE_COLUMNS",
    "RESULT_FILES",
    "TABLE_COLUMNS",
    "ComparisonTable",
    "ExperimentPlan",
    "ExperimentResult",
    "PlanSuite",
    "Shape",
    "VariantSummary",
    "compare_table",
    "emit_curves",
    "load_plans",
    "load_results",
    "parse_plans",
    "plans_to_dict",
    "preset_plans",
    "run_experiment",
    "write_curves_csv",
    "write_results_dir",
]

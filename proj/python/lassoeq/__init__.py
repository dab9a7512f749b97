"""Equivalent Lasso solutions."""

from ._core import (
    Category,
    Dataset,
    Error,
    InputError,
    Metric,
    NumericalError,
    Task,
    categorize_variables,
    coefficient_of_variation,
    dev_bound,
    enumerate_relaxed,
    enumerate_strong,
    fit,
    fit_reference,
    jaccard,
    kkt_check,
    lambda_max,
    load_csv,
    rmse_bound,
    signature_report,
    solution_specific_count,
    standardize,
    thin_svd,
)

__all__ = [
    "Category",
    "Dataset",
    "Error",
    "InputError",
    "Metric",
    "NumericalError",
    "Task",
    "categorize_variables",
    "coefficient_of_variation",
    "dev_bound",
    "enumerate_relaxed",
    "enumerate_strong",
    "fit",
    "fit_reference",
    "jaccard",
    "kkt_check",
    "lambda_max",
    "load_csv",
    "rmse_bound",
    "signature_report",
    "solution_specific_count",
    "standardize",
    "thin_svd",
]

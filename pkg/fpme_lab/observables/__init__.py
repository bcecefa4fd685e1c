from fpme_lab.observables.dynkin import (
    MartingaleEstimate,
    extra_term,
    generator_term,
    generator_term_direct,
    martingale_estimate,
    martingale_path,
    pair_with_test_function_dt,
    principal_term,
    quadratic_variation_bound,
)
from fpme_lab.observables.empirical import (
    SERIES_COLUMNS,
    EmpiricalSeries,
    box_average,
    box_averages,
    default_box_fraction,
    density_profile,
    pair_with_test_function,
    pairing_series,
    write_series_csv,
)

__all__ = [
    "SERIES_COLUMNS",
    "EmpiricalSeries",
    "pair_with_test_function",
    "pair_with_test_function_dt",
    "pairing_series",
    "write_series_csv",
    "box_average",
    "box_averages",
    "default_box_fraction",
    "density_profile",
    "generator_term",
    "generator_term_direct",
    "principal_term",
    "extra_term",
    "MartingaleEstimate",
    "martingale_path",
    "martingale_estimate",
    "quadratic_variation_bound",
]

"""Synthetic robustness benchmarks"""

from .suites import (
    BENCH_SUITES,
    CSV_COLUMNS,
    PN_COLUMNS,
    SweepPoint,
    evaluate_point,
    pn_curve_rows,
    rows_to_csv,
    run_bench,
    run_suite,
    suite_points,
)

__all__ = [
    'BENCH_SUITES',
    'CSV_COLUMNS',
    'PN_COLUMNS',
    'SweepPoint',
    'evaluate_point',
    'pn_curve_rows',
    'rows_to_csv',
    'run_bench',
    'run_suite',
    'suite_points',
]

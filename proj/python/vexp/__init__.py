"""Exponentiation through precomputed node tables.

Values cross the boundary as canonical text encodings: decimal residues for
prime fields, "num/den" for rationals, "re,im" for complex.
"""

from ._core import (
    Table,
    VexpError,
    binomial_form,
    build_table,
    cost_report,
    load_table,
    partial_fraction,
    pow_oracle,
    product_form,
    roots_form,
    run_suite,
)

__all__ = [
    "Table",
    "VexpError",
    "binomial_form",
    "build_table",
    "cost_report",
    "load_table",
    "partial_fraction",
    "pow_oracle",
    "product_form",
    "roots_form",
    "run_suite",
]

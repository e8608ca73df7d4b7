"""Finite-Q arc sums, the limiting integral over T, and the Monte Carlo oracle."""

from .finite import (
    LAMBDA_DENOMINATOR,
    TEST_FUNCTIONS,
    ArcContribution,
    arc_contribution,
    edge_arcs,
    empirical_gk,
    empirical_gk_grid,
    lemma2_discrepancy,
    quantize_lambda,
)
from .intervals import (
    SYMBOLS,
    UnitInterval1D,
    WordTable,
    all_words,
    chi_interval,
    gap_word_frequency,
    in_triangle,
    word_intervals,
    word_term,
)
from .montecarlo import MonteCarloResult, monte_carlo_gk
from .quadrature import QuadratureError, QuadratureResult, integrate_T, quadrature_gk

__all__ = [
    "LAMBDA_DENOMINATOR",
    "TEST_FUNCTIONS",
    "ArcContribution",
    "arc_contribution",
    "edge_arcs",
    "empirical_gk",
    "empirical_gk_grid",
    "lemma2_discrepancy",
    "quantize_lambda",
    "SYMBOLS",
    "UnitInterval1D",
    "WordTable",
    "all_words",
    "chi_interval",
    "gap_word_frequency",
    "in_triangle",
    "word_intervals",
    "word_term",
    "MonteCarloResult",
    "monte_carlo_gk",
    "QuadratureError",
    "QuadratureResult",
    "integrate_T",
    "quadrature_gk",
]

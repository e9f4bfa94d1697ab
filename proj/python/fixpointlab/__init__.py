"""Numerical laboratory for multi-step fixed-point iteration experiments.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports it and adds :class:`fractions.Fraction` conveniences for the
exact-arithmetic surface, whose values cross the boundary as canonical
``num/den`` strings.
"""

from fractions import Fraction

from ._core import (
    CheckReport,
    ConfigError,
    DivergenceError,
    FixedPointPrecondition,
    KSequence,
    NormTag,
    Operator,
    PowerOverflow,
    Psi,
    SampleGen,
    Schedule,
    Violation,
    apply,
    assert_unique_fixed_point,
    check_asymptotic_pseudocontractivity,
    check_star_condition,
    check_uniform_lipschitz,
    classify_hypotheses,
    classify_json,
    corrected_demo,
    dn_bound_check_csv,
    doubling_power,
    duality_map,
    duality_pairing,
    epsilon_threshold,
    estimate_power_lipschitz,
    example_sequences,
    gap,
    iterate_json,
    lerp,
    norm,
    power_apply,
    scaling_power,
    step_json,
    verify_note_claims,
)

__all__ = [
    "CheckReport",
    "ConfigError",
    "DivergenceError",
    "FixedPointPrecondition",
    "KSequence",
    "NormTag",
    "Operator",
    "PowerOverflow",
    "Psi",
    "SampleGen",
    "Schedule",
    "Violation",
    "apply",
    "assert_unique_fixed_point",
    "check_asymptotic_pseudocontractivity",
    "check_star_condition",
    "check_uniform_lipschitz",
    "classify_hypotheses",
    "classify_json",
    "corrected_demo",
    "corrected_demo_fractions",
    "dn_bound_check_csv",
    "doubling_power",
    "duality_map",
    "duality_pairing",
    "epsilon_threshold",
    "estimate_power_lipschitz",
    "example_fractions",
    "example_sequences",
    "gap",
    "gap_fraction",
    "iterate_json",
    "lerp",
    "norm",
    "power_apply",
    "scaling_power",
    "step_json",
    "verify_note_claims",
]


def gap_fraction(n: int) -> Fraction:
    """``|T^n y_n - T^n x_{n+1}|`` for the doubling map, as an exact Fraction."""
    return Fraction(gap(n))


def example_fractions(n: int) -> tuple[Fraction, Fraction]:
    """The pair ``(y_n, x_{n+1}) = (1 + 1/n, 1 - 1/n)`` as exact Fractions."""
    aux, principal = example_sequences(n)
    return Fraction(aux), Fraction(principal)


def corrected_demo_fractions(
    contraction: str = "1/2",
    n_max: int = 64,
    diag_scale: str = "1",
    lipschitz: str = "1",
) -> dict:
    """:func:`corrected_demo` with the ``dn`` column parsed into Fractions."""
    demo = corrected_demo(contraction, n_max, diag_scale, lipschitz)
    demo["dn"] = [Fraction(s) for s in demo["dn"]]
    return demo

"""Quantitative stability guarantees, checked as measured-vs-bound ratios.

Each runner in _propsuite returns worst-case ratios of a measured quantity
to its claimed bound over randomized instances; every ratio must stay at
or below one.
"""

from _propsuite import (
    operator_lipschitz_ratios,
    projector_continuity_ratios,
    residual_gap_ratios,
)

TOL = 1.0 + 1e-9


def test_operators_are_lipschitz_in_mixture_weights():
    sigma_ratio, llam_ratio = operator_lipschitz_ratios()
    assert sigma_ratio <= TOL, f"Sigma ratio {sigma_ratio}"
    assert llam_ratio <= TOL, f"L ratio {llam_ratio}"


def test_spectral_projectors_are_continuous_in_weights():
    ratios, min_gap = projector_continuity_ratios()
    assert min_gap > 0.0
    for name, value in ratios.items():
        assert value <= TOL, f"{name} ratio {value}"


def test_generator_residual_bounds_eigenfunction_distance():
    worst = residual_gap_ratios()
    assert worst <= TOL, f"residual ratio {worst}"

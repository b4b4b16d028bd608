"""Center-manifold reduction: branch coefficients and transition classes."""

from __future__ import annotations

import numpy as np
import pytest

from mtphase import (
    ModelParams,
    OutOfTheory,
    ParameterRay,
    TransitionType,
    classify_transition,
    find_threshold,
    laplacian_eigenvalue,
    predicted_state,
    principal_mode_vectors,
    quadratic_coefficient,
    transition_number,
    transition_number_simplified,
)


@pytest.fixture(scope="module")
def jump_threshold():
    base = ModelParams(
        k1=4.9669, k3=0.4280, k5=6.4185, k7=0.4256, C1=4.3293, E=0.9599,
        d1=1.7390, d2=1.4256, d3=0.3804, ell=4.828, bc="neumann-zero-average",
    )
    ray = ParameterRay(
        base=base,
        direction={"d1": base.d1, "d2": base.d2, "d3": base.d3},
        bracket=(0.5, 2.0),
    )
    return find_threshold(ray, attach_report=False)


def test_canonical_transition_is_mixed(canonical_threshold):
    report = classify_transition(canonical_threshold)
    assert report.transition_type is TransitionType.TRANSCRITICAL_MIXED
    assert report.bc == "dirichlet"
    assert report.quadratic_coeff == pytest.approx(-0.0746634837, abs=1e-9)
    assert report.quadratic_coeff_quadrature == pytest.approx(
        report.quadratic_coeff, rel=1e-12
    )


def test_canonical_eigenvector_components(canonical_threshold):
    omega, omega_star, rho1 = principal_mode_vectors(canonical_threshold.lambda0)
    assert rho1 == pytest.approx(1.0, abs=1e-14)
    scaled = omega / omega[0]
    assert scaled[1] == pytest.approx(2.17008649, abs=1e-7)
    assert scaled[2] == pytest.approx(0.53918887, abs=1e-7)
    scaled_star = omega_star / (omega_star[2] / scaled[2])
    assert scaled_star[0] == pytest.approx(0.82991351, abs=1e-7)
    assert scaled_star[1] == pytest.approx(1.17008649, abs=1e-7)


def test_quadratic_coefficient_quadrature_node_invariance(canonical_threshold):
    a = quadratic_coefficient(canonical_threshold, n_nodes=32)
    b = quadratic_coefficient(canonical_threshold, n_nodes=128)
    assert a.quadrature == pytest.approx(b.quadrature, rel=1e-12)


def test_transcritical_branch_amplitudes(canonical_threshold):
    report = classify_transition(canonical_threshold)
    (y,) = report.branch_amplitudes(0.01)
    assert y == pytest.approx(-0.01 / report.quadratic_coeff, rel=1e-12)


def test_jump_point_is_type_two(jump_threshold):
    report = classify_transition(jump_threshold)
    assert report.transition_type is TransitionType.TYPE_II
    assert report.transition_number == pytest.approx(0.602248, abs=1e-4)
    # Below threshold a repelling pair exists; above it none.
    lo = report.branch_amplitudes(-0.02)
    assert len(lo) == 2
    assert lo[0] == pytest.approx(-lo[1], rel=1e-12)
    assert lo[0] == pytest.approx(np.sqrt(0.02 / report.transition_number), rel=1e-12)
    assert report.branch_amplitudes(0.02) == ()


def test_simplified_transition_number_requires_unit_rates(jump_threshold):
    with pytest.raises(OutOfTheory):
        transition_number_simplified(jump_threshold)


def test_simplified_matches_general_on_constrained_point():
    k3, k5, k7 = 0.9, 1.4, 1.7
    d1, d2, d3 = 0.32, 0.21, 0.55
    ell = 4.1
    rho1 = laplacian_eigenvalue(1, ell)
    C1 = k3 * (k5 + rho1 * d2) / k7
    p = ModelParams(
        k1=1.0, k3=k3, k5=k5, k7=k7, C1=C1, E=1.0,
        d1=d1, d2=d2, d3=d3, ell=ell, bc="neumann-zero-average",
    )
    general = transition_number(p)
    simplified = transition_number_simplified(p)
    assert simplified == pytest.approx(general, rel=1e-12)


def test_transition_number_accepts_params_and_threshold(jump_threshold):
    via_point = transition_number(jump_threshold)
    via_params = transition_number(jump_threshold.lambda0)
    assert via_params == pytest.approx(via_point, rel=1e-12)


def test_predicted_state_profiles(canonical_threshold):
    report = classify_transition(canonical_threshold)
    p_near = canonical_threshold.lambda0.replace(
        d1=0.99 * canonical_threshold.lambda0.d1,
        d2=0.99 * canonical_threshold.lambda0.d2,
        d3=0.99 * canonical_threshold.lambda0.d3,
    )
    x = np.linspace(0.0, p_near.ell, 41)
    state = predicted_state(report, p_near, x)
    assert state.fields.shape == (len(state.amplitudes), 3, len(x))
    assert state.sigma11 > 0.0
    # Dirichlet profiles vanish at both ends.
    assert np.abs(state.fields[:, :, 0]).max() <= 1e-12
    assert np.abs(state.fields[:, :, -1]).max() <= 1e-12

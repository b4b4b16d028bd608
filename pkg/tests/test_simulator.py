"""Grid, discrete Laplacian, IMEX stepper, and amplitude-fit checks."""

from __future__ import annotations

import numpy as np
import pytest

from mtphase import (
    AmplitudeSeries,
    GridTooCoarse,
    ModelParams,
    StepUnstable,
    Stepper,
    amplitude,
    dt_max,
    fit_amplitude_dynamics,
    initial_state,
    laplacian_apply,
    laplacian_mode,
    linearization_matrix,
    make_grid,
    mode_spectra,
    principal_mode_vectors,
    quadratic_nonlinearity,
    simulate,
)


@pytest.fixture(scope="module")
def unstable_params():
    # d = 0.12 < d* = 0.17009: principal mode grows.
    return ModelParams(
        k1=1.0, k3=1.0, k5=1.0, k7=2.0, C1=1.0, E=1.0,
        d1=0.12, d2=0.12, d3=0.12, ell=float(np.pi),
    )


def test_grid_spacing_and_nodes(canonical_params):
    p = canonical_params
    g = make_grid(p, 20)
    assert g.dx == pytest.approx(p.ell / 21)
    assert g.x[0] == pytest.approx(g.dx) and g.x[-1] == pytest.approx(p.ell - g.dx)
    q = p.replace(bc="neumann-zero-average")
    gq = make_grid(q, 20)
    assert gq.dx == pytest.approx(p.ell / 20)
    assert gq.x[0] == pytest.approx(gq.dx / 2)
    assert gq.x[-1] == pytest.approx(p.ell - gq.dx / 2)


def test_grid_too_coarse(canonical_params):
    with pytest.raises(GridTooCoarse):
        make_grid(canonical_params, 8)


def test_discrete_laplacian_eigenvectors_exact(canonical_params):
    # sin/cos mode samples are exact eigenvectors of the 3-point stencil
    # with the respective boundary closure; this pins both the interior
    # stencil and the boundary handling.
    N = 40
    for bc in ("dirichlet", "neumann-zero-average"):
        p = canonical_params.replace(ell=2.7, bc=bc)
        g = make_grid(p, N)
        for m in (1, 3, 7):
            if bc == "dirichlet":
                v = np.sin(m * np.pi * g.x / p.ell)
                lam = -2.0 * (1.0 - np.cos(m * np.pi / (N + 1))) / g.dx**2
            else:
                v = np.cos(m * np.pi * g.x / p.ell)
                lam = -2.0 * (1.0 - np.cos(m * np.pi / N)) / g.dx**2
            out = laplacian_apply(g, np.stack([v, v, v]))
            assert np.abs(out - lam * v).max() <= 1e-10


def test_dt_max_respects_both_limits(unstable_params):
    p = unstable_params
    g = make_grid(p, 64)
    limit_diff = 2.5 * g.dx**2 / max(p.d1, p.d2, p.d3)
    limit_reac = 0.1 / np.abs(linearization_matrix(p)).sum(axis=1).max()
    assert dt_max(p, g) == pytest.approx(min(limit_diff, limit_reac))


def test_aligned_initial_state_amplitude(unstable_params):
    g = make_grid(unstable_params, 48)
    st = initial_state(unstable_params, g, kind="aligned", amplitude=0.037)
    assert amplitude(unstable_params, g, st.u) == pytest.approx(0.037, rel=1e-12)
    zero = initial_state(unstable_params, g, kind="zero")
    assert np.all(zero.u == 0.0)


def test_random_initial_state_is_seeded(unstable_params):
    g = make_grid(unstable_params, 32)
    a = initial_state(unstable_params, g, kind="random", amplitude=1e-3, seed=9)
    b = initial_state(unstable_params, g, kind="random", amplitude=1e-3, seed=9)
    c = initial_state(unstable_params, g, kind="random", amplitude=1e-3, seed=10)
    assert np.array_equal(a.u, b.u)
    assert not np.array_equal(a.u, c.u)


def test_neumann_zero_average_preserved():
    p = ModelParams(
        k1=1.0, k3=1.0, k5=1.0, k7=2.0, C1=1.0, E=1.0,
        d1=0.3, d2=0.3, d3=0.3, ell=4.0, bc="neumann-zero-average",
    )
    g = make_grid(p, 48)
    st = initial_state(p, g, kind="random", amplitude=1e-2, seed=1)
    assert np.abs(st.u.mean(axis=1)).max() <= 1e-15
    stepper = Stepper(p, g, dt=0.5 * dt_max(p, g))
    u = st.u
    for _ in range(200):
        u = stepper.step_array(u)
    assert np.abs(u.mean(axis=1)).max() <= 1e-12


def test_linear_decay_rate_matches_principal_eigenvalue(canonical_params):
    # Stable side (d = 0.5): a state aligned with the true principal
    # eigenvector decays like exp(sigma11 t) under the linearized stepper;
    # Crank-Nicolson reproduces the rate to O(dt^2) and the grid adds an
    # O(dx^2) correction.
    p = canonical_params.replace(d1=0.5, d2=0.5, d3=0.5)
    ms = mode_spectra(p, 1)[0]
    sigma = ms.sigma[0].real
    omega = ms.omega[0].real
    omega_star = ms.omega_star[0].real
    g = make_grid(p, 256)
    stepper = Stepper(p, g, dt=1e-3, linear_only=True)
    e1 = laplacian_mode(p, 1).evaluate(g.x)
    den = float(e1 @ e1) * float(omega @ omega_star)
    u = 1e-3 * omega[:, None] * e1[None, :]
    y0 = float(e1 @ (omega_star @ u)) / den
    n = 2000
    for _ in range(n):
        u = stepper.step_array(u)
    y1 = float(e1 @ (omega_star @ u)) / den
    measured = np.log(y1 / y0) / (n * 1e-3)
    assert measured == pytest.approx(sigma, rel=5e-4)


def test_step_unstable_raised_with_last_state(unstable_params):
    g = make_grid(unstable_params, 32)
    st = initial_state(unstable_params, g, kind="aligned", amplitude=1e6)
    with pytest.raises(StepUnstable) as excinfo:
        simulate(unstable_params, g, st, t_end=50.0, dt=dt_max(unstable_params, g))
    assert excinfo.value.last_state is not None
    assert np.all(np.isfinite(excinfo.value.last_state.u))


def test_chunked_restart_reproduces_single_run(unstable_params):
    p = unstable_params
    g = make_grid(p, 48)
    ic = initial_state(p, g, kind="random", amplitude=1e-4, seed=4)
    dt = 0.01
    straight = simulate(p, g, ic, t_end=3.0, dt=dt, record_every=25)
    first = simulate(p, g, ic, t_end=1.5, dt=dt, record_every=25)
    resumed = simulate(p, g, first.final_state, t_end=3.0, dt=dt, record_every=25)
    assert resumed.final_state.t == pytest.approx(straight.final_state.t, abs=1e-12)
    assert np.allclose(resumed.final_state.u, straight.final_state.u, rtol=0, atol=1e-15)


def test_imex_fixed_points_are_semi_discrete_steady_states(unstable_params):
    # Solve the semi-discrete steady problem by Newton, then check the
    # stepper leaves it invariant: saturated amplitudes carry no time error.
    p = unstable_params
    N = 24
    g = make_grid(p, N)
    A = linearization_matrix(p)
    d = np.array([p.d1, p.d2, p.d3])
    omega, _, _ = principal_mode_vectors(p)
    e1 = laplacian_mode(p, 1).evaluate(g.x)
    u = 0.3 * omega[:, None] * e1[None, :]

    def rhs(v):
        return d[:, None] * laplacian_apply(g, v) + A @ v + quadratic_nonlinearity(p, v)

    n = 3 * N
    for _ in range(40):
        r = rhs(u)
        J = np.empty((n, n))
        flat = u.reshape(-1)
        for j in range(n):
            bumped = flat.copy()
            bumped[j] += 1e-7
            J[:, j] = (rhs(bumped.reshape(3, N)) - r).reshape(-1) / 1e-7
        du = np.linalg.solve(J, -r.reshape(-1))
        u = u + du.reshape(3, N)
        if np.abs(du).max() < 1e-13:
            break
    assert np.abs(rhs(u)).max() <= 1e-11

    stepper = Stepper(p, g, dt=dt_max(p, g))
    u_next = stepper.step_array(u)
    assert np.abs(u_next - u).max() <= 1e-11 * max(1.0, np.abs(u).max())


def test_simulation_saturates_to_positive_branch(unstable_params):
    p = unstable_params
    g = make_grid(p, 64)
    ic = initial_state(p, g, kind="aligned", amplitude=0.01)
    result = simulate(
        p, g, ic, t_end=3000.0, dt=dt_max(p, g), record_every=50,
        stop_on_saturation=True, saturation_tol=1e-6,
    )
    assert result.saturated
    assert result.series.y[-1] > 0.1  # far above the linear regime
    assert result.final_state.t <= 3000.0


def test_fit_amplitude_dynamics_recovers_synthetic_quadratic():
    # dy/dt = sigma y + a y^2 has closed-form solution
    # y(t) = sigma y0 e^{sigma t} / (sigma + a y0 (1 - e^{sigma t})).
    sigma_true, a_true, y0 = 0.08, -0.3, 1e-3
    t = np.linspace(0.0, 60.0, 400)
    e = np.exp(sigma_true * t)
    y = sigma_true * y0 * e / (sigma_true + a_true * y0 * (1.0 - e))
    fit = fit_amplitude_dynamics(
        AmplitudeSeries(times=t, y=y), nonlinearity="quadratic"
    )
    assert not fit.poor_fit
    assert fit.sigma == pytest.approx(sigma_true, rel=1e-3)
    assert fit.coefficient == pytest.approx(a_true, rel=2e-2)


def test_simulate_records_final_time(unstable_params):
    p = unstable_params
    g = make_grid(p, 32)
    ic = initial_state(p, g, kind="zero")
    result = simulate(p, g, ic, t_end=1.0, dt=0.03, record_every=7)
    # 34 steps of 0.03 cover 1.0 (ceil), final time is recorded exactly once.
    assert result.steps == 34
    assert result.series.times[-1] == pytest.approx(34 * 0.03, rel=1e-12)
    assert result.series.y.shape == result.series.times.shape

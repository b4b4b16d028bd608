"""Method-of-lines integration of the deviation-form system on a 1D grid.

The simulator is the independent oracle for everything the linear and
weakly-nonlinear analyses predict: growth rates, saturated branch
amplitudes, and jump behavior.  Fields are deviations from the uniform
steady state, so both boundary-condition variants are homogeneous.  Time
stepping is IMEX: diffusion implicit (Crank-Nicolson, prefactored
tridiagonal Cholesky solves per component) and reaction explicit
(second-order Heun with a diffusion-consistent predictor).  Fixed points of
the scheme are exact steady states of the semi-discrete system, so
saturated amplitudes carry spatial discretization error only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .errors import GridTooCoarse, InsufficientData, StepUnstable
from .model import (
    BoundaryCondition,
    ModelParams,
    linearization_matrix,
    quadratic_nonlinearity,
    steady_state,
)
from .spectral import laplacian_mode
from .transition import principal_mode_vectors

__all__ = [
    "Grid",
    "FieldState",
    "AmplitudeSeries",
    "SimulationResult",
    "AmplitudeFit",
    "MIN_GRID_POINTS",
    "make_grid",
    "laplacian_apply",
    "dt_max",
    "initial_state",
    "Stepper",
    "amplitude",
    "simulate",
    "fit_amplitude_dynamics",
]

MIN_GRID_POINTS = 16
#: zero-mean projection keeps |mean(u_i)| at or below this at recorded times
MEAN_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform 1D grid on (0, ell).

    Dirichlet uses ``N`` interior nodes with spacing ``ell/(N+1)`` (the
    boundary values of the deviation fields are identically zero and not
    stored).  Neumann uses ``N`` cell centers with spacing ``ell/N`` and
    mirrored ghost cells.
    """

    N: int
    ell: float
    bc: BoundaryCondition
    dx: float
    x: np.ndarray


def make_grid(p: ModelParams, N: int) -> Grid:
    """Build the grid matching the parameters' domain and boundary condition.

    Raises
    ------
    GridTooCoarse
        If ``N`` is below ``MIN_GRID_POINTS``.
    """
    if N < MIN_GRID_POINTS:
        raise GridTooCoarse(
            f"N = {N} grid points requested; minimum is {MIN_GRID_POINTS}"
        )
    if p.bc is BoundaryCondition.DIRICHLET:
        dx = p.ell / (N + 1)
        x = dx * np.arange(1, N + 1)
    else:
        dx = p.ell / N
        x = dx * (np.arange(N) + 0.5)
    return Grid(N=N, ell=p.ell, bc=p.bc, dx=dx, x=x)


def laplacian_apply(grid: Grid, u: np.ndarray) -> np.ndarray:
    """Second-order discrete Laplacian of field rows ``u[..., :]``.

    Dirichlet: zero values beyond the boundary; Neumann: mirrored ghosts
    (zero flux).  The Neumann operator has exact zero row sums, so it
    preserves the spatial mean of each field.
    """
    u = np.asarray(u)
    out = np.empty_like(u)
    out[..., 1:-1] = u[..., :-2] - 2.0 * u[..., 1:-1] + u[..., 2:]
    if grid.bc is BoundaryCondition.DIRICHLET:
        out[..., 0] = -2.0 * u[..., 0] + u[..., 1]
        out[..., -1] = u[..., -2] - 2.0 * u[..., -1]
    else:
        out[..., 0] = -u[..., 0] + u[..., 1]
        out[..., -1] = u[..., -2] - u[..., -1]
    out /= grid.dx**2
    return out


def dt_max(p: ModelParams, grid: Grid) -> float:
    """Default step-size bound for the IMEX scheme.

    ``min(2.5*dx^2/max(d), 0.1/||A||_inf)``: the diffusion part is implicit
    (the explicit parabolic bound enters only through accuracy, relaxed
    tenfold), while the explicit reaction part limits the step through the
    linearization magnitude.
    """
    diffusive = 2.5 * grid.dx**2 / max(p.d1, p.d2, p.d3)
    a_norm = float(np.abs(linearization_matrix(p)).sum(axis=1).max())
    return min(diffusive, 0.1 / a_norm)


@dataclass
class FieldState:
    """Deviation fields at one instant: ``u`` has shape (3, N)."""

    t: float
    u: np.ndarray

    @property
    def u1(self) -> np.ndarray:
        return self.u[0]

    @property
    def u2(self) -> np.ndarray:
        return self.u[1]

    @property
    def u3(self) -> np.ndarray:
        return self.u[2]


@dataclass(frozen=True)
class AmplitudeSeries:
    """Projected critical-mode amplitude y(t) along a trajectory."""

    times: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class SimulationResult:
    final_state: FieldState
    series: AmplitudeSeries
    saturated: bool
    steps: int


@dataclass(frozen=True)
class AmplitudeFit:
    """Least-squares fit of dy/dt = sigma*y + coefficient*y^k.

    ``poor_fit`` flags R^2 < 0.99; the numbers are still returned.
    """

    sigma: float
    coefficient: float
    r_squared: float
    poor_fit: bool
    nonlinearity: str


def initial_state(
    p: ModelParams,
    grid: Grid,
    kind: str = "random",
    amplitude: float = 1e-4,
    seed: int = 0,
) -> FieldState:
    """Construct a starting deviation field.

    ``random``: independent uniform noise of size ``amplitude`` relative to
    the steady-state scale, reproducible from ``seed``.  ``aligned``:
    ``amplitude * omega * e1(x)`` along the critical eigenvector (use a
    negative amplitude for the mirror branch).  ``zero``: the trivial state.
    Under zero-average Neumann conditions the mean of each component is
    projected out.
    """
    if kind == "zero":
        u = np.zeros((3, grid.N))
    elif kind == "random":
        rng = np.random.default_rng(seed)
        scale = amplitude * float(np.max(np.abs(steady_state(p).as_array())))
        u = scale * rng.uniform(-1.0, 1.0, size=(3, grid.N))
    elif kind == "aligned":
        omega, _, _ = principal_mode_vectors(p)
        e1 = laplacian_mode(p, 1).evaluate(grid.x)
        u = amplitude * omega[:, None] * e1[None, :]
    else:
        raise ValueError(f"unknown initial-state kind {kind!r}")
    if p.bc is BoundaryCondition.NEUMANN_ZERO_AVERAGE:
        u = u - u.mean(axis=1, keepdims=True)
    return FieldState(t=0.0, u=u)


def _banded_cholesky(grid: Grid, coeff: float) -> np.ndarray:
    """Cholesky factor (upper banded form) of ``I - coeff * Laplacian``."""
    n = grid.N
    inv_dx2 = 1.0 / grid.dx**2
    ab = np.zeros((2, n))
    ab[1, :] = 1.0 + 2.0 * coeff * inv_dx2
    ab[0, 1:] = -coeff * inv_dx2
    if grid.bc is BoundaryCondition.NEUMANN_ZERO_AVERAGE:
        ab[1, 0] = 1.0 + coeff * inv_dx2
        ab[1, -1] = 1.0 + coeff * inv_dx2
    return cholesky_banded(ab)


class Stepper:
    """Prefactored IMEX integrator for one (parameters, grid, dt) triple.

    Predictor: ``(I - dt*L) u~ = u + dt*R(u)`` (implicit Euler diffusion,
    explicit Euler reaction).  Corrector: ``(I - dt/2*L) u' =
    (I + dt/2*L) u + dt/2*(R(u) + R(u~))`` (Crank-Nicolson / Heun).  ``L``
    is the per-component diffusion operator and ``R`` the reaction part in
    deviation form, ``R(u) = A u + F(u)``, which vanishes identically at
    zero.

    Parameters
    ----------
    p : ModelParams
    grid : Grid
    dt : float
        Time step (see :func:`dt_max` for the default rule).
    linear_only : bool, optional
        Drop the quadratic nonlinearity (linearized dynamics), used by
        growth-rate oracles.
    project : bool, optional
        Project the spatial mean out of the reaction term and the state
        (zero-average Neumann only).  Defaults to True for zero-average
        Neumann runs and False for Dirichlet.
    """

    def __init__(
        self,
        p: ModelParams,
        grid: Grid,
        dt: float,
        linear_only: bool = False,
        project: bool | None = None,
    ) -> None:
        self.p = p
        self.grid = grid
        self.dt = float(dt)
        self.linear_only = linear_only
        if project is None:
            project = p.bc is BoundaryCondition.NEUMANN_ZERO_AVERAGE
        if project and p.bc is not BoundaryCondition.NEUMANN_ZERO_AVERAGE:
            raise ValueError("mean projection only applies to zero-average Neumann runs")
        self.project = project
        self._A = linearization_matrix(p)
        d = (p.d1, p.d2, p.d3)
        self._full = [_banded_cholesky(grid, self.dt * di) for di in d]
        self._half = [_banded_cholesky(grid, 0.5 * self.dt * di) for di in d]
        self._d = np.array(d)

    def reaction(self, u: np.ndarray) -> np.ndarray:
        """Reaction part ``A u + F(u)`` (mean-projected when enabled)."""
        out = self._A @ u
        if not self.linear_only:
            out += quadratic_nonlinearity(self.p, u)
        if self.project:
            out -= out.mean(axis=1, keepdims=True)
        return out

    def _solve(self, factors, rhs: np.ndarray) -> np.ndarray:
        out = np.empty_like(rhs)
        for i in range(3):
            out[i] = cho_solve_banded((factors[i], False), rhs[i])
        return out

    def step_array(self, u: np.ndarray) -> np.ndarray:
        """Advance a raw (3, N) array by one step (no bookkeeping).

        Raises
        ------
        StepUnstable
            If the update overflows (the quadratic reaction can blow up in
            finite time when the state leaves the stable region).
        """
        dt = self.dt
        with np.errstate(over="ignore", invalid="ignore"):
            r0 = self.reaction(u)
            if not np.all(np.isfinite(r0)):
                raise StepUnstable("reaction term overflowed", last_state=None)
            predictor = self._solve(self._full, u + dt * r0)
            lap_u = self._d[:, None] * laplacian_apply(self.grid, u)
            r1 = self.reaction(predictor)
            if not np.all(np.isfinite(r1)):
                raise StepUnstable("reaction term overflowed", last_state=None)
            rhs = u + 0.5 * dt * (lap_u + r0 + r1)
            out = self._solve(self._half, rhs)
        if self.project:
            out -= out.mean(axis=1, keepdims=True)
        return out

    def step(self, state: FieldState) -> FieldState:
        """Advance one step, checking for numerical blow-up.

        Raises
        ------
        StepUnstable
            If the new state contains non-finite values; the exception
            carries the last good state.
        """
        try:
            u_new = self.step_array(state.u)
        except StepUnstable:
            raise StepUnstable(
                f"reaction term overflowed during step at t = {state.t}",
                last_state=state,
            ) from None
        if not np.all(np.isfinite(u_new)):
            raise StepUnstable(
                f"non-finite field values after step at t = {state.t + self.dt}",
                last_state=state,
            )
        return FieldState(t=state.t + self.dt, u=u_new)


def amplitude(p: ModelParams, grid: Grid, u: np.ndarray) -> float:
    """Critical-mode amplitude of a (3, N) deviation field.

    Discrete biorthogonal projection ``<u, e1 omega*> / <e1 omega, e1
    omega*>``; the discrete sine/cosine orthogonality makes this exact for
    fields expanded in grid modes.
    """
    omega, omega_star, _ = principal_mode_vectors(p)
    e1 = laplacian_mode(p, 1).evaluate(grid.x)
    numerator = float(e1 @ (omega_star @ u))
    denominator = float(e1 @ e1) * float(omega @ omega_star)
    return numerator / denominator


def simulate(
    p: ModelParams,
    grid: Grid,
    initial: FieldState,
    t_end: float,
    dt: float | None = None,
    record_every: int = 10,
    stop_on_saturation: bool = False,
    saturation_tol: float = 1e-8,
    saturation_window: int = 100,
    linear_only: bool = False,
    project: bool | None = None,
) -> SimulationResult:
    """Integrate to ``t_end``, recording the critical-mode amplitude.

    The amplitude is recorded every ``record_every`` steps (and at the final
    time).  With ``stop_on_saturation`` the run ends early once the total
    spread (max minus min) of the last ``saturation_window`` recordings
    falls below ``saturation_tol``.  Choose the tolerance well below the
    change expected per window during the slow initial plateau, or start
    from an aligned state with a known projection, to avoid stopping before
    the transient has developed.

    Returns
    -------
    SimulationResult
        Final state, amplitude series, a saturation flag, and the number of
        steps taken.
    """
    if dt is None:
        dt = 0.5 * dt_max(p, grid)
    stepper = Stepper(p, grid, dt, linear_only=linear_only, project=project)
    omega, omega_star, _ = principal_mode_vectors(p)
    e1 = laplacian_mode(p, 1).evaluate(grid.x)
    proj_den = float(e1 @ e1) * float(omega @ omega_star)

    n_steps = max(int(np.ceil((t_end - initial.t) / dt - 1e-12)), 0)
    times = [initial.t]
    ys = [float(e1 @ (omega_star @ initial.u)) / proj_den]
    u = initial.u.copy()
    t = initial.t
    saturated = False
    steps_taken = 0
    for k in range(1, n_steps + 1):
        try:
            u_new = stepper.step_array(u)
        except StepUnstable:
            raise StepUnstable(
                f"reaction term overflowed during step at t = {t}",
                last_state=FieldState(t=t, u=u),
            ) from None
        if not np.all(np.isfinite(u_new)):
            raise StepUnstable(
                f"non-finite field values after step at t = {t + dt}",
                last_state=FieldState(t=t, u=u),
            )
        u = u_new
        steps_taken = k
        t = initial.t + k * dt
        if k % record_every == 0 or k == n_steps:
            times.append(t)
            ys.append(float(e1 @ (omega_star @ u)) / proj_den)
            if stop_on_saturation and len(ys) > saturation_window:
                window = ys[-(saturation_window + 1) :]
                if max(window) - min(window) < saturation_tol:
                    saturated = True
                    break
    return SimulationResult(
        final_state=FieldState(t=t, u=u),
        series=AmplitudeSeries(times=np.array(times), y=np.array(ys)),
        saturated=saturated,
        steps=steps_taken,
    )


def fit_amplitude_dynamics(
    series: AmplitudeSeries, nonlinearity: str = "cubic"
) -> AmplitudeFit:
    """Fit the reduced equation ``dy/dt = sigma*y + c*y^k`` to a trajectory.

    ``nonlinearity`` selects ``quadratic`` (k=2, Dirichlet reduction) or
    ``cubic`` (k=3, Neumann reduction).  The derivative is estimated with
    second-order finite differences; the two coefficients come from linear
    least squares.

    Raises
    ------
    InsufficientData
        Fewer than 10 samples.
    """
    if nonlinearity == "quadratic":
        power = 2
    elif nonlinearity == "cubic":
        power = 3
    else:
        raise ValueError(f"unknown nonlinearity {nonlinearity!r}")
    t = np.asarray(series.times, dtype=float)
    y = np.asarray(series.y, dtype=float)
    if t.size < 10:
        raise InsufficientData(
            f"{t.size} amplitude samples; at least 10 needed for a fit"
        )
    dydt = np.gradient(y, t)
    design = np.column_stack([y, y**power])
    coef, *_ = np.linalg.lstsq(design, dydt, rcond=None)
    residual = dydt - design @ coef
    ss_res = float(residual @ residual)
    centered = dydt - dydt.mean()
    ss_tot = float(centered @ centered)
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return AmplitudeFit(
        sigma=float(coef[0]),
        coefficient=float(coef[1]),
        r_squared=r_squared,
        poor_fit=r_squared < 0.99,
        nonlinearity=nonlinearity,
    )

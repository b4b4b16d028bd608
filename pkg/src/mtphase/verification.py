"""Numbered end-to-end verification suite with independent oracles.

Twelve checks cover the full analysis chain: steady-state algebra, spectral
solvers against a companion-matrix oracle, the mode-matrix scaling identity,
threshold location against a polynomial-bisection oracle, exchange of
stability at random thresholds, two-path agreement of the branch
coefficients, simulated branch amplitudes against their predictions for the
mixed (Dirichlet) and pitchfork (Neumann) scenarios, jump behavior where
the cubic coefficient is positive, the constrained closed-form identity for
the transition number, simulator convergence orders, and byte-level
reproducibility of the artifact pipeline.

Each criterion is a standalone function returning ``(passed, detail)``;
:func:`run_all` wraps them with timing and collects
:class:`CriterionResult` records.  All randomness is drawn from seeded
generators so every run is reproducible.
"""

from __future__ import annotations

import filecmp
import os
import tempfile
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .config import RunConfig, config_sha256, parse_config_text
from .errors import MTPhaseError, StepUnstable
from .model import (
    ModelParams,
    check_conditions,
    linearization_matrix,
    quadratic_nonlinearity,
    reaction_rhs,
    steady_state,
)
from .output import read_manifest, write_manifest
from .simulator import (
    Stepper,
    amplitude,
    dt_max,
    initial_state,
    laplacian_apply,
    make_grid,
    simulate,
)
from .spectral import (
    char_poly_coeffs,
    companion_roots,
    cubic_roots,
    laplacian_eigenvalue,
    laplacian_mode,
    mode_matrix,
    mode_spectra,
    principal_eigenvalue,
)
from .threshold import ParameterRay, find_threshold
from .transition import (
    classify_transition,
    principal_mode_vectors,
    transition_number,
    transition_number_simplified,
)

__all__ = [
    "CriterionResult",
    "DEFAULT_SEED",
    "CRITERIA",
    "run_all",
    "default_verify_config",
]

DEFAULT_SEED = 20260825

#: Frozen parameter point with a strongly positive cubic coefficient, used
#: for the jump-behavior check.  Found by a seeded search maximizing the
#: scale-invariant cubic strength; the analytic repeller amplitude at this
#: point was confirmed against a simulated separatrix bisection to 1.5 %.
_JUMP_POINT = dict(
    k1=4.9669, k3=0.4280, k5=6.4185, k7=0.4256, C1=4.3293, E=0.9599,
    d1=1.7390, d2=1.4256, d3=0.3804, ell=4.828, bc="neumann-zero-average",
)

_CANONICAL_CONFIG_TEXT = """\
[model]
k1 = 1.0
k3 = 1.0
k5 = 1.0
k7 = 2.0
C1 = 1.0
E = 1.0
d1 = 0.12
d2 = 0.12
d3 = 0.12

[domain]
ell = 3.141592653589793
bc = dirichlet

[analysis]
M_max = 50
tol = 1e-10
ray = d1:1,d2:1,d3:1
bracket = 0.05,1.0

[simulate]
N = 64
dt = auto
T = 5.0
ic = random:0.0001
seed = 12345
record_every = 10

[sweep]
axis1 = d1:1,d2:1,d3:1
range1 = 0.05,0.4
axis2 = k7
range2 = 1.2,3.0
resolution = 12,12

[output]
directory = out
formats = csv
"""


def default_verify_config() -> RunConfig:
    """The built-in canonical configuration used by the reproducibility check."""
    return parse_config_text(_CANONICAL_CONFIG_TEXT)


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one numbered verification criterion."""

    index: int
    name: str
    passed: bool
    detail: str
    seconds: float


# ---------------------------------------------------------------------------
# shared generators and helpers


def _random_params(
    rng: np.random.Generator,
    rate_range: tuple[float, float] = (0.3, 3.0),
    diff_range: tuple[float, float] = (0.05, 1.0),
    ell_range: tuple[float, float] = (2.0, 6.0),
    bc: str = "dirichlet",
    k1_margin: float = 0.3,
    max_tries: int = 200,
) -> ModelParams:
    """Draw a feasible parameter set (log-uniform rates, K1 bounded away from 0)."""
    lo, hi = np.log10(rate_range[0]), np.log10(rate_range[1])
    dlo, dhi = np.log10(diff_range[0]), np.log10(diff_range[1])
    for _ in range(max_tries):
        k1, k3, k5, k7, C1, E = 10.0 ** rng.uniform(lo, hi, 6)
        d1, d2, d3 = 10.0 ** rng.uniform(dlo, dhi, 3)
        ell = rng.uniform(*ell_range)
        if C1 * k1 * k7 - k3 * k5 * E <= k1_margin * C1 * k1 * k7:
            continue
        return ModelParams(
            k1=k1, k3=k3, k5=k5, k7=k7, C1=C1, E=E,
            d1=d1, d2=d2, d3=d3, ell=ell, bc=bc,
        )
    raise RuntimeError("random parameter generator failed to find a feasible point")


def _canonical_point() -> ModelParams:
    return ModelParams(
        k1=1.0, k3=1.0, k5=1.0, k7=2.0, C1=1.0, E=1.0,
        d1=1.0, d2=1.0, d3=1.0, ell=float(np.pi),
    )


def _canonical_threshold():
    ray = ParameterRay(
        base=_canonical_point(),
        direction={"d1": 1.0, "d2": 1.0, "d3": 1.0},
        bracket=(0.05, 1.0),
    )
    return find_threshold(ray, attach_report=False)


def _solve_sigma(make_p: Callable[[float], ModelParams], target: float,
                 bracket: tuple[float, float]) -> ModelParams:
    """Parameter point on a one-parameter family with Re sigma_11 = target."""
    coord = brentq(
        lambda c: principal_eigenvalue(make_p(c)).real - target,
        *bracket, xtol=1e-14,
    )
    return make_p(coord)


def _evolve_outcome(
    p: ModelParams,
    grid,
    y0: float,
    dt: float,
    grow_factor: float = 10.0,
    decay_to: float = 1e-8,
    t_max: float = 1500.0,
    check_every: int = 20,
) -> tuple[str, float]:
    """Integrate from an aligned state until growth, decay, or timeout.

    Returns ``("grew", t)`` once ``|y|`` reaches ``grow_factor * |y0|``
    (a finite-time overflow also counts: the state left the small-amplitude
    window growing), ``("decayed", t)`` once ``|y|`` falls to ``decay_to``,
    or ``("timeout", t_max)``.
    """
    stepper = Stepper(p, grid, dt)
    omega, omega_star, _ = principal_mode_vectors(p)
    e1 = laplacian_mode(p, 1).evaluate(grid.x)
    den = float(e1 @ e1) * float(omega @ omega_star)
    u = initial_state(p, grid, kind="aligned", amplitude=y0).u
    n_steps = int(np.ceil(t_max / dt))
    k = 0
    while k < n_steps:
        try:
            for _ in range(check_every):
                u = stepper.step_array(u)
                k += 1
        except StepUnstable:
            return "grew", k * dt
        y = float(e1 @ (omega_star @ u)) / den
        if abs(y) >= grow_factor * abs(y0):
            return "grew", k * dt
        if abs(y) <= decay_to:
            return "decayed", k * dt
    return "timeout", t_max


def _newton_branch_amplitude(p: ModelParams, N: int, y_init: float) -> float:
    """Amplitude of the semi-discrete steady branch via damped Newton.

    Independent of the time stepper: solves ``D lap u + A u + F(u) = 0``
    directly with a dense finite-difference Jacobian, starting from the
    aligned first-mode profile with amplitude ``y_init``.
    """
    grid = make_grid(p, N)
    A = linearization_matrix(p)
    d = np.array([p.d1, p.d2, p.d3])
    omega, _, _ = principal_mode_vectors(p)
    e1 = laplacian_mode(p, 1).evaluate(grid.x)
    u = y_init * omega[:, None] * e1[None, :]

    def rhs(v: np.ndarray) -> np.ndarray:
        return d[:, None] * laplacian_apply(grid, v) + A @ v + quadratic_nonlinearity(p, v)

    n = 3 * N
    for _ in range(50):
        r = rhs(u)
        J = np.empty((n, n))
        h = 1e-7
        flat = u.reshape(-1)
        for j in range(n):
            bumped = flat.copy()
            bumped[j] += h
            J[:, j] = (rhs(bumped.reshape(3, N)) - r).reshape(-1) / h
        du = np.linalg.solve(J, -r.reshape(-1))
        u = u + du.reshape(3, N)
        if np.abs(du).max() < 1e-13 * max(1.0, np.abs(u).max()):
            break
    return amplitude(p, grid, u)


# ---------------------------------------------------------------------------
# criteria


def criterion_1_steady_state(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Steady-state residual is at rounding level for 1000 random parameter sets."""
    rng = np.random.default_rng([seed, 1])
    worst = 0.0
    for _ in range(1000):
        p = _random_params(rng, rate_range=(0.05, 20.0), diff_range=(0.01, 5.0))
        ss = steady_state(p)
        residual = np.abs(reaction_rhs(p, ss.as_array()))
        g, s, f = ss.Mg, ss.Ms, ss.Df
        scales = np.array([
            max(p.k7 * f * g, p.k5 * f * s, p.k1 * f),
            max(p.k7 * f * g, p.k5 * f * s, p.E),
            max(p.k3 * f * g, p.C1 * s, p.k1 * f, p.E),
        ])
        worst = max(worst, float(np.max(residual / scales)))
    return worst <= 1e-12, f"max relative steady-state residual {worst:.3e} (tol 1e-12)"


def criterion_2_spectral(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Eigenpair residuals below 1e-10; cubic roots match the companion oracle."""
    rng = np.random.default_rng([seed, 2])
    worst_pair = 0.0
    for _ in range(500):
        p = _random_params(rng)
        for spec in mode_spectra(p, 3):
            emat = mode_matrix(p, spec.mode.rho)
            scale = float(np.abs(emat).max())
            for i in range(3):
                fwd = np.abs(emat @ spec.omega[i] - spec.sigma[i] * spec.omega[i]).max()
                adj = np.abs(
                    spec.omega_star[i] @ emat - spec.sigma[i] * spec.omega_star[i]
                ).max()
                rel = max(
                    fwd / (np.abs(spec.omega[i]).max() * scale),
                    adj / (np.abs(spec.omega_star[i]).max() * scale),
                )
                worst_pair = max(worst_pair, float(rel))

    worst_root = 0.0
    for _ in range(10_000):
        mat = rng.uniform(-2.0, 2.0, (3, 3))
        p2, p1, p0 = char_poly_coeffs(mat)
        ours = cubic_roots(p2, p1, p0)
        oracle = companion_roots(p2, p1, p0)
        worst_root = max(worst_root, float(np.abs(ours - oracle).max()))

    passed = worst_pair <= 1e-10 and worst_root <= 1e-10
    return passed, (
        f"max eigenpair residual {worst_pair:.3e} over 500 params x 3 modes, "
        f"max cubic-root deviation {worst_root:.3e} over 10^4 matrices (tol 1e-10)"
    )


def criterion_3_scaling(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Mode-m block equals the principal block at rescaled diffusivities."""
    rng = np.random.default_rng([seed, 3])
    worst = 0.0
    for _ in range(1000):
        p = _random_params(rng, rate_range=(0.05, 20.0), diff_range=(0.01, 5.0))
        m = int(rng.integers(2, 51))
        rho1 = laplacian_eigenvalue(1, p.ell)
        rho_m = laplacian_eigenvalue(m, p.ell)
        target = mode_matrix(p, rho_m)
        scale = rho_m / rho1
        rescaled = mode_matrix(
            p.replace(d1=p.d1 * scale, d2=p.d2 * scale, d3=p.d3 * scale), rho1
        )
        worst = max(
            worst, float(np.abs(target - rescaled).max() / np.abs(target).max())
        )
    return worst <= 1e-14, (
        f"max relative mode-matrix mismatch {worst:.3e} over 1000 draws, m <= 50 "
        f"(tol 1e-14)"
    )


def criterion_4_canonical_threshold(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Canonical threshold equals the positive root of the reduced cubic."""
    tp = _canonical_threshold()

    def poly(d: float) -> float:
        return d**3 + 5.0 * d**2 + 5.0 * d - 1.0

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if poly(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    oracle = 0.5 * (lo + hi)
    dev_oracle = abs(tp.ray_coord - oracle)
    dev_quoted = abs(tp.ray_coord - 0.17009)
    passed = dev_oracle <= 1e-10 and dev_quoted <= 1e-4
    return passed, (
        f"critical diffusivity {tp.ray_coord:.10f}, bisection oracle {oracle:.10f} "
        f"(|diff| {dev_oracle:.2e}), quoted value offset {dev_quoted:.2e}"
    )


def criterion_5_exchange_of_stability(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Only the principal eigenvalue crosses at 100 random admissible thresholds."""
    rng = np.random.default_rng([seed, 5])
    accepted = 0
    attempts = 0
    worst_band = 0.0
    worst_higher = -np.inf
    while accepted < 100 and attempts < 2000:
        attempts += 1
        base = _random_params(rng)
        weights = 10.0 ** rng.uniform(-1.0, 0.0, 3)
        ray = ParameterRay(
            base=base,
            direction={"d1": weights[0], "d2": weights[1], "d3": weights[2]},
            bracket=(1e-3, 100.0),
        )
        try:
            tp = find_threshold(ray, M_max=50)
        except MTPhaseError:
            continue
        conds = check_conditions(tp.lambda0)
        if not (conds.cond0_ok and conds.cond1_ok and conds.cond2_ok):
            continue
        report = tp.stability_report
        if report is None or report.skipped:
            continue
        accepted += 1
        worst_band = max(worst_band, abs(tp.sigma11))
        worst_higher = max(worst_higher, report.max_re_higher)
        if not (
            abs(tp.sigma11) <= 1e-8
            and report.re_sigma12 < 0.0
            and report.re_sigma13 < 0.0
            and report.higher_modes_stable
        ):
            return False, (
                f"stability exchange failed at threshold #{accepted}: "
                f"sigma11={tp.sigma11!r}, re(sigma12)={report.re_sigma12:.3e}, "
                f"re(sigma13)={report.re_sigma13:.3e}, "
                f"max higher-mode Re={report.max_re_higher:.3e}"
            )
    if accepted < 100:
        return False, f"only {accepted} admissible thresholds found in {attempts} draws"
    return True, (
        f"100 thresholds (from {attempts} draws): max |sigma11| {worst_band:.2e} "
        f"(band 1e-8), all other eigenvalues stable "
        f"(max higher-mode Re {worst_higher:.3e}, modes up to 50)"
    )


def criterion_6_quadratic_coefficient(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Closed-form and quadrature branch coefficients agree; canonical value."""
    tp = _canonical_threshold()
    report = classify_transition(tp)
    closed = report.quadratic_coeff
    quad = report.quadratic_coeff_quadrature
    diff = abs(closed - quad) / abs(closed)
    dev = abs(closed - (-0.0747))
    passed = diff <= 1e-10 and dev <= 1e-3
    return passed, (
        f"closed form {closed:.10f}, quadrature {quad:.10f} "
        f"(rel diff {diff:.2e}, tol 1e-10); canonical offset {dev:.2e} (tol 1e-3)"
    )


def criterion_7_mixed_branch(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Simulated saturated amplitude tracks the predicted mixed-branch value.

    The canonical threshold is unfolded in the growth-to-shrinkage rate
    ``k7`` (the second-order branch correction along this direction stays
    inside the 10 % comparison band for all three eigenvalue offsets).
    """
    tp = _canonical_threshold()
    report = classify_transition(tp)
    alpha = report.quadratic_coeff
    p_star = tp.lambda0
    errors = []
    parts = []
    for target in (0.02, 0.01, 0.005):
        p = _solve_sigma(lambda c: p_star.replace(k7=c), target, (2.0, 3.5))
        grid = make_grid(p, 128)
        ic = initial_state(p, grid, kind="aligned", amplitude=0.01)
        result = simulate(
            p, grid, ic, t_end=4000.0, dt=dt_max(p, grid), record_every=100,
            stop_on_saturation=True, saturation_tol=1e-5,
        )
        if not result.saturated:
            return False, f"run at sigma11={target} did not saturate by t=4000"
        y_pred = report.branch_amplitudes(target)[0]
        y_sim = result.series.y[-1]
        rel = abs(y_sim - y_pred) / abs(y_pred)
        errors.append(rel)
        parts.append(f"sigma11={target}: sim {y_sim:.5f} vs pred {y_pred:.5f} ({rel:.2%})")
    within = all(err <= 0.10 for err in errors)
    monotone = all(errors[i + 1] <= errors[i] + 1e-12 for i in range(len(errors) - 1))
    return within and monotone, "; ".join(parts) + (
        "; errors non-increasing" if monotone else "; errors NOT non-increasing"
    )


def criterion_8_pitchfork_branch(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Pitchfork amplitudes at a zero-average threshold with negative cubic term.

    Searches a seeded random family of Neumann zero-average thresholds for a
    negative transition number; if one is found, the two bifurcated branches
    are simulated and compared against the square-root law.  The search is
    reported honestly when every sampled threshold has a positive transition
    number (no continuous transition exists to validate).
    """
    rng = np.random.default_rng([seed, 8])
    evaluated = 0
    b_min, b_max = np.inf, -np.inf
    found = None
    for _ in range(1200):
        if evaluated >= 250 or found is not None:
            break
        try:
            base = _random_params(
                rng,
                rate_range=(0.316, 10.0),
                diff_range=(0.1, 1.0),
                ell_range=(3.0, 10.0),
                bc="neumann-zero-average",
                k1_margin=0.05,
            )
            ray = ParameterRay(
                base=base,
                direction={"d1": base.d1, "d2": base.d2, "d3": base.d3},
                bracket=(1e-3, 50.0),
            )
            tp = find_threshold(ray, attach_report=False)
            b = transition_number(tp)
        except MTPhaseError:
            continue
        evaluated += 1
        b_min, b_max = min(b_min, b), max(b_max, b)
        if b < -1e-10:
            found = (ray, tp, b)

    if found is None:
        return False, (
            f"no type-I point: transition number positive at all {evaluated} sampled "
            f"zero-average thresholds (range [{b_min:.3e}, {b_max:.3e}]); a continuous "
            f"transition could not be exhibited — see the README section on this "
            f"criterion for the sign analysis"
        )

    ray, tp, b = found
    parts = [f"found b={b:.4e} at ray coordinate {tp.ray_coord:.5f}"]
    for target in (0.01, 0.005):
        p = _solve_sigma(ray.at, target, (0.5 * tp.ray_coord, tp.ray_coord))
        y_pred = float(np.sqrt(target / abs(b)))
        grid = make_grid(p, 96)
        saturated = {}
        for sign in (+1.0, -1.0):
            ic = initial_state(p, grid, kind="aligned", amplitude=sign * 0.3 * y_pred)
            result = simulate(
                p, grid, ic, t_end=4000.0, dt=0.5 * dt_max(p, grid),
                record_every=100, stop_on_saturation=True, saturation_tol=1e-6,
            )
            if not result.saturated:
                return False, f"branch run (sign {sign:+.0f}) did not saturate"
            saturated[sign] = result.series.y[-1]
        rel_plus = abs(saturated[+1.0] - y_pred) / y_pred
        rel_minus = abs(saturated[-1.0] + y_pred) / y_pred
        mirror = abs(saturated[+1.0] + saturated[-1.0]) / abs(saturated[+1.0])
        parts.append(
            f"sigma11={target}: branches {saturated[+1.0]:.5f}/{saturated[-1.0]:.5f} "
            f"vs ±{y_pred:.5f} ({rel_plus:.2%}/{rel_minus:.2%}), mirror defect {mirror:.2e}"
        )
        if rel_plus > 0.10 or rel_minus > 0.10 or mirror > 1e-3:
            return False, "; ".join(parts)
    return True, "; ".join(parts)


def criterion_9_jump_behavior(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Jump behavior where the cubic coefficient is positive.

    At a frozen zero-average point with a strongly positive transition
    number, slightly below threshold: an aligned state at twice the repeller
    amplitude must grow tenfold, one at half the repeller amplitude must
    decay to 1e-8.
    """
    base = ModelParams(**_JUMP_POINT)
    ray = ParameterRay(
        base=base,
        direction={"d1": base.d1, "d2": base.d2, "d3": base.d3},
        bracket=(0.5, 2.0),
    )
    tp = find_threshold(ray, attach_report=False)
    b = transition_number(tp)
    if b <= 0.0:
        return False, f"frozen point lost its positive transition number: b={b:.3e}"
    target = -0.02
    p = _solve_sigma(ray.at, target, (tp.ray_coord, 2.0 * tp.ray_coord))
    y_star = float(np.sqrt(-target / b))
    grid = make_grid(p, 64)
    dt = dt_max(p, grid)

    outcome_hi, t_hi = _evolve_outcome(p, grid, 2.0 * y_star, dt, t_max=400.0)
    outcome_lo, t_lo = _evolve_outcome(p, grid, 0.5 * y_star, dt, t_max=1500.0)
    passed = outcome_hi == "grew" and outcome_lo == "decayed"
    return passed, (
        f"b={b:.4f}, repeller amplitude {y_star:.4f} at sigma11={target}; "
        f"IC at 2.0x: {outcome_hi} (t={t_hi:.1f}), "
        f"IC at 0.5x: {outcome_lo} to 1e-8 (t={t_lo:.1f})"
    )


def criterion_10_constrained_identity(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """General and closed-form transition numbers agree on the constrained family.

    Points satisfy k1 = E = 1 and C1 k7 = k3 (k5 + rho1 d2); the general
    assembly through the slaved second mode must match the closed-form
    product expression to 1e-10 relative.
    """
    rng = np.random.default_rng([seed, 10])
    worst = 0.0
    produced = 0
    tries = 0
    while produced < 100 and tries < 2000:
        tries += 1
        k3, k5, k7 = 10.0 ** rng.uniform(np.log10(0.3), np.log10(3.0), 3)
        d1, d2, d3 = 10.0 ** rng.uniform(np.log10(0.05), 0.0, 3)
        ell = rng.uniform(2.0, 6.0)
        rho1 = laplacian_eigenvalue(1, ell)
        C1 = k3 * (k5 + rho1 * d2) / k7
        try:
            p = ModelParams(
                k1=1.0, k3=k3, k5=k5, k7=k7, C1=C1, E=1.0,
                d1=d1, d2=d2, d3=d3, ell=ell, bc="neumann-zero-average",
            )
            general = transition_number(p)
            simplified = transition_number_simplified(p)
        except MTPhaseError:
            continue
        produced += 1
        denom = max(abs(general), abs(simplified))
        if denom > 0.0:
            worst = max(worst, abs(general - simplified) / denom)
    if produced < 100:
        return False, f"only {produced} constrained points produced in {tries} draws"
    return worst <= 1e-10, (
        f"max relative two-path deviation {worst:.3e} over 100 constrained points "
        f"(tol 1e-10)"
    )


def criterion_11_convergence_orders(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    """Second-order spatial and temporal convergence on the canonical run."""
    tp = _canonical_threshold()
    p = _solve_sigma(lambda c: tp.lambda0.replace(k7=c), 0.02, (2.0, 3.5))

    y_ref = _newton_branch_amplitude(p, 512, 0.26)
    errs, dxs = [], []
    for N in (24, 32, 48):
        grid = make_grid(p, N)
        ic = initial_state(p, grid, kind="aligned", amplitude=0.01)
        result = simulate(
            p, grid, ic, t_end=3000.0, dt=dt_max(p, grid), record_every=50,
            stop_on_saturation=True, saturation_tol=1e-7,
        )
        errs.append(abs(result.series.y[-1] - y_ref))
        dxs.append(grid.dx)
    spatial = [
        float(np.log(errs[i] / errs[i + 1]) / np.log(dxs[i] / dxs[i + 1]))
        for i in range(2)
    ]

    grid = make_grid(p, 64)
    ic = initial_state(p, grid, kind="aligned", amplitude=0.01)
    T = 60.0

    def y_at(dt: float) -> float:
        return simulate(p, grid, ic, t_end=T, dt=dt, record_every=10**9).series.y[-1]

    y_fine = y_at(0.000625)
    errs_t = [abs(y_at(dt) - y_fine) for dt in (0.02, 0.01, 0.005)]
    temporal = [float(np.log2(errs_t[i] / errs_t[i + 1])) for i in range(2)]

    all_orders = spatial + temporal
    passed = all(1.8 <= order <= 2.2 for order in all_orders)
    return passed, (
        f"spatial orders {spatial[0]:.3f}, {spatial[1]:.3f} "
        f"(N=24/32/48 vs Newton reference at N=512); "
        f"temporal orders {temporal[0]:.3f}, {temporal[1]:.3f} "
        f"(dt=0.02/0.01/0.005 vs dt=6.25e-4); band [1.8, 2.2]"
    )


def _artifact_pipeline(config: RunConfig, out_dir: str, seed: int,
                       workers: int | None) -> list[str]:
    from . import artifacts

    files: list[str] = []
    files += artifacts.run_steady_state(config, out_dir)
    files += artifacts.run_spectrum(config, out_dir)
    files += artifacts.run_threshold(config, out_dir)
    files += artifacts.run_transition(config, out_dir)
    files += artifacts.run_simulate(config, out_dir, seed=seed)
    files += artifacts.run_phase_diagram(config, out_dir, workers=workers)
    write_manifest(out_dir, config_sha256(config), files)
    return files


def criterion_12_reproducibility(
    seed: int = DEFAULT_SEED,
    config: RunConfig | None = None,
    workers: int | None = None,
) -> tuple[bool, str]:
    """Two identically seeded pipeline runs produce byte-identical CSVs."""
    cfg = config if config is not None else default_verify_config()
    with tempfile.TemporaryDirectory(prefix="mtphase-verify-") as tmp:
        dirs = [os.path.join(tmp, "run1"), os.path.join(tmp, "run2")]
        names: list[list[str]] = []
        for out_dir in dirs:
            os.makedirs(out_dir)
            files = _artifact_pipeline(cfg, out_dir, seed=cfg.simulate.seed,
                                       workers=workers)
            names.append(sorted(os.path.basename(f) for f in files))
        if names[0] != names[1]:
            return False, f"runs wrote different file sets: {names[0]} vs {names[1]}"
        mismatched = [
            name
            for name in names[0]
            if not filecmp.cmp(
                os.path.join(dirs[0], name), os.path.join(dirs[1], name), shallow=False
            )
        ]
        if mismatched:
            return False, f"CSV bytes differ between identical runs: {mismatched}"
        manifests = [
            {k: v for k, v in read_manifest(os.path.join(d, "manifest.txt")).items()
             if k != "created_utc"}
            for d in dirs
        ]
        if manifests[0] != manifests[1]:
            return False, "manifests differ beyond the timestamp"
    return True, (
        f"{len(names[0])} CSV files byte-identical across two runs; manifests match "
        f"up to the timestamp"
    )


CRITERIA: tuple[tuple[int, str, Callable[..., tuple[bool, str]]], ...] = (
    (1, "steady-state residual", criterion_1_steady_state),
    (2, "spectral solvers vs oracle", criterion_2_spectral),
    (3, "mode-matrix scaling identity", criterion_3_scaling),
    (4, "canonical threshold vs bisection oracle", criterion_4_canonical_threshold),
    (5, "exchange of stability", criterion_5_exchange_of_stability),
    (6, "branch coefficient two-path agreement", criterion_6_quadratic_coefficient),
    (7, "mixed branch amplitude via simulation", criterion_7_mixed_branch),
    (8, "pitchfork branch amplitude via simulation", criterion_8_pitchfork_branch),
    (9, "jump behavior via simulation", criterion_9_jump_behavior),
    (10, "constrained transition-number identity", criterion_10_constrained_identity),
    (11, "simulator convergence orders", criterion_11_convergence_orders),
    (12, "artifact reproducibility", criterion_12_reproducibility),
)


def run_all(
    seed: int = DEFAULT_SEED,
    config: RunConfig | None = None,
    workers: int | None = None,
    only: Sequence[int] | None = None,
) -> list[CriterionResult]:
    """Run the numbered criteria (optionally a subset) and time each one."""
    results = []
    for index, name, func in CRITERIA:
        if only is not None and index not in only:
            continue
        start = time.perf_counter()
        if func is criterion_12_reproducibility:
            passed, detail = func(seed, config=config, workers=workers)
        else:
            passed, detail = func(seed)
        results.append(
            CriterionResult(
                index=index,
                name=name,
                passed=passed,
                detail=detail,
                seconds=time.perf_counter() - start,
            )
        )
    return results

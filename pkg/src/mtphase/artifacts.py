"""Subcommand cores: produce analysis artifacts for a validated RunConfig.

Each runner takes a configuration and an output directory, writes its CSV
files, and returns the list of written paths (for the manifest).  The CLI
wraps these with argument parsing and exit-code mapping; the verification
suite reuses them directly for the reproducibility check.
"""

from __future__ import annotations

import os

from .config import RunConfig
from .errors import CurveLeftDomain, NoSignChange
from .model import check_conditions, steady_state
from .output import (
    CRITICAL_CURVE_COLUMNS,
    FINAL_STATE_COLUMNS,
    PHASE_DIAGRAM_COLUMNS,
    SIMULATE_COLUMNS,
    SPECTRUM_COLUMNS,
    STEADY_STATE_COLUMNS,
    THRESHOLD_COLUMNS,
    TRANSITION_COLUMNS,
    series_rows,
    spectrum_rows,
    state_rows,
    steady_state_row,
    threshold_row,
    transition_row,
    write_csv,
)
from .simulator import initial_state, make_grid, simulate
from .spectral import mode_spectra
from .sweep import region_evaluator, sweep
from .threshold import find_threshold, trace_threshold_curve
from .transition import classify_transition

__all__ = [
    "run_steady_state",
    "run_spectrum",
    "run_threshold",
    "run_transition",
    "run_simulate",
    "run_phase_diagram",
]


def run_steady_state(config: RunConfig, out_dir: str) -> list[str]:
    """Write ``steady-state.csv`` for the configured parameter point."""
    p = config.params
    ss = steady_state(p)
    path = write_csv(
        os.path.join(out_dir, "steady-state.csv"),
        STEADY_STATE_COLUMNS,
        [steady_state_row(p, ss)],
    )
    return [path]


def run_spectrum(config: RunConfig, out_dir: str) -> list[str]:
    """Write ``spectrum.csv`` with modes 1..M_max (three branches each)."""
    spectra = mode_spectra(config.params, config.analysis.M_max)
    path = write_csv(
        os.path.join(out_dir, "spectrum.csv"), SPECTRUM_COLUMNS, spectrum_rows(spectra)
    )
    return [path]


def _located_threshold(config: RunConfig):
    return find_threshold(
        config.ray(), tol=config.analysis.tol, M_max=config.analysis.M_max
    )


def run_threshold(config: RunConfig, out_dir: str) -> list[str]:
    """Locate the threshold on the configured ray; write ``threshold.csv``."""
    tp = _located_threshold(config)
    cond2_ok = check_conditions(tp.lambda0).cond2_ok
    path = write_csv(
        os.path.join(out_dir, "threshold.csv"),
        THRESHOLD_COLUMNS,
        [threshold_row(tp, cond2_ok)],
    )
    return [path]


def run_transition(config: RunConfig, out_dir: str) -> list[str]:
    """Classify the transition at the located threshold; write ``transition.csv``."""
    tp = _located_threshold(config)
    report = classify_transition(tp)
    path = write_csv(
        os.path.join(out_dir, "transition.csv"),
        TRANSITION_COLUMNS,
        [transition_row(report)],
    )
    return [path]


def run_simulate(
    config: RunConfig, out_dir: str, seed: int | None = None
) -> list[str]:
    """Integrate the configured run; write amplitude series and final state."""
    p = config.params
    sc = config.simulate
    grid = make_grid(p, sc.N)
    ic = initial_state(
        p,
        grid,
        kind=sc.ic_kind,
        amplitude=sc.ic_amplitude,
        seed=sc.seed if seed is None else seed,
    )
    result = simulate(
        p, grid, ic, t_end=sc.T, dt=sc.dt, record_every=sc.record_every
    )
    series_path = write_csv(
        os.path.join(out_dir, "simulate.csv"),
        SIMULATE_COLUMNS,
        series_rows(result.series.times, result.series.y),
    )
    state_path = write_csv(
        os.path.join(out_dir, "final-state.csv"),
        FINAL_STATE_COLUMNS,
        state_rows(grid.x, result.final_state.u),
    )
    return [series_path, state_path]


def run_phase_diagram(
    config: RunConfig, out_dir: str, workers: int | None = None
) -> list[str]:
    """Sweep the configured slice; write region grid and critical polyline.

    The polyline CSV is written empty (header only) when the critical curve
    does not cross the requested window.
    """
    plane = config.plane()
    cells = sweep(plane, config.sweep.resolution, region_evaluator, workers=workers)
    grid_rows = [
        [
            cell.i,
            cell.j,
            cell.coord1,
            cell.coord2,
            cell.values.get("region"),
            cell.values.get("sigma11_re"),
            cell.values.get("sigma11_im"),
            cell.values.get("cond2_ok"),
            cell.error,
        ]
        for cell in cells
    ]
    grid_path = write_csv(
        os.path.join(out_dir, "phase-diagram.csv"), PHASE_DIAGRAM_COLUMNS, grid_rows
    )

    try:
        curve = trace_threshold_curve(plane, M_max=config.analysis.M_max)
        curve_rows = [
            [k, tp.plane_coords[0], tp.plane_coords[1]]
            for k, tp in enumerate(curve)
            if tp.plane_coords is not None
        ]
    except (CurveLeftDomain, NoSignChange):
        curve_rows = []
    curve_path = write_csv(
        os.path.join(out_dir, "critical-curve.csv"), CRITICAL_CURVE_COLUMNS, curve_rows
    )
    return [grid_path, curve_path]

"""Order-preserving parallel sweeps over two-axis parameter slices.

A sweep evaluates a callable on every cell of a regular grid laid over a
:class:`~mtphase.threshold.ParameterPlane`.  Evaluation runs on a worker
pool, but the returned rows are always in grid (row-major) order and cell
values never depend on the worker count, so sweep output is reproducible
byte-for-byte.  A cell whose evaluation fails with a domain error is
recorded with the error message in its ``error`` field and the sweep
continues; unexpected exceptions propagate.

Workers only compute and return values; all file writing stays in the
calling process.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, MTPhaseError
from .model import ModelParams
from .threshold import ParameterPlane, classify_region

__all__ = [
    "SweepCell",
    "resolve_workers",
    "region_evaluator",
    "sweep",
]


@dataclass(frozen=True)
class SweepCell:
    """One evaluated grid cell.

    ``values`` holds the evaluator's outputs (empty when the cell failed)
    and ``error`` the name and message of the domain error, if any.
    """

    i: int
    j: int
    coord1: float
    coord2: float
    values: Mapping[str, object]
    error: str | None


def resolve_workers(workers: int | None) -> int:
    """Determine the worker count: argument, MTPHASE_WORKERS, or CPU count."""
    if workers is not None:
        return max(int(workers), 1)
    env = os.environ.get("MTPHASE_WORKERS")
    if env is not None:
        try:
            return max(int(env), 1)
        except ValueError:
            raise ConfigError(
                f"MTPHASE_WORKERS must be an integer, got {env!r}"
            ) from None
    return os.cpu_count() or 1


def region_evaluator(p: ModelParams) -> dict[str, object]:
    """Stability-region classification of one parameter point."""
    report = classify_region(p)
    return {
        "region": report.region.value,
        "sigma11_re": report.sigma11.real,
        "sigma11_im": report.sigma11.imag,
        "cond2_ok": report.cond2_ok,
    }


_WORKER_PLANE: ParameterPlane | None = None
_WORKER_EVALUATOR: Callable[[ModelParams], Mapping[str, object]] | None = None


def _init_worker(plane: ParameterPlane, evaluator) -> None:
    global _WORKER_PLANE, _WORKER_EVALUATOR
    _WORKER_PLANE = plane
    _WORKER_EVALUATOR = evaluator


def _run_cell(task: tuple[int, int, float, float]) -> SweepCell:
    i, j, s, t = task
    try:
        p = _WORKER_PLANE.at(s, t)
        values = dict(_WORKER_EVALUATOR(p))
        error = None
    except MTPhaseError as exc:
        values = {}
        error = f"{type(exc).__name__}: {exc}"
    return SweepCell(i=i, j=j, coord1=s, coord2=t, values=values, error=error)


def sweep(
    plane: ParameterPlane,
    resolution: tuple[int, int],
    evaluator: Callable[[ModelParams], Mapping[str, object]] = region_evaluator,
    workers: int | None = None,
) -> list[SweepCell]:
    """Evaluate ``evaluator`` on a ``resolution``-point grid over ``plane``.

    Parameters
    ----------
    plane : ParameterPlane
        The two-axis slice to sample.
    resolution : tuple of int
        Number of grid points along each axis; the grid includes both range
        endpoints (a single point falls on the lower end).
    evaluator : callable
        Module-level callable mapping a parameter point to a column → value
        mapping.  Must be importable (picklable) so it can cross process
        boundaries.
    workers : int, optional
        Pool size; defaults to ``MTPHASE_WORKERS`` or the CPU count.  With
        one worker (or a single cell) everything runs in-process.

    Returns
    -------
    list of SweepCell
        Cells in row-major grid order, independent of worker count.
    """
    n1, n2 = resolution
    if n1 <= 0 or n2 <= 0:
        raise ValueError(f"resolution must be positive, got {resolution!r}")
    coords1 = np.linspace(plane.range1[0], plane.range1[1], n1) if n1 > 1 else [
        plane.range1[0]
    ]
    coords2 = np.linspace(plane.range2[0], plane.range2[1], n2) if n2 > 1 else [
        plane.range2[0]
    ]
    tasks = [
        (i, j, float(coords1[i]), float(coords2[j]))
        for i in range(n1)
        for j in range(n2)
    ]

    n_workers = min(resolve_workers(workers), len(tasks))
    if n_workers <= 1:
        _init_worker(plane, evaluator)
        try:
            return [_run_cell(task) for task in tasks]
        finally:
            _init_worker(None, None)

    chunk = max(len(tasks) // (4 * n_workers), 1)
    with Pool(
        processes=n_workers, initializer=_init_worker, initargs=(plane, evaluator)
    ) as pool:
        return pool.map(_run_cell, tasks, chunksize=chunk)

"""Parameter-plane sweeps: worker resolution, ordering, error capture."""

from __future__ import annotations

import numpy as np
import pytest

from mtphase import (
    ConfigError,
    ModelParams,
    NoSignChange,
    ParameterPlane,
    region_evaluator,
    resolve_workers,
    sweep,
)


@pytest.fixture()
def small_plane(canonical_params):
    return ParameterPlane(
        base=canonical_params,
        axis1={"d1": 1.0, "d2": 1.0, "d3": 1.0},
        range1=(0.08, 0.4),
        axis2="k7",
        range2=(1.5, 2.5),
        )


def test_resolve_workers_precedence(monkeypatch):
    monkeypatch.setenv("MTPHASE_WORKERS", "3")
    assert resolve_workers(5) == 5
    assert resolve_workers(None) == 3
    monkeypatch.delenv("MTPHASE_WORKERS")
    assert resolve_workers(None) >= 1
    monkeypatch.setenv("MTPHASE_WORKERS", "many")
    with pytest.raises(ConfigError):
        resolve_workers(None)


def test_sweep_is_row_major_on_the_grid(small_plane):
    cells = sweep(small_plane, (3, 2), workers=1)
    assert len(cells) == 6
    coords = [(c.i, c.j) for c in cells]
    assert coords == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
    s_vals = np.unique([c.coord1 for c in cells])
    t_vals = np.unique([c.coord2 for c in cells])
    assert np.allclose(s_vals, np.linspace(0.08, 0.4, 3))
    assert np.allclose(t_vals, np.linspace(1.5, 2.5, 2))


def test_sweep_single_point_resolution(small_plane):
    cells = sweep(small_plane, (1, 1), workers=1)
    assert len(cells) == 1
    assert cells[0].coord1 == pytest.approx(0.08)
    assert cells[0].coord2 == pytest.approx(1.5)


def test_sweep_results_independent_of_worker_count(small_plane):
    serial = sweep(small_plane, (4, 3), workers=1)
    two = sweep(small_plane, (4, 3), workers=2)
    three = sweep(small_plane, (4, 3), workers=3)
    assert serial == two == three


def test_sweep_classifies_both_regions(small_plane):
    cells = sweep(small_plane, (4, 3), workers=1)
    regions = {c.values["region"] for c in cells if c.error is None}
    assert "stable" in regions and "unstable" in regions
    for c in cells:
        assert c.error is None
        assert isinstance(c.values["sigma11_re"], float)
        assert isinstance(c.values["cond2_ok"], bool)


def _fragile_evaluator(p: ModelParams) -> dict[str, object]:
    if p.k7 > 2.0:
        raise NoSignChange(f"synthetic failure at k7 = {p.k7}")
    return {"ok": True}


def test_sweep_captures_evaluator_errors(small_plane):
    for workers in (1, 2):
        cells = sweep(
            small_plane, (2, 2), evaluator=_fragile_evaluator, workers=workers
        )
        by_coord = {(c.i, c.j): c for c in cells}
        assert by_coord[(0, 0)].error is None
        assert by_coord[(0, 1)].error is not None
        assert "NoSignChange" in by_coord[(0, 1)].error
        assert by_coord[(0, 1)].values == {}

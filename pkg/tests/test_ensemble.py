import math

import numpy as np
import pytest
from pydantic import ValidationError

from app import krylov
from app.ensemble import (
    STATUS_BREAKDOWN,
    STATUS_DEGENERATE,
    STATUS_OK,
    EnsembleRecord,
    RealizationResult,
    SweepConfig,
    aggregate,
    run_realization,
    run_sweep,
    spearman_trend,
)
from app.krylov import FullGramSchmidt, ThreeTermRecurrence, run_krylov
from app.lattice import PotentialField


def result(realization, y, l_lower, status=STATUS_OK, c=0.5):
    return RealizationResult(c, realization, y, l_lower, 1.0, 0.0, status == STATUS_BREAKDOWN, 0.0, status, 40)


def test_sweep_config_defaults():
    sweep = SweepConfig(c_values=[1.0, 0.2, 1.0])
    assert sweep.c_values == [0.2, 1.0]
    assert sweep.realizations == 20
    assert sweep.n == 400
    assert sweep.effective_tail_start == 200
    assert sweep.orthogonalization_mode() == ThreeTermRecurrence(reorthogonalize_every=5, window=sweep.window)
    assert len(sweep.gamma_grid()) == 39


@pytest.mark.parametrize(
    "overrides",
    [
        {"c_values": []},
        {"c_values": [-0.1]},
        {"c_values": [0.5], "realizations": 0},
        {"c_values": [0.5], "mode": "arnoldi"},
        {"c_values": [0.5], "gamma_min": 1.0, "gamma_max": 0.5},
        {"c_values": [0.5], "n": 10, "tail_start": 9},
    ],
)
def test_sweep_config_rejects_invalid_values(overrides):
    with pytest.raises(ValidationError):
        SweepConfig(**overrides)


def test_minima_are_independent():
    records = aggregate(0.5, [result(0, 0.4, 0.1), result(1, 0.2, 0.3), result(2, 0.3, 0.05)])
    assert records.min_y == 0.2 and records.argmin_y == 1
    assert records.min_l == 0.05 and records.argmin_l == 2
    assert records.valid


def test_ties_go_to_the_smallest_realization():
    record = aggregate(0.5, [result(3, 0.2, 0.1), result(1, 0.2, 0.1), result(2, 0.5, 0.5)])
    assert record.argmin_y == 1
    assert record.argmin_l == 1


def test_degenerate_realizations_are_skipped():
    nan = math.nan
    record = aggregate(0.5, [result(0, nan, nan, STATUS_DEGENERATE), result(1, 0.6, 0.2, STATUS_BREAKDOWN)])
    assert record.argmin_y == 1
    assert len(record.realizations) == 2


def test_all_degenerate_record_is_invalid():
    nan = math.nan
    record = aggregate(0.5, [result(0, nan, nan, STATUS_DEGENERATE)])
    assert not record.valid
    assert math.isnan(record.min_y)
    assert record.argmin_y is None


def test_run_realization_without_disorder():
    sweep = SweepConfig(c_values=[0.0], realizations=1, n=40)
    outcome = run_realization(sweep, 0.0, 0)
    assert outcome.status == STATUS_OK
    assert outcome.steps == 40
    assert outcome.l_lower <= 1.0
    assert outcome.gamma in sweep.gamma_grid()


def test_realizations_of_clean_lattice_are_identical():
    sweep = SweepConfig(c_values=[0.0], realizations=3, n=30)
    (record,) = run_sweep(sweep)
    ys = {r.y for r in record.realizations}
    assert len(ys) == 1
    assert record.argmin_y == 0
    assert record.min_y == record.realizations[0].y


def test_sweep_is_independent_of_thread_count():
    sweep = SweepConfig(c_values=[0.0, 0.6, 1.4], realizations=3, n=30, seed=4)
    serial = run_sweep(sweep, threads=1)
    parallel = run_sweep(sweep, threads=2)
    assert [r.c for r in serial] == [0.0, 0.6, 1.4]
    assert serial == parallel


def test_breakdown_keeps_the_last_distance(monkeypatch):
    last = run_krylov(PotentialField(c=0.5, seed=1), 5, FullGramSchmidt()).distances[-1]
    original = krylov.stencil
    calls = []

    def stencil_until_six(values, potential, diagonal):
        calls.append(1)
        out = original(values, potential, diagonal)
        return out if len(calls) <= 5 else np.zeros_like(out)

    monkeypatch.setattr(krylov, "stencil", stencil_until_six)
    sweep = SweepConfig(c_values=[0.5], realizations=1, n=20, mode="gram-schmidt")
    (record,) = run_sweep(sweep, threads=1)
    (outcome,) = record.realizations
    assert outcome.status == STATUS_BREAKDOWN
    assert outcome.breakdown and outcome.steps == 5
    assert math.isfinite(outcome.y)
    assert record.valid and record.min_y == outcome.y
    assert outcome.y == pytest.approx(last, abs=1e-12)
    assert outcome.l_lower == pytest.approx(last, abs=1e-12)


def test_degenerate_runs_flow_through_the_sweep(monkeypatch):
    monkeypatch.setattr(krylov, "DEGENERACY_SLACK", -1.0)
    sweep = SweepConfig(c_values=[0.0, 1.0], realizations=2, n=20)
    records = run_sweep(sweep, threads=1)
    for record in records:
        assert {r.status for r in record.realizations} == {STATUS_DEGENERATE}
        assert not record.valid
        assert math.isnan(record.min_y) and record.argmin_y is None
    assert math.isnan(spearman_trend(records))


def test_more_realizations_never_raise_the_minima():
    few = run_sweep(SweepConfig(c_values=[0.8, 1.6], realizations=2, n=30, seed=6))
    many = run_sweep(SweepConfig(c_values=[0.8, 1.6], realizations=4, n=30, seed=6))
    for small, large in zip(few, many):
        assert large.min_y <= small.min_y
        assert large.min_l <= small.min_l
        assert large.realizations[:2] == small.realizations


def test_spearman_trend():
    def record(c, y):
        return EnsembleRecord(c, y, y, 0, 0, ())

    assert spearman_trend([record(0.2, 0.9), record(0.4, 0.7), record(0.6, 0.3)]) == pytest.approx(-1.0)
    assert math.isnan(spearman_trend([record(0.2, 0.9)]))


@pytest.mark.slow
def test_weak_disorder_keeps_larger_distance():
    sweep = SweepConfig(c_values=[round(0.2 * i, 10) for i in range(1, 16)], realizations=20, n=400)
    records = run_sweep(sweep, threads=4)
    by_c = {r.c: r for r in records}
    assert by_c[0.2].min_y > by_c[3.0].min_y
    assert all(by_c[c].min_l > 0 for c in (0.2, 0.4, 0.6))
    assert spearman_trend(records) <= -0.8

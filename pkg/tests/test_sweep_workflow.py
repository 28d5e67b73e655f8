"""Tests for the delta sweep workflow and its report.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import math

import pytest

from models.run_config import RunConfig
from utils.csv_writer import read_csv, read_manifest_hash
from utils.errors import ConfigurationError
from workflows.sweep_workflow import (
    REPORT_FIELDS,
    DeltaSweepWorkflow,
    merge_report,
    slopes_row,
    write_sweep_outputs,
)


@pytest.fixture(scope="module")
def sweep(ode):
    """Three-delta sweep on the small test grid, run in parallel."""
    run_config = RunConfig(m=2.0, deltas=[0.2, 0.15, 0.1], half_width=4, nodes_per_half=64, workers=2)
    workflow = DeltaSweepWorkflow(run_config, ode=ode)
    return workflow, workflow.process_all()


def test_results_in_input_order(sweep):
    """Parallel results come back in the order of the deltas."""
    _, results = sweep
    assert [r.delta for r in results] == [0.2, 0.15, 0.1]
    assert all(r.success for r in results)
    assert [s.stage_name for s in results[0].stages] == [
        "solve", "hat_comparison", "kernel_scan", "verdict_stability", "rescale", "error_terms"]


def test_report_rows(sweep):
    """Every stage contributes its fields."""
    workflow, results = sweep
    rows = [workflow.report_row(r) for r in results]
    assert all(row["kernel_count"] == 1 for row in rows)
    assert all(row["kind"] == "delta" for row in rows)
    assert all(row["even_invertible"] and row["verdict_stable"] for row in rows)
    assert all(row["widened_kernel_count"] == 1 for row in rows)
    assert all(row["even_min_sv"] > 0.1 * row["odd_second_sv"] for row in rows)
    assert rows[2]["sigma"] > rows[0]["sigma"]
    assert set(rows[0]) <= set(REPORT_FIELDS)


def test_write_outputs(sweep, tmp_path):
    """Report with a slope row, profile data and the non-degeneracy table."""
    workflow, results = sweep
    written = write_sweep_outputs(workflow, results, tmp_path / "sweep.csv", "h" * 64)
    assert set(written) == {"report", "profiles", "nondegeneracy"}
    assert read_manifest_hash(written["report"]) == "h" * 64
    report = read_csv(written["report"])
    assert list(report["kind"]) == ["delta", "delta", "delta", "slope"]
    assert math.isfinite(report["err_R_inf"].iloc[3])
    profiles = read_csv(written["profiles"])
    assert {"x", "V_d0.2", "R_d0.1", "V0", "R0"} <= set(profiles.columns)
    assert len(read_csv(written["nondegeneracy"])) == 3


def test_append_merges_rows(sweep, tmp_path):
    """Appending replaces rows with equal delta and keeps the others."""
    workflow, results = sweep
    path = tmp_path / "sweep.csv"
    write_sweep_outputs(workflow, results[:2], path, "a" * 64)
    write_sweep_outputs(workflow, results[1:], path, "b" * 64, append=True)
    report = read_csv(path)
    assert list(report["delta"].iloc[:3]) == [0.2, 0.15, 0.1]


def test_merge_refuses_other_grid(sweep, tmp_path):
    """Rows with a different h cannot be merged."""
    workflow, results = sweep
    path = tmp_path / "sweep.csv"
    write_sweep_outputs(workflow, results[:1], path, "a" * 64)
    other = dict(workflow.report_row(results[1]), h=workflow.grid.h / 2.0)
    with pytest.raises(ConfigurationError):
        merge_report(path, [other])


def test_failed_stage_is_captured(ode):
    """An exception inside a stage becomes a failed StageResult."""
    workflow = DeltaSweepWorkflow(RunConfig(half_width=4, nodes_per_half=64), ode=ode)

    def broken():
        raise ValueError("boom")

    stage = workflow._run_stage("broken", broken)
    assert not stage.success
    assert stage.error == "boom"


def test_failed_solve_leaves_fields_empty(ode):
    """A delta whose solve fails reports only its identifying fields."""
    run_config = RunConfig(deltas=[0.2], half_width=4, nodes_per_half=64, max_iter=2, workers=1)
    workflow = DeltaSweepWorkflow(run_config, ode=ode)
    [result] = workflow.process_all()
    assert not result.success
    assert len(result.stages) == 1
    row = workflow.report_row(result)
    assert "sigma" not in row and row["delta"] == 0.2


def test_empty_sweep(ode):
    """No deltas, no sweep."""
    workflow = DeltaSweepWorkflow(RunConfig(half_width=4, nodes_per_half=64), ode=ode)
    with pytest.raises(ConfigurationError):
        workflow.process_all(deltas=[])


def test_slopes_row():
    """Log-log slopes of power laws; missing values are skipped."""
    rows = [
        {"delta": 0.4, "err_R_inf": 0.16, "c_e": -0.04},
        {"delta": 0.2, "err_R_inf": 0.04, "c_e": -0.02},
        {"delta": 0.1, "err_R_inf": 0.01, "c_e": None},
    ]
    slope = slopes_row(rows)
    assert slope["kind"] == "slope"
    assert slope["err_R_inf"] == pytest.approx(2.0)
    assert slope["c_e"] == pytest.approx(1.0)
    assert "E_int0" not in slope


@pytest.mark.slow
def test_default_sweep_waves(default_sweep):
    """eps >= delta and the potential energy grows strictly as delta decreases."""
    _, results = default_sweep
    assert all(r.success for r in results)
    waves = [r.wave for r in results]
    assert all(w.eps >= w.delta for w in waves)
    assert all(w.residual <= 1e-8 for w in waves)
    energies = [w.p for w in waves]
    assert all(later > earlier for earlier, later in zip(energies, energies[1:]))


@pytest.mark.slow
def test_default_sweep_hat_rates(default_sweep):
    """Profile errors against the hat profiles decay with slope >= 1.5."""
    workflow, results = default_sweep
    rows = [workflow.report_row(r) for r in results]
    slope = slopes_row(rows)
    assert slope["err_R_inf"] >= 1.5
    assert slope["err_V_inf"] >= 1.5
    for name in ("err_mu_scaled", "err_sigma_scaled"):
        values = [row[name] for row in rows]
        assert all(later < earlier for earlier, later in zip(values, values[1:])), name


@pytest.mark.slow
def test_default_sweep_kernel(default_sweep):
    """One kernel direction with gap >= 100, invertible evens and a stable verdict at every delta."""
    workflow, results = default_sweep
    for row in (workflow.report_row(r) for r in results):
        assert row["kernel_count"] == 1
        assert row["sv_ratio"] >= 100.0
        assert row["even_invertible"]
        assert row["even_min_sv"] > 0.1 * row["odd_second_sv"]
        assert row["verdict_stable"]
        assert row["widened_kernel_count"] == 1


@pytest.mark.slow
def test_default_sweep_rescaled_collapse(default_sweep):
    """|c_e| slope >= 1.5, shrinking sup residual and a bounded Z_inf."""
    workflow, results = default_sweep
    rows = [workflow.report_row(r) for r in results]
    slope = slopes_row(rows)
    assert slope["c_e"] >= 1.5
    residuals = [row["sup_residual"] for row in rows]
    assert all(later < earlier for earlier, later in zip(residuals, residuals[1:]))
    z = [row["Z_inf"] for row in rows]
    assert max(z) / min(z) <= 2.0


@pytest.mark.slow
def test_default_sweep_error_terms(default_sweep):
    """Weighted error integrals decay with orders >= m - 0.5 and >= m - 1.5."""
    workflow, results = default_sweep
    slope = slopes_row([workflow.report_row(r) for r in results])
    assert slope["E_int0"] >= 1.5
    assert slope["E_int1"] >= 0.5


@pytest.mark.slow
def test_default_sweep_nondegeneracy(default_sweep):
    """dsigma/ddelta < 0 and dH/ddelta significant at the interior deltas."""
    workflow, results = default_sweep
    table = workflow.nondegeneracy_table(results)
    interior = table.interior_rows()
    assert len(interior) == 2
    for row in interior:
        assert row.dsigma_ddelta < 0.0
        assert abs(row.dH_ddelta) >= 10.0 * row.dH_err
        assert row.dH_significant

"""Delta Sweep Workflow.

This workflow runs every per-delta stage (wave solve, comparison with the
high-energy approximation, kernel scan with parity restrictions, verdict
stability, rescaled fit, error-term integrals) and assembles the convergence
report, the profile figure data and the non-degeneracy table.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from models.limit_ode import LimitOde
from models.run_config import RunConfig
from models.wave_solution import NondegeneracyTable, WaveSolution
from solvers.limit_profiles import solve_limit_ode
from solvers.linearization import a_crit, build_operator_spec, kernel_scan, kernel_verdict_stability
from solvers.rescaled_analysis import asymptotic_ode_residuals, fit_order, rescale_and_fit
from solvers.wave_solver import compare_with_hat_profiles, limit_profiles, nondegeneracy, solve_wave
from utils.csv_writer import read_csv, write_columns_csv, write_rows_csv
from utils.errors import ConfigurationError

REPORT_FIELDS = [
    "kind", "m", "X", "h", "delta", "eps", "mu", "sigma",
    "err_R_inf", "err_V_inf", "err_mu_scaled", "err_sigma_scaled",
    "c_e", "c_o", "kernel_count", "sv_ratio", "even_min_sv", "odd_second_sv", "even_invertible",
    "verdict_stable", "widened_kernel_count",
    "sup_residual", "fp_residual", "E_int0", "E_int1", "Z_inf", "Z_inf_delta",
]

# Columns whose log-log slope against delta goes into the slopes row.
SLOPE_FIELDS = ["err_R_inf", "err_V_inf", "c_e", "sup_residual", "E_int0", "E_int1"]


@dataclass
class StageResult:
    """Result from a processing stage."""
    stage_name: str
    success: bool
    message: str
    data: Any = None
    error: Optional[str] = None
    duration_seconds: float = 0.0


@dataclass
class DeltaResult:
    """All stage results for one delta."""
    delta: float
    success: bool
    stages: List[StageResult] = field(default_factory=list)
    total_duration_seconds: float = 0.0

    def get_stage_result(self, stage_name: str) -> Optional[StageResult]:
        """Get result for a specific stage."""
        for stage in self.stages:
            if stage.stage_name == stage_name:
                return stage
        return None

    def stage_data(self, stage_name: str) -> Any:
        stage = self.get_stage_result(stage_name)
        return stage.data if stage is not None and stage.success else None

    @property
    def wave(self) -> Optional[WaveSolution]:
        return self.stage_data("solve")


class DeltaSweepWorkflow:
    """Workflow running the per-delta analysis over a sweep.

    Attributes:
        run_config: Resolved run configuration.
        ode: Limit ODE table shared by all deltas.
        logger: Logger instance.
    """

    def __init__(self, run_config: RunConfig, ode: Optional[LimitOde] = None):
        self.logger = logging.getLogger(__name__)
        self.run_config = run_config
        self.params = run_config.params
        self.grid = run_config.grid
        self.ode = ode
        self.logger.info(
            f"Initialized DeltaSweepWorkflow for m={run_config.m}, X={self.grid.half_width}, h={self.grid.h}"
        )

    def _limit_ode(self) -> LimitOde:
        if self.ode is None:
            self.ode = solve_limit_ode(self.run_config.m, self.run_config.xbar_max, self.run_config.ode_step)
        return self.ode

    def _run_stage(self, stage_name: str, func: Callable, *args, **kwargs) -> StageResult:
        """Run a processing stage with timing and error handling."""
        self.logger.info(f"Starting stage: {stage_name}")
        start_time = time.time()

        try:
            result = func(*args, **kwargs)
            duration = time.time() - start_time
            return StageResult(
                stage_name=stage_name,
                success=True,
                message=f"{stage_name} completed successfully",
                data=result,
                duration_seconds=duration,
            )
        except Exception as e:
            duration = time.time() - start_time
            self.logger.error(f"{stage_name} failed: {e}")
            return StageResult(
                stage_name=stage_name,
                success=False,
                message=f"{stage_name} failed",
                error=str(e),
                duration_seconds=duration,
            )

    def _kernel_stage(self, wave: WaveSolution):
        a_c = a_crit(wave.speed)
        spec = build_operator_spec(wave, self.params, a=self.run_config.resolve_weight(a_c))
        return kernel_scan(spec)

    def process_delta(self, delta: float) -> DeltaResult:
        """Run all stages for one delta; later stages are skipped once one fails.

        Stages: solve, hat_comparison, kernel_scan, verdict_stability, rescale, error_terms.
        """
        start_time = time.time()
        ode = self._limit_ode()
        stages: List[StageResult] = []

        solve = self._run_stage("solve", solve_wave, self.params, delta, self.grid,
                                self.run_config.tol, self.run_config.max_iter)
        stages.append(solve)
        if solve.success:
            wave = solve.data
            stages.append(self._run_stage("hat_comparison", compare_with_hat_profiles, wave, ode))
            kernel = self._run_stage("kernel_scan", self._kernel_stage, wave)
            stages.append(kernel)
            stages.append(self._run_stage("verdict_stability", kernel_verdict_stability, self.params, delta,
                                          self.grid, tol=self.run_config.tol,
                                          max_iter=self.run_config.max_iter, wave=wave))
            if kernel.success and kernel.data.kernel_vector is not None:
                rescaled = self._run_stage("rescale", rescale_and_fit, wave, kernel.data.kernel_vector,
                                           ode, kernel.data.a, self.params, self.run_config.ell_mode)
                stages.append(rescaled)
                if rescaled.success:
                    stages.append(self._run_stage("error_terms", asymptotic_ode_residuals,
                                                  rescaled.data, self.grid.unit_shift))

        total_duration = time.time() - start_time
        success = all(stage.success for stage in stages)
        self.logger.info(f"delta={delta} processed in {total_duration:.2f}s (success: {success})")
        return DeltaResult(delta=delta, success=success, stages=stages,
                           total_duration_seconds=total_duration)

    def process_all(self, deltas: Optional[List[float]] = None,
                    parallel: Optional[bool] = None) -> List[DeltaResult]:
        """Process every delta; results are returned in the order of ``deltas``."""
        deltas = list(self.run_config.deltas if deltas is None else deltas)
        if not deltas:
            raise ConfigurationError("The delta sweep is empty")
        parallel = self.run_config.workers > 1 if parallel is None else parallel

        self.logger.info("=" * 60)
        self.logger.info(f"Delta sweep: {deltas} (parallel: {parallel})")
        self.logger.info("=" * 60)
        self._limit_ode()

        results: Dict[int, DeltaResult] = {}
        if parallel and len(deltas) > 1:
            with ThreadPoolExecutor(max_workers=self.run_config.workers) as executor:
                future_to_index = {executor.submit(self.process_delta, d): i for i, d in enumerate(deltas)}
                for future in as_completed(future_to_index):
                    index = future_to_index[future]
                    results[index] = future.result()
                    self.logger.info(f"  done: delta={deltas[index]}")
        else:
            for i, d in enumerate(deltas):
                results[i] = self.process_delta(d)

        return [results[i] for i in range(len(deltas))]

    def report_row(self, result: DeltaResult) -> Dict[str, Any]:
        """One report row; fields of failed stages stay empty."""
        row: Dict[str, Any] = {"kind": "delta", "m": self.run_config.m, "X": self.grid.half_width,
                               "h": self.grid.h, "delta": result.delta}
        wave = result.wave
        if wave is not None:
            row.update(eps=wave.eps, mu=wave.mu, sigma=wave.sigma)
        hat = result.stage_data("hat_comparison")
        if hat is not None:
            row.update(err_R_inf=hat.err_R_inf, err_V_inf=hat.err_V_inf,
                       err_mu_scaled=hat.err_mu_scaled, err_sigma_scaled=hat.err_sigma_scaled)
        kernel = result.stage_data("kernel_scan")
        if kernel is not None:
            row.update(kernel_count=kernel.kernel_count, sv_ratio=kernel.gap_ratio,
                       even_min_sv=kernel.even_min_sv, odd_second_sv=kernel.odd_second_sv,
                       even_invertible=kernel.even_invertible)
        verdict = result.stage_data("verdict_stability")
        if verdict is not None:
            row.update(verdict_stable=verdict.stable, widened_kernel_count=verdict.widened_count)
        rk = result.stage_data("rescale")
        if rk is not None:
            row.update(c_e=rk.c_e, c_o=rk.c_o, sup_residual=rk.sup_residual,
                       fp_residual=rk.fp_residual, Z_inf=rk.Z_inf, Z_inf_delta=rk.Z_inf_delta)
        terms = result.stage_data("error_terms")
        if terms is not None:
            row.update(E_int0=terms.int0, E_int1=terms.int1)
        return row

    def nondegeneracy_table(self, results: List[DeltaResult]) -> Optional[NondegeneracyTable]:
        """Non-degeneracy table from the computed waves (None below three waves)."""
        waves = [r.wave for r in results if r.wave is not None]
        if len(waves) < 3:
            self.logger.warning("Fewer than three waves; skipping the non-degeneracy table")
            return None
        return nondegeneracy(self.params, self.grid, [w.delta for w in waves], waves=waves)

    def profile_columns(self, results: List[DeltaResult]) -> Dict[str, np.ndarray]:
        """x, V and R per delta, and the delta -> 0 limits V0, R0."""
        columns: Dict[str, np.ndarray] = {"x": self.grid.x}
        for result in results:
            if result.wave is not None:
                columns[f"V_d{result.delta:g}"] = result.wave.V
                columns[f"R_d{result.delta:g}"] = result.wave.R
        V0, R0 = limit_profiles(self.grid)
        columns["V0"] = V0
        columns["R0"] = R0
        return columns


def slopes_row(rows: List[Dict[str, Any]]) -> Dict[str, Any]:
    """Fitted log-log slopes against delta of the SLOPE_FIELDS (|c_e| for c_e)."""
    slope: Dict[str, Any] = {"kind": "slope"}
    for name in SLOPE_FIELDS:
        pairs = [(r["delta"], abs(r[name])) for r in rows
                 if r.get(name) is not None and not pd.isna(r.get(name))]
        if len(pairs) >= 2:
            d, v = zip(*pairs)
            slope[name] = fit_order(d, v)
    return slope


def merge_report(existing: Path, new_rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Rows of an existing report merged with new rows (new rows win on equal delta).

    Raises:
        ConfigurationError: If m, X or h differ between the report and the new rows.
    """
    frame = read_csv(existing)
    old = frame[frame["kind"] == "delta"]
    for key in ("m", "X", "h"):
        values = set(np.round(old[key].astype(float), 15)) | {round(float(r[key]), 15) for r in new_rows}
        if len(values) > 1:
            raise ConfigurationError(f"Refusing to merge report rows with different {key}: {sorted(values)}")

    merged: Dict[float, Dict[str, Any]] = {}
    for record in old.to_dict(orient="records"):
        merged[round(float(record["delta"]), 12)] = {k: (None if pd.isna(v) else v) for k, v in record.items()}
    for row in new_rows:
        merged[round(float(row["delta"]), 12)] = row
    return [merged[d] for d in sorted(merged, reverse=True)]


def write_sweep_outputs(workflow: DeltaSweepWorkflow, results: List[DeltaResult], report_path: Path,
                        manifest_hash: str, append: bool = False) -> Dict[str, Path]:
    """Write the report (with slopes row), profile data and non-degeneracy table."""
    rows = [workflow.report_row(r) for r in results]
    if append and report_path.exists():
        rows = merge_report(report_path, rows)
    written = {"report": write_rows_csv(report_path, rows + [slopes_row(rows)], REPORT_FIELDS, manifest_hash)}

    m_tag = f"{workflow.run_config.m:g}"
    out_dir = report_path.parent
    written["profiles"] = write_columns_csv(out_dir / f"profiles_m{m_tag}.csv",
                                            workflow.profile_columns(results), manifest_hash)

    table = workflow.nondegeneracy_table(results)
    if table is not None:
        written["nondegeneracy"] = write_rows_csv(
            out_dir / f"nondegeneracy_m{m_tag}.csv",
            [row.model_dump() for row in table.rows],
            list(table.rows[0].model_dump().keys()),
            manifest_hash,
        )
    return written

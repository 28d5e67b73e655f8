"""Subcommand implementations.

Each command takes a resolved ``RunConfig`` plus its command-specific
arguments, writes its artifacts below the output directory and returns the
written paths by name. Errors propagate as ``FpuWaveError`` subclasses and are
mapped onto exit codes by ``cli.main``.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import logging
import time
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from models.potential import PotentialParams
from models.run_config import RunConfig
from models.wave_solution import WaveSolution
from solvers.lattice_sim import simulate_wave
from solvers.limit_profiles import solve_limit_ode, tail_bound
from solvers.linearization import (
    a_crit,
    apply_L,
    build_operator_spec,
    essential_spectrum,
    kernel_scan,
)
from solvers.rescaled_analysis import (
    asymptotic_ode_residuals,
    build_P_tilde,
    lemma4_bounds,
    odd_certificate,
    rescale_and_fit,
    solve_T_pair,
)
from solvers.stencils import discrete_norm
from solvers.wave_solver import second_order_residual, solve_wave, wave_derivatives
from utils.csv_writer import write_columns_csv
from utils.errors import ArtifactWriteError, ConfigurationError, SweepStageFailure
from utils.json_writer import load_wave_json, save_json, save_wave_json
from utils.logging_config import log_performance
from workflows.sweep_workflow import DeltaSweepWorkflow, write_sweep_outputs

logger = logging.getLogger(__name__)


def _tag(value: float) -> str:
    return f"{value:g}"


def _checked(saved: bool, path: Path) -> Path:
    if not saved:
        raise ArtifactWriteError(f"Could not write {path}")
    return path


def _write_manifest(run_config: RunConfig, command: str, out_dir: Path) -> Path:
    path = out_dir / f"manifest_{command}.json"
    _checked(save_json(run_config.manifest(command), path), path)
    return path


def _load_or_solve(run_config: RunConfig, wave_path: Optional[str]) -> WaveSolution:
    """Wave from a prior ``solve`` output, or solved for the first configured delta."""
    if wave_path is not None:
        path = Path(wave_path)
        if not path.is_file():
            raise ConfigurationError(f"Wave file not found: {path}")
        wave = load_wave_json(path)
        if wave is None:
            raise ConfigurationError(f"Wave file is not a valid wave: {path}")
        if abs(wave.m - run_config.m) > 1e-12:
            logger.info("Using m=%s from the wave file", wave.m)
        return wave
    return solve_wave(run_config.params, run_config.deltas[0], run_config.grid,
                      run_config.tol, run_config.max_iter)


def limit_ode_command(run_config: RunConfig) -> Dict[str, Path]:
    """Tabulate the limit ODE and write its samples and constants."""
    start = time.time()
    ode = solve_limit_ode(run_config.m, run_config.xbar_max, run_config.ode_step)
    out_dir = run_config.output_path
    digest = run_config.manifest_hash
    m_tag = _tag(run_config.m)

    summary = ode.summary()
    summary["tail_bound"] = tail_bound(ode)
    summary["dS_end"] = float(ode.dS[-1])
    written = {
        "csv": write_columns_csv(out_dir / f"limit_ode_m{m_tag}.csv",
                                 {"xbar": ode.xbar, "Sbar": ode.S, "Sbar_prime": ode.dS}, digest),
        "json": out_dir / f"limit_ode_m{m_tag}.json",
        "manifest": _write_manifest(run_config, "limit-ode", out_dir),
    }
    _checked(save_json(summary, written["json"], manifest_hash=digest), written["json"])
    log_performance(logger, "limit-ode", time.time() - start)
    return written


def solve_command(run_config: RunConfig) -> Dict[str, Path]:
    """Solve one wave per configured delta and write profiles and scalars."""
    start = time.time()
    out_dir = run_config.output_path
    digest = run_config.manifest_hash
    params = run_config.params
    written: Dict[str, Path] = {}

    for delta in run_config.deltas:
        wave = solve_wave(params, delta, run_config.grid, run_config.tol, run_config.max_iter)
        stem = f"wave_m{_tag(run_config.m)}_d{_tag(delta)}"
        written[f"csv_d{_tag(delta)}"] = write_columns_csv(
            out_dir / f"{stem}.csv", {"x": wave.grid.x, "R": wave.R, "V": wave.V}, digest)
        json_path = out_dir / f"{stem}.json"
        _checked(save_wave_json(wave, json_path, manifest_hash=digest), json_path)
        written[f"json_d{_tag(delta)}"] = json_path
        logger.info("delta=%s: sigma=%.12g, eps=%.12g, residual=%.2e (second-order residual %.2e)",
                    delta, wave.sigma, wave.eps, wave.residual,
                    discrete_norm(second_order_residual(wave, params), wave.grid.h))

    written["manifest"] = _write_manifest(run_config, "solve", out_dir)
    log_performance(logger, "solve", time.time() - start)
    return written


def sweep_command(run_config: RunConfig, report: Optional[str] = None, append: bool = False) -> Dict[str, Path]:
    """Run the delta sweep and write the report, profiles and non-degeneracy table.

    Raises:
        SweepStageFailure: After the outputs are written, if any stage failed.
    """
    start = time.time()
    out_dir = run_config.output_path
    report_path = Path(report) if report else out_dir / f"sweep_m{_tag(run_config.m)}.csv"
    if not report_path.is_absolute() and report:
        report_path = out_dir / report_path

    workflow = DeltaSweepWorkflow(run_config)
    results = workflow.process_all()

    written = write_sweep_outputs(workflow, results, report_path, run_config.manifest_hash, append=append)
    written["manifest"] = _write_manifest(run_config, "sweep", report_path.parent)
    log_performance(logger, "sweep", time.time() - start)

    failed = [r.delta for r in results if not r.success]
    if failed:
        raise SweepStageFailure(failed, report_path)
    return written


def linearize_command(run_config: RunConfig, wave_path: Optional[str] = None,
                      kmax: float = 4.0 * np.pi, nk: int = 801) -> Dict[str, Path]:
    """Essential spectrum curves and near-kernel scan for one wave."""
    wave = _load_or_solve(run_config, wave_path)
    params = PotentialParams(m=wave.m)
    c = wave.speed
    a = run_config.resolve_weight(a_crit(c))

    curves = essential_spectrum(c, a, kmax, nk)
    scan = kernel_scan(build_operator_spec(wave, params, a=a))

    S1, W1 = wave_derivatives(wave)
    first, second = apply_L(build_operator_spec(wave, params, a=0.0), S1, W1)
    h = wave.grid.h
    translation = float(np.hypot(discrete_norm(first, h), discrete_norm(second, h))
                        / np.hypot(discrete_norm(S1, h), discrete_norm(W1, h)))

    out_dir = run_config.output_path
    digest = run_config.manifest_hash
    stem = f"spectrum_m{_tag(wave.m)}_d{_tag(wave.delta)}_a{a:.6g}"
    payload = scan.summary()
    payload.update(a_c=curves.a_c, b_star=curves.b_star, max_real_part=curves.max_real_part,
                   translation_residual=translation, delta=wave.delta)
    written = {
        "csv": write_columns_csv(out_dir / f"{stem}.csv", curves.curve_columns(), digest),
        "json": out_dir / f"{stem}.json",
        "manifest": _write_manifest(run_config, "linearize", out_dir),
    }
    _checked(save_json(payload, written["json"], manifest_hash=digest), written["json"])
    return written


def rescale_command(run_config: RunConfig, wave_path: str) -> Dict[str, Path]:
    """Rescaled kernel fit, T pair diagnostics and error terms for a saved wave."""
    wave = _load_or_solve(run_config, wave_path)
    params = PotentialParams(m=wave.m)
    ode = solve_limit_ode(wave.m, run_config.xbar_max, run_config.ode_step)

    a = run_config.resolve_weight(a_crit(wave.speed))
    scan = kernel_scan(build_operator_spec(wave, params, a=a), with_parity=False)
    if scan.kernel_vector is None:
        raise ConfigurationError("Kernel scan returned no kernel vector")
    rk = rescale_and_fit(wave, scan.kernel_vector, ode, a, params, run_config.ell_mode)
    terms = asymptotic_ode_residuals(rk, wave.grid.unit_shift)
    pair = solve_T_pair(ode, rk.xt)

    out_dir = run_config.output_path
    digest = run_config.manifest_hash
    stem = f"rescaled_m{_tag(wave.m)}_d{_tag(wave.delta)}"
    payload = rk.summary()
    payload.update(
        E_int0=terms.int0,
        E_int1=terms.int1,
        sup_E0=terms.sup_E0,
        sup_Eplus=terms.sup_Eplus,
        odd_certificate=odd_certificate(ode),
        P_tilde_at_zero=float(build_P_tilde(ode, np.zeros(1))[0]),
        wronskian=pair.wronskian,
        wronskian_spread=pair.wronskian_spread,
        limit_slope=pair.limit_slope,
        even_affine_bound=pair.even_affine_bound,
        even_slope_bound=pair.even_slope_bound,
        odd_slope_bound=pair.odd_slope_bound,
        kernel_count=scan.kernel_count,
    )
    written = {
        "csv": write_columns_csv(out_dir / f"{stem}.csv", rk.columns(), digest),
        "json": out_dir / f"{stem}.json",
        "manifest": _write_manifest(run_config, "rescale", out_dir),
    }
    _checked(save_json(payload, written["json"], manifest_hash=digest), written["json"])
    return written


def simulate_command(run_config: RunConfig, wave_path: Optional[str] = None) -> Dict[str, Path]:
    """Lattice run of a wave over the configured number of transits."""
    wave = _load_or_solve(run_config, wave_path)
    params = PotentialParams(m=wave.m)
    T = run_config.transits / wave.speed
    final, summary = simulate_wave(wave, params, transits=run_config.transits,
                                   dt_fraction=run_config.dt_fraction, snapshot_times=[0.5 * T])

    out_dir = run_config.output_path
    digest = run_config.manifest_hash
    written = {}
    for snap in summary.snapshots + [final]:
        name = f"traj_t{snap.t:.6g}"
        written[name] = write_columns_csv(out_dir / f"{name}.csv", snap.snapshot(), digest)
    written["history"] = write_columns_csv(out_dir / "traj_history.csv", summary.history_columns(), digest)
    written["json"] = out_dir / "traj_summary.json"
    payload = dict(summary.summary(), wave_residual=wave.residual, h=wave.grid.h,
                   m=wave.m, delta=wave.delta)
    _checked(save_json(payload, written["json"], manifest_hash=digest), written["json"])
    written["manifest"] = _write_manifest(run_config, "simulate", out_dir)
    return written


def lemma4_command(run_config: RunConfig, a: float = 1.0, spacing: float = 0.05) -> Dict[str, Path]:
    """Empirical Green's function constants across the configured deltas."""
    report = lemma4_bounds(run_config.deltas, run_config.trials, run_config.seed, a=a, ht=spacing)
    out_dir = run_config.output_path
    digest = run_config.manifest_hash
    columns: Dict[str, List[float]] = {"delta": report.deltas}
    columns.update(report.constants)
    columns["commutation_gap"] = report.commutation_gap
    written = {
        "csv": write_columns_csv(out_dir / "lemma4.csv", columns, digest),
        "json": out_dir / "lemma4.json",
        "manifest": _write_manifest(run_config, "lemma4", out_dir),
    }
    payload = {"growth": report.growth, "passed": report.passed, "trials": report.trials, "a": report.a,
               "spacing": spacing}
    _checked(save_json(payload, written["json"], manifest_hash=digest), written["json"])
    if not report.passed:
        logger.warning("Green's function constants grew beyond 2x across delta: %s", report.growth)
    return written

"""Sweep execution and output serialization.

One record is produced per (delta, omega, method, route) tuple, in a fixed
nested order (delta outermost, route innermost), so output is byte
identical regardless of how many worker processes computed it.  Per-point
failures are caught and recorded in the row's status field instead of
aborting the sweep.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bath import BathSpec
from .config import HeatRoute, SweepConfig
from .dynamics import (
    heat_current_trace,
    mean_heat_fd,
    min_eigenvalue,
    propagate,
    steady_residual,
    steady_state,
)
from .generators import total_liouvillian
from .system import SystemSpec, lower_ground_state
from .tcl import MemoryKernelConfig, TclPropagator

CSV_COLUMNS = ("delta", "omega", "method", "route", "heat_absorption_rate",
               "min_eigenvalue_seen", "steady_residual", "status")


@dataclass(frozen=True)
class SpectrumRecord:
    """One sweep point: sampled parameters, measured rate, diagnostics.

    Under the default absorption_positive sign convention the
    heat_absorption_rate column is positive when the bath loses energy to
    the system (cooling); bath_gain_positive flips it.  On failure the
    numeric fields are NaN and status holds the error; otherwise status
    is "ok".
    """

    delta: float
    omega: float
    method: str
    route: str
    heat_absorption_rate: float
    min_eigenvalue_seen: float
    steady_residual: float
    status: str = "ok"


def delta_grid(cfg: SweepConfig) -> np.ndarray:
    """Detuning grid; a single step collapses to delta_min."""
    if cfg.delta_steps == 1:
        return np.asarray([cfg.delta_min])
    return np.linspace(cfg.delta_min, cfg.delta_max, cfg.delta_steps)


def _include_shifts(cfg: SweepConfig, method: str) -> bool | None:
    if method == "bloch_redfield":
        return cfg.include_shifts_bloch_redfield
    return None


def _evaluate_markovian(cfg: SweepConfig, spec: SystemSpec, bath: BathSpec,
                        method: str, route: HeatRoute) -> tuple[float, float, float]:
    gen = total_liouvillian(method, spec, bath,
                            include_shifts=_include_shifts(cfg, method),
                            pairing_tol=cfg.pairing_tol)
    if cfg.mode == "steady":
        if route.kind != "trace_formula":
            raise ValueError("the counting_fd route needs a transient propagation")
        rho = steady_state(gen)
        return heat_current_trace(gen, rho), min_eigenvalue(rho), steady_residual(gen, rho)

    _, states = propagate(gen, lower_ground_state(), cfg.t_end, cfg.dt)
    seen = min_eigenvalue(states)
    residual = steady_residual(gen, states[-1])
    if route.kind == "trace_formula":
        current = heat_current_trace(gen, states[-1])
    else:
        record = mean_heat_fd(method, spec, bath, t_end=cfg.t_end, dt=cfg.dt,
                              u_step=route.u_step, scheme=route.scheme,
                              include_shifts=_include_shifts(cfg, method),
                              pairing_tol=cfg.pairing_tol)
        current = record.current
    return current, seen, residual


def _evaluate_tcl(cfg: SweepConfig, spec: SystemSpec, bath: BathSpec) -> tuple[float, float, float]:
    kernel_cfg = MemoryKernelConfig(t_mem=cfg.tcl_t_mem, dt=cfg.tcl_dt,
                                    quad_points=cfg.tcl_quad_points)
    if cfg.mode == "transient":
        kernel_cfg = MemoryKernelConfig(t_mem=cfg.tcl_t_mem, dt=cfg.dt,
                                        quad_points=cfg.tcl_quad_points)
        horizon = cfg.t_end
    else:
        # no closed-form steady state for the time-dependent generator;
        # propagate to the configured plateau time instead
        horizon = cfg.tcl_t_end
    prop = TclPropagator(spec, bath, kernel_cfg)
    _, states, record = prop.propagate(lower_ground_state(), horizon)
    residual = steady_residual(prop.generator(horizon), states[-1])
    return record.current, min_eigenvalue(states), residual


def evaluate_point(cfg: SweepConfig, delta: float, omega: float, method: str,
                   route: HeatRoute) -> SpectrumRecord:
    """Compute one sweep record; exceptions become an error status."""
    try:
        spec = SystemSpec(e_man=cfg.e_man, delta=delta, omega_rabi=omega,
                          gamma_rad=cfg.gamma_rad)
        bath = BathSpec(alpha=cfg.alpha, omega_c=cfg.omega_c,
                        temperature=cfg.temperature)
        if method == "tcl_oracle":
            current, seen, residual = _evaluate_tcl(cfg, spec, bath)
        else:
            current, seen, residual = _evaluate_markovian(cfg, spec, bath, method, route)
        rate = -current if cfg.sign == "absorption_positive" else current
        return SpectrumRecord(delta=delta, omega=omega, method=method,
                              route=route.kind, heat_absorption_rate=rate,
                              min_eigenvalue_seen=seen, steady_residual=residual)
    except Exception as exc:
        return SpectrumRecord(delta=delta, omega=omega, method=method,
                              route=route.kind, heat_absorption_rate=math.nan,
                              min_eigenvalue_seen=math.nan, steady_residual=math.nan,
                              status=f"error: {type(exc).__name__}: {exc}")


def _evaluate_task(task) -> SpectrumRecord:
    return evaluate_point(*task)


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[SpectrumRecord]:
    """Evaluate the full grid, optionally across worker processes.

    Results are ordered (delta, omega, method, route) regardless of jobs.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, got {jobs}")
    tasks = [
        (cfg, float(delta), float(omega), method, route)
        for delta in delta_grid(cfg)
        for omega in cfg.omega_list
        for method in cfg.methods
        for route in cfg.routes
    ]
    if jobs == 1:
        return [_evaluate_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_task, tasks, chunksize=8))


def format_number(x: float) -> str:
    """Fixed 12-significant-digit decimal rendering shared by csv and json."""
    if x is None or not math.isfinite(x):
        return "nan"
    return format(float(x), ".12g")


def render_csv(records: list[SpectrumRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            format_number(r.delta), format_number(r.omega), r.method, r.route,
            format_number(r.heat_absorption_rate),
            format_number(r.min_eigenvalue_seen),
            format_number(r.steady_residual), r.status,
        ])
    return buf.getvalue()


def _json_number(x: float) -> str:
    if x is None or not math.isfinite(x):
        return "null"
    return format_number(x)


def render_json(records: list[SpectrumRecord]) -> str:
    """JSON array with numbers rendered exactly as in the csv output."""
    import json as _json

    rows = []
    for r in records:
        rows.append(
            "  {"
            + ", ".join([
                f'"delta": {_json_number(r.delta)}',
                f'"omega": {_json_number(r.omega)}',
                f'"method": {_json.dumps(r.method)}',
                f'"route": {_json.dumps(r.route)}',
                f'"heat_absorption_rate": {_json_number(r.heat_absorption_rate)}',
                f'"min_eigenvalue_seen": {_json_number(r.min_eigenvalue_seen)}',
                f'"steady_residual": {_json_number(r.steady_residual)}',
                f'"status": {_json.dumps(r.status)}',
            ])
            + "}"
        )
    return "[\n" + ",\n".join(rows) + "\n]\n"


def write_output(records: list[SpectrumRecord], path: str, fmt: str):
    """Write records to path as 'csv' or 'json'."""
    if fmt == "csv":
        text = render_csv(records)
    elif fmt == "json":
        text = render_json(records)
    else:
        raise ValueError(f"unknown output format {fmt!r}; expected 'csv' or 'json'")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)

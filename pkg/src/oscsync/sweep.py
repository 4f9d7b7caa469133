"""Parameter-grid sweeps over detuning and coupling.

Every grid cell is an independent pure computation: simulate to the
evaluation time plus one indicator window, then extract the requested
metrics.  Cells run in a bounded worker pool (``OSCSYNC_THREADS`` caps the
pool size) and are aggregated by index, so results are bit-identical
regardless of scheduling.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .dynamics import (
    MomentState,
    build_generator,
    dynamical_eigenvalues,
    sample_trajectory,
)
from .errors import DomainError, OscSyncError
from .info import (
    InitialStateSpec,
    gaussian_discord,
    lab_variance_series,
    make_initial,
    mutual_information,
    to_lab_covariance,
)
from .model import (
    BathParams,
    SystemParams,
    Topology,
    diagonalize,
    dissipation_coefficients,
)
from .sync import ObservableSeries, windowed_correlation

__all__ = [
    "METRICS",
    "SweepGrid",
    "CellResult",
    "SweepResult",
    "default_grid",
    "run_sweep",
    "write_sweep_csv",
    "write_sweep_sidecar",
]

METRICS = ("syncAbs", "discord", "mutualInfo", "eigRatio")


@dataclass(frozen=True)
class SweepGrid:
    """Axes and fixed-parameter template for one sweep."""

    omega2_values: tuple
    lambda_values: tuple
    system: SystemParams
    bath: BathParams
    t_eval: float = 300.0
    metrics: tuple = METRICS

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega2_values", tuple(self.omega2_values))
        object.__setattr__(self, "lambda_values", tuple(self.lambda_values))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        unknown = set(self.metrics) - set(METRICS)
        if unknown:
            raise DomainError(f"unknown sweep metrics: {sorted(unknown)}")
        if self.t_eval <= 0:
            raise DomainError(f"t_eval must be positive, got {self.t_eval}")


@dataclass(frozen=True)
class CellResult:
    """Metrics for one (omega2, lambda) cell; NaN where not computed."""

    omega2: float
    lam: float
    status: str = "ok"
    sync_abs: float = math.nan
    discord: float = math.nan
    mutual_info: float = math.nan
    eig_ratio: float = math.nan
    message: str = ""


@dataclass(frozen=True)
class SweepResult:
    """Row-major cell results (omega2 outer, lambda inner) plus provenance."""

    grid: SweepGrid
    cells: tuple
    provenance: dict = field(default_factory=dict)

    def metric_map(self, name: str) -> np.ndarray:
        """2-d array of one metric over (omega2, lambda)."""
        attr = {
            "syncAbs": "sync_abs",
            "discord": "discord",
            "mutualInfo": "mutual_info",
            "eigRatio": "eig_ratio",
        }[name]
        shape = (len(self.grid.omega2_values), len(self.grid.lambda_values))
        return np.array([getattr(c, attr) for c in self.cells]).reshape(shape)


def default_grid(
    system: SystemParams | None = None,
    bath: BathParams | None = None,
    t_eval: float = 300.0,
    metrics=METRICS,
) -> SweepGrid:
    """The standard map axes: omega2 in [1.0, 1.5], lambda in [0.05, 0.9], step 0.025."""
    omega2 = np.round(np.arange(1.0, 1.5 + 1e-9, 0.025), 12)
    lam = np.round(np.arange(0.05, 0.9 + 1e-9, 0.025), 12)
    return SweepGrid(
        omega2_values=tuple(omega2),
        lambda_values=tuple(lam),
        system=system or SystemParams(),
        bath=bath or BathParams(),
        t_eval=t_eval,
        metrics=tuple(metrics),
    )


def _evaluate_cell(task: tuple) -> CellResult:
    (omega1, omega2, lam, bath, initial, t_eval, window, dt_out, metrics) = task
    try:
        sys = SystemParams(omega1=omega1, omega2=omega2, lam=lam)
        basis = diagonalize(sys)
        coeffs = dissipation_coefficients(sys, bath, basis)
        gen = build_generator(basis, coeffs)
        out = {}
        if "eigRatio" in metrics:
            out["eig_ratio"] = dynamical_eigenvalues(gen).ratio
        needs_traj = {"syncAbs", "discord", "mutualInfo"} & set(metrics)
        if needs_traj:
            state0 = make_initial(initial, sys, basis)
            traj = sample_trajectory(gen, state0, t_eval + window, dt_out)
            k_eval = int(round(t_eval / dt_out))
            if "syncAbs" in metrics:
                x1, x2 = lab_variance_series(traj, basis, sys)
                result = windowed_correlation(
                    ObservableSeries(traj.times, x1),
                    ObservableSeries(traj.times, x2),
                    window,
                )
                out["sync_abs"] = float(abs(result.C[k_eval]))
            if {"discord", "mutualInfo"} & set(metrics):
                state = MomentState(
                    first_moments=traj.first_moments[k_eval],
                    second_moments=traj.second_moments[k_eval],
                    time=float(traj.times[k_eval]),
                )
                cov = to_lab_covariance(state, basis, sys)
                if "discord" in metrics:
                    out["discord"] = gaussian_discord(cov)
                if "mutualInfo" in metrics:
                    out["mutual_info"] = mutual_information(cov)
        return CellResult(omega2=omega2, lam=lam, status="ok", **out)
    except OscSyncError as exc:
        return CellResult(
            omega2=omega2, lam=lam, status="error", message=str(exc)
        )


def run_sweep(
    grid: SweepGrid,
    initial: InitialStateSpec,
    topology: Topology | str | None = None,
    window: float = 15.0,
    dt_out: float = 0.1,
    max_workers: int | None = None,
) -> SweepResult:
    """Evaluate every feasible grid cell; infeasible cells are marked skipped.

    The worker count is ``max_workers`` if given, else the
    ``OSCSYNC_THREADS`` environment variable, else the CPU count.  With one
    worker everything runs in-process, which is also the deterministic
    reference path the pooled runs must reproduce exactly.
    """
    bath = grid.bath
    if topology is not None:
        bath = replace(bath, topology=Topology(topology))
    if max_workers is None:
        env = os.environ.get("OSCSYNC_THREADS", "").strip()
        max_workers = int(env) if env else (os.cpu_count() or 1)
    max_workers = max(1, max_workers)

    tasks = []
    slots = []  # (cell index, task index or skipped CellResult)
    cells: list = []
    for omega2 in grid.omega2_values:
        for lam in grid.lambda_values:
            if abs(lam) >= grid.system.omega1 * omega2:
                cells.append(
                    CellResult(
                        omega2=omega2,
                        lam=lam,
                        status="skipped",
                        message="coupling exceeds stability bound "
                        "|lam| < omega1*omega2",
                    )
                )
                continue
            slots.append(len(cells))
            cells.append(None)
            tasks.append(
                (
                    grid.system.omega1,
                    omega2,
                    lam,
                    bath,
                    initial,
                    grid.t_eval,
                    window,
                    dt_out,
                    grid.metrics,
                )
            )
    if max_workers == 1 or len(tasks) <= 1:
        results = [_evaluate_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            chunk = max(1, len(tasks) // (4 * max_workers))
            results = list(pool.map(_evaluate_cell, tasks, chunksize=chunk))
    for slot, res in zip(slots, results):
        cells[slot] = res

    provenance = {
        "version": __version__,
        "omega2_values": list(grid.omega2_values),
        "lambda_values": list(grid.lambda_values),
        "omega1": grid.system.omega1,
        "gamma": bath.gamma,
        "cutoff": bath.cutoff,
        "temperature": bath.temperature,
        "bath": bath.topology.value,
        "initial": asdict(initial),
        "t_eval": grid.t_eval,
        "window": window,
        "dt_out": dt_out,
        "metrics": list(grid.metrics),
    }
    return SweepResult(grid=grid, cells=tuple(cells), provenance=provenance)


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else format(x, ".17g")


def write_sweep_csv(result: SweepResult, path) -> None:
    """CSV per cell; empty fields mark metrics that were not computed."""
    lines = [
        "# omega2 [omega1], lambda [omega1^2], syncAbs [-], discord [nats],"
        " mutualInfo [nats], eigRatio [-], status",
        "omega2,lambda,syncAbs,discord,mutualInfo,eigRatio,status",
    ]
    for c in result.cells:
        lines.append(
            ",".join(
                [
                    format(c.omega2, ".17g"),
                    format(c.lam, ".17g"),
                    _fmt(c.sync_abs),
                    _fmt(c.discord),
                    _fmt(c.mutual_info),
                    _fmt(c.eig_ratio),
                    c.status,
                ]
            )
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_sweep_sidecar(result: SweepResult, path) -> None:
    """JSON provenance snapshot sufficient to reproduce the sweep."""
    with open(path, "w") as fh:
        json.dump(result.provenance, fh, indent=2, sort_keys=True)
        fh.write("\n")

"""Command-line front end: config ingestion, subcommands, serialization.

Subcommands
-----------
simulate
    One trajectory run; writes ``trajectory.csv`` (mode moments plus
    shot-noise-normalized lab variances), ``info.csv`` (mutual information,
    discord, log-negativity, minimum symplectic eigenvalue), ``sync.csv``
    (raw and smoothed indicator), and ``manifest.json``.
eigen
    Dynamical eigenvalues of the drift matrix plus the analytic decay-rate
    clusters and their deviations; writes ``spectrum.json``.
sweep
    Metric maps over the standard (omega2, lambda) grid; writes
    ``sweep.csv`` and ``sweep_manifest.json``.
compare-rwa
    Runs the same configuration under both backends and writes per-backend
    sync/info CSVs plus a ``compare_rwa.json`` deviation summary.

All floats are serialized with 17 significant digits, so identical configs
produce byte-identical outputs.  NaN serializes as an empty CSV field.
Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dynamics import (
    Backend,
    build_generator,
    dynamical_eigenvalues,
    sample_trajectory,
)
from .errors import DomainError, OscSyncError
from .info import (
    InitialStateSpec,
    information_series,
    lab_variance_series,
    make_initial,
)
from .model import (
    BathParams,
    SystemParams,
    Topology,
    diagonalize,
    dissipation_coefficients,
    rwa_rates,
)
from .sweep import (
    METRICS,
    SweepGrid,
    run_sweep,
    write_sweep_csv,
    write_sweep_sidecar,
)
from .sync import ObservableSeries, gaussian_smooth, windowed_correlation

__all__ = ["main", "build_parser", "read_config_file", "resolve_config"]

_DEFAULTS = {
    "omega1": 1.0,
    "omega2": 1.4,
    "lambda": 0.7,
    "gamma": 0.01,
    "cutoff": 50.0,
    "temperature": 10.0,
    "bath": "common",
    "initial": "sq:2:4",
    "t_max": 400.0,
    "dt_out": 0.1,
    "window": 15.0,
    "filter_width": 5.0,
    "backend": "full",
    # sweep-only keys
    "t_eval": 300.0,
    "sweep_omega2": "1.0:1.5:0.025",
    "sweep_lambda": "0.05:0.9:0.025",
    "metrics": ",".join(METRICS),
}
_FLOAT_KEYS = frozenset(
    k for k, v in _DEFAULTS.items() if isinstance(v, float)
)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters for one CLI invocation."""

    system: SystemParams
    bath: BathParams
    initial: InitialStateSpec
    t_max: float
    dt_out: float
    window: float
    filter_width: float
    backend: Backend
    out_dir: str
    # sweep-only settings (grid axes as value tuples)
    t_eval: float = 300.0
    sweep_omega2: tuple = ()
    sweep_lambda: tuple = ()
    metrics: tuple = METRICS

    def __post_init__(self) -> None:
        if self.t_max <= 0:
            raise DomainError(f"t_max must be positive, got {self.t_max}")
        if self.dt_out <= 0:
            raise DomainError(f"dt_out must be positive, got {self.dt_out}")
        if self.window <= 0:
            raise DomainError(f"window must be positive, got {self.window}")
        if self.filter_width <= 0:
            raise DomainError(
                f"filter_width must be positive, got {self.filter_width}"
            )

    def parameters(self) -> dict:
        """Flat snapshot of every resolved parameter, for manifests."""
        return {
            "omega1": self.system.omega1,
            "omega2": self.system.omega2,
            "lambda": self.system.lam,
            "gamma": self.bath.gamma,
            "cutoff": self.bath.cutoff,
            "temperature": self.bath.temperature,
            "bath": self.bath.topology.value,
            "initial": {
                "kind": self.initial.kind,
                "r": self.initial.r,
                "r1": self.initial.r1,
                "r2": self.initial.r2,
            },
            "t_max": self.t_max,
            "dt_out": self.dt_out,
            "window": self.window,
            "filter_width": self.filter_width,
            "backend": self.backend.value,
        }


def read_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` config file ('#' starts a comment).

    Recognized keys: omega1, omega2, lambda, gamma, cutoff, temperature,
    bath, initial, t_max, dt_out, window, filter_width, backend, and the
    sweep-only keys t_eval, sweep_omega2 / sweep_lambda (``start:stop:step``
    ranges), and metrics (comma-separated subset of the sweep metrics).
    Unknown keys are rejected, naming the offender.
    """
    entries = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}"
                )
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _DEFAULTS:
                raise DomainError(
                    f"{path}:{lineno}: unknown config key '{key}'"
                )
            entries[key] = value
    return entries


def _as_float(key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"config key '{key}' needs a number, got {value!r}") from exc


def _parse_axis(key: str, text) -> tuple:
    """Decode a ``start:stop:step`` range into an inclusive value tuple."""
    if isinstance(text, (tuple, list)):
        return tuple(float(v) for v in text)
    parts = str(text).split(":")
    if len(parts) != 3:
        raise DomainError(
            f"config key '{key}' needs 'start:stop:step', got {text!r}"
        )
    start, stop, step = (_as_float(key, p) for p in parts)
    if step <= 0 or stop < start:
        raise DomainError(
            f"config key '{key}' needs stop >= start and step > 0, got {text!r}"
        )
    return tuple(np.round(np.arange(start, stop + 1e-9 * step, step), 12))


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file, and flags (flags win)."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    flag_names = {
        "omega2": "omega2",
        "lambda": "lam",
        "gamma": "gamma",
        "cutoff": "cutoff",
        "temperature": "temperature",
        "bath": "bath",
        "initial": "initial",
        "t_max": "t_max",
        "dt_out": "dt_out",
        "window": "window",
        "backend": "backend",
    }
    for key, attr in flag_names.items():
        value = getattr(args, attr, None)
        if value is not None:
            merged[key] = value
    for key in _FLOAT_KEYS:
        merged[key] = _as_float(key, merged[key])
    backend = str(merged["backend"]).lower()
    if backend not in ("full", "rwa"):
        raise DomainError(f"backend must be 'full' or 'rwa', got {backend!r}")
    return RunConfig(
        system=SystemParams(
            omega1=merged["omega1"],
            omega2=merged["omega2"],
            lam=merged["lambda"],
        ),
        bath=BathParams(
            gamma=merged["gamma"],
            cutoff=merged["cutoff"],
            temperature=merged["temperature"],
            topology=Topology(merged["bath"]),
        ),
        initial=InitialStateSpec.parse(str(merged["initial"])),
        t_max=merged["t_max"],
        dt_out=merged["dt_out"],
        window=merged["window"],
        filter_width=merged["filter_width"],
        backend=Backend(backend),
        out_dir=getattr(args, "out", None) or ".",
        t_eval=merged["t_eval"],
        sweep_omega2=_parse_axis("sweep_omega2", merged["sweep_omega2"]),
        sweep_lambda=_parse_axis("sweep_lambda", merged["sweep_lambda"]),
        metrics=tuple(
            m.strip() for m in str(merged["metrics"]).split(",") if m.strip()
        ),
    )


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else format(float(x), ".17g")


def _write_csv(path: str, comment: str, header: list, columns: list) -> None:
    lines = ["# " + comment, ",".join(header)]
    n = len(columns[0])
    for k in range(n):
        lines.append(",".join(_fmt(col[k]) for col in columns))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _complex_list(mu: np.ndarray) -> list:
    return [{"re": float(z.real), "im": float(z.imag)} for z in mu]


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _base_manifest(cfg: RunConfig, basis, coeffs, spectrum) -> dict:
    return {
        "version": __version__,
        "parameters": cfg.parameters(),
        "normalModes": {
            "theta": basis.theta,
            "omegaMinus": basis.omega_minus,
            "omegaPlus": basis.omega_plus,
            "kappaMinus": basis.kappa_minus,
            "kappaPlus": basis.kappa_plus,
        },
        "gammaTilde": coeffs.gamma_tilde.tolist(),
        "dTilde": coeffs.d_tilde.tolist(),
        "eigenvalues": _complex_list(spectrum.mu),
    }


_TRAJ_HEADER = [
    "t",
    "xx_mm", "xx_pp", "xx_mp",
    "pp_mm", "pp_pp", "pp_mp",
    "xp_mm", "xp_pp", "xp_mp", "xp_pm",
    "mean_xm", "mean_pm", "mean_xp", "mean_pp",
    "x1sq_sn", "x2sq_sn",
]


def cmd_simulate(cfg: RunConfig) -> list:
    basis = diagonalize(cfg.system)
    coeffs = dissipation_coefficients(cfg.system, cfg.bath, basis)
    gen = build_generator(basis, coeffs, backend=cfg.backend)
    state0 = make_initial(cfg.initial, cfg.system, basis)
    traj = sample_trajectory(gen, state0, cfg.t_max, cfg.dt_out)
    x1, x2 = lab_variance_series(traj, basis, cfg.system)
    sync = windowed_correlation(
        ObservableSeries(traj.times, x1),
        ObservableSeries(traj.times, x2),
        cfg.window,
    )
    smooth = gaussian_smooth(sync, cfg.filter_width)
    info = information_series(traj, basis, cfg.system)

    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    traj_path = os.path.join(out, "trajectory.csv")
    info_path = os.path.join(out, "info.csv")
    sync_path = os.path.join(out, "sync.csv")
    manifest_path = os.path.join(out, "manifest.json")

    r = traj.second_moments
    m = traj.first_moments
    _write_csv(
        traj_path,
        "t [1/omega1]; mode moments <Xi Xj>, <Pi Pj>, <{Xi,Pj}> and means"
        " (m=minus, p=plus mode) in natural units; x1sq_sn/x2sq_sn are lab"
        " position variances in shot-noise units",
        _TRAJ_HEADER,
        [traj.times] + [r[:, k] for k in range(10)]
        + [m[:, k] for k in range(4)] + [x1, x2],
    )
    _write_csv(
        info_path,
        "t [1/omega1]; mutualInfo/discord [nats], logNegativity [log-units],"
        " nuMin [shot noise]",
        ["t", "mutualInfo", "discord", "logNegativity", "nuMin"],
        [traj.times, info["mutualInfo"], info["discord"],
         info["logNegativity"], info["nuMin"]],
    )
    _write_csv(
        sync_path,
        "t [1/omega1]; windowed Pearson indicator C over [t, t+window] and"
        " its Gaussian-smoothed envelope; empty fields mark constant-window"
        " gaps",
        ["t", "C", "Csmooth"],
        [sync.times, sync.C, smooth.C],
    )
    manifest = _base_manifest(cfg, basis, coeffs, dynamical_eigenvalues(gen))
    manifest["command"] = "simulate"
    manifest["files"] = [
        os.path.basename(p) for p in (traj_path, info_path, sync_path)
    ]
    _write_json(manifest_path, manifest)
    return [traj_path, info_path, sync_path, manifest_path]


def cmd_eigen(cfg: RunConfig) -> list:
    basis = diagonalize(cfg.system)
    coeffs = dissipation_coefficients(cfg.system, cfg.bath, basis)
    gen = build_generator(basis, coeffs, backend=cfg.backend)
    spectrum = dynamical_eigenvalues(gen)
    rates = rwa_rates(cfg.system, cfg.bath, basis)
    re = spectrum.mu.real

    def nearest_deviation(rate: float) -> float:
        # relative distance from -rate to the closest eigenvalue real part
        if rate <= 0:
            return math.nan
        return float(np.min(np.abs(re + rate)) / rate)

    payload = {
        "version": __version__,
        "parameters": cfg.parameters(),
        "eigenvalues": _complex_list(spectrum.mu),
        "ratio": spectrum.ratio,
        "dominantFrequency": spectrum.dominant_frequency,
        "analyticRates": {
            "minus": rates.minus,
            "plus": rates.plus,
            "mixed": rates.mixed,
        },
        "rateDeviations": {
            "minus": nearest_deviation(rates.minus),
            "plus": nearest_deviation(rates.plus),
            "mixed": nearest_deviation(rates.mixed),
        },
        # eigenvalues with non-negative real part (decoherence-free modes)
        "zeroReCount": int(np.sum(re > -1e-12)),
    }
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "spectrum.json")
    _write_json(path, payload)
    return [path]


def cmd_sweep(cfg: RunConfig, max_workers: int | None = None) -> list:
    grid = SweepGrid(
        omega2_values=cfg.sweep_omega2,
        lambda_values=cfg.sweep_lambda,
        system=cfg.system,
        bath=cfg.bath,
        t_eval=cfg.t_eval,
        metrics=cfg.metrics,
    )
    result = run_sweep(
        grid,
        cfg.initial,
        topology=cfg.bath.topology,
        window=cfg.window,
        dt_out=cfg.dt_out,
        max_workers=max_workers,
    )
    os.makedirs(cfg.out_dir, exist_ok=True)
    csv_path = os.path.join(cfg.out_dir, "sweep.csv")
    sidecar_path = os.path.join(cfg.out_dir, "sweep_manifest.json")
    write_sweep_csv(result, csv_path)
    write_sweep_sidecar(result, sidecar_path)
    return [csv_path, sidecar_path]


def cmd_compare_rwa(cfg: RunConfig) -> list:
    basis = diagonalize(cfg.system)
    coeffs = dissipation_coefficients(cfg.system, cfg.bath, basis)
    state0 = make_initial(cfg.initial, cfg.system, basis)

    series = {}
    for backend in (Backend.FULL, Backend.RWA):
        gen = build_generator(basis, coeffs, backend=backend)
        traj = sample_trajectory(gen, state0, cfg.t_max, cfg.dt_out)
        x1, x2 = lab_variance_series(traj, basis, cfg.system)
        sync = windowed_correlation(
            ObservableSeries(traj.times, x1),
            ObservableSeries(traj.times, x2),
            cfg.window,
        )
        info = information_series(traj, basis, cfg.system)
        series[backend.value] = (traj, sync, info)

    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    paths = []
    for name, (traj, sync, info) in series.items():
        sync_path = os.path.join(out, f"sync_{name}.csv")
        info_path = os.path.join(out, f"info_{name}.csv")
        _write_csv(
            sync_path,
            "t [1/omega1]; windowed indicator C, " + name + " backend",
            ["t", "C"],
            [sync.times, sync.C],
        )
        _write_csv(
            info_path,
            "t [1/omega1]; information measures, " + name + " backend",
            ["t", "mutualInfo", "discord", "logNegativity", "nuMin"],
            [traj.times, info["mutualInfo"], info["discord"],
             info["logNegativity"], info["nuMin"]],
        )
        paths.extend([sync_path, info_path])

    traj_f, sync_f, info_f = series["full"]
    traj_r, sync_r, info_r = series["rwa"]
    c_f, c_r = sync_f.C, sync_r.C
    both = np.isfinite(c_f) & np.isfinite(c_r)
    max_sync_dev = float(np.max(np.abs(c_f[both] - c_r[both]))) if both.any() else math.nan
    disc_scale = float(np.max(np.abs(info_f["discord"])))
    max_disc_dev = float(
        np.max(np.abs(info_f["discord"] - info_r["discord"])) / disc_scale
    ) if disc_scale > 0 else 0.0
    mom_scale = np.maximum(
        np.max(np.abs(traj_f.second_moments), axis=0), 1e-30
    )
    max_mom_dev = float(
        np.max(
            np.abs(traj_f.second_moments - traj_r.second_moments) / mom_scale
        )
    )
    summary = {
        "version": __version__,
        "parameters": cfg.parameters(),
        "maxAbsSyncDeviation": max_sync_dev,
        "maxRelDiscordDeviation": max_disc_dev,
        "maxRelSecondMomentDeviation": max_mom_dev,
        "files": [os.path.basename(p) for p in paths],
    }
    summary_path = os.path.join(out, "compare_rwa.json")
    _write_json(summary_path, summary)
    paths.append(summary_path)
    return paths


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    common.add_argument("--omega2", type=float, help="second oscillator frequency")
    common.add_argument("--lambda", dest="lam", type=float, help="coupling strength")
    common.add_argument("--gamma", type=float, help="damping constant")
    common.add_argument("--cutoff", type=float, help="bath cutoff frequency")
    common.add_argument("--temperature", type=float, help="bath temperature")
    common.add_argument("--bath", choices=["common", "separate"], help="bath topology")
    common.add_argument(
        "--initial", metavar="SPEC", help="vacuum | tms:R | sq:R1:R2"
    )
    common.add_argument("--t-max", dest="t_max", type=float, help="simulation time")
    common.add_argument("--dt-out", dest="dt_out", type=float, help="output spacing")
    common.add_argument("--window", type=float, help="indicator window length")
    common.add_argument("--backend", choices=["full", "rwa"], help="moment equations")
    common.add_argument("--out", metavar="DIR", help="output directory (default .)")

    parser = argparse.ArgumentParser(
        prog="oscsync",
        description="Synchronization and quantum-correlation analysis of two"
        " dissipatively coupled oscillators.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="run one trajectory")
    sub.add_parser("eigen", parents=[common], help="drift-matrix spectrum")
    sub.add_parser("sweep", parents=[common], help="fixed-time metric maps")
    sub.add_parser(
        "compare-rwa", parents=[common], help="full vs RWA backend deviations"
    )
    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "eigen": cmd_eigen,
    "sweep": cmd_sweep,
    "compare-rwa": cmd_compare_rwa,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        paths = _COMMANDS[args.command](cfg)
    except OscSyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

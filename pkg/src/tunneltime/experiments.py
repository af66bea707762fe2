"""Experiment pipelines: barrier-width table, velocity sweeps, single runs.

Configs are flat ``key = value`` text files ('#' comments, comma-separated
lists); every key is optional and defaults to the reference configuration
(kappa0 = 0.5, delta = 10, and the grids below).  Output is deterministic
CSV: unit-annotated header, 10 significant digits, empty cells for
undefined entries (never 0), one note column for divergences and per-row
failures.  Sweep points are independent pure computations and run in a
process pool; assembly stays in grid order so identical configs give
byte-identical files.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .peakfind import PeakSearchConfig, full_report
from .quadrature import QuadratureError, QuadratureSettings
from .spectrum import Spectrum
from .units import DimensionlessParams

EXPERIMENTS = ("table1", "fig1", "fig2", "single")

#: Environment variable overriding the worker-count default.
WORKERS_ENV = "TUNNELTIME_WORKERS"

_TABLE1_LAMBDAS = tuple(float(v) for v in range(50, 501, 50))
_FIG1_LAMBDAS = tuple(float(v) for v in range(20, 201, 20))
# Declared barrier/cutoff ratios V0/E_M for the velocity sweep (the source
# figure does not state them); stored as W = sqrt(V0/E_M).
_FIG1_W = tuple(math.sqrt(r) for r in (1.0, 1.1, 1.3, 1.5))
_FIG2_POINTS = 21

CSV_HEADER = (
    "lambda[k_M*L]",
    "w[sqrt(V0/E_M)]",
    "tau_spm[hbar/E_M]",
    "tau_new[hbar/E_M]",
    "tau_num[hbar/E_M]",
    "v_transit[sqrt(V0/2m)]",
    "ratio_ana_num[%]",
    "panels_max[count]",
    "refine_iters[count]",
    "note",
)

TRACE_HEADER = ("tau[hbar/E_M]", "density[arb]")


class ConfigError(ValueError):
    """Invalid experiment configuration (maps to CLI exit code 1)."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    lambdas: tuple[float, ...]
    w_ratios: tuple[float, ...]
    kappa0: float = 0.5
    delta: float = 10.0
    quadrature: QuadratureSettings = QuadratureSettings()
    peak: PeakSearchConfig = PeakSearchConfig()
    out: Path | None = None
    trace: bool = False
    plot_script: bool = False
    workers: int = 0  # 0 -> available parallelism

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not self.lambdas or not self.w_ratios:
            raise ConfigError("lambda and w_ratio grids must be non-empty")
        if any(lam < 0.0 for lam in self.lambdas):
            raise ConfigError("lambda values must be >= 0")
        if any(w < 1.0 for w in self.w_ratios):
            raise ConfigError("w_ratio values must be >= 1 (pure tunneling)")

    def spectrum(self) -> Spectrum:
        return Spectrum(kappa0=self.kappa0, delta=self.delta)


@dataclass(frozen=True)
class ResultRow:
    """One sweep point; None fields serialize as empty CSV cells."""

    lam: float
    w: float
    tau_spm: float | None
    tau_new: float | None
    tau_num: float | None
    v_transit: float | None
    ratio_ana_num: float | None
    panels_max: int
    refine_iters: int
    note: str = ""


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat key = value config file; '#' starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}: {exc}") from None


def _default_grids(experiment: str) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if experiment == "table1":
        return _TABLE1_LAMBDAS, (1.0,)
    if experiment == "fig1":
        return _FIG1_LAMBDAS, _FIG1_W
    if experiment == "fig2":
        step = 1.0 / (_FIG2_POINTS - 1)
        return (100.0,), tuple(1.0 + i * step for i in range(_FIG2_POINTS))
    return (100.0,), (1.0,)  # single


def build_config(
    experiment: str,
    file_values: dict[str, str] | None = None,
    overrides: dict[str, object] | None = None,
) -> ExperimentConfig:
    """Merge defaults, config-file values and CLI overrides into a config."""
    values = dict(file_values or {})
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val

    def get(key: str, default, conv):
        if key not in values:
            return default
        raw = values.pop(key)
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from None

    def as_bool(raw) -> bool:
        if isinstance(raw, bool):
            return raw
        if str(raw).lower() in ("1", "true", "yes", "on"):
            return True
        if str(raw).lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError("expected a boolean")

    def as_grid(raw) -> tuple[float, ...]:
        if isinstance(raw, (tuple, list)):
            return tuple(float(v) for v in raw)
        return _parse_floats(str(raw))

    def as_opt_float(raw) -> float | None:
        return None if str(raw).strip() == "" else float(raw)

    lam_default, w_default = _default_grids(experiment)
    try:
        lambdas = get("lambda", lam_default, as_grid)
        w_ratios = get("w_ratio", w_default, as_grid)
        kappa0 = get("kappa0", 0.5, float)
        delta = get("delta", 10.0, float)
        quadrature = QuadratureSettings(
            nodes_per_panel=get("nodes_per_panel", 32, int),
            max_panels=get("max_panels", 4096, int),
            rel_tol=get("rel_tol", 1e-8, float),
        )
        peak = PeakSearchConfig(
            tau_min=get("tau_min", None, as_opt_float),
            tau_max=get("tau_max", None, as_opt_float),
            coarse_points=get("coarse_points", 256, int),
            refine_tol=get("refine_tol", 1e-4, float),
        )
        out = get("out", None, lambda raw: Path(raw))
        trace = get("trace", False, as_bool)
        plot_script = get("plot_script", False, as_bool)
        workers = get("workers", 0, int)
        if values:
            raise ConfigError(f"unknown config keys: {sorted(values)}")
        return ExperimentConfig(
            experiment=experiment,
            lambdas=lambdas,
            w_ratios=w_ratios,
            kappa0=kappa0,
            delta=delta,
            quadrature=quadrature,
            peak=peak,
            out=out,
            trace=trace,
            plot_script=plot_script,
            workers=workers,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _worker_count(config: ExperimentConfig, n_tasks: int) -> int:
    workers = config.workers
    if workers <= 0:
        env = os.environ.get(WORKERS_ENV, "")
        workers = int(env) if env.strip() else (os.cpu_count() or 1)
    return max(1, min(workers, n_tasks))


def compute_row(
    lam: float,
    w: float,
    spec: Spectrum,
    peak_config: PeakSearchConfig,
    settings: QuadratureSettings,
) -> ResultRow:
    """Full phase-time report for one (lam, W) grid point.

    Failures are captured in the note column so that sweeps can continue;
    window hits are reported the same way (the result is untrustworthy
    until the caller widens the window).
    """
    try:
        params = DimensionlessParams(W=w, lam=lam)
        report, peak = full_report(spec, params, peak_config, settings)
    except (QuadratureError, ValueError) as exc:
        return ResultRow(
            lam=lam, w=w, tau_spm=None, tau_new=None, tau_num=None,
            v_transit=None, ratio_ana_num=None, panels_max=0, refine_iters=0,
            note=f"failed: {exc}",
        )
    note = ""
    if report.tau_spm is None:
        note = "tau_spm diverges (E_M = V0)"
    if peak.window_hit:
        note = "window_hit: peak at search boundary, widen tau_min/tau_max"
    return ResultRow(
        lam=lam,
        w=w,
        tau_spm=report.tau_spm,
        tau_new=report.tau_new,
        tau_num=report.tau_numeric,
        v_transit=report.v_transit,
        ratio_ana_num=report.ratio_ana_num,
        panels_max=peak.panels_max,
        refine_iters=peak.refine_iters,
        note=note,
    )


def _compute_row_task(task) -> ResultRow:
    return compute_row(*task)


def _run_grid(config: ExperimentConfig, points: list[tuple[float, float]]) -> list[ResultRow]:
    spec = config.spectrum()
    tasks = [(lam, w, spec, config.peak, config.quadrature) for lam, w in points]
    workers = _worker_count(config, len(tasks))
    if workers == 1:
        return [_compute_row_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_compute_row_task, tasks))


def run_table1(config: ExperimentConfig) -> list[ResultRow]:
    """Peak time, transit velocity and analytic/numeric ratio per width."""
    points = [(lam, w) for w in config.w_ratios for lam in config.lambdas]
    return _run_grid(config, points)


def run_fig1(config: ExperimentConfig) -> list[ResultRow]:
    """Transit velocity vs width, one series per barrier/cutoff ratio."""
    points = [(lam, w) for w in config.w_ratios for lam in config.lambdas]
    return _run_grid(config, points)


def run_fig2(config: ExperimentConfig) -> list[ResultRow]:
    """The three phase times vs sqrt(V0/E_M) at fixed width."""
    lam = config.lambdas[0]
    points = [(lam, w) for w in config.w_ratios]
    return _run_grid(config, points)


def run_single(config: ExperimentConfig):
    """One grid point; optionally also the exit-density time series."""
    lam, w = config.lambdas[0], config.w_ratios[0]
    row = compute_row(lam, w, config.spectrum(), config.peak, config.quadrature)
    trace: list[tuple[float, float]] | None = None
    if config.trace:
        trace = density_trace(config, lam, w)
    return row, trace


def density_trace(config: ExperimentConfig, lam: float, w: float) -> list[tuple[float, float]]:
    """Exit density sampled on the coarse search grid (monotone in tau)."""
    from . import wavepacket
    from .peakfind import _resolve_window

    params = DimensionlessParams(W=w, lam=lam)
    tau_lo, tau_hi = _resolve_window(config.peak, params)
    n = config.peak.coarse_points
    step = (tau_hi - tau_lo) / (n - 1)
    spec = config.spectrum()
    return [
        (tau, wavepacket.density_at_exit(spec, params, tau, config.quadrature))
        for tau in (tau_lo + i * step for i in range(n))
    ]


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.10g}"


def write_rows(path: str | Path, rows: list[ResultRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow(
                [
                    _fmt(r.lam),
                    _fmt(r.w),
                    _fmt(r.tau_spm),
                    _fmt(r.tau_new),
                    _fmt(r.tau_num),
                    _fmt(r.v_transit),
                    _fmt(r.ratio_ana_num),
                    str(r.panels_max),
                    str(r.refine_iters),
                    r.note,
                ]
            )


def read_rows(path: str | Path) -> list[ResultRow]:
    """Parse a results CSV back into rows (round-trip of write_rows)."""

    def opt(cell: str) -> float | None:
        return None if cell == "" else float(cell)

    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ConfigError(f"unexpected CSV header in {path}")
        for cells in reader:
            rows.append(
                ResultRow(
                    lam=float(cells[0]),
                    w=float(cells[1]),
                    tau_spm=opt(cells[2]),
                    tau_new=opt(cells[3]),
                    tau_num=opt(cells[4]),
                    v_transit=opt(cells[5]),
                    ratio_ana_num=opt(cells[6]),
                    panels_max=int(cells[7]),
                    refine_iters=int(cells[8]),
                    note=cells[9],
                )
            )
    return rows


def write_trace(path: str | Path, trace: list[tuple[float, float]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for tau, density in trace:
            writer.writerow([f"{tau:.10g}", f"{density:.10g}"])


def trace_path(out: Path) -> Path:
    return out.with_name(out.stem + "_trace" + out.suffix)


def write_plot_script(path: Path, csv_path: Path, experiment: str) -> None:
    """Companion gnuplot text for the emitted CSV (no plotting library linked)."""
    if experiment == "fig2":
        body = (
            f'set datafile separator ","\n'
            f'set xlabel "sqrt(V0/E_M)"\n'
            f'set ylabel "tau [hbar/E_M]"\n'
            f'plot "{csv_path.name}" using 2:3 with lines title "spm", \\\n'
            f'     "" using 2:4 with lines title "new", \\\n'
            f'     "" using 2:5 with points title "num"\n'
        )
    else:
        body = (
            f'set datafile separator ","\n'
            f'set xlabel "k_M L"\n'
            f'set ylabel "v_transit [sqrt(V0/2m)]"\n'
            f'plot "{csv_path.name}" using 1:6 with linespoints title "v_transit"\n'
        )
    path.write_text("# gnuplot script (skip the CSV header with every ::1)\n" + body)


def run_experiment(config: ExperimentConfig):
    """Dispatch by experiment id; returns (rows, trace_or_None)."""
    if config.experiment == "table1":
        return run_table1(config), None
    if config.experiment == "fig1":
        return run_fig1(config), None
    if config.experiment == "fig2":
        return run_fig2(config), None
    row, trace = run_single(config)
    return [row], trace

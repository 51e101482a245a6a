"""Declarative experiment configs, batch runner, parameter sweeps, and
columnar plot-data emission.

Config format: INI sections, one experiment per section. The schema is
strict: unknown keys and missing required keys are rejected with the
section and field named, so a typo fails loudly instead of silently
simulating the wrong controller. Numeric fields are plain floats
(scientific notation accepted); booleans are true/false.

Section keys
------------
controller   kinfty | saturated | obeid | tbg | fixed_sign
  kinfty:     law (concave|convex), rho, lam
  saturated:  law, rho, lam, k_max
  obeid:      epsilon, k_bar
  tbg:        law, rho, lam, t_f, delta
  fixed_sign: k
disturbance  piecewise_vii | sin_two | sinusoid | custom
  sinusoid:   amplitude, omega, phase_rad
  custom:     table_t, table_d (comma-separated floats)
d_bar        declared disturbance bound (required)
s0, h, t_end plant initial condition, step, horizon (required)
u_max        optional actuator limit on |u|
sigma_target optional band radius for convergence analysis
chatter_t0, chatter_t1   optional chattering window (both or neither)
expect_t_conv_max, expect_sigma_max, expect_gain_max_post,
expect_final_inside, expect_escapes_all_reenter,
expect_no_reentry_after_last_escape   optional declared expectations
"""

from __future__ import annotations

import configparser
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from barriersmc import analysis
from barriersmc.controllers import (
    Controller,
    ControllerSpec,
    FixedSign,
    KInfty,
    ObeidTwoPhase,
    SaturatedKInfty,
    TbgIntegral,
    TbgParams,
)
from barriersmc.gains import (
    ConcaveParams,
    ConvexParams,
    PsbParams,
    ultimate_bound,
)
from barriersmc.simkernel import (
    CustomTable,
    DisturbanceSpec,
    PiecewiseVII,
    SimConfig,
    SinTwo,
    Sinusoid,
    SimulationDiverged,
    Trajectory,
    simulate,
)

FLOAT_FMT = "%.17g"  # round-trips doubles exactly

TRAJECTORY_COLUMNS = ("t", "s", "u_commanded", "u_applied", "gain", "d")


class ConfigError(ValueError):
    """Config file failed to parse or validate; message names the spot."""


@dataclass(frozen=True)
class Expectations:
    """Declared pass/fail expectations; all optional."""

    t_conv_max: Optional[float] = None
    sigma_max: Optional[float] = None
    gain_max_post: Optional[float] = None
    final_inside: Optional[bool] = None
    escapes_all_reenter: Optional[bool] = None
    no_reentry_after_last_escape: Optional[bool] = None

    def any_declared(self) -> bool:
        return any(v is not None for v in vars(self).values())


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    controller: ControllerSpec
    disturbance: DisturbanceSpec
    sim: SimConfig
    sigma_target: Optional[float] = None
    chatter_window: Optional[Tuple[float, float]] = None
    expect: Expectations = field(default_factory=Expectations)


# --- config parsing --------------------------------------------------------

_LAWS = {"concave", "convex"}
_CONTROLLER_KEYS = {
    "kinfty": {"law", "rho", "lam"},
    "saturated": {"law", "rho", "lam", "k_max"},
    "obeid": {"epsilon", "k_bar"},
    "tbg": {"law", "rho", "lam", "t_f", "delta"},
    "fixed_sign": {"k"},
}
_DISTURBANCE_KEYS = {
    "piecewise_vii": set(),
    "sin_two": set(),
    "sinusoid": {"amplitude", "omega", "phase_rad"},
    "custom": {"table_t", "table_d"},
}
_COMMON_REQUIRED = {"controller", "disturbance", "d_bar", "s0", "h", "t_end"}
_COMMON_OPTIONAL = {
    "u_max", "sigma_target", "chatter_t0", "chatter_t1",
    "expect_t_conv_max", "expect_sigma_max", "expect_gain_max_post",
    "expect_final_inside", "expect_escapes_all_reenter",
    "expect_no_reentry_after_last_escape",
}


class _Section:
    def __init__(self, name: str, items: Dict[str, str]):
        self.name = name
        self.items = dict(items)

    def take(self, key: str) -> str:
        try:
            return self.items.pop(key)
        except KeyError:
            raise ConfigError(f"[{self.name}] missing required key '{key}'") from None

    def take_opt(self, key: str) -> Optional[str]:
        return self.items.pop(key, None)

    def take_float(self, key: str) -> float:
        return self._float(key, self.take(key))

    def take_opt_float(self, key: str) -> Optional[float]:
        raw = self.take_opt(key)
        return None if raw is None else self._float(key, raw)

    def take_opt_bool(self, key: str) -> Optional[bool]:
        raw = self.take_opt(key)
        if raw is None:
            return None
        if raw.lower() in ("true", "false"):
            return raw.lower() == "true"
        raise ConfigError(f"[{self.name}] key '{key}': expected true/false, got {raw!r}")

    def _float(self, key: str, raw: str) -> float:
        try:
            v = float(raw)
        except ValueError:
            raise ConfigError(
                f"[{self.name}] key '{key}': not a number: {raw!r}"
            ) from None
        if not math.isfinite(v):
            raise ConfigError(f"[{self.name}] key '{key}': must be finite, got {raw!r}")
        return v

    def take_float_list(self, key: str) -> Tuple[float, ...]:
        raw = self.take(key)
        return tuple(self._float(key, part.strip()) for part in raw.split(","))


def _parse_controller(sec: _Section) -> ControllerSpec:
    kind = sec.take("controller")
    if kind not in _CONTROLLER_KEYS:
        raise ConfigError(
            f"[{sec.name}] unknown controller '{kind}' "
            f"(expected one of {sorted(_CONTROLLER_KEYS)})"
        )

    def law():
        variant = sec.take("law")
        if variant not in _LAWS:
            raise ConfigError(
                f"[{sec.name}] unknown law '{variant}' (expected concave|convex)"
            )
        rho = sec.take_float("rho")
        lam = sec.take_float("lam")
        if variant == "concave":
            return ConcaveParams(rho, lam)
        return ConvexParams(rho, lam)

    try:
        if kind == "kinfty":
            return KInfty(law())
        if kind == "saturated":
            return SaturatedKInfty(law(), sec.take_float("k_max"))
        if kind == "obeid":
            return ObeidTwoPhase(PsbParams(sec.take_float("epsilon"),
                                           sec.take_float("k_bar")))
        if kind == "tbg":
            return TbgIntegral(law(), TbgParams(sec.take_float("t_f"),
                                                sec.take_float("delta")))
        return FixedSign(sec.take_float("k"))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{sec.name}] invalid controller parameters: {exc}") from exc


def _parse_disturbance(sec: _Section) -> DisturbanceSpec:
    kind = sec.take("disturbance")
    if kind not in _DISTURBANCE_KEYS:
        raise ConfigError(
            f"[{sec.name}] unknown disturbance '{kind}' "
            f"(expected one of {sorted(_DISTURBANCE_KEYS)})"
        )
    try:
        if kind == "piecewise_vii":
            signal = PiecewiseVII()
        elif kind == "sin_two":
            signal = SinTwo()
        elif kind == "sinusoid":
            signal = Sinusoid(sec.take_float("amplitude"), sec.take_float("omega"),
                              sec.take_float("phase_rad"))
        else:
            signal = CustomTable(sec.take_float_list("table_t"),
                                 sec.take_float_list("table_d"))
        return DisturbanceSpec(signal, sec.take_float("d_bar"))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{sec.name}] invalid disturbance: {exc}") from exc


def _parse_section(name: str, items: Dict[str, str]) -> ExperimentSpec:
    sec = _Section(name, items)
    controller = _parse_controller(sec)
    disturbance = _parse_disturbance(sec)
    try:
        sim = SimConfig(sec.take_float("s0"), sec.take_float("h"),
                        sec.take_float("t_end"), sec.take_opt_float("u_max"))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{name}] invalid simulation config: {exc}") from exc

    sigma_target = sec.take_opt_float("sigma_target")
    if sigma_target is not None and sigma_target <= 0:
        raise ConfigError(f"[{name}] sigma_target must be positive")
    t0 = sec.take_opt_float("chatter_t0")
    t1 = sec.take_opt_float("chatter_t1")
    if (t0 is None) != (t1 is None):
        raise ConfigError(f"[{name}] chatter_t0 and chatter_t1 must appear together")
    window = None if t0 is None else (t0, t1)
    if window is not None and not (0.0 <= t0 < t1 <= sim.t_end):
        raise ConfigError(f"[{name}] chattering window must satisfy 0 <= t0 < t1 <= t_end")

    expect = Expectations(
        t_conv_max=sec.take_opt_float("expect_t_conv_max"),
        sigma_max=sec.take_opt_float("expect_sigma_max"),
        gain_max_post=sec.take_opt_float("expect_gain_max_post"),
        final_inside=sec.take_opt_bool("expect_final_inside"),
        escapes_all_reenter=sec.take_opt_bool("expect_escapes_all_reenter"),
        no_reentry_after_last_escape=sec.take_opt_bool(
            "expect_no_reentry_after_last_escape"),
    )
    needs_sigma = (expect.t_conv_max is not None or expect.sigma_max is not None
                   or expect.gain_max_post is not None
                   or expect.final_inside is not None
                   or expect.escapes_all_reenter is not None
                   or expect.no_reentry_after_last_escape is not None)
    if needs_sigma and sigma_target is None:
        raise ConfigError(f"[{name}] declared expectations require sigma_target")
    if sec.items:
        unknown = ", ".join(sorted(sec.items))
        raise ConfigError(f"[{name}] unknown keys: {unknown}")
    return ExperimentSpec(name, controller, disturbance, sim,
                          sigma_target, window, expect)


def loads_config(text: str, source: str = "<string>") -> List[ExperimentSpec]:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep keys as written; schema is lowercase
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    names = parser.sections()
    if not names:
        raise ConfigError(f"{source}: no experiment sections found")
    specs = [_parse_section(name, dict(parser.items(name))) for name in names]
    return specs


def load_config(path) -> List[ExperimentSpec]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return loads_config(path.read_text(), source=str(path))


# --- config writing --------------------------------------------------------

def _controller_items(spec: ControllerSpec) -> List[Tuple[str, str]]:
    def law_items(law):
        if isinstance(law, ConcaveParams):
            return [("law", "concave"), ("rho", repr(law.rho1)),
                    ("lam", repr(law.lambda1))]
        return [("law", "convex"), ("rho", repr(law.rho2)),
                ("lam", repr(law.lambda2))]

    if isinstance(spec, KInfty):
        return [("controller", "kinfty")] + law_items(spec.law)
    if isinstance(spec, SaturatedKInfty):
        return ([("controller", "saturated")] + law_items(spec.law)
                + [("k_max", repr(spec.k_max))])
    if isinstance(spec, ObeidTwoPhase):
        return [("controller", "obeid"), ("epsilon", repr(spec.params.epsilon)),
                ("k_bar", repr(spec.params.k_bar))]
    if isinstance(spec, TbgIntegral):
        return ([("controller", "tbg")] + law_items(spec.law)
                + [("t_f", repr(spec.tbg.t_f)), ("delta", repr(spec.tbg.delta))])
    return [("controller", "fixed_sign"), ("k", repr(spec.k))]


def _disturbance_items(spec: DisturbanceSpec) -> List[Tuple[str, str]]:
    sig = spec.signal
    if isinstance(sig, PiecewiseVII):
        items = [("disturbance", "piecewise_vii")]
    elif isinstance(sig, SinTwo):
        items = [("disturbance", "sin_two")]
    elif isinstance(sig, Sinusoid):
        items = [("disturbance", "sinusoid"), ("amplitude", repr(sig.amplitude)),
                 ("omega", repr(sig.omega)), ("phase_rad", repr(sig.phase))]
    else:
        items = [("disturbance", "custom"),
                 ("table_t", ", ".join(repr(v) for v in sig.times)),
                 ("table_d", ", ".join(repr(v) for v in sig.values))]
    return items + [("d_bar", repr(spec.d_bar))]


def dumps_config(specs: Sequence[ExperimentSpec]) -> str:
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError("experiment names must be unique within a batch")
    out = io.StringIO()
    for spec in specs:
        out.write(f"[{spec.name}]\n")
        items = _controller_items(spec.controller)
        items += _disturbance_items(spec.disturbance)
        items += [("s0", repr(spec.sim.s0)), ("h", repr(spec.sim.h)),
                  ("t_end", repr(spec.sim.t_end))]
        if spec.sim.u_max is not None:
            items.append(("u_max", repr(spec.sim.u_max)))
        if spec.sigma_target is not None:
            items.append(("sigma_target", repr(spec.sigma_target)))
        if spec.chatter_window is not None:
            items.append(("chatter_t0", repr(spec.chatter_window[0])))
            items.append(("chatter_t1", repr(spec.chatter_window[1])))
        e = spec.expect
        for key, val in (("expect_t_conv_max", e.t_conv_max),
                         ("expect_sigma_max", e.sigma_max),
                         ("expect_gain_max_post", e.gain_max_post)):
            if val is not None:
                items.append((key, repr(val)))
        for key, val in (("expect_final_inside", e.final_inside),
                         ("expect_escapes_all_reenter", e.escapes_all_reenter),
                         ("expect_no_reentry_after_last_escape",
                          e.no_reentry_after_last_escape)):
            if val is not None:
                items.append((key, "true" if val else "false"))
        for key, val in items:
            out.write(f"{key} = {val}\n")
        out.write("\n")
    return out.getvalue()


def write_config(specs: Sequence[ExperimentSpec], path) -> None:
    Path(path).write_text(dumps_config(specs))


# --- trajectory CSV --------------------------------------------------------

def write_trajectory_csv(traj: Trajectory, path) -> None:
    cols = [traj.t, traj.s, traj.u_commanded, traj.u_applied, traj.gain, traj.d]
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for row in zip(*cols):
        lines.append(",".join(FLOAT_FMT % v for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> Trajectory:
    """Rebuild a bare trajectory (no simulation metadata) from a CSV."""
    lines = Path(path).read_text().splitlines()
    if not lines or tuple(lines[0].split(",")) != TRAJECTORY_COLUMNS:
        raise ConfigError(f"{path}: not a trajectory CSV")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    if data.ndim != 2 or data.shape[1] != len(TRAJECTORY_COLUMNS):
        raise ConfigError(f"{path}: malformed trajectory CSV")
    t, s, uc, ua, g, d = data.T
    return Trajectory(t, s, uc, ua, g, d)


# --- batch execution -------------------------------------------------------

@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    trajectory: Optional[Trajectory]
    report: Optional[analysis.ConvergenceReport]
    gain_max_post: Optional[float]
    chatter: Optional[analysis.ChatteringReport]
    failures: Tuple[str, ...]
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and not self.failures


@dataclass(frozen=True)
class BatchSummary:
    results: Tuple[ExperimentResult, ...]

    @property
    def any_failed(self) -> bool:
        return any(r.failures for r in self.results)

    @property
    def any_diverged(self) -> bool:
        return any(r.error is not None for r in self.results)


def _check_expectations(spec: ExperimentSpec, traj: Trajectory,
                        report: Optional[analysis.ConvergenceReport],
                        gain_max_post: Optional[float]) -> Tuple[str, ...]:
    e = spec.expect
    failures = []

    def fail(msg):
        failures.append(msg)

    if e.t_conv_max is not None:
        if report.t_conv is None:
            fail("expect_t_conv_max: no convergence")
        elif report.t_conv > e.t_conv_max:
            fail(f"expect_t_conv_max: {report.t_conv:g} > {e.t_conv_max:g}")
    if e.sigma_max is not None:
        if report.t_conv is None:
            fail("expect_sigma_max: no convergence")
        elif report.sigma_measured > e.sigma_max:
            fail(f"expect_sigma_max: {report.sigma_measured:g} > {e.sigma_max:g}")
    if e.gain_max_post is not None:
        if gain_max_post is None:
            fail("expect_gain_max_post: no post-convergence window")
        elif gain_max_post > e.gain_max_post:
            fail(f"expect_gain_max_post: {gain_max_post:g} > {e.gain_max_post:g}")
    if e.final_inside is not None:
        inside = abs(float(traj.s[-1])) <= spec.sigma_target
        if inside != e.final_inside:
            fail(f"expect_final_inside: final |s| = {abs(float(traj.s[-1])):g}")
    if e.escapes_all_reenter:
        if any(reentry is None for _, reentry in report.escapes):
            fail("expect_escapes_all_reenter: open escape found")
    if e.no_reentry_after_last_escape:
        if report.t_conv is not None or not report.escapes:
            fail("expect_no_reentry_after_last_escape: no terminal escape")
        elif report.escapes[-1][1] is not None:
            fail("expect_no_reentry_after_last_escape: last escape reentered")
    return tuple(failures)


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Simulate one spec and evaluate its analysis requests."""
    try:
        traj = simulate(Controller(spec.controller), spec.disturbance, spec.sim)
    except SimulationDiverged as exc:
        return ExperimentResult(spec, exc.trajectory, None, None, None, (),
                                error=str(exc))
    report = None
    gain_max_post = None
    if spec.sigma_target is not None:
        report = analysis.convergence_time(traj, spec.sigma_target)
        if report.t_conv is not None:
            mask = traj.t >= report.t_conv + analysis.SETTLE_PAD
            if mask.any():
                gain_max_post = float(traj.gain[mask].max())
    window = spec.chatter_window or analysis.default_chatter_window(traj)
    chatter = analysis.total_variation(traj, window)
    failures = _check_expectations(spec, traj, report, gain_max_post)
    return ExperimentResult(spec, traj, report, gain_max_post, chatter, failures)


def _fmt_opt(v: Optional[float]) -> str:
    return "" if v is None else FLOAT_FMT % v


def summary_csv(summary: BatchSummary) -> str:
    lines = ["name,t_conv,sigma_target,sigma_measured,gain_max_post,"
             "total_variation,status,detail"]
    for r in summary.results:
        rep = r.report
        status = "error" if r.error else ("fail" if r.failures else "pass")
        detail = r.error if r.error else ";".join(r.failures)
        lines.append(",".join([
            r.spec.name,
            _fmt_opt(rep.t_conv if rep else None),
            _fmt_opt(rep.sigma_target if rep else None),
            _fmt_opt(rep.sigma_measured if rep else None),
            _fmt_opt(r.gain_max_post),
            _fmt_opt(r.chatter.total_variation if r.chatter else None),
            status,
            (detail or "").replace(",", ";"),
        ]))
    return "\n".join(lines) + "\n"


def run_batch(specs: Sequence[ExperimentSpec], out_dir, jobs: int = 1) -> BatchSummary:
    """Run every spec, write per-experiment trajectory CSVs plus one
    summary.csv, and return the summary. Rerunning a batch overwrites the
    outputs with identical content."""
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError("experiment names must be unique within a batch")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_experiment, specs))
    else:
        results = [run_experiment(s) for s in specs]
    for r in results:
        if r.trajectory is not None:
            write_trajectory_csv(r.trajectory, out_dir / f"{r.spec.name}.csv")
    summary = BatchSummary(tuple(results))
    (out_dir / "summary.csv").write_text(summary_csv(summary))
    return summary


# --- parameter sweep -------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    rho: float
    lam: float
    bound: float
    peak_u: float
    t_conv: Optional[float]
    feasible: bool


def _with_law(spec: ControllerSpec, rho: float, lam: float) -> ControllerSpec:
    base_law = getattr(spec, "law", None)
    if base_law is None:
        raise ConfigError(f"controller {type(spec).__name__} has no gain law to sweep")
    law = (ConcaveParams(rho, lam) if isinstance(base_law, ConcaveParams)
           else ConvexParams(rho, lam))
    if isinstance(spec, KInfty):
        return KInfty(law)
    if isinstance(spec, SaturatedKInfty):
        return SaturatedKInfty(law, spec.k_max)
    return TbgIntegral(law, spec.tbg)


def sweep(base: ExperimentSpec, grid: Sequence[Tuple[float, float]],
          target_sigma: float, u_budget: float) -> List[SweepRow]:
    """Evaluate (rho, lam) grid points on the base experiment: predicted
    ultimate bound, peak |u|, convergence time into the target band.
    Feasible points (bound <= target and peak within budget) rank first,
    ordered by convergence time."""
    if not grid:
        raise ConfigError("sweep grid is empty")
    rows = []
    for rho, lam in grid:
        ctrl = _with_law(base.controller, rho, lam)
        law = ctrl.law
        bound = ultimate_bound(law, base.disturbance.d_bar).sigma
        traj = simulate(Controller(ctrl), base.disturbance, base.sim)
        peak_u = float(np.abs(traj.u_applied).max())
        # a non-positive target admits no real sliding band at all
        t_conv = (analysis.convergence_time(traj, target_sigma).t_conv
                  if target_sigma > 0 else None)
        feasible = bound <= target_sigma and peak_u <= u_budget
        rows.append(SweepRow(rho, lam, bound, peak_u, t_conv, feasible))
    rows.sort(key=lambda r: (not r.feasible,
                             math.inf if r.t_conv is None else r.t_conv))
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    lines = ["rho,lam,bound,peak_u,t_conv,feasible"]
    for r in rows:
        lines.append(",".join([
            FLOAT_FMT % r.rho, FLOAT_FMT % r.lam, FLOAT_FMT % r.bound,
            FLOAT_FMT % r.peak_u, _fmt_opt(r.t_conv),
            "true" if r.feasible else "false",
        ]))
    return "\n".join(lines) + "\n"


# --- plot data -------------------------------------------------------------

FIGURE_SIGNALS = {
    "sliding": ("s",),
    "gains": ("gain",),
    "inputs": ("u_applied",),
    "escape": ("s", "u_applied"),
}


def emit_plot_data(traj_files: Sequence, figure: str, out_path) -> None:
    """Write aligned columnar data (t plus one column per experiment and
    signal) for a figure id. Trajectories must share the exact time grid;
    no resampling is attempted. The escape overlay also appends the shared
    disturbance column."""
    if figure not in FIGURE_SIGNALS:
        raise ConfigError(
            f"unknown figure '{figure}' (expected one of {sorted(FIGURE_SIGNALS)})"
        )
    files = sorted(Path(f) for f in traj_files)
    if not files:
        raise ConfigError("no trajectory files given")
    trajs = [(f.stem, read_trajectory_csv(f)) for f in files]
    t0 = trajs[0][1].t
    for name, traj in trajs[1:]:
        if len(traj.t) != len(t0) or not np.array_equal(traj.t, t0):
            raise ConfigError(f"time grid of '{name}' does not match; no resampling")

    short = {"s": "s", "gain": "gain", "u_applied": "u"}
    header = ["t"]
    cols = [t0]
    for signal in FIGURE_SIGNALS[figure]:
        for name, traj in trajs:
            header.append(f"{short[signal]}_{name}")
            cols.append(getattr(traj, signal))
    if figure == "escape":
        for name, traj in trajs[1:]:
            if not np.array_equal(traj.d, trajs[0][1].d):
                raise ConfigError("escape overlay requires a shared disturbance")
        header.append("d")
        cols.append(trajs[0][1].d)

    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(FLOAT_FMT % v for v in row))
    Path(out_path).write_text("\n".join(lines) + "\n")

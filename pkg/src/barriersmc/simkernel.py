"""Fixed-step closed-loop simulation of the scalar plant s' = u + d.

Explicit Euler at the controller's sample step, disturbance sampled at the
left endpoint. Deterministic: identical inputs give bit-identical
trajectories.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from barriersmc.controllers import Controller, ControllerSpec
from barriersmc.gains import BarrierPoleError


class ExtrapolationError(ValueError):
    """Custom disturbance table queried outside its time domain."""


class DisturbanceBoundError(ValueError):
    """Sampled disturbance exceeded its declared bound d_bar."""


class SimulationDiverged(RuntimeError):
    """Simulation aborted on a non-finite state or a controller pole.

    Carries the abort time and the partial trajectory recorded so far.
    """

    def __init__(self, message: str, t: float, trajectory: "Trajectory"):
        super().__init__(message)
        self.t = t
        self.trajectory = trajectory


@dataclass(frozen=True)
class Sinusoid:
    """amplitude * sin(omega*t + phase)."""

    amplitude: float
    omega: float
    phase: float = 0.0


@dataclass(frozen=True)
class PiecewiseVII:
    """0.1*sin(3t) for t <= 5 s (inclusive), 0.2*cos(5t) after."""


@dataclass(frozen=True)
class SinTwo:
    """2*sin(t)."""


@dataclass(frozen=True)
class CustomTable:
    """Sampled signal with linear interpolation; no extrapolation."""

    times: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.times) != len(self.values) or len(self.times) < 2:
            raise ValueError("table needs >= 2 aligned (time, value) samples")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("table times must be strictly increasing")


Signal = Union[Sinusoid, PiecewiseVII, SinTwo, CustomTable]


@dataclass(frozen=True)
class DisturbanceSpec:
    """A disturbance signal plus its analysis-side bound d_bar.

    d_bar is never visible to controllers; |d(t)| <= d_bar is checked over
    the sampled trajectory during simulation.
    """

    signal: Signal
    d_bar: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.d_bar) and self.d_bar > 0):
            raise ValueError(f"d_bar must be positive, got {self.d_bar!r}")


def eval_disturbance(spec: DisturbanceSpec, t: float) -> float:
    sig = spec.signal
    if isinstance(sig, Sinusoid):
        return sig.amplitude * math.sin(sig.omega * t + sig.phase)
    if isinstance(sig, PiecewiseVII):
        if t <= 5.0:
            return 0.1 * math.sin(3.0 * t)
        return 0.2 * math.cos(5.0 * t)
    if isinstance(sig, SinTwo):
        return 2.0 * math.sin(t)
    if isinstance(sig, CustomTable):
        if t < sig.times[0] or t > sig.times[-1]:
            raise ExtrapolationError(
                f"t = {t:g} outside table domain [{sig.times[0]:g}, {sig.times[-1]:g}]"
            )
        i = bisect.bisect_right(sig.times, t) - 1
        if i == len(sig.times) - 1:
            return sig.values[-1]
        t0, t1 = sig.times[i], sig.times[i + 1]
        v0, v1 = sig.values[i], sig.values[i + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    raise TypeError(f"not a disturbance signal: {sig!r}")


@dataclass(frozen=True)
class SimConfig:
    s0: float
    h: float
    t_end: float
    u_max: Optional[float] = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.s0)):
            raise ValueError(f"s0 must be finite, got {self.s0!r}")
        if not (math.isfinite(self.h) and self.h > 0):
            raise ValueError(f"h must be positive, got {self.h!r}")
        if not (math.isfinite(self.t_end) and self.t_end >= self.h):
            raise ValueError(f"t_end must be >= h, got {self.t_end!r}")
        if self.u_max is not None and not (math.isfinite(self.u_max) and self.u_max > 0):
            raise ValueError(f"u_max must be positive when present, got {self.u_max!r}")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled closed-loop record; immutable once returned.

    u_applied is u_commanded clamped to +-u_max when the limit is present;
    gain is the commanded (pre-actuator) gain.
    """

    t: np.ndarray
    s: np.ndarray
    u_commanded: np.ndarray
    u_applied: np.ndarray
    gain: np.ndarray
    d: np.ndarray
    config: Optional[SimConfig] = None
    controller: Optional[ControllerSpec] = None
    disturbance: Optional[DisturbanceSpec] = None

    def __len__(self) -> int:
        return len(self.t)


def n_steps(cfg: SimConfig) -> int:
    return int(math.floor(cfg.t_end / cfg.h + 1e-9))


def simulate(c: Controller, d: DisturbanceSpec, cfg: SimConfig) -> Trajectory:
    """Run the explicit-Euler loop s_{k+1} = s_k + h*(u_applied + d(t_k)).

    Raises SimulationDiverged (with the partial record) if the state or the
    control goes non-finite, or the controller hits a gain-law pole.
    """
    n = n_steps(cfg)
    t = np.arange(n + 1) * cfg.h
    s_rec = np.empty(n + 1)
    u_cmd = np.empty(n + 1)
    u_app = np.empty(n + 1)
    g_rec = np.empty(n + 1)
    d_rec = np.empty(n + 1)

    def partial(k: int) -> Trajectory:
        return Trajectory(t[:k], s_rec[:k].copy(), u_cmd[:k].copy(),
                          u_app[:k].copy(), g_rec[:k].copy(), d_rec[:k].copy(),
                          cfg, c.spec, d)

    s = cfg.s0
    for k in range(n + 1):
        tk = t[k]
        if not math.isfinite(s):
            raise SimulationDiverged(f"state non-finite at t = {tk:g}", tk, partial(k))
        dk = eval_disturbance(d, tk)
        if abs(dk) > d.d_bar * (1.0 + 1e-12):
            raise DisturbanceBoundError(
                f"|d({tk:g})| = {abs(dk):g} exceeds declared d_bar = {d.d_bar:g}"
            )
        try:
            u = c.control(tk, s, cfg.h)
        except BarrierPoleError as exc:
            raise SimulationDiverged(
                f"controller pole at t = {tk:g}: {exc}", tk, partial(k)
            ) from exc
        if not math.isfinite(u):
            raise SimulationDiverged(f"control non-finite at t = {tk:g}", tk, partial(k))
        if cfg.u_max is not None:
            ua = min(cfg.u_max, max(-cfg.u_max, u))
        else:
            ua = u
        s_rec[k] = s
        u_cmd[k] = u
        u_app[k] = ua
        g_rec[k] = c.state.gain
        d_rec[k] = dk
        if k < n:
            s = s + cfg.h * (ua + dk)

    return Trajectory(t, s_rec, u_cmd, u_app, g_rec, d_rec, cfg, c.spec, d)

"""Stateful control laws u = f(t, s) for the scalar plant s' = u + d.

Controller descriptors are frozen dataclasses (safe to embed in configs);
a `Controller` wraps one descriptor with the per-simulation mutable state
(adaptive gain integrator, phase flag, auxiliary state). Adaptive state is
advanced by explicit Euler at the sample step, matching the plant loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from barriersmc.gains import (
    ConcaveParams,
    ConvexParams,
    FixedGain,
    GainLaw,
    PsbParams,
    eval_gain,
    eval_psb,
    saturate_gain,
)


def sign(x: float) -> float:
    """Signum with sign(0) = 0, so u vanishes on the ideal surface."""
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


@dataclass(frozen=True)
class TbgParams:
    """Time base generator: prescribed settling time t_f and regularization
    delta (small positive; the auxiliary state lands at delta/(1+delta)*s0)."""

    t_f: float
    delta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t_f) and self.t_f > 0):
            raise ValueError(f"t_f must be positive, got {self.t_f!r}")
        if not (math.isfinite(self.delta) and 0 < self.delta < 1):
            raise ValueError(f"delta must be in (0, 1), got {self.delta!r}")


def tbg_zeta(t: float, t_f: float) -> float:
    """Cosine ramp (1 - cos(pi*t/t_f))/2 for t <= t_f, exactly 1 after."""
    if t >= t_f:
        return 1.0
    return 0.5 * (1.0 - math.cos(math.pi * t / t_f))


def tbg_zeta_dot(t: float, t_f: float) -> float:
    """pi*sin(pi*t/t_f)/(2*t_f) for t <= t_f, exactly 0 after."""
    if t >= t_f:
        return 0.0
    return 0.5 * math.pi * math.sin(math.pi * t / t_f) / t_f


def tbg_kg(t: float, p: TbgParams) -> float:
    """Scheduled decay rate zeta'/(1 - zeta + delta); finite everywhere
    (denominator >= delta) and 0 for t >= t_f."""
    return tbg_zeta_dot(t, p.t_f) / (1.0 - tbg_zeta(t, p.t_f) + p.delta)


def tbg_z_closed_form(t: float, s0: float, p: TbgParams) -> float:
    """Analytic solution s0*(1 - zeta + delta)/(1 + delta) of z' = -kg*z,
    used as a reference for the Euler-integrated auxiliary state."""
    return s0 * (1.0 - tbg_zeta(t, p.t_f) + p.delta) / (1.0 + p.delta)


# --- controller descriptors ------------------------------------------------


@dataclass(frozen=True)
class KInfty:
    """Pure class-Kinf relay u = -K(|s|) sign(s)."""

    law: GainLaw

    def __post_init__(self) -> None:
        if not isinstance(self.law, (ConcaveParams, ConvexParams)):
            raise ValueError("KInfty requires a concave or convex gain law")


@dataclass(frozen=True)
class SaturatedKInfty:
    """Class-Kinf relay with the commanded gain capped at k_max."""

    law: GainLaw
    k_max: float

    def __post_init__(self) -> None:
        if not isinstance(self.law, (ConcaveParams, ConvexParams)):
            raise ValueError("SaturatedKInfty requires a concave or convex gain law")
        if not (math.isfinite(self.k_max) and self.k_max > 0):
            raise ValueError(f"k_max must be positive, got {self.k_max!r}")


@dataclass(frozen=True)
class ObeidTwoPhase:
    """Two-phase adaptive relay: integrate k_a' = k_bar*|s| until the first
    sample with |s| <= epsilon/2, then switch permanently to the legacy
    pole barrier."""

    params: PsbParams


@dataclass(frozen=True)
class TbgIntegral:
    """Integral design u = -kg(t)*z - K(|e|) sign(e) with e = s - z and
    auxiliary state z' = -kg(t)*z started at z(0) = s(0).

    The auxiliary drift is kept as the plain function kg(t)*z; the time base
    generator is the only scheduled rate shipped here, but any bounded drift
    with the same sign convention slots into the same place.
    """

    law: GainLaw
    tbg: TbgParams

    def __post_init__(self) -> None:
        if not isinstance(self.law, (ConcaveParams, ConvexParams)):
            raise ValueError("TbgIntegral requires a concave or convex gain law")


@dataclass(frozen=True)
class FixedSign:
    """Constant-gain relay u = -k sign(s); chattering baseline."""

    k: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and self.k >= 0):
            raise ValueError(f"k must be nonnegative, got {self.k!r}")


ControllerSpec = Union[KInfty, SaturatedKInfty, ObeidTwoPhase, TbgIntegral, FixedSign]

REACHING = "reaching"
BARRIER = "barrier"


@dataclass
class ControllerState:
    """Mutable per-simulation state; fields unused by a variant stay at
    their initial values."""

    k_a: float = 0.0
    phase: str = REACHING
    z: Optional[float] = None
    t_bar: Optional[float] = None
    gain: float = 0.0  # commanded gain at the last sample, for recording


class Controller:
    """One descriptor plus its mutable state; single-owner, one simulation.

    `control` must be called once per sample in non-decreasing time order.
    """

    def __init__(self, spec: ControllerSpec):
        if not isinstance(spec, (KInfty, SaturatedKInfty, ObeidTwoPhase,
                                 TbgIntegral, FixedSign)):
            raise TypeError(f"not a controller descriptor: {spec!r}")
        self.spec = spec
        self.state = ControllerState()

    def control(self, t: float, s: float, h: float) -> float:
        spec = self.spec
        st = self.state

        if isinstance(spec, KInfty):
            g = eval_gain(spec.law, abs(s))
            st.gain = g
            return -g * sign(s)

        if isinstance(spec, SaturatedKInfty):
            g = saturate_gain(eval_gain(spec.law, abs(s)), spec.k_max)
            st.gain = g
            return -g * sign(s)

        if isinstance(spec, ObeidTwoPhase):
            p = spec.params
            if st.phase == REACHING and abs(s) <= 0.5 * p.epsilon:
                st.phase = BARRIER
                st.t_bar = t
            if st.phase == REACHING:
                g = st.k_a
                st.k_a += h * p.k_bar * abs(s)
            else:
                g = eval_psb(p, abs(s))
            st.gain = g
            return -g * sign(s)

        if isinstance(spec, TbgIntegral):
            if st.z is None:
                st.z = s  # first sample defines s0
            kg = tbg_kg(t, spec.tbg)
            e = s - st.z
            g = eval_gain(spec.law, abs(e))
            u = -kg * st.z - g * sign(e)
            st.z -= h * kg * st.z
            st.gain = g
            return u

        # FixedSign
        st.gain = spec.k
        return -spec.k * sign(s)

"""Gain laws for adaptive relay control: two class-Kinf barrier gains
(logarithmic/concave and arctangent/convex), the legacy bounded barrier,
a fixed gain, plus closed-form inverses and ultimate-bound radii.

All operations here are pure functions of immutable parameter records;
parameter validation happens once at construction so the per-sample
evaluation path stays branch-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

# exp() overflows just past 709 in double precision; keep a margin.
_EXP_ARG_MAX = 700.0


class GainRangeError(ValueError):
    """Inverse gain evaluation left the representable double range."""


class UnsupportedVariantError(TypeError):
    """Requested operation is undefined for this gain-law variant."""


class BarrierPoleError(ArithmeticError):
    """Legacy barrier gain evaluated exactly at its pole."""


def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class ConcaveParams:
    """Logarithmic gain K(x) = rho1 * ln(x/lambda1 + 1): strictly increasing,
    concave, unbounded."""

    rho1: float
    lambda1: float

    def __post_init__(self) -> None:
        _require_positive("rho1", self.rho1)
        _require_positive("lambda1", self.lambda1)


@dataclass(frozen=True)
class ConvexParams:
    """Arctangent-ratio gain K(x) = rho2 * atan(x/lambda2) / (pi/2 - atan(x/lambda2)):
    strictly increasing, convex, unbounded."""

    rho2: float
    lambda2: float

    def __post_init__(self) -> None:
        _require_positive("rho2", self.rho2)
        _require_positive("lambda2", self.lambda2)


@dataclass(frozen=True)
class PsbParams:
    """Legacy two-phase barrier: half-width epsilon of the pole barrier
    |s|/(epsilon - |s|) and reaching-phase adaptation rate k_bar."""

    epsilon: float
    k_bar: float

    def __post_init__(self) -> None:
        _require_positive("epsilon", self.epsilon)
        _require_positive("k_bar", self.k_bar)


@dataclass(frozen=True)
class FixedGain:
    """Constant relay gain; baseline for chattering comparisons only.

    k = 0 is allowed (free plant), unlike the class-Kinf laws.
    """

    k: float

    def __post_init__(self) -> None:
        if not (isinstance(self.k, (int, float)) and math.isfinite(self.k) and self.k >= 0):
            raise ValueError(f"k must be a nonnegative finite number, got {self.k!r}")


GainLaw = Union[ConcaveParams, ConvexParams, PsbParams, FixedGain]


@dataclass(frozen=True)
class UltimateBound:
    """Predicted real-sliding-band radius sigma = K^{-1}(d_bar)."""

    sigma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError(f"sigma must be finite and nonnegative, got {self.sigma!r}")


def eval_concave(p: ConcaveParams, abs_s: float) -> float:
    """rho1 * ln(abs_s/lambda1 + 1); zero at zero, strictly increasing."""
    return p.rho1 * math.log1p(abs_s / p.lambda1)


def inv_concave(p: ConcaveParams, k: float) -> float:
    """Exact inverse lambda1 * (e^{k/rho1} - 1) of eval_concave."""
    arg = k / p.rho1
    if abs(arg) > _EXP_ARG_MAX:
        raise GainRangeError(
            f"k/rho1 = {arg:g} exceeds the double-precision exponent range"
        )
    return p.lambda1 * math.expm1(arg)


def eval_convex(p: ConvexParams, abs_s: float) -> float:
    """rho2 * atan(abs_s/lambda2) / (pi/2 - atan(abs_s/lambda2)).

    Uses atan(y) + atan(1/y) = pi/2 to keep both the numerator and the
    denominator well conditioned on either side of abs_s = lambda2; the
    naive subtraction cancels catastrophically for large abs_s.
    """
    y = abs_s / p.lambda2
    if y <= 1.0:
        a = math.atan(y)
        return p.rho2 * a / (0.5 * math.pi - a)
    b = math.atan(1.0 / y)
    return p.rho2 * (0.5 * math.pi - b) / b


def inv_convex(p: ConvexParams, k: float) -> float:
    """Exact inverse lambda2 * tan(pi*k / (2*(k + rho2))) of eval_convex.

    The tangent argument stays strictly below pi/2 for every finite k >= 0,
    so the result is finite. For k > rho2 the cotangent of the complementary
    angle is used; the angle pi/2 * rho2/(k + rho2) is computed directly
    instead of by subtraction near pi/2.
    """
    if k <= p.rho2:
        return p.lambda2 * math.tan(0.5 * math.pi * k / (k + p.rho2))
    return p.lambda2 / math.tan(0.5 * math.pi * p.rho2 / (k + p.rho2))


def eval_psb(p: PsbParams, abs_s: float) -> float:
    """Legacy barrier abs_s / (epsilon - abs_s), evaluated literally.

    Past the pole (abs_s > epsilon) the value is negative; this is the
    documented failure mode of the two-phase controller under actuator
    saturation and is deliberately not clamped.
    """
    if abs_s == p.epsilon:
        raise BarrierPoleError(f"barrier pole at |s| = epsilon = {p.epsilon:g}")
    return abs_s / (p.epsilon - abs_s)


def saturate_gain(k: float, k_max: float) -> float:
    """min(k, k_max): hard cap on a commanded gain."""
    return k if k < k_max else k_max


def eval_gain(law: GainLaw, abs_s: float) -> float:
    """Evaluate any gain law at |s|."""
    if isinstance(law, ConcaveParams):
        return eval_concave(law, abs_s)
    if isinstance(law, ConvexParams):
        return eval_convex(law, abs_s)
    if isinstance(law, PsbParams):
        return eval_psb(law, abs_s)
    if isinstance(law, FixedGain):
        return law.k
    raise UnsupportedVariantError(f"not a gain law: {law!r}")


def gain_inverse(law: GainLaw, k: float) -> float:
    """Inverse of a class-Kinf law; undefined for the legacy barrier and
    the fixed gain."""
    if isinstance(law, ConcaveParams):
        return inv_concave(law, k)
    if isinstance(law, ConvexParams):
        return inv_convex(law, k)
    raise UnsupportedVariantError(
        f"no class-Kinf inverse for variant {type(law).__name__}"
    )


def ultimate_bound(law: GainLaw, d_bar: float) -> UltimateBound:
    """Analysis-side real-sliding radius K^{-1}(d_bar) for a class-Kinf law."""
    _require_positive("d_bar", d_bar)
    return UltimateBound(gain_inverse(law, d_bar))

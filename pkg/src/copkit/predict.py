"""Input predictors and consciousness indicator sequences.

Three predictor kinds are available: :class:`SimplePast` (repeat the
last observation), :class:`AR` (autoregression fitted by ridge least
squares over a trailing window) and :class:`Kalman` (1-D constant
velocity filter). A :class:`Schedule` switches between them by tick.

Predictors are immutable values. ``kalman_update`` returns a new filter
state and ``predict_next`` never mutates anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, Union

import numpy as np

from . import _kernels
from .distance import DEFAULT_COMPRESSOR, Compressor

__all__ = [
    "ArFitError",
    "SimplePast",
    "AR",
    "Kalman",
    "Predictor",
    "Rule",
    "Schedule",
    "CisReport",
    "fit_ar",
    "predict_next",
    "forecast",
    "kalman_update",
    "kalman_forecast",
    "cis",
    "pack_bits",
    "randomness_proxy",
]

RIDGE = _kernels.RIDGE


class ArFitError(ValueError):
    pass


@dataclass(frozen=True)
class SimplePast:
    pass


@dataclass(frozen=True)
class AR:
    order: int
    window: int | None = None
    coefficients: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("AR order must be >= 1")
        if self.window is None:
            object.__setattr__(self, "window", 4 * self.order + 1)
        if self.window < 2 * self.order + 1:
            raise ValueError(f"AR window must be >= 2*order+1 = {2 * self.order + 1}")


@dataclass(frozen=True)
class Kalman:
    q: float
    r: float
    mean: tuple[float, float] = (0.0, 0.0)
    cov: tuple[tuple[float, float], tuple[float, float]] = field(
        default=((_kernels.KALMAN_PRIOR_VAR, 0.0), (0.0, _kernels.KALMAN_PRIOR_VAR))
    )

    def __post_init__(self) -> None:
        if not (self.q > 0 and self.r > 0):
            raise ValueError("Kalman noise parameters q and r must be positive")
        (a, b), (c, d) = self.cov
        if b != c or a < 0 or d < 0:
            raise ValueError("Kalman covariance must be symmetric with nonnegative diagonal")

    @property
    def position(self) -> float:
        return self.mean[0]

    @property
    def velocity(self) -> float:
        return self.mean[1]


Predictor = Union[SimplePast, AR, Kalman]


def _series(history: Sequence[float]) -> np.ndarray:
    values = np.asarray(history, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("history must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(values)):
        raise ValueError("history must contain only finite values")
    return values


def fit_ar(history: Sequence[float], order: int, window: int) -> tuple[float, ...]:
    """Least-squares AR coefficients a_1..a_order over the trailing ``window`` values."""
    values = _series(history)
    if order < 1:
        raise ValueError("order must be >= 1")
    if window < 2 * order + 1:
        raise ValueError(f"window must be >= 2*order+1 = {2 * order + 1}")
    if values.size < window:
        raise ArFitError(f"history has {values.size} values, window needs {window}")
    coefs, ok = _kernels.ar_fit(values[-window:], order)
    if not ok:
        raise ArFitError("normal equations are singular (no signal in window)")
    return tuple(float(c) for c in coefs)


def kalman_update(state: Kalman, observation: float) -> Kalman:
    if not isinstance(state, Kalman):
        raise TypeError("kalman_update needs a Kalman predictor")
    if not math.isfinite(observation):
        raise ValueError(f"observation must be finite, got {observation!r}")
    (p00, p01), (_, p11) = state.cov
    m0, m1, p00, p01, p11 = _kernels.kalman_step(
        state.mean[0], state.mean[1], p00, p01, p11, state.q, state.r, float(observation)
    )
    return replace(state, mean=(float(m0), float(m1)), cov=((float(p00), float(p01)), (float(p01), float(p11))))


def kalman_forecast(state: Kalman, horizon: int) -> float:
    return state.mean[0] + horizon * state.mean[1]


def forecast(predictor: Predictor, history: Sequence[float], horizon: int) -> float:
    """Estimate of the value ``horizon`` steps after the last observation.

    Horizon 0 is the current value: the last observation for simple-past
    and AR, the filtered position for Kalman. The Kalman filter is run
    over ``history`` starting from the predictor's own state.
    """
    values = _series(history)
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if isinstance(predictor, SimplePast):
        return float(values[-1])
    if isinstance(predictor, AR):
        if values.size < predictor.window:
            raise ArFitError(f"history has {values.size} values, window needs {predictor.window}")
        coefs = np.array(fit_ar(values, predictor.order, predictor.window))
        return float(_kernels.ar_forecast(values, coefs, horizon))
    if isinstance(predictor, Kalman):
        state = predictor
        for v in values:
            state = kalman_update(state, float(v))
        return kalman_forecast(state, horizon)
    raise TypeError(f"not a predictor: {predictor!r}")


def predict_next(predictor: Predictor, history: Sequence[float]) -> float:
    return forecast(predictor, history, 1)


@dataclass(frozen=True)
class Rule:
    """Use ``predictor`` while ``tick < bound``; ``bound=None`` always applies."""

    bound: int | None
    predictor: Predictor


@dataclass(frozen=True)
class Schedule:
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        if not rules or rules[-1].bound is not None:
            raise ValueError("the last schedule rule must be unconditional")
        if any(r.bound is None for r in rules[:-1]):
            raise ValueError("only the last schedule rule may be unconditional")
        bounds = [r.bound for r in rules[:-1]]
        if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
            raise ValueError("schedule bounds must be strictly increasing")

    @classmethod
    def always(cls, predictor: Predictor) -> "Schedule":
        return cls((Rule(None, predictor),))

    def active(self, tick: int) -> Predictor:
        for rule in self.rules:
            if rule.bound is None or tick < rule.bound:
                return rule.predictor
        raise AssertionError("unreachable: last rule is unconditional")


def cis(
    predicted: Sequence,
    real: Sequence,
    match: Callable[[object, object], bool] | None = None,
    tol: float | None = None,
) -> list[int]:
    """Position-wise hit bits over the common prefix of both sequences.

    Exact equality by default; ``tol`` compares reals with ``|p - r| <= tol``.
    """
    if match is None:
        match = (lambda p, r: abs(p - r) <= tol) if tol is not None else (lambda p, r: p == r)
    return [int(bool(match(p, r))) for p, r in zip(predicted, real)]


@dataclass(frozen=True)
class CisReport:
    bits: tuple[int, ...]
    hit_rate: float
    compressed_ratio: float
    verdict: str

    def format(self) -> str:
        hits = sum(self.bits)
        return (
            f"length={len(self.bits)} hits={hits} hit_rate={self.hit_rate:.6f} "
            f"ratio={self.compressed_ratio:.6f} verdict={self.verdict} (proxy)"
        )


def pack_bits(bits: Sequence[int]) -> bytes:
    """Eight bits per byte, most significant first, zero-padded."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return np.packbits(arr).tobytes()


def randomness_proxy(
    bits: Sequence[int],
    compressor: Compressor = DEFAULT_COMPRESSOR,
    threshold: float = 0.95,
) -> CisReport:
    """Compression-ratio stand-in for an (undecidable) randomness test.

    ``non_random`` when the packed bits compress below ``threshold`` of
    their size. This is a heuristic label, not a certificate.
    """
    bits = tuple(int(b) for b in bits)
    if len(bits) < 64:
        raise ValueError(f"need at least 64 bits, got {len(bits)}")
    packed = pack_bits(bits)
    ratio = compressor.compress_size(packed) / len(packed)
    return CisReport(
        bits=bits,
        hit_rate=sum(bits) / len(bits),
        compressed_ratio=ratio,
        verdict="non_random" if ratio < threshold else "random",
    )

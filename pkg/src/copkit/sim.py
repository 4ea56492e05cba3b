"""Deterministic two-player ball game with delayed perception.

A ball moves on an 80x24 field. Player P guards column 0 and player Q
guards column ``field_x - 1``; each moves one cell per tick up or down
towards a target row and scores when the ball sits on its column in the
same row. Perception is delayed by a fixed number of ticks. A reactive
player chases the row it perceives, an intuitive player chases a
prediction of the ball's *current* row made from the delayed stream.

Tick order: ball moves, each player perceives and moves, scores are
checked. Everything is a pure function of :class:`GameConfig`.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

import numpy as np

from . import _kernels
from .predict import AR, Kalman, Schedule, SimplePast

__all__ = [
    "FIELD_X",
    "FIELD_Y",
    "RandomWalk",
    "SmoothBounce",
    "Reactive",
    "Intuitive",
    "GameConfig",
    "GameTrace",
    "GameResult",
    "SweepRow",
    "BallState",
    "SplitMix64",
    "ball_step",
    "ball_path",
    "run_game",
    "sweep",
    "sweep_csv",
]

FIELD_X = 80
FIELD_Y = 24
MASK64 = (1 << 64) - 1


class SplitMix64:
    """Reference splitmix64 on Python integers.

    The vectorised kernel produces the same stream; this class keeps the
    per-step :func:`ball_step` independent of it.
    """

    def __init__(self, state: int):
        self.state = state & MASK64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def ternary(self) -> int:
        return (3 * self.next64() >> 64) - 1


@dataclass(frozen=True)
class RandomWalk:
    pass


@dataclass(frozen=True)
class SmoothBounce:
    vx: int = 1
    vy: int = 1


Motion = Union[RandomWalk, SmoothBounce]


@dataclass(frozen=True)
class Reactive:
    pass


@dataclass(frozen=True)
class Intuitive:
    schedule: Schedule


Strategy = Union[Reactive, Intuitive]


@dataclass(frozen=True)
class GameConfig:
    field_x: int = FIELD_X
    field_y: int = FIELD_Y
    lifespan: int = 1000
    delay_p: int = 0
    delay_q: int = 0
    motion: Motion = field(default_factory=RandomWalk)
    strategy_p: Strategy = field(default_factory=Reactive)
    strategy_q: Strategy = field(default_factory=Reactive)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.field_x < 2 or self.field_y < 2:
            raise ValueError("field dimensions must be >= 2")
        if self.lifespan < 0:
            raise ValueError("lifespan must be nonnegative")
        for name in ("delay_p", "delay_q"):
            d = getattr(self, name)
            if d < 0 or (self.lifespan > 0 and d >= self.lifespan):
                raise ValueError(f"{name} must satisfy 0 <= delay < lifespan")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class BallState:
    x: int
    y: int
    vx: int = 0
    vy: int = 0


def _reflect(pos: int, vel: int, size: int) -> tuple[int, int]:
    nxt, hi = pos + vel, size - 1
    while nxt < 0 or nxt > hi:
        nxt = 2 * hi - nxt if nxt > hi else -nxt
        vel = -vel
    return nxt, vel


def ball_step(
    motion: Motion, ball: BallState, rng_state: int, field_x: int = FIELD_X, field_y: int = FIELD_Y
) -> tuple[BallState, int]:
    """One ball move; returns the new ball and the advanced PRNG state."""
    if isinstance(motion, RandomWalk):
        rng = SplitMix64(rng_state)
        dx, dy = rng.ternary(), rng.ternary()
        x, y = ball.x, ball.y
        if 0 <= x + dx < field_x:
            x += dx
        if 0 <= y + dy < field_y:
            y += dy
        return replace(ball, x=x, y=y), rng.state
    x, vx = _reflect(ball.x, ball.vx, field_x)
    y, vy = _reflect(ball.y, ball.vy, field_y)
    return BallState(x, y, vx, vy), rng_state


def initial_ball(config: GameConfig) -> BallState:
    if isinstance(config.motion, RandomWalk):
        return BallState(config.field_x // 2, config.field_y // 2)
    rng = SplitMix64(config.seed)
    x0 = rng.next64() % config.field_x
    y0 = rng.next64() % config.field_y
    return BallState(x0, y0, config.motion.vx, config.motion.vy)


def ball_path(config: GameConfig) -> tuple[np.ndarray, np.ndarray]:
    """Ball position after each tick's move, as two int64 arrays."""
    ball = initial_ball(config)
    if isinstance(config.motion, RandomWalk):
        return _kernels.random_walk_path(
            np.uint64(config.seed), config.lifespan, config.field_x, config.field_y, ball.x, ball.y
        )
    return _kernels.bounce_path(
        config.lifespan, config.field_x, config.field_y, ball.x, ball.y, ball.vx, ball.vy
    )


def _encode(strategies: Sequence[Strategy]):
    width = max([1] + [len(s.schedule.rules) for s in strategies if isinstance(s, Intuitive)])
    nrules = np.zeros(2, np.int64)
    bounds = np.full((2, width), _kernels.NO_BOUND, np.int64)
    kinds = np.zeros((2, width), np.int64)
    iparams = np.zeros((2, width, 2), np.int64)
    fparams = np.zeros((2, width, 2), np.float64)
    for k, strategy in enumerate(strategies):
        if isinstance(strategy, Reactive):
            continue
        rules = strategy.schedule.rules
        nrules[k] = len(rules)
        for j, rule in enumerate(rules):
            if rule.bound is not None:
                bounds[k, j] = rule.bound
            pred = rule.predictor
            if isinstance(pred, SimplePast):
                kinds[k, j] = _kernels.KIND_SIMPLE
            elif isinstance(pred, AR):
                kinds[k, j] = _kernels.KIND_AR
                iparams[k, j] = (pred.order, pred.window)
            elif isinstance(pred, Kalman):
                kinds[k, j] = _kernels.KIND_KALMAN
                fparams[k, j] = (pred.q, pred.r)
            else:
                raise TypeError(f"unsupported predictor {pred!r}")
    return nrules, bounds, kinds, iparams, fparams


TRACE_HEADER = "tick,ball_x,ball_y,p_y,p_seen,p_pred,q_y,q_seen,q_pred"


@dataclass(frozen=True, eq=False)
class GameTrace:
    ball_x: np.ndarray
    ball_y: np.ndarray
    player_y: np.ndarray
    seen_y: np.ndarray
    pred_y: np.ndarray

    def __len__(self) -> int:
        return int(self.ball_x.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameTrace):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("ball_x", "ball_y", "player_y", "seen_y", "pred_y")
        )

    def to_csv(self) -> str:
        cols = np.column_stack([
            np.arange(len(self)), self.ball_x, self.ball_y,
            self.player_y[0], self.seen_y[0], self.pred_y[0],
            self.player_y[1], self.seen_y[1], self.pred_y[1],
        ])
        buf = io.StringIO()
        buf.write(TRACE_HEADER + "\n")
        np.savetxt(buf, cols, fmt="%d", delimiter=",")
        return buf.getvalue()


@dataclass(frozen=True)
class GameResult:
    points_p: int
    points_q: int
    trace: GameTrace | None = None


def run_game(config: GameConfig, trace: bool = False) -> GameResult:
    bx, by = ball_path(config)
    delays = np.array([config.delay_p, config.delay_q], np.int64)
    points, player_y, seen_y, pred_y = _kernels.play_game(
        bx, by, config.field_x, config.field_y, delays, *_encode((config.strategy_p, config.strategy_q))
    )
    recorded = GameTrace(bx, by, player_y, seen_y, pred_y) if trace else None
    return GameResult(int(points[0]), int(points[1]), recorded)


@dataclass(frozen=True)
class SweepRow:
    delay: int
    mean_score: float
    seeds_used: int


def sweep(base: GameConfig, delays: Iterable[int], seeds: Iterable[int]) -> list[SweepRow]:
    """Mean combined score per delay, both players delayed equally."""
    delays, seeds = list(delays), list(seeds)
    if not delays or not seeds:
        raise ValueError("delays and seeds must be nonempty")
    rows = []
    for d in delays:
        total = 0
        for s in seeds:
            res = run_game(replace(base, delay_p=d, delay_q=d, seed=s))
            total += res.points_p + res.points_q
        rows.append(SweepRow(d, total / len(seeds), len(seeds)))
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    lines = ["delay,mean_score,seeds"]
    lines += [f"{r.delay},{r.mean_score:g},{r.seeds_used}" for r in rows]
    return "\n".join(lines) + "\n"

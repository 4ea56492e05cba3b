"""Independent reference implementations used to produce and check goldens.

Nothing here imports from ``copkit``; each routine is a deliberately
plain, straight-line rewrite of the behaviour under test.
"""

from __future__ import annotations

import bz2
import math
import re

import numpy as np

M64 = 2**64


def splitmix64_stream(seed: int):
    state = seed % M64
    while True:
        state = (state + 0x9E3779B97F4A7C15) % M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % M64
        yield z ^ (z >> 31)


def ternary(z: int) -> int:
    # floor(3 z / 2^64) - 1 with exact rationals
    return (3 * z) // M64 - 1


def prng_bytes(seed: int, n: int) -> bytes:
    out = bytearray()
    for z in splitmix64_stream(seed):
        out += z.to_bytes(8, "little")
        if len(out) >= n:
            return bytes(out[:n])


def bz2_ncd(x: bytes, y: bytes) -> float:
    c = lambda b: len(bz2.compress(b, 9))  # noqa: E731
    cx, cy, cxy = c(x), c(y), c(x + y)
    return (cxy - min(cx, cy)) / max(cx, cy)


_ABC = re.compile(r"^(a+)(b+)(c+)$")


def is_anbncn(word: str) -> bool:
    m = _ABC.match(word)
    return bool(m) and len(m.group(1)) == len(m.group(2)) == len(m.group(3))


def walk_positions(seed: int, steps: int, fx: int = 80, fy: int = 24):
    x, y = fx // 2, fy // 2
    draws = splitmix64_stream(seed)
    out = []
    for _ in range(steps):
        dx, dy = ternary(next(draws)), ternary(next(draws))
        if 0 <= x + dx < fx:
            x += dx
        if 0 <= y + dy < fy:
            y += dy
        out.append((x, y))
    return out


def reactive_game(seed: int, lifespan: int, delay_p: int, delay_q: int, fx: int = 80, fy: int = 24):
    """Straight-line reactive-vs-reactive random-walk game."""
    balls = walk_positions(seed, lifespan, fx, fy)
    p_y = q_y = fy // 2
    points_p = points_q = 0
    for t in range(lifespan):
        bx, by = balls[t]
        seen_p = balls[t - delay_p][1] if t >= delay_p else fy // 2
        seen_q = balls[t - delay_q][1] if t >= delay_q else fy // 2
        if p_y < seen_p:
            p_y += 1
        elif p_y > seen_p:
            p_y -= 1
        if q_y < seen_q:
            q_y += 1
        elif q_y > seen_q:
            q_y -= 1
        if bx == 0 and p_y == by:
            points_p += 1
        if bx == fx - 1 and q_y == by:
            points_q += 1
    return points_p, points_q


def kalman_matrix_filter(observations, q: float, r: float, prior_var: float = 1000.0):
    """Textbook matrix-form constant-velocity Kalman filter."""
    F = np.array([[1.0, 1.0], [0.0, 1.0]])
    Q = np.array([[0.0, 0.0], [0.0, q]])
    H = np.array([[1.0, 0.0]])
    x = np.zeros(2)
    P = np.eye(2) * prior_var
    states = []
    for z in observations:
        x = F @ x
        P = F @ P @ F.T + Q
        S = H @ P @ H.T + r
        K = P @ H.T / S
        x = x + (K * (z - H @ x)).ravel()
        P = (np.eye(2) - K @ H) @ P
        states.append((x.copy(), P.copy()))
    return states


def ridge_ar(values, order: int, ridge: float = 1e-9):
    """AR coefficients from a stacked design matrix and numpy's solver."""
    v = np.asarray(values, dtype=float)
    X = np.column_stack([v[order - j - 1 : len(v) - j - 1] for j in range(order)])
    y = v[order:]
    return np.linalg.solve(X.T @ X + ridge * np.eye(order), X.T @ y)


def is_finite(x: float) -> bool:
    return math.isfinite(x)

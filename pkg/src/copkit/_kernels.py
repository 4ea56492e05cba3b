"""Numeric inner loops: PRNG, ball paths, AR fitting, Kalman steps, game ticks.

Every function here is written in the numba-compatible subset of numpy so
the same source serves both the compiled and the plain-Python path.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
# floor(3 * z / 2**64) >= 1  <=>  z >= ceil(2**64 / 3), likewise for 2
THIRD = np.uint64(6148914691236517206)
TWO_THIRDS = np.uint64(12297829382473034411)

RIDGE = 1e-9

KIND_SIMPLE = 0
KIND_AR = 1
KIND_KALMAN = 2
NO_BOUND = np.iinfo(np.int64).max

KALMAN_PRIOR_VAR = 1000.0


@njit
def splitmix64_block(state, n):
    """``n`` consecutive splitmix64 outputs from ``state`` and the advanced state."""
    steps = np.arange(1, n + 1).astype(np.uint64)
    s = steps * GOLDEN + state
    z = (s ^ (s >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    z = z ^ (z >> np.uint64(31))
    new_state = s[n - 1] if n > 0 else state
    return z, new_state


@njit
def ternary_draws(z):
    """Map uint64 outputs to {-1, 0, 1} as floor(3 * z / 2**64) - 1."""
    return (z >= THIRD).astype(np.int64) + (z >= TWO_THIRDS).astype(np.int64) - 1


@njit
def random_walk_path(seed, lifespan, field_x, field_y, x0, y0):
    z, _ = splitmix64_block(seed, 2 * lifespan)
    d = ternary_draws(z)
    xs = np.empty(lifespan, np.int64)
    ys = np.empty(lifespan, np.int64)
    x = x0
    y = y0
    for t in range(lifespan):
        dx = d[2 * t]
        dy = d[2 * t + 1]
        if 0 <= x + dx < field_x:
            x += dx
        if 0 <= y + dy < field_y:
            y += dy
        xs[t] = x
        ys[t] = y
    return xs, ys


@njit
def _reflect(pos, vel, size):
    nxt = pos + vel
    hi = size - 1
    while nxt < 0 or nxt > hi:
        if nxt > hi:
            nxt = 2 * hi - nxt
        else:
            nxt = -nxt
        vel = -vel
    return nxt, vel


@njit
def bounce_path(lifespan, field_x, field_y, x0, y0, vx, vy):
    xs = np.empty(lifespan, np.int64)
    ys = np.empty(lifespan, np.int64)
    x = x0
    y = y0
    for t in range(lifespan):
        x, vx = _reflect(x, vx, field_x)
        y, vy = _reflect(y, vy, field_y)
        xs[t] = x
        ys[t] = y
    return xs, ys


@njit
def ar_fit(values, order):
    """Ridge least squares for y_t = sum_j a_j y_{t-j} over ``values``.

    Returns ``(coefs, ok)``; ``ok`` is false when the design matrix is
    identically zero or elimination hits a zero pivot.
    """
    n = values.shape[0]
    gram = np.zeros((order, order))
    rhs = np.zeros(order)
    for t in range(order, n):
        for i in range(order):
            xi = values[t - 1 - i]
            rhs[i] += xi * values[t]
            for j in range(order):
                gram[i, j] += xi * values[t - 1 - j]
    signal = 0.0
    for i in range(order):
        signal = max(signal, gram[i, i])
        gram[i, i] += RIDGE
    coefs = np.zeros(order)
    if not signal > 0.0:
        return coefs, False
    # Gaussian elimination with partial pivoting
    for col in range(order):
        piv = col
        for row in range(col + 1, order):
            if abs(gram[row, col]) > abs(gram[piv, col]):
                piv = row
        if gram[piv, col] == 0.0:
            return coefs, False
        if piv != col:
            for k in range(order):
                tmp = gram[col, k]
                gram[col, k] = gram[piv, k]
                gram[piv, k] = tmp
            tmp = rhs[col]
            rhs[col] = rhs[piv]
            rhs[piv] = tmp
        for row in range(col + 1, order):
            f = gram[row, col] / gram[col, col]
            for k in range(col, order):
                gram[row, k] -= f * gram[col, k]
            rhs[row] -= f * rhs[col]
    for row in range(order - 1, -1, -1):
        acc = rhs[row]
        for k in range(row + 1, order):
            acc -= gram[row, k] * coefs[k]
        coefs[row] = acc / gram[row, row]
    return coefs, True


@njit
def ar_forecast(recent, coefs, horizon):
    """Iterate the AR recurrence ``horizon`` steps past ``recent`` (oldest first)."""
    order = coefs.shape[0]
    buf = recent[recent.shape[0] - order:].copy()
    out = recent[recent.shape[0] - 1]
    for _ in range(horizon):
        out = 0.0
        for j in range(order):
            out += coefs[j] * buf[order - 1 - j]
        for j in range(order - 1):
            buf[j] = buf[j + 1]
        buf[order - 1] = out
    return out


@njit
def kalman_step(m0, m1, p00, p01, p11, q, r, obs):
    """Constant-velocity predict + position measurement update."""
    m0 = m0 + m1
    p00, p01, p11 = p00 + 2.0 * p01 + p11, p01 + p11, p11 + q
    s = p00 + r
    k0 = p00 / s
    k1 = p01 / s
    innov = obs - m0
    m0 = m0 + k0 * innov
    m1 = m1 + k1 * innov
    p11 = p11 - k1 * p01
    p00 = (1.0 - k0) * p00
    p01 = (1.0 - k0) * p01
    return m0, m1, p00, p01, p11


@njit
def fold(value, hi):
    """Reflect ``value`` into ``[0, hi]`` the way the ball bounces off walls."""
    period = 2.0 * hi
    v = value % period
    if v < 0.0:
        v += period
    return period - v if v > hi else v


@njit
def play_game(ball_x, ball_y, field_x, field_y, delays, nrules, bounds, kinds, iparams, fparams):
    """Run every tick of one game.

    Player ``k`` follows ``nrules[k]`` schedule rules (0 = reactive).
    Rule ``j`` is active while ``tick < bounds[k, j]``; ``iparams`` holds
    (order, window) for AR rules and ``fparams`` holds (q, r) for Kalman
    rules. Returns the two scores and per-tick arrays of player y,
    perceived y and target y, each shaped ``(2, lifespan)``.
    """
    lifespan = ball_x.shape[0]
    start_y = field_y // 2
    player_y = np.empty((2, lifespan), np.int64)
    seen_y = np.empty((2, lifespan), np.int64)
    target_y = np.empty((2, lifespan), np.int64)
    history = np.empty((2, lifespan), np.float64)
    points = np.zeros(2, np.int64)

    nmax = bounds.shape[1]
    # per rule Kalman state: m0, m1, p00, p01, p11
    kal = np.zeros((2, nmax, 5))
    kal[:, :, 2] = KALMAN_PRIOR_VAR
    kal[:, :, 4] = KALMAN_PRIOR_VAR

    ys = np.array([start_y, start_y], np.int64)
    for t in range(lifespan):
        by = ball_y[t]
        for k in range(2):
            d = delays[k]
            seen = ball_y[t - d] if t >= d else start_y
            history[k, t] = seen
            target = seen
            if nrules[k] > 0:
                for j in range(nrules[k]):
                    if kinds[k, j] == KIND_KALMAN:
                        m0, m1, p00, p01, p11 = kalman_step(
                            kal[k, j, 0], kal[k, j, 1], kal[k, j, 2], kal[k, j, 3], kal[k, j, 4],
                            fparams[k, j, 0], fparams[k, j, 1], float(seen),
                        )
                        kal[k, j, 0] = m0
                        kal[k, j, 1] = m1
                        kal[k, j, 2] = p00
                        kal[k, j, 3] = p01
                        kal[k, j, 4] = p11
                active = nrules[k] - 1
                for j in range(nrules[k]):
                    if t < bounds[k, j]:
                        active = j
                        break
                kind = kinds[k, active]
                pred = float(seen)
                if kind == KIND_AR:
                    order = iparams[k, active, 0]
                    window = iparams[k, active, 1]
                    if t + 1 >= window:
                        coefs, ok = ar_fit(history[k, t + 1 - window:t + 1], order)
                        if ok:
                            pred = ar_forecast(history[k, t + 1 - order:t + 1], coefs, d)
                elif kind == KIND_KALMAN:
                    pred = kal[k, active, 0] + d * kal[k, active, 1]
                if np.isfinite(pred):
                    target = int(np.floor(fold(pred, field_y - 1) + 0.5))
                    if target < 0:
                        target = 0
                    elif target > field_y - 1:
                        target = field_y - 1
            if ys[k] < target:
                ys[k] += 1
            elif ys[k] > target:
                ys[k] -= 1
            player_y[k, t] = ys[k]
            seen_y[k, t] = seen
            target_y[k, t] = target
        bx = ball_x[t]
        if bx == 0 and ys[0] == by:
            points[0] += 1
        if bx == field_x - 1 and ys[1] == by:
            points[1] += 1
    return points, player_y, seen_y, target_y


import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import kalman_matrix_filter, prng_bytes, ridge_ar
from copkit.predict import (
    AR,
    ArFitError,
    Kalman,
    Rule,
    Schedule,
    SimplePast,
    cis,
    fit_ar,
    forecast,
    kalman_update,
    pack_bits,
    predict_next,
    randomness_proxy,
)

RAMP = [float(v) for v in range(1, 11)]


def test_simple_past():
    assert predict_next(SimplePast(), [3, 7, 5]) == 5


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_simple_past_is_last(values):
    assert predict_next(SimplePast(), values) == values[-1]


def test_ar_ramp():
    coefs = fit_ar(RAMP, 2, 8)
    assert coefs == pytest.approx((2.0, -1.0), abs=1e-6)
    assert predict_next(AR(2, 8), RAMP) == pytest.approx(11.0, abs=1e-6)


def test_ar_constant_ridge_pull():
    # one normal equation: a * (4 * 16 + 1e-9) = 4 * 16
    (a,) = fit_ar([4.0] * 5, 1, 5)
    assert a == pytest.approx(64 / (64 + 1e-9), abs=1e-15)
    assert abs(a - 1) < 1e-3


def test_ar_errors():
    with pytest.raises(ArFitError):
        fit_ar(RAMP[:5], 2, 8)
    with pytest.raises(ArFitError):
        fit_ar([0.0] * 10, 2, 8)
    with pytest.raises(ValueError):
        fit_ar(RAMP, 2, 4)
    with pytest.raises(ValueError):
        predict_next(SimplePast(), [])


def test_ar_matches_numpy_solver():
    rng = np.random.default_rng(3)
    values = np.cumsum(rng.normal(size=60))
    for order in (1, 2, 3):
        ours = fit_ar(values, order, 40)
        ref = ridge_ar(values[-40:], order)
        assert ours == pytest.approx(tuple(ref), rel=1e-8, abs=1e-10)


@st.composite
def recurrences(draw):
    """Coefficients whose characteristic roots sit near the unit circle.

    Such series keep oscillating, so the design matrix stays well
    conditioned and the ridge term is negligible.
    """
    radius = draw(st.floats(0.95, 1.02))
    angle = draw(st.floats(0.3, 2.8))
    roots = [radius * np.exp(1j * angle), radius * np.exp(-1j * angle)]
    if draw(st.booleans()):
        roots.append(draw(st.sampled_from([-1.0, 1.0])) * draw(st.floats(0.95, 1.0)))
    poly = np.real(np.poly(roots))
    return [float(-c) for c in poly[1:]]


@settings(max_examples=150, deadline=None)
@given(recurrences(), st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_ar_recovers_noiseless_recurrence(coefs, init):
    assume(np.linalg.norm(coefs) <= 4)
    order = len(coefs)
    series = list(init[:order])
    for _ in range(4 * order + 1 + 20):
        series.append(sum(a * series[-1 - j] for j, a in enumerate(coefs)))
    window = 4 * order + 1
    values = np.array(series[-window:])
    X = np.column_stack([values[order - j - 1 : window - j - 1] for j in range(order)])
    sv = np.linalg.svd(X, compute_uv=False)
    # well conditioned: ridge bias ~1e-9/sigma_min^2 and rounding ~eps*cond^2 stay far below 1e-6
    assume(sv[-1] ** 2 > 1.0 and sv[0] / sv[-1] < 100)
    got = fit_ar(series, order, window)
    assert got == pytest.approx(coefs, abs=1e-6)
    nxt = sum(a * series[-1 - j] for j, a in enumerate(coefs))
    assert predict_next(AR(order, window), series) == pytest.approx(nxt, abs=1e-6)


def test_multi_step_ar_forecast():
    assert forecast(AR(2, 8), RAMP, 5) == pytest.approx(15.0, abs=1e-6)
    assert forecast(AR(2, 8), RAMP, 0) == 10.0


def test_kalman_constant_input():
    assert abs(predict_next(Kalman(0.01, 1.0), [5.0] * 50) - 5.0) < 0.05


def test_kalman_first_update():
    state = kalman_update(Kalman(0.01, 1.0), 10.0)
    # prior position variance after predict is 2000; gain 2000/2001
    assert state.position == pytest.approx(10 * 2000 / 2001, rel=1e-12)
    assert abs(state.position - 10) < 0.02


def test_kalman_velocity_on_ramp():
    state = Kalman(0.01, 1.0)
    for v in range(1, 51):
        state = kalman_update(state, float(v))
    assert abs(state.velocity - 1.0) < 0.1


def test_kalman_matches_matrix_form():
    obs = [float(v) for v in np.sin(np.arange(80) / 5) * 7 + np.arange(80) * 0.3]
    ref = kalman_matrix_filter(obs, 0.05, 2.0)
    state = Kalman(0.05, 2.0)
    for z, (x, P) in zip(obs, ref):
        state = kalman_update(state, z)
        assert state.mean == pytest.approx(tuple(x), rel=1e-9, abs=1e-9)
        assert np.array(state.cov) == pytest.approx(P, rel=1e-8, abs=1e-9)


def test_kalman_rejects_nan():
    with pytest.raises(ValueError):
        kalman_update(Kalman(0.01, 1.0), float("nan"))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e4, 1e4), min_size=1, max_size=200), st.floats(1e-4, 10), st.floats(1e-3, 10))
def test_kalman_covariance_stays_positive(observations, q, r):
    state = Kalman(q, r)
    for z in observations:
        state = kalman_update(state, z)
        (a, b), (c, d) = state.cov
        assert a > 0 and d > 0 and b == c
        assert a * d - b * c >= -1e-12 * max(1.0, a * d)


def test_predict_next_does_not_mutate():
    k = Kalman(0.01, 1.0)
    predict_next(k, [1.0, 2.0, 3.0])
    assert k == Kalman(0.01, 1.0)


def test_predictor_invariants():
    with pytest.raises(ValueError):
        AR(0)
    with pytest.raises(ValueError):
        AR(2, 4)
    with pytest.raises(ValueError):
        Kalman(0.0, 1.0)
    assert AR(2).window >= 5


def test_schedule():
    sched = Schedule((Rule(1000, SimplePast()), Rule(5000, AR(2)), Rule(None, Kalman(0.01, 1.0))))
    assert sched.active(0) == SimplePast()
    assert sched.active(999) == SimplePast()
    assert sched.active(1000) == AR(2)
    assert sched.active(10**9) == Kalman(0.01, 1.0)
    with pytest.raises(ValueError):
        Schedule((Rule(5, SimplePast()),))
    with pytest.raises(ValueError):
        Schedule((Rule(5, SimplePast()), Rule(5, SimplePast()), Rule(None, SimplePast())))
    with pytest.raises(ValueError):
        Schedule((Rule(None, SimplePast()), Rule(None, SimplePast())))


def test_cis_examples():
    assert cis([1, 2, 3], [1, 5, 3]) == [1, 0, 1]
    assert cis([4, 5], [4, 5]) == [1, 1]
    assert cis([], [1, 2]) == []
    assert cis([1.0, 2.05], [1.02, 2.0], tol=0.1) == [1, 1]
    assert cis([1.0, 2.5], [1.02, 2.0], tol=0.1) == [1, 0]


@given(st.lists(st.integers(-5, 5)), st.lists(st.integers(-5, 5)))
def test_cis_properties(a, b):
    assert cis(a, a) == [1] * len(a)
    bits = cis(a, b)
    assert len(bits) == min(len(a), len(b))
    assert bits == [int(x == y) for x, y in zip(a, b)]


def test_pack_bits_msb_first_zero_padded():
    assert pack_bits([1, 0, 0, 0, 0, 0, 0, 1, 1]) == bytes([0x81, 0x80])


def _prng_bits(n):
    from freeze_golden import prng_bits

    return prng_bits(2024, n)


def test_randomness_proxy_goldens(golden):
    g = golden["proxy_ratio"]
    const = randomness_proxy([0] * 1000)
    alt = randomness_proxy([0, 1] * 500)
    noise = randomness_proxy(_prng_bits(1000))
    assert (const.compressed_ratio, alt.compressed_ratio, noise.compressed_ratio) == (
        g["constant"], g["alternating"], g["prng"],
    )
    assert const.verdict == alt.verdict == "non_random"
    assert noise.verdict == "random"
    assert noise.hit_rate == sum(_prng_bits(1000)) / 1000


def test_randomness_proxy_report_format():
    report = randomness_proxy([1, 0] * 500)
    assert report.format() == (
        f"length=1000 hits=500 hit_rate=0.500000 ratio={report.compressed_ratio:.6f} verdict=non_random (proxy)"
    )


def test_randomness_proxy_too_short():
    with pytest.raises(ValueError):
        randomness_proxy([1] * 63)


def test_randomness_proxy_deterministic():
    bits = [b % 2 for b in prng_bytes(9, 300)]
    assert randomness_proxy(bits) == randomness_proxy(bits)

import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import hyp2f1

from etamu_relay.errors import AccuracyError, DomainError
from etamu_relay.special import FdArgs, gauss_2f1, lauricella_fd, log_gamma, tanh_sinh


def rel(a, b):
    return abs(a - b) / abs(b)


def mp_fd(a, b, c, x):
    """30-digit reference for F_D from its Euler integral."""
    mpmath.mp.dps = 30
    if len(b) == 1:
        return float(mpmath.hyp2f1(a, b[0], c, x[0]))
    f = lambda t: t ** (a - 1) * (1 - t) ** (c - a - 1) * mpmath.fprod((1 - xi * t) ** (-bi) for bi, xi in zip(b, x))
    pts = [0, 1e-6, 1e-4, 1e-3] + [float(v) for v in mpmath.linspace(1e-2, 0.99, 100)] + [0.999, 1]
    val = mpmath.quad(f, pts)
    return float(mpmath.gamma(c) / (mpmath.gamma(a) * mpmath.gamma(c - a)) * val)


# log_gamma ----------------------------------------------------------------


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-13)
    # Γ(7.5) by recurrence from Γ(0.5)
    g = math.sqrt(math.pi)
    for k in range(7):
        g *= 0.5 + k
    assert log_gamma(7.5) == pytest.approx(math.log(g), rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, math.inf, math.nan])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


# gauss_2f1 ----------------------------------------------------------------


def test_2f1_examples():
    assert gauss_2f1(0.3, 1.7, 2.2, 0.0) == 1.0
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), rel=1e-12)
    assert gauss_2f1(0.5, 0.5, 1.5, 0.25) == pytest.approx(math.asin(0.5) / 0.5, rel=1e-12)


@pytest.mark.parametrize("args", [(1, 1, 2, 1.0), (1, 1, 2, 1.5), (1, 1, 0.0, 0.2), (1, 1, -1.0, 0.2)])
def test_2f1_domain(args):
    with pytest.raises(DomainError):
        gauss_2f1(*args)


@pytest.mark.parametrize(
    "a,b,c,x",
    list(itertools.product((-2.5, -0.5, 0.5, 1.0, 3.25), (0.5, 1.5, 4.0), (0.75, 1.5, 5.0), (-20.0, -2.0, -0.6, -0.2, 0.3, 0.6, 0.95, 0.999))),
)
def test_2f1_vs_scipy(a, b, c, x):
    assert rel(gauss_2f1(a, b, c, x), hyp2f1(a, b, c, x)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(0.05, 6.0),
    b=st.floats(0.05, 6.0),
    dc=st.floats(0.05, 4.0),
    x=st.floats(-50.0, 0.98),
)
def test_2f1_vs_mpmath(a, b, dc, x):
    c = max(a, b) + dc
    mpmath.mp.dps = 30
    ref = float(mpmath.hyp2f1(a, b, c, x))
    assert rel(gauss_2f1(a, b, c, x), ref) <= 1e-10


# lauricella_fd ------------------------------------------------------------


def test_fd_examples():
    assert lauricella_fd(1.5, [0.5, 0.5], 2.5, [0.0, 0.0]) == pytest.approx(1.0, rel=1e-12)
    assert rel(lauricella_fd(0.5, [0.7], 1.5, [0.3]), gauss_2f1(0.5, 0.7, 1.5, 0.3)) < 1e-12
    assert rel(lauricella_fd(0.5, [0.3, 0.4], 1.5, [0.6, 0.6]), gauss_2f1(0.5, 0.7, 1.5, 0.6)) < 1e-12


def test_fd_accepts_bundle():
    args = FdArgs(0.5, [0.7], 1.5, [0.3])
    assert lauricella_fd(args) == lauricella_fd(0.5, [0.7], 1.5, [0.3])
    assert "FdArgs" in repr(args) and args.n == 1


@pytest.mark.parametrize(
    "a,b,c,x",
    [
        (0.0, [1.0], 1.0, [0.1]),  # a must be > 0
        (1.0, [1.0], 1.0, [0.1]),  # c must exceed a
        (0.5, [1.0], 1.5, [1.0]),  # x must be < 1
        (0.5, [1.0, 2.0], 1.5, [0.1]),  # length mismatch
        (0.5, [], 1.5, []),  # empty
        (0.5, [math.nan], 1.5, [0.1]),
    ],
)
def test_fd_invalid(a, b, c, x):
    with pytest.raises(DomainError):
        lauricella_fd(a, b, c, x)


@pytest.mark.parametrize(
    "a,b,dc,x",
    list(itertools.product((0.5, 1.0, 1.5), (0.5, 1.0, 1.5), (0.5, 1.0), (-5.0, -1.0, -0.1, 0.1, 0.5, 0.9))),
)
def test_fd_reduction_chain(a, b, dc, x):
    assert rel(lauricella_fd(a, [b], a + dc, [x]), gauss_2f1(a, b, a + dc, x)) <= 1e-9


def test_fd_permutation_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        b = rng.uniform(-1.0, 3.0, n)
        x = rng.uniform(-30.0, 0.95, n)
        a = rng.uniform(0.2, 4.0)
        c = a + rng.uniform(0.2, 3.0)
        ref = lauricella_fd(a, b, c, x)
        p = rng.permutation(n)
        assert rel(lauricella_fd(a, b[p], c, x[p]), ref) < 1e-12


def test_fd_zero_exponent_drop():
    base = lauricella_fd(1.5, [0.7, 2.0], 3.0, [-4.0, 0.8])
    with_zero = lauricella_fd(1.5, [0.7, 0.0, 2.0, 0.0], 3.0, [-4.0, 0.5, 0.8, -100.0])
    assert rel(with_zero, base) < 1e-12


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(0.1, 5.0),
    dc=st.floats(0.1, 3.0),
    b=st.lists(st.floats(0.1, 3.0), min_size=1, max_size=4),
    data=st.data(),
)
def test_fd_monotone_for_negative_arguments(a, dc, b, data):
    n = len(b)
    x = np.array(data.draw(st.lists(st.floats(-200.0, -1e-3), min_size=n, max_size=n)))
    v = lauricella_fd(a, b, a + dc, x)
    assert 0.0 < v <= 1.0
    i = data.draw(st.integers(0, n - 1))
    x2 = x.copy()
    x2[i] *= 1.5
    assert lauricella_fd(a, b, a + dc, x2) < v


@pytest.mark.parametrize(
    "a,b,c,x",
    [
        (0.5, [0.5, 0.5, 0.5], 1.5, [0.99, 0.98, 0.999]),  # arguments near the pole
        (12.5, [6.0, 6.0, 0.5], 13.5, [-4000.0, -10.0, -1.0]),  # large S, large |x|
        (0.5, [1.5, -2.5], 1.5, [0.9619, 0.9619]),  # large-M usage, negative b
        (0.05, [0.3], 0.1, [0.5]),  # two strong endpoint singularities
    ],
)
def test_fd_vs_mpmath_hard_cases(a, b, c, x):
    assert rel(lauricella_fd(a, b, c, x), mp_fd(a, b, c, x)) <= 1e-9


def test_accuracy_error_carries_estimate():
    # a jump inside the interval defeats the double-exponential rule
    step = lambda t: np.where(t < 1.0 / 3.0, 0.0, 1.0)
    with pytest.raises(AccuracyError) as exc:
        tanh_sinh(step, 0.0, 1.0, rtol=1e-12, max_level=5)
    assert exc.value.estimate == pytest.approx(2.0 / 3.0, abs=1e-2)
    assert exc.value.error > 0.0


def test_fd_near_pole_large_values():
    mpmath.mp.dps = 30
    for x in (1 - 1e-6, 1 - 1e-9):
        ref = float(mpmath.hyp2f1(0.5, 2.5, 1.5, x))
        assert rel(lauricella_fd(0.5, [2.5], 1.5, [x]), ref) <= 1e-9


# tanh_sinh ----------------------------------------------------------------


def test_tanh_sinh_endpoint_singularity():
    v, err = tanh_sinh(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0)
    assert v == pytest.approx(2.0, rel=1e-10)
    assert err >= 0.0


def test_tanh_sinh_orientation_and_empty():
    f = lambda t: np.cos(t)
    assert tanh_sinh(f, 0.0, 1.0)[0] == pytest.approx(math.sin(1.0), rel=1e-12)
    assert tanh_sinh(f, 1.0, 0.0)[0] == pytest.approx(-math.sin(1.0), rel=1e-12)
    assert tanh_sinh(f, 2.0, 2.0) == (0.0, 0.0)

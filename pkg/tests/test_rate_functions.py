import math

import numpy as np
import pytest

from wordshape.rate_functions import (
    RateValue,
    i1_by_quadrature,
    k_eta_asymptotic,
    rate_I_r,
    rate_J,
    rate_J_prime,
    rate_J_second,
    rate_K_closed,
)


def test_rate_value_semantics():
    v = RateValue(0.5)
    assert float(v) == 0.5 and not v.infinite
    assert float(RateValue(-5e-13)) == 0.0  # quadrature dust clamps to zero
    inf = RateValue.infinity()
    assert inf.infinite and math.isinf(float(inf))
    with pytest.raises(ValueError):
        RateValue(-1e-3)
    with pytest.raises(ValueError):
        RateValue(math.nan)


def test_i1_matches_quadrature():
    for x in (2.0, 2.2, 2.5, 3.0, 4.0):
        closed = float(rate_I_r([x]))
        assert closed == pytest.approx(i1_by_quadrature(x), abs=1e-10)


def test_i1_reference_points():
    assert float(rate_I_r([2.0])) == 0.0
    assert float(rate_I_r([3.0])) == pytest.approx(1.429254666011271, abs=1e-12)
    assert float(rate_I_r([2.2])) == pytest.approx(0.121030144120055, abs=1e-12)


def test_rate_i_r_domain():
    assert rate_I_r([3.0, 1.5]).infinite  # second coordinate below 2
    assert rate_I_r([2.5, 3.0]).infinite  # increasing
    assert float(rate_I_r([])) == 0.0
    vec = float(rate_I_r([3.0, 2.5, 2.5]))
    assert vec == pytest.approx(float(rate_I_r([3.0])) + 2 * float(rate_I_r([2.5])))


def test_rate_i_r_monotone_in_each_coordinate():
    xs = np.linspace(2.0, 4.0, 21)
    vals = [float(rate_I_r([x])) for x in xs]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))
    assert vals[0] == 0.0


def test_rate_j_values_and_smoothness():
    assert float(rate_J(0.0)) == pytest.approx(math.log(3) / 2, abs=1e-15)
    assert float(rate_J(1.0)) == pytest.approx(0.075737420522, abs=1e-11)
    assert float(rate_J(2.0)) == 0.0
    assert float(rate_J(5.0)) == 0.0
    # J decreases toward its zero at 2
    xs = np.linspace(-3, 2, 40)
    vals = [float(rate_J(x)) for x in xs]
    assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))


def test_rate_j_derivatives():
    h = 1e-6
    for x in (-2.0, -0.5, 0.7, 1.8):
        num1 = (float(rate_J(x + h)) - float(rate_J(x - h))) / (2 * h)
        assert rate_J_prime(x) == pytest.approx(num1, abs=5e-9)
        num2 = (rate_J_prime(x + h) - rate_J_prime(x - h)) / (2 * h)
        assert rate_J_second(x) == pytest.approx(num2, abs=5e-7)
    assert rate_J_prime(2.0) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        rate_J_prime(2.5)
    with pytest.raises(ValueError):
        rate_J_second(2.5)


def test_rate_k_closed_reference_points():
    assert float(rate_K_closed(0.5)) == pytest.approx(0.555985123962, abs=1e-11)
    assert float(rate_K_closed(1.0)) == pytest.approx(0.119947372730, abs=1e-11)
    assert float(rate_K_closed(1.5)) == pytest.approx(0.012191229161, abs=1e-11)
    assert float(rate_K_closed(1.9)) == pytest.approx(8.57603204e-5, rel=1e-7)


def test_rate_k_closed_domain_and_edges():
    assert rate_K_closed(0.0).infinite
    assert rate_K_closed(-1.0).infinite
    assert float(rate_K_closed(2.0)) == 0.0
    assert float(rate_K_closed(2.5)) == 0.0
    # log singularity at the origin: K(x) + log(x) stays bounded
    for x in (1e-4, 1e-6, 1e-8):
        assert abs(float(rate_K_closed(x)) + math.log(x)) < 0.8


def test_rate_k_closed_near_two_no_cancellation_blowup():
    # longdouble accumulation must keep the tiny positive tail clean
    prev = float(rate_K_closed(1.99))
    for x in (1.995, 1.999, 1.9999):
        cur = float(rate_K_closed(x))
        assert 0.0 <= cur < prev
        prev = cur


def test_rate_k_monotone_decreasing():
    xs = np.linspace(0.05, 1.999, 60)
    vals = [float(rate_K_closed(x)) for x in xs]
    assert all(a > b - 1e-18 for a, b in zip(vals, vals[1:]))


def test_k_eta_asymptotic():
    assert k_eta_asymptotic(-10.0, 0.0) == pytest.approx(
        50.0 + math.log(10.0), abs=1e-12)
    assert k_eta_asymptotic(0.01, 1.0) == pytest.approx(-math.log(0.01), abs=1e-12)
    assert k_eta_asymptotic(-10.0, 0.5) == pytest.approx(
        100.0 + math.log(20.0), abs=1e-12)
    with pytest.raises(ValueError):
        k_eta_asymptotic(-1.0, 1.5)
    with pytest.raises(ValueError):
        k_eta_asymptotic(1.0, 0.5)  # eta < 1 branch needs x < 0
    with pytest.raises(ValueError):
        k_eta_asymptotic(-1.0, 1.0)  # eta = 1 branch needs 0 < x < 1

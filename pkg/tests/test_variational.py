import math

import numpy as np
import pytest

from wordshape import _rng
from wordshape.rate_functions import rate_J, rate_J_prime, rate_K_closed
from wordshape.variational import (
    DiscreteMeasure,
    equilibrium_measure,
    gaussian_shift_rate,
    inf_convolution_check,
    legendre_S,
    rate_K_eta,
    rate_K_variational,
    semicircle_quantile_measure,
    spectral_rate,
)


def test_equilibrium_measure_moments():
    for x in (0.3, 0.8, 1.2, 1.7):
        mu = equilibrium_measure(x)
        assert mu.mass() == pytest.approx(1.0, abs=1e-9)
        assert mu.mean() == pytest.approx(-x, abs=1e-9)
        assert mu.L < 0.0 and mu.L < mu.c2 <= 0.0 or mu.c2 <= 0.0


def test_equilibrium_measure_domain():
    with pytest.raises(ValueError):
        equilibrium_measure(0.0)
    with pytest.raises(ValueError):
        equilibrium_measure(2.0)


def test_equilibrium_density_nonnegative_and_supported():
    rng = _rng.generator(7)
    for x in (0.4, 1.0, 1.6):
        mu = equilibrium_measure(x)
        ys = rng.uniform(mu.L, 0.0, size=1000)
        assert np.all(mu.density(ys) >= -1e-12)
        outside = np.array([mu.L - 0.5, 0.5, 1.0])
        assert np.all(mu.density(outside) == 0.0)


def test_edge_approaches_semicircle_support():
    # near x = 2 the measure spreads toward the shifted semicircle on (-4, 0)
    assert equilibrium_measure(1.999).L == pytest.approx(-4.0, abs=2e-3)


def test_variational_matches_closed_form():
    for x in (0.25, 0.75, 1.25, 1.8):
        assert float(rate_K_variational(x)) == pytest.approx(
            float(rate_K_closed(x)), abs=1e-9)
    assert rate_K_variational(-0.5).infinite
    assert float(rate_K_variational(2.3)) == 0.0


def test_discrete_measure():
    mu = DiscreteMeasure.from_points(np.array([3.0, 1.0, 2.0]))
    assert np.array_equal(mu.locations, [1.0, 2.0, 3.0])
    assert np.allclose(mu.weights, 1 / 3)
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0, 2.0]), np.array([0.6, 0.6]))
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0, 2.0]), np.array([1.2, -0.2]))


def test_spectral_rate_semicircle_near_zero():
    # the semicircle is the minimizer, so the discretized rate sits near 0
    mu = semicircle_quantile_measure(400)
    val = spectral_rate(mu)
    assert -0.02 < val < 0.05


def test_spectral_rate_penalizes_shift():
    shifted = DiscreteMeasure.from_points(
        semicircle_quantile_measure(200).locations + 1.0)
    assert spectral_rate(shifted) > spectral_rate(semicircle_quantile_measure(200)) + 0.3


def test_spectral_rate_guards():
    with pytest.raises(ValueError):
        spectral_rate(DiscreteMeasure.from_points(np.array([1.0])))
    with pytest.raises(ValueError):
        spectral_rate(DiscreteMeasure.from_points(np.array([1.0, 1.0])))


def test_legendre_s_root():
    assert legendre_S(0.0) == pytest.approx(2.0, abs=1e-12)
    for y in (-0.5, -2.0, -10.0):
        s = legendre_S(y)
        assert s <= 2.0
        assert rate_J_prime(s) == pytest.approx(y, abs=1e-10)
    assert legendre_S(-0.5) == pytest.approx(0.434308313315, abs=1e-10)
    assert legendre_S(-2.0) == pytest.approx(-1.577218587618, abs=1e-10)
    with pytest.raises(ValueError):
        legendre_S(0.5)


def test_legendre_s_monotone():
    ys = np.linspace(-6.0, 0.0, 25)
    vals = [legendre_S(y) for y in ys]
    assert all(a < b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_k_eta_endpoints():
    for x in (0.3, 0.9, 1.5, 1.9):
        assert float(rate_K_eta(x, 0.0)) == pytest.approx(float(rate_J(x)), abs=1e-12)
        assert float(rate_K_eta(x, 1.0)) == pytest.approx(
            float(rate_K_closed(x)), abs=1e-12)
    # J is defined on all of (-inf, 2]; eta = 0 keeps that domain
    assert float(rate_K_eta(-1.0, 0.0)) == pytest.approx(float(rate_J(-1.0)), abs=1e-12)


def test_k_eta_domain():
    assert float(rate_K_eta(2.5, 0.7)) == 0.0
    assert rate_K_eta(0.0, 1.0).infinite
    assert rate_K_eta(-0.5, 1.0).infinite
    with pytest.raises(ValueError):
        rate_K_eta(1.0, -0.1)
    with pytest.raises(ValueError):
        rate_K_eta(1.0, 1.1)


def test_k_eta_monotone_in_eta():
    # larger eta adds a nonnegative quadratic to the sup, so K_eta grows
    for x in (0.5, 1.2):
        vals = [float(rate_K_eta(x, e)) for e in (0.0, 0.25, 0.5, 0.75, 1.0)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_gaussian_shift_rate():
    assert gaussian_shift_rate(-1.0, 0.5) == pytest.approx(1.0)
    assert gaussian_shift_rate(0.0, 0.5) == 0.0
    assert math.isinf(gaussian_shift_rate(0.3, 0.5))
    with pytest.raises(ValueError):
        gaussian_shift_rate(-1.0, 0.0)


def test_inf_convolution_recovers_j():
    for eta in (0.25, 0.5, 1.0):
        for x in (-1.0, 0.0, 1.0, 2.0):
            assert inf_convolution_check(x, eta) < 1e-6
    with pytest.raises(ValueError):
        inf_convolution_check(2.5, 0.5)
    with pytest.raises(ValueError):
        inf_convolution_check(0.0, 0.0)

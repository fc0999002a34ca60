"""Closed-form large-deviation rate functions.

Upper tails of the normalized first row decay at speed m with rate I_1
(more generally I_r for the joint first-r event); lower tails decay at
speed m^2 with rate K. J is the eta = 0 member of the Legendre family
K_eta computed in the `variational` module; here only closed forms live.

Values are wrapped in RateValue so a genuine +infinity (outside the
domain) is distinguishable from a float overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad


@dataclass(frozen=True)
class RateValue:
    """Nonnegative extended real: a finite value, or a tagged +infinity."""

    value: float
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, "value", math.inf)
        elif not math.isfinite(self.value):
            raise ValueError("non-finite rate value without the infinity tag")
        elif self.value < 0:
            # closed forms can land a few ulp below zero at domain edges
            if self.value < -1e-12:
                raise ValueError(f"rate values are nonnegative, got {self.value}")
            object.__setattr__(self, "value", 0.0)

    @classmethod
    def infinity(cls) -> "RateValue":
        return cls(math.inf, True)

    def __float__(self) -> float:
        return float(self.value)


def _i1_antiderivative(x: float) -> float:
    # antiderivative of 2*sqrt((z/2)^2 - 1), zero at z = 2
    s = math.sqrt(x * x - 4.0)
    return x * s / 4.0 - math.log((x + s) / 2.0)


def rate_I_r(xs) -> RateValue:
    """Upper-tail rate for the joint first-r rows at levels xs.

    Finite only when xs is nonincreasing with min >= 2; each coordinate
    contributes 2 * integral_2^x sqrt((z/2)^2 - 1) dz.
    """
    x = np.atleast_1d(np.asarray(xs, dtype=float))
    if x.size == 0:
        return RateValue(0.0)
    if np.any(np.diff(x) > 0) or x.min() < 2.0:
        return RateValue.infinity()
    return RateValue(2.0 * sum(_i1_antiderivative(float(v)) for v in x))


def i1_by_quadrature(x: float) -> float:
    """Adaptive-quadrature cross-check of the r = 1 rate integral."""
    if x < 2.0:
        raise ValueError("quadrature form needs x >= 2")
    val, _ = quad(lambda z: 2.0 * math.sqrt((z / 2.0) ** 2 - 1.0), 2.0, x)
    return val


def rate_J(x: float) -> RateValue:
    """Lower-tail rate of the centered top eigenvalue at speed m^2
    (Gaussian-free member of the Legendre family); zero from 2 on."""
    if x >= 2.0:
        return RateValue(0.0)
    s = math.sqrt(12.0 + x * x)
    v = (-x * (-72.0 * x + x ** 3 + 30.0 * s + x * x * s)
         - 216.0 * math.log((x + s) / 6.0)) / 216.0
    return RateValue(v)


def rate_J_prime(x: float) -> float:
    """First derivative of rate_J on (-inf, 2]."""
    if x > 2.0:
        raise ValueError("derivative taken on x <= 2 only; the function is "
                         "identically 0 to the right")
    return (-x ** 3 + 36.0 * x - (12.0 + x * x) ** 1.5) / 54.0


def rate_J_second(x: float) -> float:
    """Second derivative of rate_J on (-inf, 2]; lies in (0, 1) left of 2."""
    if x > 2.0:
        raise ValueError("derivative taken on x <= 2 only; the function is "
                         "identically 0 to the right")
    return (12.0 - x * x - x * math.sqrt(12.0 + x * x)) / 18.0


_LD = np.longdouble
_C13 = _LD(2.0) ** (_LD(1) / 3)      # 2^(1/3)
_C23 = _C13 * _C13                   # 2^(2/3)
_T13 = _LD(3.0) ** (_LD(1) / 3)      # 3^(1/3)
_T16 = _LD(3.0) ** (_LD(1) / 6)      # 3^(1/6)
_T23 = _T13 * _T13                   # 3^(2/3)
_T56 = _T16 * _T16 * _T16 * _T16 * _T16  # 3^(5/6)


def rate_K_closed(x: float) -> RateValue:
    """Lower-tail rate at speed m^2, explicit form.

    +infinity left of 0, zero from 2 on. The explicit expression on (0, 2)
    cancels catastrophically near 2, so it is summed in extended precision;
    near 0 the log terms carry the -log x blowup.
    """
    if x <= 0.0:
        return RateValue.infinity()
    if x >= 2.0:
        return RateValue(0.0)
    xl = _LD(x)
    u = np.sqrt(_LD(81.0) * xl * xl + 12.0) - _LD(9.0) * xl
    w = np.sqrt(_LD(27.0) * xl * xl + 4.0)
    u13 = u ** (_LD(1) / 3)
    u23 = u13 * u13
    assert u > 0 and w > 0
    log_arg = _LD(2.0) * _T13 - _C13 * u23
    assert log_arg > 0
    terms = (
        _LD(3.0) * (_LD(9.0) * _C13 * _T23 * u23 - _LD(8.0)) * xl * xl,
        _LD(9.0) * _C13 * _T16 * u13 * (w * u13 - _LD(5.0) * _C13 * _T16) * xl,
        _LD(-6.0) * _C13 * _T23 * u23,
        _LD(-3.0) * _C23 * _T56 * w * u13,
        _LD(16.0) * np.log(u),
        _LD(-48.0) * np.log(log_arg),
        _LD(60.0) + _LD(32.0) * np.log(_LD(6.0)),
    )
    total = _LD(0.0)
    for t in terms:
        total = total + t
    return RateValue(max(float(total / _LD(48.0)), 0.0))


def k_eta_asymptotic(x: float, eta: float) -> float:
    """Leading asymptotics of the Legendre family: for eta < 1 the deep
    left tail x -> -inf, for eta = 1 the blowup as x -> 0+. Diagnostic
    companion to the exact rate_K_eta, not a substitute."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if eta < 1.0:
        if x >= 0.0:
            raise ValueError("eta < 1 branch describes x < 0")
        return x * x / (2.0 * (1.0 - eta)) + math.log(-x / (1.0 - eta))
    if not 0.0 < x < 1.0:
        raise ValueError("eta = 1 branch describes 0 < x < 1")
    return -math.log(x)

"""Constrained equilibrium measure, variational rate evaluation, and the
Legendre-transform family K_eta.

The lower-tail rate K(x) has two independent evaluations: the explicit
formula in `rate_functions` and the energy of the constrained equilibrium
measure computed here by quadrature. Keeping both alive is the point: they
cross-check each other to ~1e-13 on (0, 2).

The density f_x lives on (L, 0) with an integrable 1/sqrt singularity at
both ends; substituting y = -u^2 removes the inner one, after which plain
adaptive quadrature converges quickly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq, minimize_scalar

from .errors import NumericFailure
from .rate_functions import RateValue, rate_J, rate_J_prime

#: default convergence tolerances (overridable per call)
ROOT_TOL = 1e-12
QUAD_TOL = 1e-10

_CBRT2 = 2.0 ** (1.0 / 3.0)
_CBRT6 = 6.0 ** (1.0 / 3.0)
_P23_2 = 2.0 ** (2.0 / 3.0)
_P23_3 = 3.0 ** (2.0 / 3.0)
_CBRT3 = 3.0 ** (1.0 / 3.0)


def _edge_and_multiplier(x: float) -> tuple[float, float]:
    """Closed forms for the support edge L < 0 and the multiplier c2."""
    q = np.cbrt(math.sqrt(81.0 * x * x + 12.0) - 9.0 * x)
    q2 = q * q
    L = (2.0 * _P23_2 * q2 - 4.0 * _CBRT6) / (_P23_3 * q)
    c2 = ((2.0 * _P23_3 - _CBRT6 * q2) / (_P23_2 * q)
          - (_CBRT2 * _P23_3 * q2 + 6.0 * _P23_2 * _CBRT3 / q2 + 6.0) / (18.0 * x)
          - x)
    return float(L), float(c2)


def _quad_checked(fn, a: float, b: float, tol: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(fn, a, b, epsabs=tol * 1e-2, epsrel=tol, limit=200)
        except IntegrationWarning as exc:
            raise NumericFailure(f"quadrature did not converge: {exc}") from exc
    if err > max(100.0 * tol, 1e-7 * abs(val)):
        raise NumericFailure(f"quadrature error estimate {err:g} too large")
    return val


@dataclass(frozen=True)
class EquilibriumMeasure:
    """Minimizing measure for the constrained energy at parameter x.

    Density on the shifted support (L, 0):

        f_x(y) = sqrt(y (L - y)) (2 c2 + L + 2 (x + y)) / (4 pi y)

    with unit mass and mean -x. ``integrate`` works in the variable
    u = sqrt(-y), which removes the singularity at 0.
    """

    x: float
    L: float
    c2: float

    def density(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y > self.L) & (y < 0.0)
        yy = np.where(inside, y, self.L / 2.0)
        val = (np.sqrt(yy * (self.L - yy))
               * (2.0 * self.c2 + self.L + 2.0 * (self.x + yy))
               / (4.0 * math.pi * yy))
        return np.where(inside, val, 0.0)

    def _weight_u(self, u):
        # y = -u^2 turns f_x(y) dy into -sqrt(-L - u^2) (...) / (2 pi) du;
        # the bracket is negative on the support, so the weight is positive
        rad = np.maximum(-self.L - u * u, 0.0)
        return (-np.sqrt(rad)
                * (2.0 * self.c2 + self.L + 2.0 * self.x - 2.0 * u * u)
                / (2.0 * math.pi))

    def integrate(self, h, tol: float = QUAD_TOL) -> float:
        """integral of h(y) f_x(y) dy over the support."""
        top = math.sqrt(-self.L)
        return _quad_checked(lambda u: h(-u * u) * self._weight_u(u), 0.0, top, tol)

    def mass(self, tol: float = QUAD_TOL) -> float:
        return self.integrate(lambda y: 1.0, tol)

    def mean(self, tol: float = QUAD_TOL) -> float:
        return self.integrate(lambda y: y, tol)


def equilibrium_measure(x: float) -> EquilibriumMeasure:
    """Equilibrium measure at parameter x in (0, 2)."""
    if not 0.0 < x < 2.0:
        raise ValueError("equilibrium measure defined for 0 < x < 2")
    L, c2 = _edge_and_multiplier(x)
    return EquilibriumMeasure(x=x, L=L, c2=c2)


def rate_K_variational(x: float, tol: float = QUAD_TOL) -> RateValue:
    """Lower-tail rate via the equilibrium-measure energy.

    Independent of the explicit formula in rate_functions.rate_K_closed;
    agreement of the two is a standing cross-check.
    """
    if x <= 0.0:
        return RateValue.infinity()
    if x >= 2.0:
        return RateValue(0.0)
    mu = equilibrium_measure(x)
    top = math.sqrt(-mu.L)

    def integrand(u):
        # (1/4)(x + y)^2 - log(-y) at y = -u^2, against the u-weight
        return ((0.25 * (x - u * u) ** 2 - 2.0 * math.log(u)) * mu._weight_u(u))

    val = _quad_checked(integrand, 0.0, top, tol)
    val += x * x / 4.0 + mu.c2 * x / 2.0 - 0.75
    return RateValue(max(val, 0.0))


# ---------------------------------------------------------------------------
# spectral rate for discrete measures


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many weighted atoms; weights sum to 1."""

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if loc.ndim != 1 or loc.shape != w.shape or loc.size == 0:
            raise ValueError("locations/weights must be matching 1-d vectors")
        if not np.all(np.isfinite(loc)):
            raise ValueError("locations must be finite")
        if np.any(w <= 0) or abs(float(w.sum()) - 1.0) > 1e-9:
            raise ValueError("weights must be positive and sum to 1")
        order = np.argsort(loc)
        loc = loc[order].copy()
        w = w[order].copy()
        loc.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_points(cls, points) -> "DiscreteMeasure":
        pts = np.asarray(points, dtype=float)
        return cls(pts, np.full(pts.size, 1.0 / pts.size))


def _semicircle_cdf(t: float) -> float:
    t = min(max(t, -2.0), 2.0)
    return 0.5 + (t * math.sqrt(4.0 - t * t) + 4.0 * math.asin(t / 2.0)) / (4.0 * math.pi)


def semicircle_quantile_measure(npoints: int) -> DiscreteMeasure:
    """Equal-weight atoms at the semicircle quantiles (i + 1/2)/npoints."""
    qs = (np.arange(npoints) + 0.5) / npoints
    pts = [brentq(lambda t, q=q: _semicircle_cdf(t) - q, -2.0, 2.0, xtol=1e-13)
           for q in qs]
    return DiscreteMeasure.from_points(np.asarray(pts))


def spectral_rate(mu: DiscreteMeasure) -> float:
    """Quadratic-plus-logarithmic energy of a discrete measure, zero at the
    semicircle. The diverging self-interaction of each atom is replaced by
    w_i^2 log(b_i) with b_i the local atom spacing; the induced bias decays
    with refinement and is covered by the documented tolerance bands."""
    x = mu.locations
    w = mu.weights
    if x.size < 2:
        raise ValueError("need at least two atoms for the spacing surrogate")
    if np.any(np.diff(x) == 0.0):
        raise ValueError("atoms must be distinct")
    gaps = np.empty_like(x)
    gaps[1:-1] = (x[2:] - x[:-2]) / 2.0
    gaps[0] = x[1] - x[0]
    gaps[-1] = x[-1] - x[-2]
    diff = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(diff, 1.0)  # log 1 = 0 drops the diagonal from the sum
    cross = -float(w @ np.log(diff) @ w)
    self_energy = -float((w * w) @ np.log(gaps))
    return 0.5 * float(w @ (x * x)) + cross + self_energy - 0.75


# ---------------------------------------------------------------------------
# Legendre machinery


def legendre_S(y: float, root_tol: float = ROOT_TOL) -> float:
    """Unique solution of rate_J_prime(t) = y on (-inf, 2]; increasing,
    S(0) = 2, and y < S(y) < y + 1 once y < -6."""
    if y > 0.0:
        raise ValueError("S is defined on y <= 0")
    if y == 0.0:
        return 2.0
    lo = min(y, -6.0) - 1.0
    return float(brentq(lambda t: rate_J_prime(t) - y, lo, 2.0, xtol=root_tol))


def rate_K_eta(x: float, eta: float, root_tol: float = ROOT_TOL) -> RateValue:
    """Legendre-family rate K_eta(x) = sup_{y <= 0} of
    x y - y S(y) + J(S(y)) + eta y^2 / 2.

    Interpolates between K_0 = J and K_1 = K; zero from 2 on; +infinity
    for eta = 1 and x <= 0.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if x >= 2.0:
        return RateValue(0.0)
    if eta == 1.0 and x <= 0.0:
        return RateValue.infinity()

    def slope(y: float) -> float:
        return x - legendre_S(y, root_tol) + eta * y

    # slope(0) = x - 2 < 0 here; walk left until the slope turns positive
    a = -1.0
    while slope(a) <= 0.0:
        a *= 2.0
        if a < -1e12:
            raise NumericFailure("no interior maximizer found")
    y_star = float(brentq(slope, a, 0.0, xtol=root_tol))
    s = legendre_S(y_star, root_tol)
    val = x * y_star - y_star * s + float(rate_J(s)) + eta * y_star * y_star / 2.0
    return RateValue(max(val, 0.0))


def gaussian_shift_rate(t: float, eta: float) -> float:
    """Rate of the Gaussian shift at weight eta: t^2/(2 eta) on t <= 0,
    +infinity to the right."""
    if eta <= 0.0:
        raise ValueError("eta must be positive")
    return t * t / (2.0 * eta) if t <= 0.0 else math.inf


def inf_convolution_check(x: float, eta: float, grid_points: int = 200) -> float:
    """Residual of the decomposition J = K_eta inf-convolved with the
    Gaussian-shift rate: |inf_y (K_eta(y) + G_eta(x - y)) - J(x)|."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    if x > 2.0:
        raise ValueError("check defined for x <= 2")

    def objective(y: float) -> float:
        g = gaussian_shift_rate(x - y, eta)
        if math.isinf(g):
            return math.inf
        k = rate_K_eta(y, eta)
        return math.inf if k.infinite else k.value + g

    if x == 2.0:
        best = objective(2.0)
    else:
        ys = np.linspace(x, 2.0, grid_points)
        vals = [objective(float(y)) for y in ys]
        i = int(np.argmin(vals))
        lo = float(ys[max(i - 1, 0)])
        hi = float(ys[min(i + 1, grid_points - 1)])
        if lo == hi:
            best = vals[i]
        else:
            res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-10})
            best = min(float(res.fun), vals[i])
    return abs(best - float(rate_J(x)))

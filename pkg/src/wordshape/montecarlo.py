"""Monte-Carlo harness: tail estimates, distributional-identity KS tests,
concentration fits, and the slope tables joining estimators to rate
functions.

Determinism contract: every estimate is a pure function of (config, seed).
Each repetition draws from its own seed substream indexed by repetition
number, and reductions are order-independent, so the worker count never
changes a result, only the wall time.
"""

from __future__ import annotations

import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, _rng, rmt
from .rate_functions import rate_I_r, rate_K_closed
from .tableaux import normalize_nonuniform
from .wordmodel import AlphabetDistribution, build_alias_table, multiplicity_stats

#: two-sample KS null quantile constant at significance 1e-3
KS_ALPHA = 1e-3

_SPEED_TOKENS = ("m", "m2", "k", "k2")


@dataclass(frozen=True)
class TailEstimate:
    """Indicator-mean tail estimate at a fixed LDP speed."""

    p_hat: float
    stderr: float
    reps: int
    speed: float
    rate_estimate: float

    def __post_init__(self):
        if not 0.0 <= self.p_hat <= 1.0:
            raise ValueError("p_hat must lie in [0, 1]")
        if (self.p_hat > 0.0) == math.isinf(self.rate_estimate):
            raise ValueError("rate_estimate must be finite exactly when p_hat > 0")

    @classmethod
    def from_hits(cls, hits: int, reps: int, speed: float) -> "TailEstimate":
        p = hits / reps
        stderr = math.sqrt(p * (1.0 - p) / reps)
        rate = -math.log(p) / speed if p > 0.0 else math.inf
        return cls(p_hat=p, stderr=stderr, reps=reps, speed=speed, rate_estimate=rate)

    @property
    def zero_hits(self) -> bool:
        return self.p_hat == 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid description for tail experiments.

    model: "uniform", "traceless" (spectral side, n ignored), or an
    AlphabetDistribution for the nonuniform word model.
    sizes: alphabet sizes / matrix dimensions (ignored for a distribution,
    which fixes its own alphabet).
    thresholds: floats, or tuples of floats for joint first-r row events
    (uniform upper side only).
    speed: one of m, m2, k, k2; default m/k on the upper side and m2/k2 on
    the lower side.
    """

    model: object
    n: int
    sizes: tuple[int, ...]
    thresholds: tuple
    side: str
    reps: int
    seed: int
    workers: int = 1
    speed: str | None = None

    def __post_init__(self):
        if self.side not in ("upper", "lower"):
            raise ValueError("side must be 'upper' or 'lower'")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.speed is not None and self.speed not in _SPEED_TOKENS:
            raise ValueError(f"speed must be one of {_SPEED_TOKENS}")
        for x in self.thresholds:
            vals = x if isinstance(x, tuple) else (x,)
            if not all(math.isfinite(v) for v in vals):
                raise ValueError("thresholds must be finite")

    def speed_token(self) -> str:
        if self.speed is not None:
            return self.speed
        word_uniform = self.model in ("uniform", "traceless")
        if self.side == "upper":
            return "m" if word_uniform else "k"
        return "m2" if word_uniform else "k2"


@dataclass(frozen=True)
class TailPoint:
    """One grid point of an experiment: (size, threshold) plus its estimate."""

    size: int
    threshold: object
    estimate: TailEstimate


def _speed_value(token: str, size: int) -> float:
    return float(size) if token in ("m", "k") else float(size) ** 2


def _parallel_fill(count: int, workers: int, fill) -> None:
    """Run fill(start, stop) over a partition of range(count); the partition
    never affects results because every callee writes disjoint slices."""
    if workers <= 1 or count < 4 * workers:
        fill(0, count)
        return
    bounds = np.linspace(0, count, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fill, int(a), int(b))
                   for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        for f in futures:
            f.result()


def _word_r1_samples(model, n: int, size: int, reps: int, seed: int,
                     workers: int) -> np.ndarray:
    """R1 for reps independent words, one seed substream per repetition."""
    seeds = _rng.stream_seeds(seed, reps)
    out = np.empty(reps, dtype=np.int64)
    if isinstance(model, AlphabetDistribution):
        accept, alias = build_alias_table(model.probs)
        accept = np.ascontiguousarray(accept)
        alias = np.ascontiguousarray(alias)

        def fill(a, b):
            for i in range(a, b):
                out[i] = _kernels.r1_alias_stream(seeds[i], n, accept, alias)
    else:
        if size > _kernels.BITMASK_MAX_ALPHABET:
            raise ValueError("uniform sampler caps the alphabet at 64 letters")

        def fill(a, b):
            for i in range(a, b):
                out[i] = _kernels.r1_uniform_stream(seeds[i], n, size)

    _parallel_fill(reps, workers, fill)
    return out


def _word_shape_samples(n: int, size: int, r: int, reps: int, seed: int,
                        workers: int) -> np.ndarray:
    """First r row lengths for reps uniform words (same letter streams as
    _word_r1_samples, so row 1 agrees sample by sample)."""
    if size > _kernels.BITMASK_MAX_ALPHABET:
        raise ValueError("uniform sampler caps the alphabet at 64 letters")
    seeds = _rng.stream_seeds(seed, reps)
    out = np.zeros((reps, size), dtype=np.int64)

    def fill(a, b):
        for i in range(a, b):
            _kernels.shape_uniform_stream(seeds[i], n, size, out[i])

    _parallel_fill(reps, workers, fill)
    return out[:, :r]


def _check_nonuniform_hypotheses(dist: AlphabetDistribution, n: int) -> None:
    st = multiplicity_stats(dist)
    if st.k ** 3 / st.p_max > n / 10.0:
        warnings.warn(
            f"k^3/p_max = {st.k ** 3 / st.p_max:.3g} exceeds n/10; the "
            "nonuniform limit theorems are out of their regime at this scale",
            stacklevel=3)
    if st.p_2nd is not None and n * st.p_2nd ** 2 / st.p_max > 0.1:
        warnings.warn(
            f"n p_2nd^2 / p_max = {n * st.p_2nd ** 2 / st.p_max:.3g} is not "
            "small; second-tier letters may contaminate the top-row statistics",
            stacklevel=3)


def estimate_row_tail(cfg: ExperimentConfig) -> list[TailPoint]:
    """Tail estimates for the normalized first row over the config grid.

    Scalar thresholds for one size share a single sample batch, which makes
    the estimated upper-tail p_hat exactly nonincreasing in the threshold.
    """
    if cfg.model == "traceless":
        raise ValueError("estimate_row_tail works on word models; "
                         "use estimate_eigen_tail for spectra")
    token = cfg.speed_token()
    nonuniform = isinstance(cfg.model, AlphabetDistribution)
    if nonuniform:
        _check_nonuniform_hypotheses(cfg.model, cfg.n)
        st = multiplicity_stats(cfg.model)
        sizes = (cfg.model.m,)
    else:
        sizes = cfg.sizes
    points: list[TailPoint] = []
    for size in sizes:
        scalars = [x for x in cfg.thresholds if not isinstance(x, tuple)]
        joints = [x for x in cfg.thresholds if isinstance(x, tuple)]
        speed = _speed_value(token, st.k if nonuniform else size)
        by_threshold: dict = {}
        if scalars:
            r1 = _word_r1_samples(cfg.model, cfg.n, size, cfg.reps, cfg.seed,
                                  cfg.workers)
            if nonuniform:
                z = np.array([normalize_nonuniform(int(v), cfg.n, st.p_max, st.k)
                              for v in r1])
            else:
                z = (r1 - cfg.n / size) / math.sqrt(cfg.n)
            for x in scalars:
                hits = int((z >= x).sum()) if cfg.side == "upper" else int((z <= x).sum())
                by_threshold[x] = TailEstimate.from_hits(hits, cfg.reps, speed)
            if cfg.side == "upper":
                ordered = sorted(scalars)
                ps = [by_threshold[x].p_hat for x in ordered]
                assert all(a >= b for a, b in zip(ps, ps[1:])), \
                    "shared samples must give monotone upper tails"
        for xs in joints:
            if nonuniform or cfg.side != "upper":
                raise ValueError("joint first-r events supported for the "
                                 "uniform model, upper side")
            rows = _word_shape_samples(cfg.n, size, len(xs), cfg.reps, cfg.seed,
                                       cfg.workers)
            z = (rows - cfg.n / size) / math.sqrt(cfg.n)
            hits = int(np.all(z >= np.asarray(xs), axis=1).sum())
            by_threshold[xs] = TailEstimate.from_hits(hits, cfg.reps, speed)
        points.extend(TailPoint(size, x, by_threshold[x]) for x in cfg.thresholds)
    return points


def estimate_eigen_tail(m: int, x: float, side: str, reps: int,
                        seed: int) -> TailEstimate:
    """Tail estimate for the scaled top eigenvalue of the traceless GUE."""
    if side not in ("upper", "lower"):
        raise ValueError("side must be 'upper' or 'lower'")
    if reps < 1:
        raise ValueError("reps must be at least 1")
    spectra = rmt.sample_gue_spectra(m, reps, seed, center=True)
    xi1 = spectra[:, 0] / math.sqrt(m)
    hits = int((xi1 >= x).sum()) if side == "upper" else int((xi1 <= x).sum())
    speed = float(m) if side == "upper" else float(m) ** 2
    return TailEstimate.from_hits(hits, reps, speed)


# ---------------------------------------------------------------------------
# distributional identities


def _draw_scalar_samples(spec: dict, reps: int, seed: int) -> np.ndarray:
    kind = spec.get("kind")
    if kind == "gue_top":
        return rmt.sample_gue_spectra(spec["m"], reps, seed)[:, 0]
    if kind == "traceless_top":
        return rmt.sample_gue_spectra(spec["m"], reps, seed, center=True)[:, 0]
    if kind == "block_top":
        bspec = rmt.BlockEnsembleSpec(tuple(spec["probs"]), tuple(spec["mults"]))
        return rmt.sample_block_tops(bspec, reps, seed)
    if kind == "block_top_plus_gauss":
        bspec = rmt.BlockEnsembleSpec(tuple(spec["probs"]), tuple(spec["mults"]))
        tops = rmt.sample_block_tops(bspec, reps, seed)
        g = np.random.Generator(np.random.PCG64(_rng.stream_seed(seed, reps)))
        return tops + math.sqrt(bspec.p_max) * g.standard_normal(reps)
    if kind == "brownian":
        return rmt.brownian_functional_batch(spec["k"], spec.get("steps", 4096),
                                             spec.get("rho", 0.0), reps, seed)
    if kind == "gaussian":
        g = np.random.Generator(np.random.PCG64(_rng.stream_seed(seed, 0)))
        return spec.get("loc", 0.0) + spec.get("scale", 1.0) * g.standard_normal(reps)
    raise ValueError(f"unknown sampler kind {kind!r}")


def ks_statistic(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov sup distance."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


def ks_null_quantile(alpha: float, n_a: int, n_b: int) -> float:
    """Asymptotic two-sample KS rejection threshold at significance alpha."""
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c * math.sqrt((n_a + n_b) / (n_a * n_b))


@dataclass(frozen=True)
class KSResult:
    statistic: float
    threshold: float
    passed: bool
    n_a: int
    n_b: int


def identity_ks_test(spec_a: dict, spec_b: dict, reps: int, seed: int,
                     reps_b: int | None = None,
                     bias_allowance: float = 0.0) -> KSResult:
    """Two-sample KS test of an equality-in-law claim.

    Pass iff the statistic is below the alpha = 1e-3 null quantile plus the
    stated bias allowance (nonzero when one side carries a known grid bias,
    e.g. Brownian functional samples on a finite grid).
    """
    if reps < 100 or (reps_b is not None and reps_b < 100):
        raise ValueError("need at least 100 repetitions per side")
    n_b = reps_b if reps_b is not None else reps
    a = _draw_scalar_samples(spec_a, reps, _rng.stream_seed(seed, 1))
    b = _draw_scalar_samples(spec_b, n_b, _rng.stream_seed(seed, 2))
    stat = ks_statistic(a, b)
    threshold = ks_null_quantile(KS_ALPHA, reps, n_b) + bias_allowance
    return KSResult(statistic=stat, threshold=threshold,
                    passed=stat <= threshold, n_a=reps, n_b=n_b)


# ---------------------------------------------------------------------------
# concentration fits


@dataclass(frozen=True)
class ConcentrationRow:
    side: str
    n: int
    size: int
    eps: float
    p_hat: float
    reps: int


@dataclass(frozen=True)
class ConcentrationFit:
    c_hat: float
    intercept: float
    n_points: int
    envelope_ok: bool
    max_envelope_ratio: float


@dataclass(frozen=True)
class ConcentrationReport:
    rows: tuple[ConcentrationRow, ...]
    fits: dict = field(default_factory=dict)
    insufficient: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        if self.insufficient:
            return False
        return all(f.c_hat > 0.0 and f.envelope_ok for f in self.fits.values())


def _fit_side(rows: list[ConcentrationRow], exponent_size: int,
              exponent_eps: float) -> ConcentrationFit | None:
    scales = np.array([r.size ** exponent_size * r.eps ** exponent_eps
                       for r in rows])
    p = np.array([r.p_hat for r in rows])
    pos = p > 0.0
    if pos.sum() < 3:
        return None
    design = np.stack([np.ones(int(pos.sum())), -scales[pos]], axis=1)
    coef, *_ = np.linalg.lstsq(design, np.log(p[pos]), rcond=None)
    intercept, c_hat = float(coef[0]), float(coef[1])
    envelope = 10.0 * np.exp(intercept - c_hat * scales)
    ratios = np.where(p > 0, p / envelope, 0.0)
    return ConcentrationFit(c_hat=c_hat, intercept=intercept,
                            n_points=int(pos.sum()),
                            envelope_ok=bool(np.all(p <= envelope)),
                            max_envelope_ratio=float(ratios.max()))


def concentration_check(model, grid, eps_grid, reps: int, seed: int,
                        workers: int = 1) -> ConcentrationReport:
    """Estimate both tails of the normalized first row over a grid of
    (n, size) times eps and fit the predicted decay shapes.

    Upper-tail thresholds sit at 2(1 + eps), lower at 2(1 - eps); the fits
    regress log p_hat on -c * size * eps^(3/2) (upper) and
    -c * size^2 * eps^3 (lower) with a free intercept.
    """
    rows: list[ConcentrationRow] = []
    for n, size in grid:
        if isinstance(model, AlphabetDistribution):
            st = multiplicity_stats(model)
            r1 = _word_r1_samples(model, n, model.m, reps, seed, workers)
            z = np.array([normalize_nonuniform(int(v), n, st.p_max, st.k)
                          for v in r1])
            fit_size = st.k
        else:
            r1 = _word_r1_samples("uniform", n, size, reps, seed, workers)
            z = (r1 - n / size) / math.sqrt(n)
            fit_size = size
        for eps in eps_grid:
            up = int((z >= 2.0 * (1.0 + eps)).sum())
            lo = int((z <= 2.0 * (1.0 - eps)).sum())
            rows.append(ConcentrationRow("upper", n, fit_size, eps, up / reps, reps))
            rows.append(ConcentrationRow("lower", n, fit_size, eps, lo / reps, reps))
    fits = {}
    insufficient = []
    for side, es, ee in (("upper", 1, 1.5), ("lower", 2, 3.0)):
        side_rows = [r for r in rows if r.side == side]
        fit = _fit_side(side_rows, es, ee)
        if fit is None:
            insufficient.append(side)
        else:
            fits[side] = fit
    return ConcentrationReport(rows=tuple(rows), fits=fits,
                               insufficient=tuple(insufficient))


# ---------------------------------------------------------------------------
# slope tables


_CSV_HEADER = "model,n,size,x,side,speed,reps,p_hat,stderr,rate_estimate,rate_value,ratio"
_CSV_SCHEMA = "# wordshape ldp-slope schema 1"


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return format(v, ".10g")
    return str(v)


@dataclass(frozen=True)
class SlopeRow:
    model: str
    n: int
    size: int
    x: object
    side: str
    speed: float
    estimate: TailEstimate
    rate_value: float

    @property
    def ratio(self) -> float:
        if self.estimate.zero_hits or not 0.0 < self.rate_value < math.inf:
            return math.nan
        return self.estimate.rate_estimate / self.rate_value


@dataclass(frozen=True)
class SlopeTable:
    rows: tuple[SlopeRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(_CSV_SCHEMA + "\n")
        buf.write(_CSV_HEADER + "\n")
        for r in self.rows:
            x_repr = ";".join(_fmt(float(v)) for v in r.x) \
                if isinstance(r.x, tuple) else _fmt(float(r.x))
            ratio = r.ratio
            cells = (r.model, str(r.n), str(r.size), x_repr, r.side,
                     _fmt(r.speed), str(r.estimate.reps),
                     _fmt(r.estimate.p_hat), _fmt(r.estimate.stderr),
                     _fmt(r.estimate.rate_estimate), _fmt(r.rate_value),
                     "nan" if math.isnan(ratio) else _fmt(ratio))
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()


def _matching_rate_value(model, side: str, token: str, x) -> float:
    from .variational import rate_K_eta  # deferred: variational pulls scipy bits

    if side == "upper":
        xs = list(x) if isinstance(x, tuple) else [x]
        return float(rate_I_r(xs))
    if isinstance(model, AlphabetDistribution) or token == "k2":
        eta = multiplicity_stats(model).eta_hat if isinstance(
            model, AlphabetDistribution) else 1.0
        return float(rate_K_eta(float(x), min(eta, 1.0)))
    return float(rate_K_closed(float(x)))


def ldp_slope_experiment(cfg: ExperimentConfig) -> SlopeTable:
    """Join tail estimates to their matching rate-function values.

    Upper-side rows compare against the r = 1 (or joint) upper rate, lower
    uniform/spectral rows against the explicit lower rate, and lower
    nonuniform rows against the Legendre family at eta_hat.
    """
    token = cfg.speed_token()
    rows: list[SlopeRow] = []
    if cfg.model == "traceless":
        for m in cfg.sizes:
            for x in cfg.thresholds:
                est = estimate_eigen_tail(m, float(x), cfg.side, cfg.reps, cfg.seed)
                rv = _matching_rate_value(cfg.model, cfg.side, token, x)
                rows.append(SlopeRow("traceless", 0, m, x, cfg.side,
                                     est.speed, est, rv))
        return SlopeTable(tuple(rows))
    name = "nonuniform" if isinstance(cfg.model, AlphabetDistribution) else "uniform"
    for point in estimate_row_tail(cfg):
        rv = _matching_rate_value(cfg.model, cfg.side, token, point.threshold)
        rows.append(SlopeRow(name, cfg.n, point.size, point.threshold, cfg.side,
                             point.estimate.speed, point.estimate, rv))
    return SlopeTable(tuple(rows))

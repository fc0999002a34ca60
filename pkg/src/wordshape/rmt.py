"""Spectral samplers: GUE, traceless GUE, block ensembles, and the
pinned Brownian cut-point functional.

Entry convention for the m x m GUE: off-diagonal real and imaginary parts
are N(0, 1/2), diagonal entries are real N(0, 1). With that scaling the
empirical spectrum of X/sqrt(m) approaches the semicircle on [-2, 2] and
the top eigenvalue sits near 2*sqrt(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import _rng
from .errors import NumericFailure

_EIG_CHUNK = 512


@dataclass(frozen=True)
class SpectrumSample:
    """Eigenvalues sorted nonincreasing, with the generating ensemble tag."""

    eigenvalues: np.ndarray
    m: int
    ensemble: str

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.size != self.m:
            raise ValueError("eigenvalue count must equal m")
        if np.any(np.diff(ev) > 0):
            raise ValueError("eigenvalues must be sorted nonincreasing")
        if self.ensemble not in ("gue", "traceless", "block"):
            raise ValueError(f"unknown ensemble tag {self.ensemble!r}")
        if self.ensemble == "traceless" and abs(float(ev.sum())) > 1e-9 * self.m:
            raise ValueError("traceless spectrum must sum to zero")
        ev = ev.copy()
        ev.flags.writeable = False
        object.__setattr__(self, "eigenvalues", ev)

    def scaled(self) -> np.ndarray:
        """Eigenvalues divided by sqrt(m)."""
        return self.eigenvalues / math.sqrt(self.m)


def _gue_matrix(m: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((m, m))
    b = rng.standard_normal((m, m))
    z = a + 1j * b
    return (z + z.conj().T) / 2.0


def _eigvalsh_desc(h: np.ndarray) -> np.ndarray:
    try:
        ev = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"eigensolver did not converge: {exc}") from exc
    return ev[..., ::-1]


def sample_gue_spectrum(m: int, seed: int) -> SpectrumSample:
    """Spectrum of one m x m GUE draw, deterministic given seed."""
    if m < 1:
        raise ValueError("dimension must be at least 1")
    rng = _rng.generator(seed)
    ev = _eigvalsh_desc(_gue_matrix(m, rng))
    return SpectrumSample(ev, m, "gue")


def traceless(s: SpectrumSample) -> SpectrumSample:
    """Center the spectrum: eigenvalues of X - (tr X / m) Id."""
    ev = s.eigenvalues - s.eigenvalues.mean()
    ev = ev - ev.mean()  # second pass kills the last ulp of drift
    return SpectrumSample(ev, s.m, "traceless")


def sample_gue_spectra(m: int, reps: int, seed: int, center: bool = False) -> np.ndarray:
    """(reps, m) array of spectra, one seed substream per repetition.

    Row 0 coincides with sample_gue_spectrum(m, seed); chunking only
    batches the eigensolver calls and never changes the draws.
    """
    if m < 1 or reps < 0:
        raise ValueError("need m >= 1 and reps >= 0")
    out = np.empty((reps, m))
    seeds = _rng.stream_seeds(seed, reps)
    h = np.empty((min(_EIG_CHUNK, max(reps, 1)), m, m), dtype=complex)
    for start in range(0, reps, _EIG_CHUNK):
        stop = min(start + _EIG_CHUNK, reps)
        for i in range(start, stop):
            rng = np.random.Generator(np.random.PCG64(int(seeds[i])))
            h[i - start] = _gue_matrix(m, rng)
        out[start:stop] = _eigvalsh_desc(h[: stop - start])
    if center:
        out -= out.mean(axis=1, keepdims=True)
    return out


def log_joint_density(xi, m: int) -> float:
    """Log joint density of the scaled GUE eigenvalue vector.

    Density proportional to exp(-(m/2) sum xi_i^2) * prod_{i<j} (xi_i - xi_j)^2
    with normalizer Z_m = (2 pi)^{m/2} m^{-m^2/2} prod_{j<=m} j!.
    Repeated coordinates give -inf.
    """
    if m > 30:
        raise ValueError("joint density supported for m <= 30")
    x = np.asarray(xi, dtype=float)
    if x.shape != (m,):
        raise ValueError(f"expected {m} coordinates")
    # sorting first makes the value bitwise independent of coordinate order
    x = np.sort(x)[::-1]
    diffs = x[:, None] - x[None, :]
    off = diffs[np.triu_indices(m, k=1)]
    if np.any(off == 0.0):
        return -math.inf
    log_z = (m / 2.0) * math.log(2.0 * math.pi) - (m * m / 2.0) * math.log(m) \
        + float(gammaln(np.arange(2, m + 2)).sum())
    return -log_z - (m / 2.0) * float(x @ x) + 2.0 * float(np.log(np.abs(off)).sum())


@dataclass(frozen=True)
class BlockEnsembleSpec:
    """Block-diagonal GUE: distinct probabilities p1 > p2 > ... with
    multiplicities d1, d2, ...; block i is an independent d_i x d_i GUE and
    sum d_i p_i = 1."""

    probs: tuple[float, ...]
    mults: tuple[int, ...]

    def __post_init__(self):
        p = tuple(float(v) for v in self.probs)
        d = tuple(int(v) for v in self.mults)
        if len(p) != len(d) or not p:
            raise ValueError("probs and mults must be equal-length, nonempty")
        if any(v <= 0 for v in p) or any(x < y for x, y in zip(p, p[1:])) or len(set(p)) != len(p):
            raise ValueError("probabilities must be positive and strictly decreasing")
        if any(v < 1 for v in d):
            raise ValueError("multiplicities must be positive")
        if abs(sum(pi * di for pi, di in zip(p, d)) - 1.0) > 1e-12:
            raise ValueError("sum of d_i * p_i must be 1")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "mults", d)

    @property
    def m(self) -> int:
        return sum(self.mults)

    @property
    def p_max(self) -> float:
        return self.probs[0]

    def diag_probs(self) -> np.ndarray:
        """Per-diagonal-entry probability, blocks concatenated."""
        return np.repeat(np.asarray(self.probs), np.asarray(self.mults))

    def to_json(self) -> str:
        import json

        return json.dumps({"probs": list(self.probs), "mults": list(self.mults)})

    @classmethod
    def from_json(cls, text: str) -> "BlockEnsembleSpec":
        import json

        data = json.loads(text)
        return cls(tuple(data["probs"]), tuple(data["mults"]))


@dataclass(frozen=True)
class BlockSample:
    """Output of one block-ensemble draw."""

    lambda_tilde_1_0: float
    blocks: tuple[np.ndarray, ...] | None = None


def _modified_first_block(spec: BlockEnsembleSpec, rng: np.random.Generator):
    """Draw all blocks, apply the traceless-style diagonal modification
    X_hh - sqrt(p_h) * sum_g sqrt(p_g) X_gg, and return (first block, all blocks)."""
    blocks = [_gue_matrix(d, rng) for d in spec.mults]
    sq = np.sqrt(spec.diag_probs())
    diag = np.concatenate([np.real(np.diagonal(b)) for b in blocks])
    t = float(sq @ diag)
    offset = 0
    modified = []
    for b, d in zip(blocks, spec.mults):
        bm = b.copy()
        idx = np.arange(d)
        bm[idx, idx] = diag[offset:offset + d] - sq[offset:offset + d] * t
        modified.append(bm)
        offset += d
    return modified[0], modified


def sample_block_traceless(spec: BlockEnsembleSpec, seed: int,
                           keep_blocks: bool = False) -> BlockSample:
    """One draw of the modified block ensemble; returns the top eigenvalue
    of the block carrying p_max, matrix-level (no sqrt(m) scaling)."""
    rng = _rng.generator(seed)
    first, blocks = _modified_first_block(spec, rng)
    top = float(_eigvalsh_desc(first)[0])
    return BlockSample(top, tuple(blocks) if keep_blocks else None)


def sample_block_tops(spec: BlockEnsembleSpec, reps: int, seed: int) -> np.ndarray:
    """Batch of lambda_tilde_1_0 draws, one seed substream per repetition."""
    d1 = spec.mults[0]
    seeds = _rng.stream_seeds(seed, reps)
    out = np.empty(reps)
    h = np.empty((min(_EIG_CHUNK, max(reps, 1)), d1, d1), dtype=complex)
    for start in range(0, reps, _EIG_CHUNK):
        stop = min(start + _EIG_CHUNK, reps)
        for i in range(start, stop):
            rng = np.random.Generator(np.random.PCG64(int(seeds[i])))
            h[i - start], _ = _modified_first_block(spec, rng)
        out[start:stop] = _eigvalsh_desc(h[: stop - start])[:, 0]
    return out


def _increment_chol(k: int, rho: float) -> np.ndarray:
    if k < 1:
        raise ValueError("need k >= 1")
    if rho > 0 or (k == 1 and rho != 0.0) or (k > 1 and rho < -1.0 / (k - 1)):
        raise ValueError("correlation matrix not positive semidefinite")
    corr = np.full((k, k), rho)
    np.fill_diagonal(corr, 1.0)
    try:
        return np.linalg.cholesky(corr + 1e-14 * np.eye(k))
    except np.linalg.LinAlgError as exc:
        raise ValueError("correlation matrix not positive semidefinite") from exc


def _brownian_paths(k: int, steps: int, rho: float, rng: np.random.Generator,
                    reps: int) -> np.ndarray:
    """(reps, k, steps+1) prefix-sum paths of correlated increments."""
    chol = _increment_chol(k, rho)
    z = rng.standard_normal((reps, steps, k)) / math.sqrt(steps)
    z = z @ chol.T
    paths = np.zeros((reps, k, steps + 1))
    np.cumsum(z.transpose(0, 2, 1), axis=2, out=paths[:, :, 1:])
    return paths


def _cut_point_max(paths: np.ndarray) -> np.ndarray:
    """DP for sup over 0 = t_0 <= ... <= t_k = 1 of sum of coordinate
    increments; both endpoints pinned."""
    reps, k, _ = paths.shape
    acc = paths[:, 0, :].copy()
    for r in range(1, k):
        np.maximum.accumulate(acc - paths[:, r, :], axis=1, out=acc)
        acc += paths[:, r, :]
    return acc[:, -1]


def brownian_functional_sample(k: int, steps: int, rho: float, seed: int) -> float:
    """One grid sample of the cut-point functional of a k-dimensional
    Brownian motion with constant off-diagonal correlation rho."""
    if steps < k:
        raise ValueError("grid must have at least k steps")
    rng = _rng.generator(seed)
    return float(_cut_point_max(_brownian_paths(k, steps, rho, rng, 1))[0])


def brownian_functional_batch(k: int, steps: int, rho: float, reps: int,
                              seed: int, chunk: int = 256) -> np.ndarray:
    """Batch of functional samples, one substream per repetition."""
    if steps < k:
        raise ValueError("grid must have at least k steps")
    _increment_chol(k, rho)
    seeds = _rng.stream_seeds(seed, reps)
    out = np.empty(reps)
    for start in range(0, reps, chunk):
        stop = min(start + chunk, reps)
        for i in range(start, stop):
            rng = np.random.Generator(np.random.PCG64(int(seeds[i])))
            out[i] = _cut_point_max(_brownian_paths(k, steps, rho, rng, 1))[0]
    return out

"""Alphabet distributions and random words.

Letters are 0-based integer indices; the alphabet order a_0 < a_1 < ... is
the index order. An AlphabetDistribution carries the letter probabilities;
words are sampled iid from it with an alias table so the per-letter cost is
O(1) even for alphabets with 10^5 letters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _rng

#: probabilities closer than this are treated as exactly tied when computing
#: the multiplicity of the maximum
TIE_TOL = 1e-12

_PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class AlphabetDistribution:
    """Probability vector over an ordered alphabet of size m."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-d vector")
        if np.any(p <= 0.0):
            raise ValueError("all letter probabilities must be strictly positive")
        if abs(float(p.sum()) - 1.0) > _PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def m(self) -> int:
        return int(self.probs.size)

    def to_json(self) -> str:
        return json.dumps({"probs": [float(v) for v in self.probs]})

    @classmethod
    def from_json(cls, text: str) -> "AlphabetDistribution":
        data = json.loads(text)
        return cls(np.asarray(data["probs"], dtype=float))


@dataclass(frozen=True)
class MultiplicityStats:
    """Summary of the top of a probability vector.

    ``top`` is the tuple of letter indices attaining the maximum (up to
    TIE_TOL), ``k`` its size, ``p_2nd`` the largest value strictly below
    the maximum (None when every letter ties), and ``eta_hat = k * p_max``.
    """

    p_max: float
    p_2nd: float | None
    top: tuple[int, ...]
    k: int
    eta_hat: float


@dataclass(frozen=True)
class Word:
    """A finite sequence of letter indices."""

    letters: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.letters)
        if a.ndim != 1:
            raise ValueError("letters must be 1-d")
        if not np.issubdtype(a.dtype, np.integer):
            raise ValueError("letters must be integers")
        a = a.astype(np.int64, copy=True)
        if a.size and a.min() < 0:
            raise ValueError("letter indices must be nonnegative")
        a.flags.writeable = False
        object.__setattr__(self, "letters", a)

    @property
    def n(self) -> int:
        return int(self.letters.size)

    def validate(self, m: int) -> None:
        if self.n and int(self.letters.max()) >= m:
            raise ValueError(f"word uses letters >= alphabet size {m}")

    def to_bytes(self, m: int) -> bytes:
        """Compact binary dump, u8 when the alphabet fits, else u16."""
        self.validate(m)
        dtype = np.uint8 if m <= 256 else np.uint16
        if m > 65536:
            raise ValueError("binary dump supports alphabets up to 2^16")
        return self.letters.astype(dtype).tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes, m: int) -> "Word":
        dtype = np.uint8 if m <= 256 else np.uint16
        return cls(np.frombuffer(raw, dtype=dtype).astype(np.int64))


def uniform(m: int) -> AlphabetDistribution:
    """Uniform distribution on m letters."""
    if m < 1:
        raise ValueError("alphabet size must be at least 1")
    return AlphabetDistribution(np.full(m, 1.0 / m))


def multiplicity_stats(dist: AlphabetDistribution) -> MultiplicityStats:
    p = dist.probs
    p_max = float(p.max())
    tied = np.nonzero(p >= p_max - TIE_TOL)[0]
    below = p[p < p_max - TIE_TOL]
    p_2nd = float(below.max()) if below.size else None
    k = int(tied.size)
    return MultiplicityStats(
        p_max=p_max,
        p_2nd=p_2nd,
        top=tuple(int(i) for i in tied),
        k=k,
        eta_hat=k * p_max,
    )


def build_alias_table(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias table. Returns (accept, alias): draw a letter j uniformly
    and a uniform u; the sample is j if u < accept[j], else alias[j]."""
    p = np.asarray(probs, dtype=float)
    m = p.size
    accept = p * m
    alias = np.arange(m, dtype=np.int64)
    small = [j for j in range(m) if accept[j] < 1.0]
    large = [j for j in range(m) if accept[j] >= 1.0]
    while small and large:
        s = small.pop()
        g = large.pop()
        alias[s] = g
        accept[g] = (accept[g] + accept[s]) - 1.0
        if accept[g] < 1.0:
            small.append(g)
        else:
            large.append(g)
    # leftovers are 1 up to rounding
    for j in small + large:
        accept[j] = 1.0
    return accept, alias


def sample_word(dist: AlphabetDistribution, n: int, seed: int) -> Word:
    """iid word of length n with law ``dist``; deterministic given seed."""
    if n < 0:
        raise ValueError("word length must be nonnegative")
    if n == 0:
        return Word(np.empty(0, dtype=np.int64))
    rng = _rng.generator(seed)
    m = dist.m
    if m == 1:
        return Word(np.zeros(n, dtype=np.int64))
    accept, alias = build_alias_table(dist.probs)
    j = rng.integers(0, m, size=n)
    u = rng.random(n)
    letters = np.where(u < accept[j], j, alias[j])
    return Word(letters.astype(np.int64))


@dataclass(frozen=True)
class CountMatrix:
    """Prefix letter counts: counts[k, j] = occurrences of letter j among
    the first k letters, for 0 <= k <= n."""

    counts: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.counts.shape[0]) - 1

    @property
    def m(self) -> int:
        return int(self.counts.shape[1])

    @property
    def totals(self) -> np.ndarray:
        return self.counts[-1]


def prefix_counts(word: Word, m: int) -> CountMatrix:
    word.validate(m)
    n = word.n
    counts = np.zeros((n + 1, m), dtype=np.int64)
    if n:
        onehot = np.zeros((n, m), dtype=np.int64)
        onehot[np.arange(n), word.letters] = 1
        np.cumsum(onehot, axis=0, out=counts[1:])
    return CountMatrix(counts)

"""RSK shapes of words and the associated sup-functionals.

Row insertion here is the words variant: rows are weakly increasing, and an
inserted letter bumps the leftmost entry strictly greater than itself. The
first row length equals the longest weakly increasing subsequence, and by
Greene's theorem the sum of the first k rows is the largest total size of k
disjoint weakly increasing subsequences. Only the shape is kept; the
recording tableau is never built.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .wordmodel import CountMatrix, Word

#: exhaustive-oracle guard: keeps v_k_oracle under a second per word
ORACLE_MAX_LEN = 12


@dataclass(frozen=True)
class YoungShape:
    """Nonincreasing row lengths summing to n. Trailing zero rows are not
    stored; ``row(i)`` returns 0 past the last nonzero row."""

    rows: tuple[int, ...]
    n: int

    def __post_init__(self):
        if any(r <= 0 for r in self.rows):
            raise ValueError("stored rows must be positive")
        if any(a < b for a, b in zip(self.rows, self.rows[1:])):
            raise ValueError("rows must be nonincreasing")
        if sum(self.rows) != self.n:
            raise ValueError("rows must sum to n")

    def row(self, i: int) -> int:
        """Length of row i (1-based)."""
        if i < 1:
            raise ValueError("rows are numbered from 1")
        return self.rows[i - 1] if i <= len(self.rows) else 0

    def prefix_sum(self, k: int) -> int:
        """V_k: total size of the first k rows."""
        return sum(self.rows[:k])


@dataclass(frozen=True)
class NormalizedShape:
    """Centered and sqrt(n)-scaled first rows, uniform-alphabet convention."""

    values: tuple[float, ...]
    n: int
    m: int


def rsk_shape(word: Word, m: int) -> YoungShape:
    """Shape of the RSK insertion tableau of ``word``."""
    word.validate(m)
    rows: list[list[int]] = []
    for x in map(int, word.letters):
        for row in rows:
            pos = bisect_right(row, x)
            if pos == len(row):
                row.append(x)
                break
            # bump the leftmost entry strictly greater
            x, row[pos] = row[pos], x
        else:
            rows.append([x])
    return YoungShape(tuple(len(r) for r in rows), word.n)


def lis_weak(word: Word) -> int:
    """Length of the longest weakly increasing subsequence.

    Patience sorting: tops[i] is the smallest possible last letter of a
    weakly increasing subsequence of length i+1.
    """
    tops: list[int] = []
    for x in map(int, word.letters):
        pos = bisect_right(tops, x)
        if pos == len(tops):
            tops.append(x)
        else:
            tops[pos] = x
    return len(tops)


def v1_dp(counts: CountMatrix) -> int:
    """First row length from prefix counts alone.

    Evaluates sup over nondecreasing cut points 0 = l_0 <= ... <= l_m = n of
    the sum of letter-j counts on (l_{j-1}, l_j], by an O(n m) running-max
    dynamic program over the cut position.
    """
    S = counts.counts
    n, m = counts.n, counts.m
    best = np.zeros(n + 1, dtype=np.int64)
    for j in range(m):
        np.maximum.accumulate(best - S[:, j], out=best)
        best += S[:, j]
    return int(best[n])


def v_k_oracle(word: Word, k: int) -> int:
    """Greene oracle: max total size of k disjoint weakly increasing
    subsequences, by exhaustive dynamic programming over all assignments.
    Guarded to short words; meant for validating rsk_shape, not for use
    at scale."""
    if word.n > ORACLE_MAX_LEN:
        raise ValueError(f"oracle is exhaustive; max length {ORACLE_MAX_LEN}")
    if k < 1:
        raise ValueError("k must be at least 1")
    letters = [int(x) for x in word.letters]
    if k >= len(set(letters)):
        # one constant subsequence per distinct letter covers everything
        return word.n
    # state: sorted tuple of current chain tops (-1 = empty chain); a chain
    # with top t accepts any letter >= t
    states: dict[tuple[int, ...], int] = {(-1,) * k: 0}
    for x in letters:
        nxt = dict(states)
        for tops, total in states.items():
            for i in range(k):
                if tops[i] <= x and (i == 0 or tops[i - 1] != tops[i]):
                    cand = list(tops)
                    cand[i] = x
                    cand.sort()
                    key = tuple(cand)
                    if nxt.get(key, -1) < total + 1:
                        nxt[key] = total + 1
        states = nxt
    return max(states.values())


def v1_restricted(word: Word, restrict_to) -> int:
    """lis_weak of the subword made of the given letters only."""
    allowed = frozenset(int(j) for j in restrict_to)
    if not allowed:
        raise ValueError("letter set must be nonempty")
    keep = np.isin(word.letters, np.fromiter(allowed, dtype=np.int64))
    return lis_weak(Word(word.letters[keep]))


def normalize_uniform(shape: YoungShape, n: int, m: int, r: int) -> NormalizedShape:
    """First r rows centered at n/m and scaled by sqrt(n)."""
    if r > m:
        raise ValueError("r must not exceed the alphabet size")
    root = np.sqrt(n)
    vals = tuple((shape.row(i) - n / m) / root for i in range(1, r + 1))
    return NormalizedShape(vals, n, m)


def normalize_nonuniform(r1: int, n: int, p_max: float, k: int) -> float:
    """(R1 - n p_max) / sqrt(n k p_max)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0.0 < p_max <= 1.0:
        raise ValueError("p_max must lie in (0, 1]")
    return (r1 - n * p_max) / np.sqrt(n * k * p_max)

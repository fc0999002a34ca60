"""Hot loops for streamed word statistics, compiled with numba.

Words are never materialized here: letters come out of a splitmix64 counter
stream seeded per repetition, and only the row lengths of the insertion
tableau are maintained. A row is stored as a letter-count vector plus an
occupancy bitmask, so bumping (replace the smallest letter strictly greater
than the inserted one) is a shift-and-scan on a 64-bit word. This caps the
alphabet at 64 letters for the bitmask kernels; the alias/Fenwick kernel
below lifts that for first-row-only statistics on big alphabets.

All kernels release the GIL, so a thread pool gets real parallelism.
"""

from __future__ import annotations

import numba as nb
import numpy as np

BITMASK_MAX_ALPHABET = 64

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@nb.njit(nb.uint64(nb.uint64), cache=True, nogil=True, inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@nb.njit(nb.int64(nb.uint64, nb.int64, nb.int64), cache=True, nogil=True)
def r1_uniform_stream(seed, n, m):
    """First-row length for n uniform letters on {0..m-1}, m <= 64."""
    counts = np.zeros(64, np.int64)
    mask = np.uint64(0)
    one = np.uint64(1)
    um = np.uint64(m)
    s = seed
    r1 = 0
    for _ in range(n):
        s = s + _GOLDEN
        z = _mix(s)
        x = np.int64(((z >> np.uint64(32)) * um) >> np.uint64(32))
        rest = (mask >> np.uint64(x)) >> np.uint64(1)
        if rest == np.uint64(0):
            counts[x] += 1
            mask |= one << np.uint64(x)
            r1 += 1
        else:
            y = x + 1
            while (rest & one) == np.uint64(0):
                rest >>= one
                y += 1
            counts[y] -= 1
            if counts[y] == 0:
                mask &= ~(one << np.uint64(y))
            counts[x] += 1
            mask |= one << np.uint64(x)
    return r1


@nb.njit(nb.int64(nb.uint64, nb.int64, nb.int64, nb.int64[::1]), cache=True, nogil=True)
def shape_uniform_stream(seed, n, m, rows_out):
    """Full insertion-tableau row lengths for n uniform letters, m <= 64.

    rows_out must hold at least m zeroed slots; returns the row count.
    """
    counts = np.zeros((m, 64), np.int64)
    masks = np.zeros(m, np.uint64)
    one = np.uint64(1)
    um = np.uint64(m)
    s = seed
    nrows = 0
    for _ in range(n):
        s = s + _GOLDEN
        z = _mix(s)
        carry = np.int64(((z >> np.uint64(32)) * um) >> np.uint64(32))
        r = 0
        while True:
            rest = (masks[r] >> np.uint64(carry)) >> np.uint64(1)
            if rest == np.uint64(0):
                counts[r, carry] += 1
                masks[r] |= one << np.uint64(carry)
                rows_out[r] += 1
                if r == nrows:
                    nrows += 1
                break
            y = carry + 1
            while (rest & one) == np.uint64(0):
                rest >>= one
                y += 1
            counts[r, y] -= 1
            if counts[r, y] == 0:
                masks[r] &= ~(one << np.uint64(y))
            counts[r, carry] += 1
            masks[r] |= one << np.uint64(carry)
            carry = y
            r += 1
    return nrows


@nb.njit(nb.int64(nb.int64[::1], nb.int64), cache=True, nogil=True)
def r1_letters(letters, m):
    """First-row length of an explicit letter array, m <= 64."""
    counts = np.zeros(64, np.int64)
    mask = np.uint64(0)
    one = np.uint64(1)
    r1 = 0
    for i in range(letters.size):
        x = letters[i]
        rest = (mask >> np.uint64(x)) >> np.uint64(1)
        if rest == np.uint64(0):
            counts[x] += 1
            mask |= one << np.uint64(x)
            r1 += 1
        else:
            y = x + 1
            while (rest & one) == np.uint64(0):
                rest >>= one
                y += 1
            counts[y] -= 1
            if counts[y] == 0:
                mask &= ~(one << np.uint64(y))
            counts[x] += 1
            mask |= one << np.uint64(x)
    return r1


@nb.njit(nb.int64(nb.int64[::1], nb.int64, nb.int64[::1]), cache=True, nogil=True)
def shape_letters(letters, m, rows_out):
    """Insertion-tableau row lengths of an explicit letter array, m <= 64."""
    counts = np.zeros((m, 64), np.int64)
    masks = np.zeros(m, np.uint64)
    one = np.uint64(1)
    nrows = 0
    for i in range(letters.size):
        carry = letters[i]
        r = 0
        while True:
            rest = (masks[r] >> np.uint64(carry)) >> np.uint64(1)
            if rest == np.uint64(0):
                counts[r, carry] += 1
                masks[r] |= one << np.uint64(carry)
                rows_out[r] += 1
                if r == nrows:
                    nrows += 1
                break
            y = carry + 1
            while (rest & one) == np.uint64(0):
                rest >>= one
                y += 1
            counts[r, y] -= 1
            if counts[r, y] == 0:
                masks[r] &= ~(one << np.uint64(y))
            counts[r, carry] += 1
            masks[r] |= one << np.uint64(carry)
            carry = y
            r += 1
    return nrows


@nb.njit(nb.int64(nb.uint64, nb.int64, nb.float64[::1], nb.int64[::1]), cache=True, nogil=True)
def r1_alias_stream(seed, n, accept, alias):
    """First-row length for n letters drawn from an alias table.

    No alphabet-size cap: row occupancy lives in a Fenwick tree, so finding
    the smallest present letter strictly greater than x is a logarithmic
    binary descent.
    """
    m = accept.size
    tree = np.zeros(m + 1, np.int64)
    top_pow = 1
    while top_pow * 2 <= m:
        top_pow *= 2
    um = np.uint64(m)
    low_mask = np.uint64(0xFFFFFFFF)
    inv32 = 1.0 / 4294967296.0
    s = seed
    r1 = 0
    for _ in range(n):
        s = s + _GOLDEN
        z = _mix(s)
        j = np.int64(((z >> np.uint64(32)) * um) >> np.uint64(32))
        u = np.float64(z & low_mask) * inv32
        x = j if u < accept[j] else alias[j]

        # prefix(x+1): letters <= x currently in the row
        below = 0
        ii = x + 1
        while ii > 0:
            below += tree[ii]
            ii -= ii & (-ii)

        if r1 - below > 0:
            # bump: smallest present letter > x is the (below+1)-th element
            target = below + 1
            pos = 0
            rem = target
            pw = top_pow
            while pw > 0:
                nxt = pos + pw
                if nxt <= m and tree[nxt] < rem:
                    pos = nxt
                    rem -= tree[pos]
                pw >>= 1
            y = pos  # 0-based letter index being bumped out
            ii = y + 1
            while ii <= m:
                tree[ii] -= 1
                ii += ii & (-ii)
        else:
            r1 += 1
        ii = x + 1
        while ii <= m:
            tree[ii] += 1
            ii += ii & (-ii)
    return r1

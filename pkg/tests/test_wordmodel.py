import json

import numpy as np
import pytest

from wordshape import _rng
from wordshape.wordmodel import (
    AlphabetDistribution,
    Word,
    build_alias_table,
    multiplicity_stats,
    prefix_counts,
    sample_word,
    uniform,
)


def test_uniform_distribution():
    d = uniform(4)
    assert d.m == 4
    assert np.allclose(d.probs, 0.25)
    with pytest.raises(ValueError):
        uniform(0)


def test_distribution_validation():
    with pytest.raises(ValueError):
        AlphabetDistribution((0.5, 0.6))
    with pytest.raises(ValueError):
        AlphabetDistribution((1.2, -0.2))
    with pytest.raises(ValueError):
        AlphabetDistribution(())


def test_distribution_probs_immutable():
    d = AlphabetDistribution((0.5, 0.5))
    with pytest.raises(ValueError):
        d.probs[0] = 0.9


def test_distribution_json_round_trip():
    d = AlphabetDistribution((0.5, 0.3, 0.2))
    d2 = AlphabetDistribution.from_json(d.to_json())
    assert np.array_equal(d.probs, d2.probs)
    payload = json.loads(d.to_json())
    assert "probs" in payload


def test_multiplicity_stats_uniform():
    st = multiplicity_stats(uniform(5))
    assert st.k == 5
    assert st.p_2nd is None
    assert st.eta_hat == pytest.approx(1.0)
    assert st.top == (0, 1, 2, 3, 4)


def test_multiplicity_stats_mixed():
    st = multiplicity_stats(AlphabetDistribution((0.3, 0.3, 0.25, 0.15)))
    assert st.k == 2
    assert st.p_max == pytest.approx(0.3)
    assert st.p_2nd == pytest.approx(0.25)
    assert st.eta_hat == pytest.approx(0.6)


def test_multiplicity_stats_tie_tolerance():
    # a tie within 1e-12 counts as the same maximal value
    p = 0.25
    st = multiplicity_stats(AlphabetDistribution((p, p + 1e-14, p, p - 2e-14)))
    assert st.k == 4


def test_alias_table_frequencies():
    probs = np.array([0.5, 0.3, 0.15, 0.05])
    accept, alias = build_alias_table(probs)
    rng = _rng.generator(11)
    n = 200000
    j = rng.integers(0, 4, size=n)
    u = rng.random(n)
    letters = np.where(u < accept[j], j, alias[j])
    freq = np.bincount(letters, minlength=4) / n
    assert np.all(np.abs(freq - probs) < 4 * np.sqrt(probs * (1 - probs) / n))


def test_sample_word_deterministic():
    d = AlphabetDistribution((0.6, 0.4))
    w1 = sample_word(d, 50, 7)
    w2 = sample_word(d, 50, 7)
    w3 = sample_word(d, 50, 8)
    assert np.array_equal(w1.letters, w2.letters)
    assert not np.array_equal(w1.letters, w3.letters)


def test_sample_word_edge_cases():
    assert sample_word(uniform(3), 0, 1).n == 0
    w = sample_word(uniform(1), 20, 1)
    assert np.all(w.letters == 0)


def test_sample_word_marginals():
    d = AlphabetDistribution((0.7, 0.2, 0.1))
    w = sample_word(d, 100000, 3)
    freq = np.bincount(w.letters, minlength=3) / w.n
    assert np.all(np.abs(freq - d.probs) < 0.01)


def test_word_validate_and_bytes():
    w = Word(np.array([0, 2, 1], dtype=np.int64))
    w.validate(3)
    with pytest.raises(ValueError):
        w.validate(2)
    assert np.array_equal(Word.from_bytes(w.to_bytes(3), 3).letters, w.letters)
    big = Word(np.array([0, 300], dtype=np.int64))
    assert np.array_equal(Word.from_bytes(big.to_bytes(301), 301).letters,
                          big.letters)


def test_word_letters_immutable():
    w = Word(np.array([0, 1], dtype=np.int64))
    with pytest.raises(ValueError):
        w.letters[0] = 1


def test_prefix_counts():
    w = Word(np.array([1, 0, 1, 2], dtype=np.int64))
    pc = prefix_counts(w, 3)
    assert pc.counts.shape == (5, 3)
    assert np.array_equal(pc.counts[0], [0, 0, 0])
    assert np.array_equal(pc.counts[-1], [1, 2, 1])
    assert np.array_equal(pc.totals, [1, 2, 1])
    # rows are running counts, so they never decrease
    assert np.all(np.diff(pc.counts, axis=0) >= 0)

import itertools
import math

import numpy as np
import pytest

from conftest import h2
from repcap import (EmbeddingSpace, IidSource, InsufficientRate, JointPmf, JointTypicalityContext, Pmf,
                    build_typical_codebook, covering_mass, effective_support_audit, enumerate_typical_set,
                    feasibility_report, joint_typicality_decode, random_codebook, representation_rate, transmit,
                    bsc, stream)
from repcap.errors import DimensionMismatch


def test_representation_rate_examples():
    assert representation_rate(EmbeddingSpace(128, 31), 1024) == 3.875
    assert representation_rate(EmbeddingSpace(50, 8), 50) == 8.0
    assert representation_rate(EmbeddingSpace(1024, 32), 256) == 128.0


def test_feasibility_examples():
    small_budget = feasibility_report(EmbeddingSpace(128, 31), 1024, 8.0)["lossless"]
    assert not small_budget.holds and small_budget.lhs == 3968 and small_budget.rhs == 8192 and small_budget.margin == -4224
    edge = feasibility_report(EmbeddingSpace(16, 1), 16, 1.0)["lossless"]
    assert edge.holds and edge.margin == 0
    small = feasibility_report(EmbeddingSpace(4, 4), 20, 0.7219)["lossless"]
    assert small.holds and small.rhs == pytest.approx(14.438)
    full = feasibility_report(EmbeddingSpace(4, 4), 20, 0.7219, channel_information=0.9, rd_information=0.5,
                              output_dim=20, output_alphabet_size=2)
    assert full["noisy"].holds and full["compressed"].holds and full["output"].holds


def test_space_coordinates_round_trip():
    space = EmbeddingSpace(3, 4)
    for idx in (0, 1, 255, 4095):
        assert space.index(space.coordinates(idx)) == idx
    assert space.coordinates(0) == (0, 0, 0)


def test_typical_codebook_uniform():
    code = build_typical_codebook(IidSource(Pmf.bernoulli(0.5)), 8, 0.05, EmbeddingSpace(8, 1))
    assert len(code) == 256 and len(set(code.codebook.values())) == 256
    for seq in itertools.product((0, 1), repeat=8):
        idx = code.encode(np.array(seq))
        assert code.decode(idx).tolist() == list(seq)


def test_typical_codebook_regimes():
    src = IidSource(Pmf.bernoulli(0.2))
    size = enumerate_typical_set(src, 12, 0.15).size
    space = EmbeddingSpace(10, 1)
    if size <= 1024:
        code = build_typical_codebook(src, 12, 0.15, space)
        assert len(code) == size
    else:
        with pytest.raises(InsufficientRate):
            build_typical_codebook(src, 12, 0.15, space)
    with pytest.raises(InsufficientRate):
        build_typical_codebook(IidSource(Pmf.bernoulli(0.5)), 12, 0.05, space)


def test_codebook_injective_and_probability_ordered():
    src = IidSource(Pmf.bernoulli(0.3))
    code = build_typical_codebook(src, 10, 0.2, EmbeddingSpace(10, 1), fill_spare=True)
    assert len(set(code.codebook.values())) == len(code)
    seqs = [code.decode(i) for i in range(code.typical_count)]
    lps = [src.log2_prob(s) for s in seqs]
    assert all(a >= b for a, b in zip(lps, lps[1:]))


def test_covering_mass_full_space():
    assert covering_mass(IidSource(Pmf.bernoulli(0.2)), 10, 0.1, 10) == pytest.approx(1.0)


def test_random_codebook():
    src = IidSource(Pmf.bernoulli(0.5))
    assert random_codebook(1, src, 6, seed=0).size == 1
    cb = random_codebook(2 ** 12, src, 24, seed=1)
    assert np.all(np.abs(cb.words.mean(axis=0) - 0.5) < 0.02)
    small = random_codebook(64, src, 4, seed=2)
    assert small.collisions == 64 - len({tuple(w) for w in small.words})
    assert small.collisions > 0


def test_decode_identity_channel():
    ctx = JointTypicalityContext(JointPmf([[0.5, 0], [0, 0.5]]), 6, 0.1)
    words = np.array(list(itertools.product((0, 1), repeat=6)))[[3, 17, 40, 63]]
    for w in range(4):
        res = joint_typicality_decode(words[w], words, ctx)
        assert res.index == w and not res.no_candidate


def test_decode_fallback():
    ctx = JointTypicalityContext(JointPmf([[0.5, 0], [0, 0.5]]), 8, 0.01)
    words = np.zeros((3, 8), dtype=int)
    res = joint_typicality_decode(np.ones(8, dtype=int), words, ctx)
    assert res.index == 0 and res.no_candidate


def test_decode_bsc_small_codebook_matches_exact_rate():
    # with four messages at n=24, success is governed by whether the true pair is jointly typical
    n, eps, p = 24, 0.1, 0.11
    ctx = JointTypicalityContext(JointPmf([[(1 - p) / 2, p / 2], [p / 2, (1 - p) / 2]]), n, eps)
    ok_k = [k for k in range(n + 1) if abs(k / n * math.log2((1 - p) / p) - math.log2(1 - p) - h2(p)) < eps]
    p_pair = sum(math.comb(n, k) * p ** k * (1 - p) ** (n - k) for k in ok_k)
    src = IidSource(Pmf.bernoulli(0.5))
    hits = 0
    trials = 10_000
    for t in range(trials):
        rng = stream(5, t)
        words = src.draw(rng, n, 4)
        w = int(rng.integers(4))
        y = transmit(bsc(p), words[w], rng)
        hits += joint_typicality_decode(y, words, ctx).index == w
    # impostors are negligible here; misses on message 0 add back via the fallback
    expected = p_pair + (1 - p_pair) / 4
    assert hits / trials == pytest.approx(expected, abs=0.02)


def test_support_audit():
    rows = [tuple(int(b) for b in np.binary_repr(i + 1, 11)) for i in range(1024)]
    assert effective_support_audit(rows).q_tilde == 10
    one = effective_support_audit([(1, 2, 3)] * 5)
    assert one.distinct_nonzero_count == 1 and one.q_tilde == 0
    mixed = [(0, 0), (1, 2), (1, 2), (3, 4), (0, 0), (5, 6), (3, 4)]
    brute = {r for r in mixed if any(r)}
    assert effective_support_audit(mixed).distinct_nonzero_count == len(brute)
    with pytest.raises(DimensionMismatch):
        effective_support_audit([(1, 2), (1, 2, 3)])


def test_support_audit_never_exceeds_space():
    rng = np.random.default_rng(3)
    space = EmbeddingSpace(3, 2)
    rows = rng.integers(0, 4, (500, 3))
    assert effective_support_audit(rows, space).q_tilde <= space.capacity_bits

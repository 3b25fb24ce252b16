import itertools
import math

import numpy as np
import pytest

from conftest import h2
from repcap import (EnumerationTooLarge, IidSource, JointPmf, JointTypicalityContext, MarkovSource, Pmf,
                    conditional_typical_set, count_jointly_typical_pairs, enumerate_typical_set,
                    is_jointly_typical, is_typical)
from repcap.errors import InvalidParams

B02 = IidSource(Pmf.bernoulli(0.2))


def brute_typical(p, n, eps):
    """Independent scan with plain Python loops."""
    h = h2(p)
    size, mass = 0, 0.0
    for seq in itertools.product((0, 1), repeat=n):
        k = sum(seq)
        prob = p ** k * (1 - p) ** (n - k)
        if prob > 0 and abs(-math.log2(prob) / n - h) < eps - 1e-12:
            size += 1
            mass += prob
    return size, mass


def test_membership_examples():
    assert is_typical(np.array([0, 1, 1, 0, 1]), IidSource(Pmf.bernoulli(0.5)), 0.01)
    assert not is_typical(np.ones(20, dtype=int), B02, 0.1)
    assert is_typical(np.array([1] * 4 + [0] * 16), B02, 0.1)


def test_boundary_tie_is_not_typical():
    # four ones in sixteen symbols sits exactly eps = 0.1 from H
    seq = np.array([1] * 4 + [0] * 12)
    dev = -(4 * math.log2(0.2) + 12 * math.log2(0.8)) / 16 - h2(0.2)
    assert dev == pytest.approx(0.1, abs=1e-12)
    assert not is_typical(seq, B02, 0.1)


def test_uniform_enumeration():
    typ = enumerate_typical_set(IidSource(Pmf.bernoulli(0.5)), 10, 0.05)
    assert typ.size == 1024 and typ.total_prob == pytest.approx(1.0)


@pytest.mark.parametrize("n,eps", [(10, 0.2), (8, 0.15), (12, 0.15), (12, 0.1)])
def test_enumeration_matches_brute_force(n, eps):
    typ = enumerate_typical_set(B02, n, eps)
    size, mass = brute_typical(0.2, n, eps)
    assert typ.size == size
    assert typ.total_prob == pytest.approx(mass, abs=1e-12)


def test_bounds_at_n10():
    b = enumerate_typical_set(B02, 10, 0.2).bounds()
    assert b["probability_bounds"] and b["size_upper"]


def test_probability_and_upper_bounds_hold_everywhere():
    for src in (B02, MarkovSource.symmetric_binary(0.1)):
        for n in (8, 12, 16):
            for eps in (0.1, 0.15, 0.2):
                b = enumerate_typical_set(src, n, eps).bounds()
                assert b["probability_bounds"] and b["size_upper"]


def test_enumeration_cap():
    with pytest.raises(EnumerationTooLarge):
        enumerate_typical_set(B02, 30, 0.1)


def test_codes_and_contains():
    typ = enumerate_typical_set(B02, 12, 0.15)
    assert typ.contains(typ.members[3])
    assert not typ.contains(np.ones(12, dtype=int))


def copy_context(n, eps):
    return JointTypicalityContext(JointPmf([[0.5, 0.0], [0.0, 0.5]]), n, eps)


def bsc_context(n, eps, p=0.11):
    return JointTypicalityContext(JointPmf([[(1 - p) / 2, p / 2], [p / 2, (1 - p) / 2]]), n, eps)


def test_copy_channel_joint_typicality():
    ctx = copy_context(12, 0.01)
    x = np.array([0, 1] * 6)
    assert is_jointly_typical(x, x, ctx)
    y = x.copy()
    y[3] ^= 1
    assert not is_jointly_typical(x, y, ctx)


def test_joint_implies_marginal():
    ctx = bsc_context(10, 0.3)
    rng = np.random.default_rng(0)
    xs = rng.integers(0, 2, (500, 10))
    ys = rng.integers(0, 2, (500, 10))
    for x, y in zip(xs, ys):
        if is_jointly_typical(x, y, ctx):
            assert ctx.x_typical(x) and ctx.y_typical(y)


def test_impostor_rate_close_to_two_to_minus_ni():
    n, eps = 24, 0.15
    ctx = bsc_context(n, eps)
    rng = np.random.default_rng(1)
    x = rng.integers(0, 2, (100_000, n))
    flips = rng.random((100_000, n)) < 0.11
    # only flip counts k with |(k/n) log2((1-p)/p) + log2(1/(1-p)) - H2(p)| < eps qualify
    step = math.log2(0.89 / 0.11)
    ok_k = [k for k in range(n + 1) if abs(k / n * step - math.log2(0.89) - h2(0.11)) < eps]
    exact = sum(math.comb(n, k) * 0.11 ** k * 0.89 ** (n - k) for k in ok_k)
    assert ok_k == [2, 3]
    assert ctx.jointly_typical(x, x ^ flips).mean() == pytest.approx(exact, abs=0.005)
    y = rng.integers(0, 2, (100_000, n))
    freq = ctx.jointly_typical(x, y).mean()
    i = 1 - h2(0.11)
    assert 2 ** (-n * (i + 2 * eps)) <= freq <= 2 ** (-n * (i - 2 * eps))


def test_impostor_probability_exact_against_enumeration():
    n, eps = 10, 0.2
    ctx = bsc_context(n, eps, p=0.2)
    xs = np.array(list(itertools.product((0, 1), repeat=n)))
    y = np.array([0, 1, 1, 0, 0, 1, 0, 0, 1, 0])
    brute = ctx.jointly_typical(xs, y).sum() / 2 ** n
    assert ctx.impostor_probability(y) == pytest.approx(brute, abs=1e-14)


def test_impostor_probability_nonuniform_input():
    n, eps = 8, 0.25
    joint = JointPmf.from_conditional(Pmf([0.7, 0.3]), [[0.8, 0.2], [0.3, 0.7]])
    ctx = JointTypicalityContext(joint, n, eps)
    xs = np.array(list(itertools.product((0, 1), repeat=n)))
    px = np.prod(np.where(xs == 1, 0.3, 0.7), axis=1)
    for y in (np.array([0, 0, 1, 0, 1, 0, 0, 0]), np.array([1, 1, 0, 0, 1, 0, 1, 0])):
        assert ctx.impostor_probability(y) == pytest.approx(float(px[ctx.jointly_typical(xs, y)].sum()), abs=1e-14)


def test_conditional_typical_set():
    ctx = bsc_context(8, 0.3)
    x = np.array([0, 1, 0, 1, 0, 1, 1, 0])
    ys = conditional_typical_set(x, ctx)
    assert len(ys) > 0 and all(is_jointly_typical(x, y, ctx) for y in ys)
    skewed = JointTypicalityContext(JointPmf.from_conditional(Pmf([0.9, 0.1]), [[0.9, 0.1], [0.1, 0.9]]), 8, 0.05)
    assert len(conditional_typical_set(np.ones(8, dtype=int), skewed)) == 0


def test_pair_count_bound():
    ctx = bsc_context(8, 0.2)
    hxy = 1 + h2(0.11)
    assert count_jointly_typical_pairs(ctx) <= 2 ** (8 * (hxy + 0.2))


def test_mismatched_pairing_rejected():
    with pytest.raises(InvalidParams):
        JointTypicalityContext(JointPmf([[0.5, 0], [0, 0.5]]), 8, 0.1, d=9)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import h2
from repcap import (DiscreteChannel, InvalidDistribution, NotConverged, Pmf, blahut_arimoto_capacity, bsc,
                    build_example_channels, channel_mutual_information, identity_channel, modular_additive,
                    quantized_awgn, read_channel_csv, transmit)
from repcap.channels import output_entropy_terms
from repcap.probability import JointPmf, conditional_entropy, entropy


def test_transmit_examples():
    x = np.array([0, 2, 3, 1, 1])
    assert np.array_equal(transmit(identity_channel(4), x, 1), x)
    assert transmit(bsc(0.0), [0, 1, 0, 1], 2).tolist() == [0, 1, 0, 1]
    x = np.zeros(100_000, dtype=int)
    assert abs(transmit(bsc(0.11), x, 3).mean() - 0.11) < 0.01


def test_mutual_information_examples():
    assert channel_mutual_information(Pmf.uniform(4), identity_channel(4)) == pytest.approx(2.0)
    assert channel_mutual_information(Pmf.uniform(8), modular_additive(8, 4, disjoint=True)) == pytest.approx(3.0, abs=1e-12)
    assert channel_mutual_information(Pmf.uniform(2), bsc(0.11)) == pytest.approx(1 - h2(0.11), abs=1e-13)


def test_overlapping_modular_channel():
    ch = build_example_channels("modular", m=4, p=2)
    assert ch.shape == (4, 4)
    assert np.all((ch.transition == 0.5).sum(axis=1) == 2)
    # y = x + e mod 4 with e uniform on {0,1}: I = log2 4 - 1
    assert channel_mutual_information(Pmf.uniform(4), ch) == pytest.approx(1.0)


@pytest.mark.parametrize("p", [0.0, 0.05, 0.11, 0.25, 0.5])
def test_bsc_capacity(p):
    res = blahut_arimoto_capacity(bsc(p))
    assert res.capacity_bits == pytest.approx(1 - h2(p), abs=1e-9)
    assert np.allclose(res.optimal_input.probs, 0.5, atol=1e-8)
    assert res.lower_bound <= 1 - h2(p) + 1e-12 <= res.upper_bound + 2e-12


def test_capacity_decreasing_in_crossover():
    caps = [blahut_arimoto_capacity(bsc(p)).capacity_bits for p in np.linspace(0, 0.5, 11)]
    assert all(a > b for a, b in zip(caps, caps[1:]))


def test_modular_capacity_by_ba():
    assert blahut_arimoto_capacity(modular_additive(8, 4, disjoint=True)).capacity_bits == pytest.approx(3.0, abs=1e-9)


def test_z_channel_capacity_closed_form():
    # Z channel: 1 -> 0 with prob q. C = log2(1 + (1-q) q^{q/(1-q)})
    q = 0.3
    ch = DiscreteChannel([[1, 0], [q, 1 - q]])
    expected = np.log2(1 + (1 - q) * q ** (q / (1 - q)))
    assert blahut_arimoto_capacity(ch).capacity_bits == pytest.approx(expected, abs=1e-9)


def test_awgn_zero_snr_rows_identical():
    ch = quantized_awgn(8, 0.0)
    assert np.allclose(ch.transition, ch.transition[0])
    assert channel_mutual_information(Pmf.uniform(8), ch) == pytest.approx(0, abs=1e-12)


def test_cost_constrained_capacity():
    # cost 1 for sending a 1 over a noiseless binary channel; budget b < 1/2 gives C = H2(b)
    res = blahut_arimoto_capacity(identity_channel(2), tol=1e-10, cost=[0.0, 1.0], budget=0.2)
    assert res.expected_cost == pytest.approx(0.2, abs=1e-6)
    assert res.capacity_bits == pytest.approx(h2(0.2), abs=1e-6)
    loose = blahut_arimoto_capacity(identity_channel(2), cost=[0.0, 1.0], budget=0.9)
    assert loose.capacity_bits == pytest.approx(1.0, abs=1e-9)


def test_not_converged_carries_result():
    with pytest.raises(NotConverged) as info:
        blahut_arimoto_capacity(DiscreteChannel([[0.9, 0.1, 0.0], [0.0, 0.2, 0.8], [0.3, 0.3, 0.4]]), max_iter=2)
    assert info.value.result is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 10_000))
def test_random_channel_properties(kx, ky, seed):
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(ky), size=kx)
    ch = DiscreteChannel(w)
    cap = blahut_arimoto_capacity(ch, tol=1e-9)
    px = Pmf(rng.dirichlet(np.ones(kx)))
    i = channel_mutual_information(px, ch)
    assert i <= cap.capacity_bits + 1e-9
    hy, hyx = output_entropy_terms(px, ch)
    assert i == pytest.approx(hy - hyx, abs=1e-10)
    j = JointPmf(px.probs[:, None] * w)
    assert i == pytest.approx(entropy(px) - conditional_entropy(j.transpose()), abs=1e-10)


def test_channel_csv(tmp_csv):
    ch = read_channel_csv(tmp_csv("c.csv", ",0,1\n0,0.89,0.11\n1,0.11,0.89\n"))
    assert blahut_arimoto_capacity(ch).capacity_bits == pytest.approx(1 - h2(0.11), abs=1e-9)
    with pytest.raises(InvalidDistribution):
        read_channel_csv(tmp_csv("bad.csv", ",0,1\n0,0.8,0.11\n1,0.11,0.89\n"))

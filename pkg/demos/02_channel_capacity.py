"""Capacity of a few channels by Blahut-Arimoto."""
import numpy as np

from repcap import (Pmf, blahut_arimoto_capacity, bsc, channel_mutual_information, modular_additive,
                    quantized_awgn)

for p in (0.0, 0.05, 0.11, 0.25, 0.5):
    res = blahut_arimoto_capacity(bsc(p))
    print(f"BSC({p:.2f})  C={res.capacity_bits:.6f}  input={np.round(res.optimal_input.probs, 6)}")

# 8 inputs, 4-valued additive noise. Overlapping cosets lose 2 bits; disjoint cosets lose nothing.
for disjoint in (False, True):
    ch = modular_additive(8, 4, disjoint=disjoint)
    print("modular, disjoint" if disjoint else "modular, overlapping",
          " I(X;Y) =", round(channel_mutual_information(Pmf.uniform(8), ch), 6))

# amplitude-limited Gaussian channel seen through a quantizer: more levels, more bits
for levels in (2, 4, 16, 64):
    ch = quantized_awgn(levels, snr=2.0)
    c = blahut_arimoto_capacity(ch, tol=1e-6).capacity_bits
    print(f"{levels:3d} levels  C={c:.4f}   uniform-input I={channel_mutual_information(Pmf.uniform(levels), ch):.4f}")

"""Entropy rates and typical sets, small enough to enumerate."""
import numpy as np

from repcap import IidSource, MarkovSource, Pmf, empirical_entropy_rate, entropy_rate, enumerate_typical_set

coin = IidSource(Pmf.bernoulli(0.2))
chain = MarkovSource.symmetric_binary(0.1)

print("H(Bernoulli(0.2))      =", round(entropy_rate(coin), 6))
print("H(symmetric Markov 0.1)=", round(entropy_rate(chain), 6), "stationary", chain.stationary.probs)

# -(1/n) log2 P concentrates around the entropy rate as n grows
for n in (100, 400, 1600):
    mean, std = empirical_entropy_rate(coin, n, 500, seed=n)
    print(f"n={n:5d}  mean={mean:.4f}  std={std:.4f}")

# the typical set is a thin slice of all 2^n sequences that still carries real mass
for n in (8, 12, 16, 20):
    typ = enumerate_typical_set(coin, n, 0.15)
    b = typ.bounds()
    print(f"n={n:2d} |A|={typ.size:7d} of {2 ** n:8d}  mass={typ.total_prob:.3f}  "
          f"upper ok={b['size_upper']}  lower ok={b['size_lower']}")

# at short lengths the lower size bound is not yet in force
typ = enumerate_typical_set(coin, 16, 0.1)
print("n=16 eps=0.1:", typ.size, "members vs lower bound", round(typ.bounds()["size_lower_value"], 1))
print("members have", np.unique(typ.members.sum(axis=1)), "ones")

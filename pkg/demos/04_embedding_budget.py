"""How many bits an embedding offers, and who gets a slot."""
import numpy as np

from repcap import (EmbeddingSpace, IidSource, InsufficientRate, Pmf, build_typical_codebook,
                    effective_support_audit, feasibility_report, representation_rate)

# a 128-wide float32 embedding (31 usable bits per coordinate) of a 32x32 8-bit image
space = EmbeddingSpace(128, 31)
print("rate:", representation_rate(space, 1024), "bits per pixel")
for name, check in feasibility_report(space, 1024, 8.0).items():
    print(name, check)

src = IidSource(Pmf.bernoulli(0.2))
for bits in (6, 8, 10):
    try:
        code = build_typical_codebook(src, 12, 0.15, EmbeddingSpace(bits, 1))
        print(f"Q_z={bits}: {len(code)} typical sequences coded")
    except InsufficientRate as err:
        print(f"Q_z={bits}: {err}")

code = build_typical_codebook(src, 12, 0.15, EmbeddingSpace(10, 1))
x = np.array([0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1])
i = code.encode(x)
print("x ->", i, "->", code.decode(i), "coords", code.space.coordinates(i))

# a model that only ever emits a handful of distinct vectors uses little of its space
rng = np.random.default_rng(0)
emitted = rng.integers(0, 4, (1000, 3)) * (rng.random((1000, 1)) < 0.9)
print(effective_support_audit(emitted, EmbeddingSpace(3, 2)))

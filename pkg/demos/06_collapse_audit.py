"""Collapsed features form a simplex and erase within-class targets."""
import numpy as np

from repcap import LabeledEmbeddings, collapse_report, simplex_etf

rng = np.random.default_rng(3)
labels = np.repeat(np.arange(4), 25)
targets = rng.normal(size=(100, 1))
means = 5 * simplex_etf(4, 16, rng=rng)

for noise in (1.0, 0.1, 0.0):
    emb = means[labels] + noise * rng.normal(size=(100, 16))
    rep = collapse_report(LabeledEmbeddings(emb, labels, targets))
    etf = rep["etf"]
    print(f"noise={noise:.1f}  collapse index={rep['collapse_index']:.4f}  "
          f"equiangular residual={etf['equiangular']:.4f}  degenerate classes={rep['degenerate_classes']}")

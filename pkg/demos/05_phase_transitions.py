"""Error rates on both sides of the entropy and capacity thresholds."""
from repcap import ExperimentConfig, simulate_lossless_embedding, simulate_noisy_embedding, simulate_lossy_embedding, noisy_input_loss_bound

rep = simulate_lossless_embedding(ExperimentConfig("thm3", source={"kind": "bernoulli", "p": 0.2}, n=16,
                                    rates=[0.4, 0.6, 0.8, 1.0], trials=4000, seed=1))
print("lossless embedding, H =", round(rep.thresholds["entropy_rate"], 4))
for r in rep.records:
    print(f"  R={r.rate:.2f}  error={r.error_rate:.4f} +/- {r.ci_half_width:.4f}  exact={r.extra['oracle_error']:.4f}")

rep = simulate_noisy_embedding(ExperimentConfig("thm4", channel={"kind": "bsc", "p": 0.11}, n=24, epsilon=0.08,
                                    rates=[0.25, 0.9], trials=4000, seed=1))
print("noisy embedding, I(X;Y) =", round(rep.thresholds["mutual_information"], 4))
for r in rep.records:
    print(f"  R={r.rate:.2f}  error={r.error_rate:.4f}  cases={r.breakdown}")

rep = simulate_lossy_embedding(ExperimentConfig("thm5", source={"kind": "bernoulli", "p": 0.3},
                                    distortion={"kind": "hamming", "target": 0.1}, n=20,
                                    rates=[0.26, 0.562], trials=300, seed=1))
print("lossy embedding, R(D) =", round(rep.thresholds["rate_distortion"], 4))
for r in rep.records:
    print(f"  R={r.rate:.3f}  mean distortion={r.mean_distortion:.4f}")

res = noisy_input_loss_bound(0.0, 0.05, 2, 3, {"dim": 8, "trials": 20000, "seed": 1})
print("noisy-input loss bound", res.bound, "worst random", round(res.empirical["max_loss"], 4),
      "adversarial", round(res.empirical["adversarial_loss"], 4))

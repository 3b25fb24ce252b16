"""The rate-distortion curve of a biased coin under Hamming distortion."""
from repcap import DistortionMeasure, Pmf, binary_entropy, rate_at_distortion, rd_curve

src = Pmf.bernoulli(0.3)
ham = DistortionMeasure.hamming(2)

for pt in rd_curve(src, ham, 9):
    closed = max(0.0, binary_entropy(0.3) - binary_entropy(pt.distortion))
    print(f"D={pt.distortion:.4f}  R={pt.rate:.6f}  closed form={closed:.6f}  slope={pt.slope:.3f}")

pt = rate_at_distortion(src, ham, 0.1)
print("R(0.1) =", round(pt.rate, 9))
print("test channel:\n", pt.test_channel.round(4))
print("reproduction marginal:", pt.output_marginal(src).round(4))

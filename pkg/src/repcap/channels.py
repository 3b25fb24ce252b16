"""Discrete memoryless channels, simulation, and Blahut-Arimoto capacity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, ndtr

from .errors import InvalidDistribution, InvalidParams, NotConverged
from .probability import Alphabet, JointPmf, Pmf, entropy_of, mutual_information, read_matrix_csv
from .sources import stream

ROW_TOL = 1e-12


@dataclass(frozen=True, init=False)
class DiscreteChannel:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    transition: np.ndarray

    def __init__(self, transition, input_alphabet=None, output_alphabet=None):
        w = np.array(transition, dtype=np.float64)
        if w.ndim != 2:
            raise InvalidDistribution("transition must be a matrix")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidDistribution("transition has negative or non-finite entries")
        if np.any(np.abs(w.sum(axis=1) - 1.0) > ROW_TOL):
            raise InvalidDistribution("transition rows must sum to 1")
        ia = _alphabet(input_alphabet, w.shape[0])
        oa = _alphabet(output_alphabet, w.shape[1])
        if (ia.size, oa.size) != w.shape:
            raise InvalidDistribution("alphabets do not match transition shape")
        w.setflags(write=False)
        object.__setattr__(self, "input_alphabet", ia)
        object.__setattr__(self, "output_alphabet", oa)
        object.__setattr__(self, "transition", w)

    @property
    def shape(self):
        return self.transition.shape

    def joint(self, input_pmf: Pmf) -> JointPmf:
        return JointPmf(input_pmf.probs[:, None] * self.transition,
                        self.input_alphabet, self.output_alphabet)


def _alphabet(a, size):
    if a is None:
        return Alphabet.range(size)
    return a if isinstance(a, Alphabet) else Alphabet(tuple(a))


def bsc(p: float) -> DiscreteChannel:
    if not 0.0 <= p <= 1.0:
        raise InvalidParams("crossover probability must lie in [0, 1]")
    return DiscreteChannel([[1 - p, p], [p, 1 - p]], (0, 1), (0, 1))


def identity_channel(size: int) -> DiscreteChannel:
    return DiscreteChannel(np.eye(size))


def modular_additive(m: int, p: int, noise=None, disjoint: bool = False) -> DiscreteChannel:
    """y = (stride * x + e) mod K with e drawn from ``noise`` over {0..p-1}.

    ``disjoint=False``: stride 1, K = m, so noise cosets overlap.
    ``disjoint=True``: stride p, K = m * p, so each input owns its own coset
    and y resolves x exactly.
    """
    if m < 1 or p < 1:
        raise InvalidParams("m and p must be positive")
    noise = np.full(p, 1.0 / p) if noise is None else np.asarray(noise, dtype=np.float64)
    if noise.size != p:
        raise InvalidParams("noise pmf must have p entries")
    if not disjoint and p > m:
        raise InvalidParams("overlapping modular channel needs p <= m")
    stride, k = (p, m * p) if disjoint else (1, m)
    w = np.zeros((m, k))
    for x in range(m):
        for e in range(p):
            w[x, (stride * x + e) % k] += noise[e]
    return DiscreteChannel(w)


def quantized_awgn(levels: int, snr: float, amplitude: float = 1.0, bin_width: float = 0.05,
                   tail_sigmas: float = 6.0) -> DiscreteChannel:
    """y = snr * x + e, e ~ N(0, 1), x on a uniform grid of ``levels`` points in [-A, A].

    The output is quantized into bins of ``bin_width`` over the range of the
    noiseless outputs widened by ``tail_sigmas``; mass outside is dropped and
    each row renormalized.
    """
    if levels < 2 or bin_width <= 0 or amplitude <= 0:
        raise InvalidParams("need levels >= 2, amplitude > 0 and bin_width > 0")
    xs = np.linspace(-amplitude, amplitude, levels)
    means = snr * xs
    lo, hi = means.min() - tail_sigmas, means.max() + tail_sigmas
    n_bins = int(np.ceil((hi - lo) / bin_width))
    edges = lo + bin_width * np.arange(n_bins + 1)
    cdf = ndtr(edges[None, :] - means[:, None])
    w = np.diff(cdf, axis=1)
    w /= w.sum(axis=1, keepdims=True)
    centres = 0.5 * (edges[:-1] + edges[1:])
    return DiscreteChannel(w, tuple(float(x) for x in xs), tuple(float(c) for c in centres))


def build_example_channels(kind: str, **params) -> DiscreteChannel:
    """Named constructions: ``bsc``, ``identity``, ``modular``, ``quantized_awgn``."""
    try:
        if kind == "bsc":
            return bsc(float(params["p"]))
        if kind == "identity":
            return identity_channel(int(params["size"]))
        if kind == "modular":
            return modular_additive(int(params["m"]), int(params["p"]), params.get("noise"),
                                    bool(params.get("disjoint", False)))
        if kind == "quantized_awgn":
            return quantized_awgn(int(params["levels"]), float(params["snr"]),
                                  float(params.get("amplitude", 1.0)),
                                  float(params.get("bin_width", 0.05)),
                                  float(params.get("tail_sigmas", 6.0)))
        if kind == "matrix":
            return DiscreteChannel(params["transition"], params.get("input_symbols"),
                                   params.get("output_symbols"))
    except KeyError as exc:
        raise InvalidParams(f"missing parameter {exc} for channel kind {kind!r}") from None
    raise InvalidParams(f"unknown channel kind {kind!r}")


def channel_from_spec(spec: dict) -> DiscreteChannel:
    spec = dict(spec)
    return build_example_channels(spec.pop("kind"), **spec)


def read_channel_csv(path) -> DiscreteChannel:
    rows, cols, m = read_matrix_csv(path)
    return DiscreteChannel(m, rows, cols)


def transmit(channel: DiscreteChannel, x_seq, seed) -> np.ndarray:
    """Pass x through the channel, one independent draw per symbol."""
    x = np.asarray(x_seq, dtype=np.intp)
    rng = stream(seed)
    cdf = np.cumsum(channel.transition, axis=1)[x]
    u = rng.random(x.shape)
    y = (cdf <= u[..., None]).sum(axis=-1)
    return np.minimum(y, channel.transition.shape[1] - 1).astype(np.intp)


def channel_mutual_information(input_pmf: Pmf, channel: DiscreteChannel) -> float:
    if input_pmf.probs.size != channel.transition.shape[0]:
        raise InvalidParams("input pmf does not match channel input alphabet")
    return mutual_information(channel.joint(input_pmf))


def output_entropy_terms(input_pmf: Pmf, channel: DiscreteChannel) -> tuple[float, float]:
    """(H(Y), H(Y|X)) in bits."""
    py = input_pmf.probs @ channel.transition
    h_y_given_x = float(sum(input_pmf.probs[i] * entropy_of(channel.transition[i])
                            for i in range(input_pmf.probs.size)))
    return entropy_of(py), h_y_given_x


@dataclass(frozen=True)
class CapacityResult:
    capacity_bits: float
    optimal_input: Pmf
    iterations: int
    residual: float
    lower_bound: float
    upper_bound: float
    multiplier: float = 0.0
    expected_cost: float = 0.0


def _row_divergences(w: np.ndarray, q: np.ndarray) -> np.ndarray:
    """D(W(.|x) || q) in bits for every input x."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0, w * (np.log2(w) - np.log2(q)[None, :]), 0.0)
    return terms.sum(axis=1)


def _ba_fixed_multiplier(w, cost, lam, tol, max_iter, p0=None):
    k = w.shape[0]
    log_p = np.log(np.full(k, 1.0 / k) if p0 is None else np.clip(p0, 1e-300, None))
    log_p -= logsumexp(log_p)
    lower = upper = 0.0
    for it in range(1, max_iter + 1):
        p = np.exp(log_p)
        q = p @ w
        d = _row_divergences(w, q) - lam * cost
        lower = float(p @ d)
        upper = float(d.max())
        if upper - lower <= tol:
            return p, lower, upper, it, True
        log_p = log_p + d * np.log(2.0)
        log_p -= logsumexp(log_p)
    return np.exp(log_p), lower, upper, max_iter, False


def blahut_arimoto_capacity(channel: DiscreteChannel, tol: float = 1e-9, max_iter: int = 100_000,
                            cost=None, budget: float | None = None) -> CapacityResult:
    """Capacity max_{P_X} I(X;Y) by alternating maximization.

    Stops when the standard bracket ``I(p) <= C <= max_x D(W(.|x) || pW)``
    closes to ``tol``. With ``cost`` (per input symbol, or an input-by-output
    matrix averaged under the channel) and ``budget``, the cost-constrained
    capacity is found by bisection on the Lagrange multiplier.
    """
    if tol <= 0:
        raise InvalidParams("tol must be positive")
    w = channel.transition
    k = w.shape[0]
    if cost is None:
        c = np.zeros(k)
    else:
        c = np.asarray(cost, dtype=np.float64)
        if c.ndim == 2:
            c = (w * c).sum(axis=1)
        if c.shape != (k,):
            raise InvalidParams("cost must have one entry per input symbol")

    def finish(p, lower, upper, it, ok, lam):
        # with a penalty the bracket is on the Lagrangian; add back lam * E[cost]
        expected_cost = float(p @ c)
        shift = lam * expected_cost
        result = CapacityResult(
            capacity_bits=float(channel_mutual_information(Pmf(p / p.sum(), channel.input_alphabet), channel)),
            optimal_input=Pmf(p / p.sum(), channel.input_alphabet),
            iterations=it, residual=upper - lower,
            lower_bound=lower + shift, upper_bound=upper + shift,
            multiplier=lam, expected_cost=expected_cost)
        if not ok:
            raise NotConverged(f"Blahut-Arimoto did not close the bracket within {max_iter} iterations",
                               result)
        return result

    p, lo_b, up_b, it, ok = _ba_fixed_multiplier(w, c, 0.0, tol, max_iter)
    if budget is None or not np.any(c):
        return finish(p, lo_b, up_b, it, ok, 0.0)
    if p @ c <= budget + 1e-12:
        return finish(p, lo_b, up_b, it, ok, 0.0)
    if c.min() > budget:
        raise InvalidParams("budget is below the cheapest input cost")
    lam_lo, lam_hi = 0.0, 1.0
    while True:
        sol = _ba_fixed_multiplier(w, c, lam_hi, tol, max_iter)
        if sol[0] @ c <= budget:
            break
        lam_lo, lam_hi = lam_hi, 2.0 * lam_hi
        if lam_hi > 1e6:
            break
    for _ in range(100):
        mid = 0.5 * (lam_lo + lam_hi)
        cand = _ba_fixed_multiplier(w, c, mid, tol, max_iter)
        if cand[0] @ c <= budget:
            lam_hi, sol = mid, cand
        else:
            lam_lo = mid
        if lam_hi - lam_lo < 1e-10:
            break
    return finish(*sol, lam_hi)

"""Stationary ergodic discrete sources: i.i.d. and first-order Markov."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .errors import InvalidDistribution, NotErgodic
from .probability import Alphabet, Pmf, entropy, entropy_of, read_matrix_csv, read_pmf_csv

ROW_TOL = 1e-12
STATIONARY_TOL = 1e-10


def stream(seed, *keys) -> np.random.Generator:
    """Independent generator for ``(seed, *keys)``.

    Streams depend only on the master seed and the key path (e.g. a trial
    index), never on the order in which they are requested.
    """
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("keys require an integer master seed")
        return seed
    ss = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class SequenceSample:
    symbols: np.ndarray
    log2_prob: float

    def __len__(self):
        return len(self.symbols)


@dataclass(frozen=True)
class IidSource:
    pmf: Pmf

    @property
    def alphabet(self) -> Alphabet:
        return self.pmf.alphabet

    def log2_prob(self, seq) -> float:
        seq = np.asarray(seq, dtype=np.intp)
        return float(self.pmf.log2_probs[seq].sum())

    def log2_probs(self, seqs) -> np.ndarray:
        """Row-wise log2 probabilities of a (count, n) array of sequences."""
        seqs = np.asarray(seqs, dtype=np.intp)
        return self.pmf.log2_probs[seqs].sum(axis=-1)

    def draw(self, rng: np.random.Generator, n: int, count: int | None = None) -> np.ndarray:
        shape = n if count is None else (count, n)
        return _inverse_cdf(np.cumsum(self.pmf.probs), rng.random(shape))


def _inverse_cdf(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.size - 1).astype(np.intp)


def _period(adjacency: np.ndarray) -> int:
    """Period of a strongly connected digraph from BFS levels."""
    order, _ = breadth_first_order(adjacency, 0, directed=True)
    level = np.full(adjacency.shape[0], -1)
    level[0] = 0
    for u in order:
        for v in np.flatnonzero(adjacency[u]):
            if level[v] < 0:
                level[v] = level[u] + 1
    diffs = [int(level[u] + 1 - level[v]) for u, v in zip(*np.nonzero(adjacency))]
    return reduce(gcd, diffs, 0)


def stationary_distribution(transition: np.ndarray) -> np.ndarray:
    k = transition.shape[0]
    # pi (T - I) = 0 together with sum(pi) = 1, solved as one least-squares system
    a = np.vstack([transition.T - np.eye(k), np.ones((1, k))])
    b = np.zeros(k + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    for _ in range(100_000):
        if np.max(np.abs(pi @ transition - pi)) <= 1e-12:
            break
        pi = pi @ transition
    else:
        raise NotErgodic("stationary distribution did not converge")
    return pi


@dataclass(frozen=True, init=False)
class MarkovSource:
    """First-order stationary Markov chain started from its stationary law."""

    alphabet: Alphabet
    transition: np.ndarray
    stationary: Pmf

    def __init__(self, transition, alphabet=None):
        t = np.array(transition, dtype=np.float64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise InvalidDistribution("transition matrix must be square")
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise InvalidDistribution("transition matrix has negative or non-finite entries")
        if np.any(np.abs(t.sum(axis=1) - 1.0) > ROW_TOL):
            raise InvalidDistribution("transition rows must sum to 1")
        alpha = Alphabet.range(t.shape[0]) if alphabet is None else (
            alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet)))
        if alpha.size != t.shape[0]:
            raise InvalidDistribution("alphabet size does not match transition matrix")
        adjacency = t > 0
        n_comp, _ = connected_components(adjacency, directed=True, connection="strong")
        if n_comp != 1:
            raise NotErgodic("transition graph is not strongly connected")
        if _period(adjacency) != 1:
            raise NotErgodic("chain is periodic")
        pi = stationary_distribution(t)
        if np.max(np.abs(pi @ t - pi)) > STATIONARY_TOL:
            raise NotErgodic("stationary distribution residual too large")
        t.setflags(write=False)
        object.__setattr__(self, "alphabet", alpha)
        object.__setattr__(self, "transition", t)
        object.__setattr__(self, "stationary", Pmf(pi, alpha))

    @classmethod
    def symmetric_binary(cls, flip: float) -> "MarkovSource":
        return cls([[1 - flip, flip], [flip, 1 - flip]], Alphabet((0, 1)))

    @property
    def log2_transition(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log2(self.transition)

    def log2_prob(self, seq) -> float:
        return float(self.log2_probs(np.asarray(seq)[None, :])[0])

    def log2_probs(self, seqs) -> np.ndarray:
        seqs = np.atleast_2d(np.asarray(seqs, dtype=np.intp))
        out = self.stationary.log2_probs[seqs[:, 0]]
        if seqs.shape[1] > 1:
            out = out + self.log2_transition[seqs[:, :-1], seqs[:, 1:]].sum(axis=1)
        return out

    def draw(self, rng: np.random.Generator, n: int, count: int | None = None) -> np.ndarray:
        rows = 1 if count is None else count
        u = rng.random((rows, n))
        out = np.empty((rows, n), dtype=np.intp)
        out[:, 0] = _inverse_cdf(np.cumsum(self.stationary.probs), u[:, 0])
        cdfs = np.cumsum(self.transition, axis=1)
        for i in range(1, n):
            c = cdfs[out[:, i - 1]]
            out[:, i] = np.minimum((c <= u[:, i, None]).sum(axis=1), c.shape[1] - 1)
        return out[0] if count is None else out


Source = IidSource | MarkovSource


def sample(source: Source, n: int, seed) -> SequenceSample:
    """Draw one length-n sequence together with its exact log2 probability."""
    if n < 1:
        raise ValueError("n must be >= 1")
    seq = source.draw(stream(seed), n)
    return SequenceSample(seq, source.log2_prob(seq))


def sample_many(source: Source, n: int, count: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """``count`` sequences as a (count, n) array plus their log2 probabilities."""
    seqs = source.draw(stream(seed), n, count)
    return seqs, source.log2_probs(seqs)


def entropy_rate(source: Source) -> float:
    """Entropy rate in bits/symbol."""
    if isinstance(source, IidSource):
        return entropy(source.pmf)
    pi = source.stationary.probs
    return float(sum(pi[i] * entropy_of(source.transition[i]) for i in range(pi.size)))


def empirical_entropy_rate(source: Source, n: int, trials: int, seed) -> tuple[float, float]:
    """Mean and std of ``-(1/n) log2 P(X^n)`` over ``trials`` draws."""
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    _, lp = sample_many(source, n, trials, seed)
    rates = -lp / n
    return float(rates.mean()), float(rates.std())


def read_source_csv(path, markov: bool = False) -> Source:
    if markov:
        rows, cols, m = read_matrix_csv(path)
        if rows != cols:
            raise InvalidDistribution("Markov transition CSV needs identical row and column symbols")
        return MarkovSource(m, rows)
    return IidSource(read_pmf_csv(path))


def source_from_spec(spec: dict) -> Source:
    """Build a source from a JSON-style spec.

    Recognised kinds: ``bernoulli`` (p), ``iid`` (probs[, symbols]),
    ``uniform`` (size), ``markov`` (transition[, symbols]) and
    ``symmetric_markov`` (flip).
    """
    kind = spec.get("kind", "iid")
    if kind == "bernoulli":
        return IidSource(Pmf.bernoulli(float(spec["p"])))
    if kind == "uniform":
        return IidSource(Pmf.uniform(int(spec["size"])))
    if kind == "iid":
        return IidSource(Pmf(spec["probs"], spec.get("symbols")))
    if kind == "markov":
        return MarkovSource(spec["transition"], spec.get("symbols"))
    if kind == "symmetric_markov":
        return MarkovSource.symmetric_binary(float(spec["flip"]))
    raise InvalidDistribution(f"unknown source kind {kind!r}")

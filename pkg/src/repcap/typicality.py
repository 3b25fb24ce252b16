"""Typical sets, joint typicality, and exhaustive enumeration at small n.

Membership uses the strict inequality ``|-(1/n) log2 P - H| < eps``. Exact ties
are resolved as *not* typical: a deviation within ``TIE_TOL`` of ``eps`` counts
as equal to it, so rounding cannot flip lattice points that sit on the boundary.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, log2

import numpy as np

from .errors import EnumerationTooLarge, InvalidParams
from .probability import JointPmf, entropy_of
from .sources import IidSource, SequenceSample, Source, entropy_rate

TIE_TOL = 1e-12
ENUMERATION_CAP = 2 ** 24


def within(deviation, epsilon):
    """Strict ``|deviation| < epsilon`` with boundary ties counted as outside."""
    return np.abs(deviation) < epsilon - TIE_TOL


def is_typical(seq, source: Source, epsilon: float) -> bool:
    """Whether ``seq`` lies in the typical set of ``source`` at tolerance epsilon."""
    if epsilon <= 0:
        raise InvalidParams("epsilon must be positive")
    if isinstance(seq, SequenceSample):
        n, lp = len(seq), seq.log2_prob
    else:
        n, lp = len(seq), source.log2_prob(seq)
    if not np.isfinite(lp):
        return False
    return bool(within(-lp / n - entropy_rate(source), epsilon))


def typical_mask(log2_probs, n: int, entropy_rate_bits: float, epsilon: float) -> np.ndarray:
    lp = np.asarray(log2_probs, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        return np.isfinite(lp) & within(-lp / n - entropy_rate_bits, epsilon)


def all_sequences(k: int, n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Sequences with codes in [start, stop) in lexicographic (base-k) order."""
    stop = k ** n if stop is None else stop
    codes = np.arange(start, stop, dtype=np.int64)
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] // powers) % k).astype(np.intp)


def sequence_codes(seqs, k: int) -> np.ndarray:
    """Inverse of :func:`all_sequences`: base-k integer code per row."""
    seqs = np.atleast_2d(np.asarray(seqs, dtype=np.int64))
    powers = k ** np.arange(seqs.shape[1] - 1, -1, -1, dtype=np.int64)
    return seqs @ powers


@dataclass(frozen=True)
class TypicalSet:
    n: int
    epsilon: float
    source_entropy_rate: float
    members: np.ndarray
    log2_probs: np.ndarray
    total_prob: float
    alphabet_size: int = 2
    codes: np.ndarray = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return int(self.members.shape[0])

    def __len__(self):
        return self.size

    def bounds(self) -> dict:
        """The three typical-set inequalities evaluated on this finite-n set.

        ``probability_bounds``: every member has 2^{-n(H+e)} <= P <= 2^{-n(H-e)}.
        ``size_upper``: |A| <= 2^{n(H+e)}. ``size_lower``: |A| >= (1-e) 2^{n(H-e)},
        which the asymptotic statement only promises for large n.
        """
        n, h, e = self.n, self.source_entropy_rate, self.epsilon
        lp = self.log2_probs
        prob_ok = bool(np.all(lp >= -n * (h + e)) and np.all(lp <= -n * (h - e)))
        upper = 2.0 ** (n * (h + e))
        lower = (1.0 - e) * 2.0 ** (n * (h - e))
        return {
            "probability_bounds": prob_ok,
            "size_upper": bool(self.size <= upper),
            "size_lower": bool(self.size >= lower),
            "size": self.size,
            "size_upper_value": upper,
            "size_lower_value": lower,
            "mass": self.total_prob,
        }

    def contains(self, seq) -> bool:
        code = int(sequence_codes(seq, self.alphabet_size)[0])
        i = np.searchsorted(self.codes, code)
        return bool(i < self.codes.size and self.codes[i] == code)


def enumerate_typical_set(source: Source, n: int, epsilon: float, cap: int = ENUMERATION_CAP,
                          chunk: int = 1 << 18) -> TypicalSet:
    """Exact typical set by scanning every sequence in lexicographic order."""
    if epsilon <= 0:
        raise InvalidParams("epsilon must be positive")
    k = source.alphabet.size
    total = k ** n
    if total > cap:
        raise EnumerationTooLarge(f"|alphabet|^n = {total} exceeds enumeration cap {cap}")
    h = entropy_rate(source)
    members, probs, codes = [], [], []
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        seqs = all_sequences(k, n, start, stop)
        lp = source.log2_probs(seqs)
        mask = typical_mask(lp, n, h, epsilon)
        members.append(seqs[mask])
        probs.append(lp[mask])
        codes.append(np.arange(start, stop, dtype=np.int64)[mask])
    members = np.concatenate(members) if members else np.empty((0, n), dtype=np.intp)
    lps = np.concatenate(probs)
    mass = float(np.exp2(lps).sum())
    return TypicalSet(n, epsilon, h, members, lps, mass, k, np.concatenate(codes))


# ----------------------------------------------------------- joint typicality

@dataclass(frozen=True, init=False)
class JointTypicalityContext:
    """Memoryless pair law P_{X,Y} with the typicality tolerance and block length.

    Sequences x^n and y^n are jointly typical when the joint and both marginal
    per-symbol log-probabilities are within epsilon of H(X,Y), H(X), H(Y).
    """

    joint: JointPmf
    n: int
    epsilon: float
    h_x: float
    h_y: float
    h_xy: float

    def __init__(self, joint: JointPmf, n: int, epsilon: float, d: int | None = None):
        if d is not None and d != n:
            raise InvalidParams("only d == n pairings are supported")
        if epsilon <= 0 or n < 1:
            raise InvalidParams("need epsilon > 0 and n >= 1")
        object.__setattr__(self, "joint", joint)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "epsilon", float(epsilon))
        object.__setattr__(self, "h_x", entropy_of(joint.probs.sum(axis=1)))
        object.__setattr__(self, "h_y", entropy_of(joint.probs.sum(axis=0)))
        object.__setattr__(self, "h_xy", entropy_of(joint.probs))

    @property
    def mutual_information(self) -> float:
        return self.h_x + self.h_y - self.h_xy

    @property
    def log2_px(self):
        with np.errstate(divide="ignore"):
            return np.log2(self.joint.probs.sum(axis=1))

    @property
    def log2_py(self):
        with np.errstate(divide="ignore"):
            return np.log2(self.joint.probs.sum(axis=0))

    def x_typical(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.intp)
        return typical_mask(self.log2_px[xs].sum(axis=-1), self.n, self.h_x, self.epsilon)

    def y_typical(self, ys) -> np.ndarray:
        ys = np.asarray(ys, dtype=np.intp)
        return typical_mask(self.log2_py[ys].sum(axis=-1), self.n, self.h_y, self.epsilon)

    def pair_typical(self, xs, ys) -> np.ndarray:
        """Only the joint condition, broadcasting over leading axes."""
        xs = np.asarray(xs, dtype=np.intp)
        ys = np.asarray(ys, dtype=np.intp)
        lp = self.joint.log2_probs[xs, ys].sum(axis=-1)
        return typical_mask(lp, self.n, self.h_xy, self.epsilon)

    def jointly_typical(self, xs, ys) -> np.ndarray:
        """All three conditions; ``xs`` may be a (count, n) stack against one ``ys``."""
        return self.pair_typical(xs, ys) & self.x_typical(xs) & self.y_typical(ys)

    def impostor_probability(self, y) -> float:
        """P[(X~^n, y) jointly typical] for X~^n i.i.d. from P_X, independent of y.

        Exact: sums over the conditional types of x~ given the composition of y.
        The result depends on y only through its type.
        """
        y = np.asarray(y, dtype=np.intp)
        if len(y) != self.n:
            raise InvalidParams("sequence length does not match context")
        if not self.y_typical(y):
            return 0.0
        return _impostor_probability_by_type(self, tuple(np.bincount(y, minlength=self.joint.probs.shape[1])))


_IMPOSTOR_CACHE: dict = {}


def _compositions(total: int, parts: int):
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cut:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield out


def _impostor_probability_by_type(ctx: JointTypicalityContext, y_counts: tuple) -> float:
    key = (ctx.joint.probs.tobytes(), ctx.joint.probs.shape, ctx.n, ctx.epsilon, y_counts)
    if key in _IMPOSTOR_CACHE:
        return _IMPOSTOR_CACHE[key]
    px = ctx.joint.probs.sum(axis=1)
    lpx, lpxy = ctx.log2_px, ctx.joint.log2_probs
    kx = px.size
    per_group = []
    for b, nb in enumerate(y_counts):
        options = []
        for comp in _compositions(nb, kx):
            comp = np.array(comp)
            used = comp > 0
            if np.any(px[used] == 0):
                continue
            log_count = log2(_multinomial(nb, comp))
            lx = float(np.dot(comp[used], lpx[used]))
            if np.any(np.isneginf(lpxy[used, b])):
                lxy = -np.inf
            else:
                lxy = float(np.dot(comp[used], lpxy[used, b]))
            options.append((log_count + lx, lx, lxy))
        per_group.append(options)
    total = 0.0
    for combo in itertools.product(*per_group):
        lx = sum(c[1] for c in combo)
        lxy = sum(c[2] for c in combo)
        if not np.isfinite(lxy):
            continue
        if within(-lx / ctx.n - ctx.h_x, ctx.epsilon) and within(-lxy / ctx.n - ctx.h_xy, ctx.epsilon):
            total += 2.0 ** sum(c[0] for c in combo)
    _IMPOSTOR_CACHE[key] = total
    return total


def _multinomial(n: int, parts) -> int:
    out, rest = 1, n
    for p in parts:
        out *= comb(rest, int(p))
        rest -= int(p)
    return out


def is_jointly_typical(x_seq, y_seq, ctx: JointTypicalityContext) -> bool:
    x = np.asarray(x_seq, dtype=np.intp)
    y = np.asarray(y_seq, dtype=np.intp)
    if len(x) != ctx.n or len(y) != ctx.n:
        raise InvalidParams("sequence lengths do not match context")
    return bool(ctx.jointly_typical(x, y))


def conditional_typical_set(x_seq, ctx: JointTypicalityContext, candidates=None) -> np.ndarray:
    """A(P_XY | x^n): the y-candidates jointly typical with x^n.

    Empty whenever x^n itself is not typical. ``candidates`` defaults to every
    y sequence (small n only).
    """
    x = np.asarray(x_seq, dtype=np.intp)
    ky = ctx.joint.probs.shape[1]
    if not ctx.x_typical(x):
        return np.empty((0, ctx.n), dtype=np.intp)
    if candidates is None:
        if ky ** ctx.n > ENUMERATION_CAP:
            raise EnumerationTooLarge("too many y candidates to enumerate")
        candidates = all_sequences(ky, ctx.n)
    candidates = np.asarray(candidates, dtype=np.intp)
    mask = ctx.pair_typical(x[None, :], candidates) & ctx.y_typical(candidates)
    return candidates[mask]


def count_jointly_typical_pairs(ctx: JointTypicalityContext) -> int:
    """Brute-force count of jointly typical (x^n, y^n) pairs (small n only)."""
    kx, ky = ctx.joint.probs.shape
    if (kx * ky) ** ctx.n > ENUMERATION_CAP:
        raise EnumerationTooLarge("too many pairs to enumerate")
    xs = all_sequences(kx, ctx.n)
    ys = all_sequences(ky, ctx.n)
    xs = xs[ctx.x_typical(xs)]
    ys = ys[ctx.y_typical(ys)]
    count = 0
    for x in xs:
        count += int(ctx.pair_typical(x[None, :], ys).sum())
    return count


def iid_joint_context(source: IidSource, conditional, n: int, epsilon: float) -> JointTypicalityContext:
    """Context for an i.i.d. input passed through a memoryless conditional law."""
    return JointTypicalityContext(JointPmf.from_conditional(source.pmf, conditional), n, epsilon)

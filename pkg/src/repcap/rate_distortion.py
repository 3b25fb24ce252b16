"""Distortion measures and the rate-distortion function via Blahut-Arimoto.

Points on R(D) are parameterized by the slope s = dR/dD <= 0 (bits per unit
distortion); the test channel at slope s is ``Q(v^|x) ~ q(v^) 2^{s d(g(x), v^)}``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .errors import InvalidParams, NotConverged
from .probability import Alphabet, JointPmf, Pmf, entropy, mutual_information, read_matrix_csv

LN2 = np.log(2.0)


@dataclass(frozen=True, init=False)
class DistortionMeasure:
    v_alphabet: Alphabet
    vhat_alphabet: Alphabet
    d: np.ndarray

    def __init__(self, d, v_alphabet=None, vhat_alphabet=None):
        m = np.array(d, dtype=np.float64)
        if m.ndim != 2:
            raise InvalidParams("distortion must be a matrix")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise InvalidParams("distortion entries must be finite and nonnegative")
        va = v_alphabet if isinstance(v_alphabet, Alphabet) else (
            Alphabet.range(m.shape[0]) if v_alphabet is None else Alphabet(tuple(v_alphabet)))
        wa = vhat_alphabet if isinstance(vhat_alphabet, Alphabet) else (
            Alphabet.range(m.shape[1]) if vhat_alphabet is None else Alphabet(tuple(vhat_alphabet)))
        if (va.size, wa.size) != m.shape:
            raise InvalidParams("alphabets do not match distortion shape")
        m.setflags(write=False)
        object.__setattr__(self, "v_alphabet", va)
        object.__setattr__(self, "vhat_alphabet", wa)
        object.__setattr__(self, "d", m)

    @property
    def d_max(self) -> float:
        return float(self.d.max())

    @classmethod
    def hamming(cls, size_or_alphabet) -> "DistortionMeasure":
        alpha = Alphabet.range(size_or_alphabet) if isinstance(size_or_alphabet, int) else (
            size_or_alphabet if isinstance(size_or_alphabet, Alphabet) else Alphabet(tuple(size_or_alphabet)))
        return cls(1.0 - np.eye(alpha.size), alpha, alpha)


def read_distortion_csv(path) -> DistortionMeasure:
    rows, cols, m = read_matrix_csv(path)
    return DistortionMeasure(m, rows, cols)


def distortion_from_spec(spec: dict, size: int) -> DistortionMeasure:
    kind = spec.get("kind", "hamming")
    if kind == "hamming":
        return DistortionMeasure.hamming(size)
    if kind == "matrix":
        return DistortionMeasure(spec["d"])
    raise InvalidParams(f"unknown distortion kind {kind!r}")


@dataclass(frozen=True)
class RdPoint:
    distortion: float
    rate: float
    slope: float
    test_channel: np.ndarray
    iterations: int = 0

    def output_marginal(self, source_pmf: Pmf) -> np.ndarray:
        return source_pmf.probs @ self.test_channel


def _effective_distortion(source_pmf: Pmf, measure: DistortionMeasure, g) -> np.ndarray:
    """Distortion indexed by (x, v^) through the bijection v = g(x)."""
    k = source_pmf.probs.size
    if g is None:
        if measure.d.shape[0] != k:
            raise InvalidParams("identity g needs |V| == |X|")
        return measure.d
    g = np.asarray(g, dtype=np.intp)
    if g.shape != (k,) or len(set(g.tolist())) != k:
        raise InvalidParams("g must be an injective map from x-indices to v-indices")
    return measure.d[g]


def _point_from_channel(p, dx, channel, slope, it) -> RdPoint:
    joint = JointPmf(p[:, None] * channel)
    dist = float(np.sum(joint.probs * dx))
    return RdPoint(dist, mutual_information(joint), float(slope), channel, it)


def blahut_arimoto_rd(source_pmf: Pmf, measure: DistortionMeasure, slope: float, g=None,
                      tol: float = 1e-10, max_iter: int = 100_000) -> RdPoint:
    """One point of R(D) at the given slope (``-inf`` gives the D_min end)."""
    if slope > 0:
        raise InvalidParams("slope must be <= 0")
    p = source_pmf.probs
    dx = _effective_distortion(source_pmf, measure, g)
    k_hat = dx.shape[1]
    if np.isneginf(slope):
        allowed = dx <= dx.min(axis=1, keepdims=True)
        penalty = np.where(allowed, 0.0, -np.inf)
    else:
        penalty = slope * LN2 * dx
    log_q = np.full(k_hat, -np.log(k_hat))
    prev_rate = np.inf
    for it in range(1, max_iter + 1):
        with np.errstate(divide="ignore"):
            log_c = log_q[None, :] + penalty
        log_c -= logsumexp(log_c, axis=1, keepdims=True)
        channel = np.exp(log_c)
        q = p @ channel
        with np.errstate(divide="ignore"):
            log_q = np.log(q)
        rate = mutual_information(JointPmf(p[:, None] * channel))
        if abs(rate - prev_rate) <= tol:
            return _point_from_channel(p, dx, channel, slope, it)
        prev_rate = rate
    point = _point_from_channel(p, dx, channel, slope, max_iter)
    raise NotConverged(f"rate-distortion iteration did not settle in {max_iter} steps", point)


def distortion_limits(source_pmf: Pmf, measure: DistortionMeasure, g=None) -> tuple[float, float]:
    """(D_min, D_max): zero-slope-free endpoints of the R(D) curve.

    D_max is the smallest distortion achievable at rate 0, i.e. with a single
    fixed reproduction symbol.
    """
    p = source_pmf.probs
    dx = _effective_distortion(source_pmf, measure, g)
    return float(p @ dx.min(axis=1)), float((p @ dx).min())


def zero_rate_point(source_pmf: Pmf, measure: DistortionMeasure, g=None) -> RdPoint:
    p = source_pmf.probs
    dx = _effective_distortion(source_pmf, measure, g)
    best = int(np.argmin(p @ dx))
    channel = np.zeros_like(dx)
    channel[:, best] = 1.0
    return _point_from_channel(p, dx, channel, 0.0, 0)


def rate_at_distortion(source_pmf: Pmf, measure: DistortionMeasure, target: float, g=None,
                       tol: float = 1e-10, xtol: float = 1e-12) -> RdPoint:
    """R(D) at a target distortion by root-finding on the slope."""
    d_min, d_max = distortion_limits(source_pmf, measure, g)
    if target < d_min - 1e-12:
        raise InvalidParams(f"target distortion {target} is below D_min = {d_min}")
    if target >= d_max:
        return zero_rate_point(source_pmf, measure, g)
    if target <= d_min:
        return blahut_arimoto_rd(source_pmf, measure, -np.inf, g, tol)

    def gap(t):
        return blahut_arimoto_rd(source_pmf, measure, -np.exp(t), g, tol).distortion - target

    lo, hi = -10.0, 1.0
    while gap(hi) > 0:
        hi += 2.0
        if hi > 12:
            raise NotConverged("could not bracket the slope for the target distortion")
    while gap(lo) < 0:
        lo -= 5.0
        if lo < -60:
            raise NotConverged("could not bracket the slope for the target distortion")
    t = brentq(gap, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    return blahut_arimoto_rd(source_pmf, measure, -np.exp(t), g, tol)


def rd_curve(source_pmf: Pmf, measure: DistortionMeasure, num_points: int, g=None,
             tol: float = 1e-10) -> list[RdPoint]:
    """R(D) sampled at ``num_points`` evenly spaced distortions in [D_min, D_max].

    Interior points are found by slope search, so every point is an exact
    Blahut-Arimoto fixed point; reported distortions are the achieved ones.
    """
    if num_points < 2:
        raise InvalidParams("num_points must be >= 2")
    d_min, d_max = distortion_limits(source_pmf, measure, g)
    first = blahut_arimoto_rd(source_pmf, measure, -np.inf, g, tol)
    last = zero_rate_point(source_pmf, measure, g)
    if d_max - d_min <= 1e-12:
        return [first]
    points = [first]
    for target in np.linspace(d_min, d_max, num_points)[1:-1]:
        points.append(rate_at_distortion(source_pmf, measure, float(target), g, tol))
    points.append(last)
    points.sort(key=lambda pt: pt.distortion)
    unique = [points[0]]
    for pt in points[1:]:
        if pt.distortion > unique[-1].distortion + 1e-12:
            unique.append(pt)
    return unique


def rd_function(source_pmf: Pmf, measure: DistortionMeasure, g=None):
    """Convenience: R(D) as a callable of the target distortion."""
    return lambda target: rate_at_distortion(source_pmf, measure, target, g).rate


def lossless_rate(source_pmf: Pmf) -> float:
    return entropy(source_pmf)

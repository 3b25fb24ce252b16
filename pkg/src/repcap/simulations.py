"""Monte Carlo experiments for embedding rate limits.

Experiment ids: ``thm3`` lossless embedding, ``thm4`` embedding through a noisy
channel, ``thm5`` lossy embedding, ``thm6`` lossy embedding sent over a noisy
channel, ``thm7`` the loss bound under bounded input noise.

Every trial draws from its own generator keyed by ``(seed, rate_index,
trial_index)``, and trial results are folded in index order, so reports do not
depend on how many worker threads ran them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import binomtest

from .channels import DiscreteChannel, blahut_arimoto_capacity, channel_from_spec, channel_mutual_information
from .embedding import covering_order, distinct_rows, iid_codebook
from .errors import InvalidInputs, InvalidParams
from .probability import JointPmf, Pmf, entropy_of
from .rate_distortion import DistortionMeasure, distortion_from_spec, rate_at_distortion
from .sources import IidSource, Source, entropy_rate, source_from_spec, stream
from .typicality import (JointTypicalityContext, all_sequences, enumerate_typical_set, sequence_codes,
                         typical_mask)

EXPERIMENTS = ("thm3", "thm4", "thm5", "thm6", "thm7")
MATERIALIZE_CAP = 4096
MAX_CODEBOOK = 1 << 20


def default_epsilon(n: int) -> float:
    return 0.1 if n <= 24 else 0.05


def default_rate_grid(threshold: float) -> list[float]:
    return [f * threshold for f in (0.5, 0.75, 1.25, 1.5)]


def num_messages(n: int, rate: float) -> int:
    """2^{nR} rounded to the nearest integer, at least 1."""
    return max(1, int(round(2.0 ** (n * rate))))


@dataclass
class ExperimentConfig:
    theorem: str
    source: dict | None = None
    channel: dict | None = None
    distortion: dict | None = None
    n: int = 16
    epsilon: float | None = None
    rates: list[float] = field(default_factory=list)
    trials: int = 1000
    seed: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem not in EXPERIMENTS:
            raise InvalidParams(f"unknown experiment {self.theorem!r}; expected one of {EXPERIMENTS}")
        if self.trials < 1:
            raise InvalidParams("trials must be >= 1")
        if self.n < 1:
            raise InvalidParams("n must be >= 1")
        self.rates = [float(r) for r in self.rates]
        if any(b <= a for a, b in zip(self.rates, self.rates[1:])):
            raise InvalidParams("rate grid must be strictly increasing")
        if self.epsilon is None:
            self.epsilon = default_epsilon(self.n)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {"theorem", "source", "channel", "distortion", "n", "epsilon", "rates", "trials", "seed"}
        options = dict(data.get("options", {}))
        options.update({k: v for k, v in data.items() if k not in known and k != "options"})
        return cls(theorem=data["theorem"], source=data.get("source"), channel=data.get("channel"),
                   distortion=data.get("distortion"), n=int(data.get("n", 16)),
                   epsilon=data.get("epsilon"), rates=list(data.get("rates", [])),
                   trials=int(data.get("trials", 1000)), seed=int(data.get("seed", 0)), options=options)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RateRecord:
    rate: float
    messages: int
    trials: int
    error_rate: float | None = None
    ci_half_width: float | None = None
    mean_distortion: float | None = None
    breakdown: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    config: dict
    thresholds: dict
    records: list[RateRecord]
    warnings: list[str] = field(default_factory=list)
    interval_method: str = "wilson-95"

    def to_dict(self) -> dict:
        return {"config": self.config, "thresholds": self.thresholds,
                "records": [asdict(r) for r in self.records], "warnings": list(self.warnings),
                "interval_method": self.interval_method}

    def record(self, rate: float) -> RateRecord:
        for r in self.records:
            if math.isclose(r.rate, rate):
                return r
        raise KeyError(rate)


def wilson_half_width(errors: int, trials: int) -> float:
    ci = binomtest(int(errors), int(trials)).proportion_ci(confidence_level=0.95, method="wilson")
    return 0.5 * (ci.high - ci.low)


def run_trials(fn: Callable[[int], object], trials: int, workers: int = 1) -> list:
    """Evaluate ``fn(t)`` for t in range(trials), results in trial order."""
    if workers <= 1 or trials < 2:
        return [fn(t) for t in range(trials)]
    chunks = np.array_split(np.arange(trials), min(workers * 4, trials))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda idx: [fn(int(t)) for t in idx], chunks)
        return [r for part in parts for r in part]


def _source(config: ExperimentConfig) -> Source:
    if config.source is None:
        raise InvalidParams(f"{config.theorem} needs a source")
    return source_from_spec(config.source)


def _iid(source: Source, theorem: str) -> IidSource:
    if not isinstance(source, IidSource):
        raise InvalidParams(f"{theorem} needs an i.i.d. source")
    return source


# ------------------------------------------------------------------ lossless embedding

def simulate_lossless_embedding(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Lossless embedding: error = P[a fresh input has no embedding of its own].

    For each rate, the first 2^{nR} points of the covering order (typical set
    first, then spare points to the most probable atypical inputs unless
    ``options.fill_spare`` is false) are represented.
    """
    source = _source(config)
    n, eps = config.n, config.epsilon
    h = entropy_rate(source)
    fill_spare = bool(config.options.get("fill_spare", True))
    rates = config.rates or default_rate_grid(h)
    k = source.alphabet.size
    typ = enumerate_typical_set(source, n, eps)
    order = covering_order(source, n, eps, typical_only=not fill_spare)
    all_lp = source.log2_probs(all_sequences(k, n))
    typical_lookup = np.zeros(k ** n, dtype=bool)
    typical_lookup[typ.codes] = True

    records = []
    for ri, rate in enumerate(rates):
        m = num_messages(n, rate)
        covered = np.zeros(k ** n, dtype=bool)
        covered[order[:m]] = True
        oracle_error = max(0.0, 1.0 - float(np.exp2(all_lp[covered]).sum()))

        def trial(t, covered=covered, ri=ri):
            code = int(sequence_codes(source.draw(stream(config.seed, ri, t), n), k)[0])
            return covered[code], typical_lookup[code]

        results = run_trials(trial, config.trials, workers)
        hit = np.array([r[0] for r in results])
        is_typ = np.array([r[1] for r in results])
        errors = int((~hit).sum())
        atypical = int((~hit & ~is_typ).sum())
        records.append(RateRecord(
            rate=rate, messages=m, trials=config.trials,
            error_rate=errors / config.trials,
            ci_half_width=wilson_half_width(errors, config.trials),
            breakdown={"atypical": atypical / config.trials,
                       "typical_uncovered": (errors - atypical) / config.trials},
            extra={"capacity_bits": math.log2(m), "oracle_error": oracle_error,
                   "regime": "achievable" if typ.size <= m else "converse",
                   "typical_size": typ.size, "typical_mass": typ.total_prob}))
    warnings = []
    for r in records:
        if h - eps <= r.rate < h:
            warnings.append(f"rate {r.rate} lies in the gap [H - eps, H); no verdict is implied there")
    return ExperimentReport(config.to_dict(), {"entropy_rate": h, "epsilon": eps}, records, warnings)


# ------------------------------------------------------------------ noisy channel

def _channel_setup(config: ExperimentConfig):
    if config.channel is None:
        raise InvalidParams(f"{config.theorem} needs a channel")
    channel = channel_from_spec(config.channel)
    cap = blahut_arimoto_capacity(channel)
    return channel, cap


def _draw_distinct(probs, n, m, rng):
    k = len(probs)
    if k ** n > MAX_CODEBOOK:
        raise InvalidParams("distinct codebooks need |X|^n <= 2^20")
    if m > k ** n:
        raise InvalidParams("more messages than distinct sequences")
    seqs = all_sequences(k, n)
    with np.errstate(divide="ignore"):
        lp = np.log2(np.asarray(probs))[seqs].sum(axis=1)
    w = np.exp2(lp)
    support = np.flatnonzero(w > 0)
    if m > support.size:
        raise InvalidParams("more messages than positive-probability sequences")
    pick = rng.choice(support, size=m, replace=False, p=w[support] / w[support].sum())
    return seqs[pick]


def _channel_codebook(probs, n, m, rng, mode):
    if mode == "distinct":
        return _draw_distinct(probs, n, m, rng)
    if m > MAX_CODEBOOK:
        raise InvalidParams(f"codebook of {m} words is too large to materialize")
    return iid_codebook(m, probs, n, rng)


def _classify_channel_error(ctx, x_true, y):
    """Which error event a decoding failure falls in: 1 atypical codeword, 2 atypical pair, 3 impostor."""
    if not ctx.x_typical(x_true):
        return 1
    if not (ctx.pair_typical(x_true, y) and ctx.y_typical(y)):
        return 2
    return 3


def _send_message(channel: DiscreteChannel, x: np.ndarray, rng) -> np.ndarray:
    cdf = np.cumsum(channel.transition, axis=1)[x]
    y = (cdf <= rng.random(x.shape)[:, None]).sum(axis=1)
    return np.minimum(y, channel.transition.shape[1] - 1).astype(np.intp)


def _decode(words, y, ctx) -> int:
    hits = np.flatnonzero(ctx.jointly_typical(words, y))
    return int(hits[0]) if hits.size else 0


def simulate_noisy_embedding(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Random codebook + joint-typicality decoding over a memoryless channel.

    Codebooks up to ``options.materialize_cap`` words (default 4096) are drawn
    explicitly and decoded by scanning. Larger codebooks are simulated exactly
    without being stored: the impostor codewords are i.i.d. and independent of
    y, so whether one with a smaller index is jointly typical is a single
    Bernoulli draw with the exact per-word probability for the type of y.
    """
    channel, cap = _channel_setup(config)
    input_pmf = (_iid(_source(config), "thm4").pmf if config.source is not None
                 else cap.optimal_input)
    n, eps = config.n, config.epsilon
    joint = channel.joint(input_pmf)
    ctx = JointTypicalityContext(joint, n, eps)
    info = channel_mutual_information(input_pmf, channel)
    h_y = ctx.h_y
    rates = config.rates or default_rate_grid(info)
    cap_words = int(config.options.get("materialize_cap", MATERIALIZE_CAP))
    mode = config.options.get("codebook", "random")
    probs = input_pmf.probs

    records = []
    for ri, rate in enumerate(rates):
        m = num_messages(n, rate)
        materialize = m <= cap_words or mode == "distinct"

        def trial(t, m=m, ri=ri, materialize=materialize):
            rng = stream(config.seed, ri, t)
            w = int(rng.integers(m))
            if materialize:
                words = _channel_codebook(probs, n, m, rng, mode)
                x = words[w]
                y = _send_message(channel, x, rng)
                w_hat = _decode(words, y, ctx)
                if w_hat == w:
                    return 0
                return _classify_channel_error(ctx, x, y)
            x = iid_codebook(1, probs, n, rng)[0]
            y = _send_message(channel, x, rng)
            p_imp = ctx.impostor_probability(y)
            if ctx.jointly_typical(x, y):
                # error iff one of the w lower-indexed impostors is jointly typical
                p_err = -math.expm1(w * math.log1p(-p_imp)) if p_imp < 1 else float(w > 0)
                return 3 if rng.random() < p_err else 0
            if w == 0:
                p_none = math.exp((m - 1) * math.log1p(-p_imp)) if p_imp < 1 else float(m == 1)
                if rng.random() < p_none:
                    return 0
            return _classify_channel_error(ctx, x, y)

        cases = np.array(run_trials(trial, config.trials, workers))
        counts = {c: int((cases == c).sum()) for c in (1, 2, 3)}
        errors = sum(counts.values())
        union = (m - 1) * 2.0 ** (-n * (info - 2 * eps * h_y))
        fano = max(0.0, 1.0 - (n * info + 1.0) / (n * rate)) if rate > 0 else 0.0
        records.append(RateRecord(
            rate=rate, messages=m, trials=config.trials,
            error_rate=errors / config.trials,
            ci_half_width=wilson_half_width(errors, config.trials),
            breakdown={"atypical_codeword": counts[1] / config.trials,
                       "atypical_pair": counts[2] / config.trials,
                       "impostor": counts[3] / config.trials},
            extra={"materialized": bool(materialize), "union_bound": union, "fano_lower_bound": fano}))
    thresholds = {"mutual_information": info, "capacity": cap.capacity_bits, "output_entropy": h_y,
                  "epsilon": eps}
    return ExperimentReport(config.to_dict(), thresholds, records)


# ------------------------------------------------------------------ lossy embedding

def _rd_setup(config: ExperimentConfig, source: IidSource):
    spec = dict(config.distortion or {"kind": "hamming"})
    measure = distortion_from_spec(spec, source.alphabet.size)
    if "target" not in spec:
        raise InvalidParams("distortion spec needs a 'target' distortion")
    point = rate_at_distortion(source.pmf, measure, float(spec["target"]))
    return measure, float(spec["target"]), point


def _source_codebook(q, n, m, rng, mode, source, eps):
    if mode == "typical":
        order = covering_order(source, n, eps)[:m]
        return all_sequences(source.alphabet.size, n)[order]
    if m > MAX_CODEBOOK:
        raise InvalidParams(f"codebook of {m} words is too large to materialize")
    return iid_codebook(m, q, n, rng)


def _encode_lossy(x, words, ctx, dx):
    """Smallest jointly typical reproduction index, else the least-distortion word.

    Returns (index, event) with event 1: x atypical, 2: no jointly typical word,
    3: jointly typical word found.
    """
    dist = dx[x[None, :], words].sum(axis=1)
    if not ctx.x_typical(x):
        return int(np.argmin(dist)), 1
    hits = np.flatnonzero(ctx.pair_typical(x[None, :], words) & ctx.y_typical(words))
    if hits.size == 0:
        return int(np.argmin(dist)), 2
    return int(hits[0]), 3


def _event_summary(events, distortions, trials):
    out = {}
    for e, name in ((1, "source_atypical"), (2, "no_typical_word"), (3, "typical_word")):
        mask = events == e
        out[f"{name}_fraction"] = float(mask.sum()) / trials
        out[f"{name}_distortion"] = float(distortions[mask].sum()) / trials
    return out


def simulate_lossy_embedding(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Lossy embedding: reproduction codebook from the optimal test channel's output law."""
    source = _iid(_source(config), "thm5")
    measure, target, point = _rd_setup(config, source)
    n, eps = config.n, config.epsilon
    q = point.output_marginal(source.pmf)
    ctx = JointTypicalityContext(JointPmf(source.pmf.probs[:, None] * point.test_channel), n, eps)
    dx = measure.d
    rates = config.rates or default_rate_grid(point.rate)
    mode = config.options.get("source_codebook", "random")

    records = []
    for ri, rate in enumerate(rates):
        m = num_messages(n, rate)

        def trial(t, m=m, ri=ri):
            rng = stream(config.seed, ri, t)
            x = source.draw(rng, n)
            words = _source_codebook(q, n, m, rng, mode, source, eps)
            idx, event = _encode_lossy(x, words, ctx, dx)
            return event, float(dx[x, words[idx]].mean())

        results = run_trials(trial, config.trials, workers)
        events = np.array([r[0] for r in results])
        dist = np.array([r[1] for r in results])
        breakdown = _event_summary(events, dist, config.trials)
        mean = sum(breakdown[f"{k}_distortion"] for k in ("source_atypical", "no_typical_word", "typical_word"))
        records.append(RateRecord(
            rate=rate, messages=m, trials=config.trials, mean_distortion=mean,
            ci_half_width=1.96 * float(dist.std(ddof=1)) / math.sqrt(config.trials) if config.trials > 1 else None,
            breakdown=breakdown,
            extra={"excess_over_target": mean - target}))
    thresholds = {"rate_distortion": point.rate, "target_distortion": target,
                  "achieved_test_distortion": point.distortion, "d_max": measure.d_max, "epsilon": eps}
    return ExperimentReport(config.to_dict(), thresholds, records, interval_method="normal-95")


# ------------------------------------------------------------------ source then channel

def simulate_source_channel(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Separate lossy source coding followed by channel coding of the index.

    On every trial whose index is decoded correctly, the effective support of
    the code (log2 of its distinct reproduction words, one non-zero embedding
    each) divided by n is compared with I(X;V^) and I(X;Y).
    """
    source = _iid(_source(config), "thm6")
    measure, target, point = _rd_setup(config, source)
    channel, cap = _channel_setup(config)
    input_pmf = (Pmf(config.options["channel_input"]) if "channel_input" in config.options
                 else cap.optimal_input)
    n, eps = config.n, config.epsilon
    q = point.output_marginal(source.pmf)
    src_ctx = JointTypicalityContext(JointPmf(source.pmf.probs[:, None] * point.test_channel), n, eps)
    ch_ctx = JointTypicalityContext(channel.joint(input_pmf), n, eps)
    info_xy = channel_mutual_information(input_pmf, channel)
    info_xv = point.rate
    dx = measure.d
    rates = config.rates or default_rate_grid(min(info_xy, cap.capacity_bits))
    src_mode = config.options.get("source_codebook", "random")
    ch_mode = config.options.get("codebook", "random")

    records = []
    for ri, rate in enumerate(rates):
        m = num_messages(n, rate)

        def trial(t, m=m, ri=ri):
            rng = stream(config.seed, ri, t)
            x = source.draw(rng, n)
            words = _source_codebook(q, n, m, rng, src_mode, source, eps)
            w, _ = _encode_lossy(x, words, src_ctx, dx)
            code = _channel_codebook(input_pmf.probs, n, m, rng, ch_mode)
            y = _send_message(channel, code[w], rng)
            w_hat = _decode(code, y, ch_ctx)
            support = math.log2(distinct_rows(words)) / n
            ok = w_hat == w
            sandwich = bool(info_xv < support < info_xy) if ok else None
            return ok, float(dx[x, words[w_hat]].mean()), support, sandwich

        results = run_trials(trial, config.trials, workers)
        ok = np.array([r[0] for r in results])
        dist = np.array([r[1] for r in results])
        support = np.array([r[2] for r in results])
        sandwich = [r[3] for r in results if r[0]]
        errors = int((~ok).sum())
        records.append(RateRecord(
            rate=rate, messages=m, trials=config.trials,
            error_rate=errors / config.trials,
            ci_half_width=wilson_half_width(errors, config.trials),
            mean_distortion=float(dist.mean()),
            breakdown={"decoded_distortion": float(dist[ok].sum()) / config.trials,
                       "misdecoded_distortion": float(dist[~ok].sum()) / config.trials},
            extra={"successful_runs": int(ok.sum()),
                   "distortion_given_decoded": float(dist[ok].mean()) if ok.any() else None,
                   "sandwich_holds_all": bool(all(sandwich)) if sandwich else None,
                   "sandwich_violations": int(sum(1 for s in sandwich if not s)),
                   "effective_support_rate_mean": float(support.mean()),
                   "effective_support_rate_min": float(support.min()),
                   "effective_support_rate_max": float(support.max()),
                   "distortion_ci_half_width": 1.96 * float(dist.std(ddof=1)) / math.sqrt(config.trials)
                   if config.trials > 1 else None}))
    thresholds = {"rate_distortion": point.rate, "capacity": cap.capacity_bits,
                  "mutual_information_xy": info_xy, "mutual_information_xvhat": info_xv,
                  "target_distortion": target, "d_max": measure.d_max, "epsilon": eps,
                  "separable": bool(point.rate < cap.capacity_bits)}
    return ExperimentReport(config.to_dict(), thresholds, records)


# ------------------------------------------------------------------ noisy-input loss bound

@dataclass
class LossBoundResult:
    bound: float
    empirical: dict | None = None

    def to_dict(self) -> dict:
        return {"bound": self.bound, "empirical": self.empirical}


def _aligned_maps(dim: int, k_c: float, k_g: float, rng) -> tuple[np.ndarray, np.ndarray]:
    """Linear F, G with ||F|| = k_c, ||G|| = k_g and ||G F|| = k_c k_g."""
    u, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    v, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    w, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    spread = np.linspace(1.0, 0.2, dim)
    f = k_c * (u * spread) @ v.T
    g = k_g * (w * spread) @ u.T
    return f, g


def noisy_input_loss_bound(delta: float, sigma: float, k_c: float, k_g: float, empirical: dict | None = None) -> LossBoundResult:
    """Noisy-input loss bound Delta + sigma * K_c * K_G, optionally checked on linear maps.

    ``empirical`` keys: ``F``/``G`` (matrices; default random maps of dimension
    ``dim`` built so the composition attains K_c K_G), ``trials``, ``seed``.
    The loss is ||G(F(y)) - v|| with y = x + e, ||e|| <= sigma uniform in the
    ball, and v = G(F(x)) + r with a training residual ||r|| = delta.
    """
    if min(delta, sigma, k_c, k_g) < 0:
        raise InvalidInputs("delta, sigma, k_c and k_g must be nonnegative")
    bound = delta + sigma * k_c * k_g
    if empirical is None:
        return LossBoundResult(bound)
    rng = stream(int(empirical.get("seed", 0)))
    if "F" in empirical:
        f = np.atleast_2d(np.asarray(empirical["F"], dtype=np.float64))
        g = np.atleast_2d(np.asarray(empirical["G"], dtype=np.float64))
    else:
        f, g = _aligned_maps(int(empirical.get("dim", 8)), k_c, k_g, rng)
    if np.linalg.norm(f, 2) > k_c * (1 + 1e-12) or np.linalg.norm(g, 2) > k_g * (1 + 1e-12):
        raise InvalidInputs("supplied maps exceed the stated Lipschitz constants")
    h = g @ f
    dim_in, dim_out = h.shape[1], h.shape[0]
    trials = int(empirical.get("trials", 100_000))

    # uniform in the sigma-ball: isotropic direction, radius sigma * U^(1/dim)
    e = rng.standard_normal((trials, dim_in))
    e /= np.linalg.norm(e, axis=1, keepdims=True)
    e *= sigma * rng.random(trials)[:, None] ** (1.0 / dim_in)
    r = rng.standard_normal((trials, dim_out))
    r *= delta / np.maximum(np.linalg.norm(r, axis=1, keepdims=True), 1e-300)
    losses = np.linalg.norm(e @ h.T - r, axis=1)

    _, s, vt = np.linalg.svd(h)
    e_adv = sigma * vt[0]
    he = h @ e_adv
    norm_he = np.linalg.norm(he)
    r_adv = -delta * he / norm_he if norm_he > 0 else np.zeros(dim_out)
    adversarial = float(np.linalg.norm(he - r_adv))
    return LossBoundResult(bound, {
        "trials": trials, "max_loss": float(losses.max()), "mean_loss": float(losses.mean()),
        "violations": int((losses > bound * (1 + 1e-12) + 1e-15).sum()),
        "adversarial_loss": adversarial, "adversarial_ratio": adversarial / bound if bound > 0 else 1.0,
        "composed_norm": float(s[0]), "k_c": float(np.linalg.norm(f, 2)), "k_g": float(np.linalg.norm(g, 2))})


# ------------------------------------------------------------------ dispatch

def simulate(config: ExperimentConfig, workers: int = 1) -> dict:
    """Run the configured experiment and return its report as a plain dict."""
    if config.theorem == "thm7":
        o = config.options
        empirical = o.get("empirical")
        if empirical is not None:
            empirical = {"seed": config.seed, **empirical}
        res = noisy_input_loss_bound(float(o.get("delta", 0.0)), float(o.get("sigma", 0.0)),
                                     float(o.get("k_c", 1.0)), float(o.get("k_g", 1.0)), empirical)
        return {"config": config.to_dict(), **res.to_dict()}
    runner = {"thm3": simulate_lossless_embedding, "thm4": simulate_noisy_embedding, "thm5": simulate_lossy_embedding, "thm6": simulate_source_channel}
    return runner[config.theorem](config, workers=workers).to_dict()


def report_curve(report: dict) -> list[dict]:
    """Plot-ready rows (rate, value, ci) from a report dict."""
    rows = []
    for rec in report.get("records", []):
        value = rec["error_rate"] if rec.get("error_rate") is not None else rec.get("mean_distortion")
        rows.append({"rate": rec["rate"], "value": value, "ci": rec.get("ci_half_width")})
    return rows


# aliases keyed to the experiment ids
run_theorem3 = simulate_lossless_embedding
run_theorem4 = simulate_noisy_embedding
run_theorem5 = simulate_lossy_embedding
run_theorem6 = simulate_source_channel
run_theorem7 = noisy_input_loss_bound

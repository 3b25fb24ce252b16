"""Class-collapse diagnostics for labeled embeddings.

Within-class variability, class-mean geometry against a simplex equiangular
tight frame (ETF), and a check for classes whose embeddings collapsed while
their regression targets did not.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMeans, DimensionMismatch, EmptyClass, InvalidInputs, MissingTargets


@dataclass(frozen=True)
class LabeledEmbeddings:
    embeddings: np.ndarray
    labels: np.ndarray
    targets: np.ndarray | None = None
    ids: tuple = field(default=(), repr=False)

    def __post_init__(self):
        emb = np.asarray(self.embeddings, dtype=np.float64)
        if emb.ndim != 2:
            raise DimensionMismatch("embeddings must be a (count, d) array")
        labels = np.asarray(self.labels)
        if labels.shape != (emb.shape[0],):
            raise DimensionMismatch("need one label per embedding")
        if not np.all(np.isfinite(emb)):
            raise InvalidInputs("embeddings contain non-finite values")
        object.__setattr__(self, "embeddings", emb)
        object.__setattr__(self, "labels", labels)
        if self.targets is not None:
            tgt = np.asarray(self.targets, dtype=np.float64)
            if tgt.ndim == 1:
                tgt = tgt[:, None]
            if tgt.shape[0] != emb.shape[0]:
                raise DimensionMismatch("need one target row per embedding")
            object.__setattr__(self, "targets", tgt)

    @property
    def classes(self) -> np.ndarray:
        return np.unique(self.labels)

    def __len__(self):
        return int(self.embeddings.shape[0])


def read_embeddings_csv(path, require_targets: bool = False) -> LabeledEmbeddings:
    """Read ``id,label,v_1..v_d,z_1..z_q`` rows: z_* embeddings, optional v_* targets."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [r for r in reader if r]
    if header[:2] != ["id", "label"]:
        raise InvalidInputs("embedding CSV must start with id,label columns")
    z_cols = [i for i, h in enumerate(header) if h.startswith("z_")]
    v_cols = [i for i, h in enumerate(header) if h.startswith("v_")]
    if not z_cols:
        raise InvalidInputs("embedding CSV has no z_* columns")
    if require_targets and not v_cols:
        raise MissingTargets("regression audit needs v_* target columns")
    try:
        emb = np.array([[float(r[i]) for i in z_cols] for r in rows])
        tgt = np.array([[float(r[i]) for i in v_cols] for r in rows]) if v_cols else None
    except (ValueError, IndexError) as exc:
        raise InvalidInputs(f"malformed embedding row: {exc}") from None
    if not rows:
        raise EmptyClass("embedding CSV has no rows")
    return LabeledEmbeddings(emb.reshape(len(rows), len(z_cols)), np.array([r[1] for r in rows]),
                             None if tgt is None else tgt.reshape(len(rows), len(v_cols)),
                             tuple(r[0] for r in rows))


@dataclass(frozen=True)
class ClassStatistics:
    classes: np.ndarray
    counts: np.ndarray
    means: np.ndarray
    global_mean: np.ndarray
    within_ss: float
    between_ss: float
    total_ss: float
    within_covariance: np.ndarray
    between_covariance: np.ndarray

    @property
    def collapse_index(self) -> float:
        """Within-class share of the total scatter: 0 when every class is a single point."""
        return self.within_ss / self.total_ss if self.total_ss > 0 else 0.0


def class_statistics(data: LabeledEmbeddings) -> ClassStatistics:
    emb, labels = data.embeddings, data.labels
    if len(data) == 0:
        raise EmptyClass("no embeddings")
    classes, inverse, counts = np.unique(labels, return_inverse=True, return_counts=True)
    d = emb.shape[1]
    means = np.zeros((classes.size, d))
    np.add.at(means, inverse, emb)
    means /= counts[:, None]
    mu = emb.mean(axis=0)
    resid = emb - means[inverse]
    centred = means - mu
    n = len(data)
    within_cov = resid.T @ resid / n
    between_cov = (centred * counts[:, None]).T @ centred / n
    return ClassStatistics(classes, counts, means, mu,
                           within_ss=float(np.sum(resid ** 2)),
                           between_ss=float(np.sum(counts[:, None] * centred ** 2)),
                           total_ss=float(np.sum((emb - mu) ** 2)),
                           within_covariance=within_cov, between_covariance=between_cov)


def collapse_index(data: LabeledEmbeddings) -> float:
    return class_statistics(data).collapse_index


def nc1_trace(data: LabeledEmbeddings) -> float:
    """tr(S_W S_B^+) / C, the usual within-vs-between variability ratio."""
    stats = class_statistics(data)
    return float(np.trace(stats.within_covariance @ np.linalg.pinv(stats.between_covariance)) / stats.classes.size)


@dataclass(frozen=True)
class EtfResiduals:
    """Scale-free distances of the centred class means from a simplex ETF.

    ``centering``: norm of the mean of the class means over their average norm.
    ``equinorm``: spread (max - min) of the norms over their average.
    ``equiangular``: worst |cos(mu_i, mu_j) + 1/(M-1)| over pairs.
    """
    centering: float
    equinorm: float
    equiangular: float

    def within(self, tol: float) -> bool:
        return max(self.centering, self.equinorm, self.equiangular) <= tol


def etf_residuals(means: np.ndarray, global_mean: np.ndarray | None = None, weights=None) -> EtfResiduals:
    """Compare class means to a simplex ETF after centring on the global mean.

    Without ``global_mean`` the (``weights``-weighted) average of the means is
    used. Raises DegenerateMeans when fewer than two classes or a centred mean
    is zero.
    """
    m = np.asarray(means, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 2:
        raise DegenerateMeans("need at least two class means")
    if global_mean is None:
        global_mean = np.average(m, axis=0, weights=weights)
    c = m - np.asarray(global_mean, dtype=np.float64)
    norms = np.linalg.norm(c, axis=1)
    avg = norms.mean()
    if avg == 0 or np.any(norms <= 1e-12 * max(avg, 1e-300)):
        raise DegenerateMeans("a centred class mean is zero")
    k = m.shape[0]
    unit = c / norms[:, None]
    cos = unit @ unit.T
    off = cos[~np.eye(k, dtype=bool)]
    return EtfResiduals(
        centering=float(np.linalg.norm(c.sum(axis=0)) / k / avg),
        equinorm=float((norms.max() - norms.min()) / avg),
        equiangular=float(np.max(np.abs(off + 1.0 / (k - 1)))))


def simplex_etf(num_classes: int, dim: int | None = None, scale: float = 1.0, rng=None) -> np.ndarray:
    """Vertices of a centred regular simplex (rows), optionally rotated into ``dim`` dimensions."""
    k = num_classes
    if k < 2:
        raise InvalidInputs("need at least two classes")
    dim = k if dim is None else dim
    if dim < k - 1:
        raise DimensionMismatch("simplex needs dim >= num_classes - 1")
    base = np.sqrt(k / (k - 1)) * (np.eye(k) - 1.0 / k)
    u, _, _ = np.linalg.svd(base)
    coords = base @ u[:, : k - 1]          # (k, k-1) intrinsic coordinates
    out = np.zeros((k, dim))
    out[:, : k - 1] = coords
    if rng is not None:
        q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        out = out @ q.T
    return scale * out


@dataclass(frozen=True)
class DegeneracyFinding:
    label: object
    embedding_spread: float
    target_spread: float
    degenerate: bool


def _spread(x: np.ndarray) -> float:
    """Largest pairwise Euclidean distance within a point set."""
    if x.shape[0] < 2:
        return 0.0
    sq = np.sum(x ** 2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * x @ x.T
    return float(np.sqrt(max(d2.max(), 0.0)))


def _scale(x: np.ndarray) -> float:
    s = float(np.sqrt(np.mean(np.sum((x - x.mean(axis=0)) ** 2, axis=1))))
    return s if s > 0 else 1.0


def regression_degeneracy_check(data: LabeledEmbeddings, tol: float = 1e-6) -> list[DegeneracyFinding]:
    """Per class: embeddings collapsed to a point while targets still vary.

    Spreads are relative to the RMS deviation of all embeddings (and all
    targets) from their global mean, so the check does not depend on units.
    A flagged class means an injective decoder cannot recover its targets.
    """
    if data.targets is None:
        raise MissingTargets("regression degeneracy check needs targets")
    e_scale, t_scale = _scale(data.embeddings), _scale(data.targets)
    out = []
    for label in data.classes:
        mask = data.labels == label
        es = _spread(data.embeddings[mask]) / e_scale
        ts = _spread(data.targets[mask]) / t_scale
        out.append(DegeneracyFinding(label.item() if hasattr(label, "item") else label, es, ts,
                                     bool(es <= tol and ts > tol)))
    return out


def collapse_report(data: LabeledEmbeddings, tol: float = 1e-6) -> dict:
    """Everything the collapse audit reports, as plain values."""
    stats = class_statistics(data)
    report = {
        "num_points": len(data),
        "num_classes": int(stats.classes.size),
        "dimension": int(data.embeddings.shape[1]),
        "collapse_index": stats.collapse_index,
        "within_ss": stats.within_ss,
        "between_ss": stats.between_ss,
        "total_ss": stats.total_ss,
        "class_counts": {str(c): int(n) for c, n in zip(stats.classes, stats.counts)},
    }
    try:
        res = etf_residuals(stats.means, stats.global_mean)
        report["etf"] = {"centering": res.centering, "equinorm": res.equinorm,
                         "equiangular": res.equiangular, "within_tol": res.within(tol)}
    except DegenerateMeans as exc:
        report["etf"] = None
        report["etf_error"] = str(exc)
    if data.targets is not None:
        findings = regression_degeneracy_check(data, tol)
        report["degenerate_classes"] = [str(f.label) for f in findings if f.degenerate]
        report["degeneracy"] = [{"label": str(f.label), "embedding_spread": f.embedding_spread,
                                 "target_spread": f.target_spread, "degenerate": f.degenerate}
                                for f in findings]
    return report

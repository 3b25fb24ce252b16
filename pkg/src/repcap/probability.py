"""Finite-alphabet probability tables and information measures (in bits).

Conventions: ``0 log 0 = 0`` and ``0 log(0/0) = 0``. Probabilities are stored
linearly as float64; sequence probabilities elsewhere are kept as log2.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AbsoluteContinuityViolated, InvalidDistribution

# sums within NORM_TOL are accepted as-is; within RENORM_TOL they are rescaled
NORM_TOL = 1e-12
RENORM_TOL = 1e-9


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if len(symbols) == 0:
            raise InvalidDistribution("alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise InvalidDistribution(f"duplicate symbols in alphabet {symbols!r}")
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def range(cls, size: int) -> "Alphabet":
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def index(self, symbol) -> int:
        return self.symbols.index(symbol)


def _check_probs(probs, what="pmf") -> np.ndarray:
    arr = np.array(probs, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InvalidDistribution(f"{what} contains non-finite entries")
    if np.any(arr < 0):
        raise InvalidDistribution(f"{what} contains negative entries")
    total = arr.sum()
    err = abs(total - 1.0)
    if err > RENORM_TOL:
        raise InvalidDistribution(f"{what} sums to {total!r}, not 1")
    if err > NORM_TOL:
        arr = arr / total
    arr.setflags(write=False)
    return arr


def _as_alphabet(alphabet, size) -> Alphabet:
    if alphabet is None:
        return Alphabet.range(size)
    if isinstance(alphabet, Alphabet):
        return alphabet
    return Alphabet(tuple(alphabet))


@dataclass(frozen=True, init=False)
class Pmf:
    alphabet: Alphabet
    probs: np.ndarray

    def __init__(self, probs, alphabet=None):
        arr = _check_probs(probs)
        if arr.ndim != 1:
            raise InvalidDistribution("pmf must be one-dimensional")
        alpha = _as_alphabet(alphabet, arr.size)
        if alpha.size != arr.size:
            raise InvalidDistribution(
                f"pmf has {arr.size} entries but alphabet has {alpha.size} symbols"
            )
        object.__setattr__(self, "alphabet", alpha)
        object.__setattr__(self, "probs", arr)

    @classmethod
    def uniform(cls, size_or_alphabet) -> "Pmf":
        if isinstance(size_or_alphabet, int):
            return cls(np.full(size_or_alphabet, 1.0 / size_or_alphabet))
        alpha = _as_alphabet(size_or_alphabet, None)
        return cls(np.full(alpha.size, 1.0 / alpha.size), alpha)

    @classmethod
    def bernoulli(cls, p: float) -> "Pmf":
        """Pmf on {0, 1} with P(1) = p."""
        return cls([1.0 - p, p], Alphabet((0, 1)))

    @classmethod
    def from_log2(cls, log2_probs, alphabet=None) -> "Pmf":
        return cls(np.exp2(np.asarray(log2_probs, dtype=np.float64)), alphabet)

    @property
    def log2_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log2(self.probs)

    def __len__(self):
        return self.probs.size

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash((self.alphabet, self.probs.tobytes()))


@dataclass(frozen=True, init=False)
class JointPmf:
    row_alphabet: Alphabet
    col_alphabet: Alphabet
    probs: np.ndarray

    def __init__(self, probs, row_alphabet=None, col_alphabet=None):
        arr = _check_probs(probs, what="joint pmf")
        if arr.ndim != 2:
            raise InvalidDistribution("joint pmf must be a matrix")
        rows = _as_alphabet(row_alphabet, arr.shape[0])
        cols = _as_alphabet(col_alphabet, arr.shape[1])
        if (rows.size, cols.size) != arr.shape:
            raise InvalidDistribution("joint pmf shape does not match alphabets")
        object.__setattr__(self, "row_alphabet", rows)
        object.__setattr__(self, "col_alphabet", cols)
        object.__setattr__(self, "probs", arr)

    @classmethod
    def from_conditional(cls, marginal: Pmf, conditional, col_alphabet=None) -> "JointPmf":
        """P(x, y) = P(x) P(y|x) from a row-stochastic matrix."""
        cond = np.asarray(conditional, dtype=np.float64)
        return cls(marginal.probs[:, None] * cond, marginal.alphabet, col_alphabet)

    @classmethod
    def product(cls, px: Pmf, py: Pmf) -> "JointPmf":
        return cls(np.outer(px.probs, py.probs), px.alphabet, py.alphabet)

    def row_marginal(self) -> Pmf:
        return Pmf(self.probs.sum(axis=1), self.row_alphabet)

    def col_marginal(self) -> Pmf:
        return Pmf(self.probs.sum(axis=0), self.col_alphabet)

    def transpose(self) -> "JointPmf":
        return JointPmf(self.probs.T, self.col_alphabet, self.row_alphabet)

    @property
    def log2_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log2(self.probs)


def _plogp(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p, dtype=np.float64)
    mask = p > 0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def entropy_of(probs) -> float:
    """Entropy in bits of a raw probability array (any shape, summing to 1)."""
    value = -float(_plogp(np.asarray(probs, dtype=np.float64)).sum())
    return max(value, 0.0)


def entropy(p: Pmf) -> float:
    """Shannon entropy H(p) in bits."""
    return entropy_of(p.probs)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def joint_entropy(j: JointPmf) -> float:
    return entropy_of(j.probs)


def kl_divergence(p: Pmf, q: Pmf) -> float:
    """D(p || q) in bits.

    Raises AbsoluteContinuityViolated when some p_i > 0 has q_i = 0.
    """
    if p.alphabet != q.alphabet:
        raise InvalidDistribution("kl_divergence needs pmfs over the same alphabet")
    return _kl(p.probs, q.probs)


def _kl(p: np.ndarray, q: np.ndarray) -> float:
    support = p > 0
    if np.any(q[support] == 0):
        raise AbsoluteContinuityViolated("p is not absolutely continuous w.r.t. q")
    ps, qs = p[support], q[support]
    return max(float(np.sum(ps * (np.log2(ps) - np.log2(qs)))), 0.0)


def mutual_information(j: JointPmf) -> float:
    """I(X;Y) = D(P_XY || P_X P_Y) in bits."""
    px = j.probs.sum(axis=1)
    py = j.probs.sum(axis=0)
    return _kl(j.probs.ravel(), np.outer(px, py).ravel())


def conditional_entropy(j: JointPmf) -> float:
    """H(Y|X) for a joint with X on rows."""
    return joint_entropy(j) - entropy_of(j.probs.sum(axis=1))


# ---------------------------------------------------------------- CSV formats

def _parse_symbol(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return text


def read_pmf_csv(path) -> Pmf:
    """Read a ``symbol,prob`` CSV file."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip().lower() for h in next(reader)]
        if header[:2] != ["symbol", "prob"]:
            raise InvalidDistribution(f"{path}: expected header 'symbol,prob', got {header}")
        symbols, probs = [], []
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            symbols.append(_parse_symbol(row[0]))
            probs.append(float(row[1]))
    return Pmf(probs, Alphabet(tuple(symbols)))


def write_pmf_csv(p: Pmf, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["symbol", "prob"])
        for s, v in zip(p.alphabet.symbols, p.probs):
            writer.writerow([s, repr(float(v))])


def read_matrix_csv(path) -> tuple[Alphabet, Alphabet, np.ndarray]:
    """Read a labelled matrix: first row = column symbols, first column = row symbols.

    The top-left cell is ignored. Used for joint pmfs, channels, Markov
    transition matrices and distortion matrices.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and "".join(r).strip()]
    if len(rows) < 2:
        raise InvalidDistribution(f"{path}: matrix CSV needs a header and at least one row")
    cols = Alphabet(tuple(_parse_symbol(c) for c in rows[0][1:]))
    row_syms, values = [], []
    for r in rows[1:]:
        if len(r) != cols.size + 1:
            raise InvalidDistribution(f"{path}: ragged row {r!r}")
        row_syms.append(_parse_symbol(r[0]))
        values.append([float(v) for v in r[1:]])
    return Alphabet(tuple(row_syms)), cols, np.array(values, dtype=np.float64)


def write_matrix_csv(row_alphabet: Alphabet, col_alphabet: Alphabet, matrix, path, corner="") -> None:
    matrix = np.asarray(matrix)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([corner, *col_alphabet.symbols])
        for s, row in zip(row_alphabet.symbols, matrix):
            writer.writerow([s, *(repr(float(v)) for v in row)])


def read_joint_csv(path) -> JointPmf:
    rows, cols, m = read_matrix_csv(path)
    return JointPmf(m, rows, cols)


def write_joint_csv(j: JointPmf, path) -> None:
    write_matrix_csv(j.row_alphabet, j.col_alphabet, j.probs, path)


def as_pmf(obj, alphabet: Sequence | None = None) -> Pmf:
    if isinstance(obj, Pmf):
        return obj
    return Pmf(obj, alphabet)

"""Embedding-space accounting and constructive typical-set and random codecs.

An embedding space has q coordinates of b bits each, so it holds
``2**(q*b)`` points and ``Q_z = q*b`` bits. Embedding points are addressed by
integer index; :meth:`EmbeddingSpace.coordinates` unpacks an index into its
q-tuple, with index 0 being the all-zeros tuple.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import log2

import numpy as np

from .errors import DimensionMismatch, InsufficientRate, InvalidParams
from .sources import Source, stream
from .typicality import JointTypicalityContext, enumerate_typical_set, sequence_codes, all_sequences


@dataclass(frozen=True)
class EmbeddingSpace:
    q: int
    bits_per_coord: int

    def __post_init__(self):
        if self.q < 1 or self.bits_per_coord < 1:
            raise InvalidParams("q and bits_per_coord must be >= 1")

    @property
    def capacity_bits(self) -> int:
        return self.q * self.bits_per_coord

    @property
    def num_points(self) -> int:
        return 2 ** self.capacity_bits

    def coordinates(self, index: int) -> tuple[int, ...]:
        """Unpack an embedding index into q unsigned b-bit coordinates."""
        b, mask = self.bits_per_coord, (1 << self.bits_per_coord) - 1
        return tuple((index >> (b * (self.q - 1 - i))) & mask for i in range(self.q))

    def index(self, coords) -> int:
        if len(coords) != self.q:
            raise DimensionMismatch(f"expected {self.q} coordinates, got {len(coords)}")
        out = 0
        for c in coords:
            out = (out << self.bits_per_coord) | int(c)
        return out


def representation_rate(space: EmbeddingSpace, n: int) -> float:
    """Embedding bits per input symbol, q*b/n."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    return space.capacity_bits / n


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    lhs: float
    rhs: float
    relation: str

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def feasibility_report(space: EmbeddingSpace, n: int, source_entropy: float,
                       channel_information: float | None = None, rd_information: float | None = None,
                       output_dim: int | None = None, output_alphabet_size: int | None = None) -> dict[str, Check]:
    """Verdicts on the embedding budget against the source/channel/distortion limits.

    * ``lossless``: Q_z >= n H(X), the budget needed to give every typical input
      its own embedding.
    * ``noisy``: Q_z < n I(X;Y); when it fails, only an effective support below
      n I(X;Y) can be decoded reliably.
    * ``compressed``: Q_z >= n I(X; V^).
    * ``output``: d log2|V| >= n H(X), so each typical input has a distinct output.
    """
    qz = space.capacity_bits
    checks = {"lossless": Check("lossless", qz >= n * source_entropy, qz, n * source_entropy, ">=")}
    if channel_information is not None:
        rhs = n * channel_information
        checks["noisy"] = Check("noisy", qz < rhs, qz, rhs, "<")
    if rd_information is not None:
        rhs = n * rd_information
        checks["compressed"] = Check("compressed", qz >= rhs, qz, rhs, ">=")
    if output_dim is not None and output_alphabet_size is not None:
        lhs = output_dim * log2(output_alphabet_size)
        checks["output"] = Check("output", lhs >= n * source_entropy, lhs, n * source_entropy, ">=")
    return checks


@dataclass(frozen=True)
class EmbeddingCode:
    """Injective map from input sequences (by base-k code) to embedding indices."""

    space: EmbeddingSpace
    n: int
    alphabet_size: int
    codebook: dict
    reverse: dict = field(repr=False)
    fallback: int = 0
    typical_count: int = 0

    def __len__(self):
        return len(self.codebook)

    def encode(self, seq) -> int:
        code = int(sequence_codes(seq, self.alphabet_size)[0])
        return self.codebook.get(code, self.fallback)

    def represents(self, seqs) -> np.ndarray:
        codes = sequence_codes(seqs, self.alphabet_size)
        keys = np.fromiter(self.codebook.keys(), dtype=np.int64, count=len(self.codebook))
        return np.isin(codes, keys)

    def decode(self, index: int):
        """The input sequence assigned to ``index`` (None if unassigned)."""
        code = self.reverse.get(index)
        if code is None:
            return None
        return all_sequences(self.alphabet_size, self.n, code, code + 1)[0]


def _assign(space, n, k, codes, typical_count):
    codes = [int(c) for c in codes]
    codebook = {c: i for i, c in enumerate(codes)}
    reverse = {i: c for i, c in enumerate(codes)}
    return EmbeddingCode(space, n, k, codebook, reverse, 0, typical_count)


def build_typical_codebook(source: Source, n: int, epsilon: float, space: EmbeddingSpace,
                           fill_spare: bool = False) -> EmbeddingCode:
    """Give each typical sequence a distinct embedding index.

    Typical sequences are ordered by decreasing probability (lexicographic on
    ties) and take indices 0, 1, ...; unrepresented inputs map to the fallback
    index 0. With ``fill_spare`` the points left over after the typical set are
    handed to the most probable atypical sequences.

    Raises InsufficientRate when the typical set does not fit.
    """
    typ = enumerate_typical_set(source, n, epsilon)
    if typ.size > space.num_points:
        raise InsufficientRate(
            f"|A| = {typ.size} typical sequences exceed 2^{space.capacity_bits} embedding points",
            typical_size=typ.size, capacity_bits=space.capacity_bits)
    codes = covering_order(source, n, epsilon, typical_only=not fill_spare)[: space.num_points]
    return _assign(space, n, source.alphabet.size, codes, typ.size)


def covering_order(source: Source, n: int, epsilon: float, typical_only: bool = False) -> np.ndarray:
    """Sequence codes in the order a typical-set codebook assigns embeddings.

    Typical sequences first by decreasing probability, then (unless
    ``typical_only``) the remaining sequences by decreasing probability. Ties
    break lexicographically.
    """
    k = source.alphabet.size
    typ = enumerate_typical_set(source, n, epsilon)
    order = np.lexsort((typ.codes, -typ.log2_probs))
    head = typ.codes[order]
    if typical_only:
        return head
    every = all_sequences(k, n)
    lp = source.log2_probs(every)
    codes = np.arange(k ** n, dtype=np.int64)
    rest = ~np.isin(codes, typ.codes) & np.isfinite(lp)
    tail_order = np.lexsort((codes[rest], -lp[rest]))
    return np.concatenate([head, codes[rest][tail_order]])


def covering_mass(source: Source, n: int, epsilon: float, capacity_bits: int, fill_spare: bool = True) -> float:
    """Probability that a fresh input is represented by the first 2^Q_z points of the covering order."""
    codes = covering_order(source, n, epsilon, typical_only=not fill_spare)[: 2 ** capacity_bits]
    seqs = all_sequences(source.alphabet.size, n)[codes] if codes.size else np.empty((0, n), dtype=np.intp)
    return float(np.exp2(source.log2_probs(seqs)).sum()) if codes.size else 0.0


@dataclass(frozen=True)
class RandomCodebook:
    words: np.ndarray

    @property
    def size(self) -> int:
        return int(self.words.shape[0])

    def __len__(self):
        return self.size

    def __getitem__(self, i):
        return self.words[i]

    @property
    def collisions(self) -> int:
        """Number of codewords that duplicate an earlier codeword."""
        return self.size - distinct_rows(self.words)


def distinct_rows(words: np.ndarray) -> int:
    return int(np.unique(np.ascontiguousarray(words), axis=0).shape[0])


def random_codebook(num_messages: int, source: Source, n: int, seed) -> RandomCodebook:
    """``num_messages`` codewords drawn i.i.d. from the source law; duplicates kept."""
    if num_messages < 1:
        raise InvalidParams("need at least one message")
    rng = stream(seed)
    words = source.draw(rng, n, num_messages)
    return RandomCodebook(np.asarray(words, dtype=np.intp).reshape(num_messages, n))


def iid_codebook(num_messages: int, probs, n: int, rng: np.random.Generator) -> np.ndarray:
    """Raw (M, n) codeword array with i.i.d. symbols from ``probs``."""
    cdf = np.cumsum(probs)
    idx = np.searchsorted(cdf, rng.random((num_messages, n)), side="right")
    return np.minimum(idx, len(probs) - 1).astype(np.intp)


@dataclass(frozen=True)
class DecodeResult:
    index: int
    no_candidate: bool
    candidates: int


def joint_typicality_decode(y_seq, codebook, ctx: JointTypicalityContext) -> DecodeResult:
    """Smallest index w with (x^n(w), y^n) jointly typical, else the first message.

    Indices are 0-based, so the fallback "first codeword" is index 0.
    """
    words = codebook.words if isinstance(codebook, RandomCodebook) else np.asarray(codebook)
    y = np.asarray(y_seq, dtype=np.intp)
    hits = np.flatnonzero(ctx.jointly_typical(words, y))
    if hits.size == 0:
        return DecodeResult(0, True, 0)
    return DecodeResult(int(hits[0]), False, int(hits.size))


@dataclass(frozen=True)
class SupportAudit:
    distinct_nonzero_count: int
    q_tilde: float
    q: int


def effective_support_audit(embeddings, space: EmbeddingSpace | None = None) -> SupportAudit:
    """Count distinct embedding vectors that are not all-zero; q~ = log2(count)."""
    rows = [tuple(e) for e in embeddings]
    if not rows:
        return SupportAudit(0, 0.0, 0 if space is None else space.q)
    q = len(rows[0])
    if any(len(r) != q for r in rows):
        raise DimensionMismatch("embedding tuples have differing dimensions")
    if space is not None and q != space.q:
        raise DimensionMismatch(f"embeddings have dimension {q}, space has q = {space.q}")
    arr = np.asarray(rows, dtype=np.float64)
    nonzero = arr[np.any(arr != 0, axis=1)]
    count = int(np.unique(nonzero, axis=0).shape[0]) if nonzero.size else 0
    q_tilde = log2(count) if count > 1 else 0.0
    return SupportAudit(count, q_tilde, q)

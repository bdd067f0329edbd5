"""Sketching schemes over integer-coded sequences and their metrics.

Sequences are numpy arrays of symbols in [0, sigma). Positions reported in
a Sketch are 1-based start offsets of the selected k-mers.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .constructions import make_rng
from .dbg_core import NUCLEOTIDES, GraphParams, KmerSet, digits
from .decycling import longest_remaining_path
from .errors import SequenceTooShort

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def as_sequence(seq, sigma: int = 4) -> np.ndarray:
    """Symbols as a uint8 array; strings may use digits or ACGT when sigma=4."""
    if isinstance(seq, np.ndarray):
        return seq.astype(np.uint8, copy=False)
    if isinstance(seq, str):
        if sigma == 4 and seq and seq[0].upper() in NUCLEOTIDES:
            table = {c: i for i, c in enumerate(NUCLEOTIDES)}
            return np.array([table[c] for c in seq.upper()], dtype=np.uint8)
        return np.array([int(c) for c in seq], dtype=np.uint8)
    return np.asarray(list(seq), dtype=np.uint8)


def kmer_codes(seq: np.ndarray, k: int, sigma: int) -> np.ndarray:
    """Radix-sigma code of every k-mer of ``seq`` (first symbol most significant)."""
    n = len(seq) - k + 1
    if n <= 0:
        return np.zeros(0, dtype=np.uint64)
    codes = np.zeros(n, dtype=np.uint64)
    s = np.uint64(sigma)
    for j in range(k):
        codes = codes * s + seq[j : j + n].astype(np.uint64)
    return codes


def mix64(codes: np.ndarray, seed: int) -> np.ndarray:
    """Seeded bijection of 64-bit words (xor-shift-multiply finaliser)."""
    with np.errstate(over="ignore"):
        x = codes.astype(np.uint64) ^ np.uint64((seed * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
    return x & _MASK64


@dataclass(frozen=True)
class SketchScheme:
    """A context-free or windowed k-mer selection rule.

    kind is one of "set", "minimizer", "syncmer", "threshold". The order on
    k-mers (or s-mers) is the seeded hash permutation unless an explicit rank
    table is given in ``ranks``.
    """

    kind: str
    k: int
    sigma: int = 4
    w: int = 1
    s: int = 0
    mask: tuple[int, ...] = ()
    threshold: float = 0.0
    seed: int = 0
    kmers: KmerSet | None = field(default=None, compare=False)
    ranks: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("set", "minimizer", "syncmer", "threshold"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.kind == "minimizer" and self.w < 1:
            raise ValueError("minimizer window w must be >= 1")
        if self.kind == "syncmer":
            if not 1 <= self.s <= self.k:
                raise ValueError("syncmer needs 1 <= s <= k")
            if not self.mask or any(not 1 <= o <= self.k - self.s + 1 for o in self.mask):
                raise ValueError("syncmer mask must be a nonempty set of offsets in [1, k-s+1]")
        if self.kind == "set" and self.kmers is None:
            raise ValueError("set-indicator scheme needs a k-mer set")

    @property
    def context(self) -> int:
        return self.w + self.k - 1 if self.kind == "minimizer" else self.k

    def order(self, codes: np.ndarray) -> np.ndarray:
        if self.ranks is not None:
            return np.asarray(self.ranks)[codes.astype(np.int64)]
        return mix64(codes, self.seed)


def set_indicator(kmers: KmerSet) -> SketchScheme:
    return SketchScheme("set", kmers.params.k, kmers.params.sigma, kmers=kmers)


def minimizer(k: int, w: int, seed: int = 0, sigma: int = 4) -> SketchScheme:
    return SketchScheme("minimizer", k, sigma, w=w, seed=seed)


def syncmer(k: int, s: int, mask=(1,), seed: int = 0, sigma: int = 4, ranks=None) -> SketchScheme:
    return SketchScheme("syncmer", k, sigma, s=s, mask=tuple(sorted(set(mask))), seed=seed, ranks=ranks)


def hash_threshold(k: int, threshold: float, seed: int = 0, sigma: int = 4) -> SketchScheme:
    """Select a k-mer when its hash, scaled to [0, 1), is below ``threshold``."""
    return SketchScheme("threshold", k, sigma, threshold=threshold, seed=seed)


@dataclass(frozen=True)
class Sketch:
    positions: np.ndarray  # sorted, 1-based
    length: int  # length of the sketched sequence
    k: int

    def __len__(self):
        return len(self.positions)


def selected_mask(scheme: SketchScheme, seq) -> np.ndarray:
    """Boolean per k-mer start (0-based) telling whether it is selected."""
    seq = as_sequence(seq, scheme.sigma)
    if len(seq) < scheme.context:
        raise SequenceTooShort(f"sequence of length {len(seq)} shorter than context {scheme.context}")
    codes = kmer_codes(seq, scheme.k, scheme.sigma)
    if scheme.kind == "set":
        return scheme.kmers.bits[codes.astype(np.int64)].astype(bool)
    if scheme.kind == "threshold":
        scaled = scheme.order(codes).astype(np.float64) / 2.0**64
        return scaled < scheme.threshold
    if scheme.kind == "minimizer":
        ranks = scheme.order(codes)
        windows = sliding_window_view(ranks, scheme.w)
        picks = windows.argmin(axis=1) + np.arange(len(windows))  # argmin keeps the leftmost
        out = np.zeros(len(codes), dtype=bool)
        out[picks] = True
        return out
    # syncmer: position of the smallest s-mer inside each k-mer
    smer = scheme.order(kmer_codes(seq, scheme.s, scheme.sigma))
    inner = sliding_window_view(smer, scheme.k - scheme.s + 1)[: len(codes)]
    offsets = inner.argmin(axis=1) + 1
    return np.isin(offsets, scheme.mask)


def sketch(scheme: SketchScheme, seq) -> Sketch:
    seq = as_sequence(seq, scheme.sigma)
    picked = selected_mask(scheme, seq)
    return Sketch(np.flatnonzero(picked) + 1, len(seq), scheme.k)


def density(sk: Sketch, seq=None) -> float:
    length = sk.length if seq is None else len(seq)
    return len(sk.positions) / length if length else 0.0


def random_sequence(length: int, sigma: int, rng) -> np.ndarray:
    return rng.integers(0, sigma, size=length, dtype=np.uint8)


def mutate(seq: np.ndarray, rate: float, sigma: int, rng) -> np.ndarray:
    """i.i.d. substitutions: each site changes to a different symbol with probability ``rate``."""
    out = seq.copy()
    hit = rng.random(len(seq)) < rate
    shift = rng.integers(1, sigma, size=int(hit.sum()), dtype=np.uint8)
    out[hit] = (out[hit] + shift) % sigma
    return out


def conservation(scheme: SketchScheme, seq, mutation_rate: float, trials: int = 10, seed: int = 0) -> float:
    """Mean share of selected positions kept (same position, same k-mer) after mutation.

    An empty original sketch counts as fully conserved; a warning says so.
    """
    rng = make_rng(seed)
    seq = as_sequence(seq, scheme.sigma)
    base = selected_mask(scheme, seq)
    codes = kmer_codes(seq, scheme.k, scheme.sigma)
    if not base.any():
        warnings.warn("empty sketch: conservation defined as 1", RuntimeWarning, stacklevel=2)
        return 1.0
    shares = []
    for _ in range(trials):
        other = mutate(seq, mutation_rate, scheme.sigma, rng)
        kept = base & selected_mask(scheme, other) & (kmer_codes(other, scheme.k, scheme.sigma) == codes)
        shares.append(kept.sum() / base.sum())
    return float(np.mean(shares))


def max_gap(picked: np.ndarray) -> tuple[int, int]:
    """Longest run of unselected k-mer starts (boundary runs included): (length, start)."""
    if picked.all():
        return 0, 0
    padded = np.concatenate(([True], picked, [True]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    starts, ends = edges[0::2], edges[1::2]
    runs = ends - starts
    i = int(runs.argmax())
    return int(runs[i]), int(starts[i])


def empirical_window(scheme: SketchScheme, trials: int = 10, length: int = 10_000, seed: int = 0):
    """Largest gap seen over random sequences, with the substring that realises it.

    A gap is a maximal run of consecutive k-mer starts with no selection, so a
    gap of g spans g + k - 1 symbols.
    """
    rng = make_rng(seed)
    best, witness = -1, None
    for _ in range(trials):
        seq = random_sequence(length, scheme.sigma, rng)
        gap, start = max_gap(selected_mask(scheme, seq))
        if gap > best:
            best, witness = gap, seq[start : start + gap + scheme.k - 1].copy()
    return best, witness


def spell_path(path, params: GraphParams) -> np.ndarray:
    """Sequence whose consecutive k-mers are the nodes of ``path``."""
    if not path:
        return np.zeros(0, dtype=np.uint8)
    out = digits(path[0], params)
    out.extend(u % params.sigma for u in path[1:])
    return np.array(out, dtype=np.uint8)


def set_indicator_witness(kmers: KmerSet) -> np.ndarray:
    """A sequence with no selected k-mer whose gap equals the remaining path length."""
    return spell_path(longest_remaining_path(kmers), kmers.params)


def debruijn_sequence(sigma: int, order: int) -> np.ndarray:
    """Linearised de Bruijn sequence: every ``order``-mer exactly once, length sigma^order + order - 1.

    Built by concatenating Lyndon words in lexicographic order (FKM algorithm).
    """
    if order < 1 or sigma < 2:
        raise ValueError("need sigma >= 2 and order >= 1")
    word = [0] * (order + 1)
    cyclic = []

    def gen(t, p):
        if t > order:
            if order % p == 0:
                cyclic.extend(word[1 : p + 1])
            return
        word[t] = word[t - p]
        gen(t + 1, p)
        for c in range(word[t - p] + 1, sigma):
            word[t] = c
            gen(t + 1, t)

    gen(1, 1)
    return np.array(cyclic + cyclic[: order - 1], dtype=np.uint8)


def syncmer_adversary(k: int, s: int, sigma: int = 2):
    """Sequence and s-mer order on which the first-offset open syncmer never fires.

    The order ranks an s-mer below every s-mer that appears before it in the
    de Bruijn sequence, so s-mers strictly decrease along the sequence and the
    minimum of each k-mer sits at its last offset. Returns (sequence, scheme).
    """
    if not 1 <= s <= k - 1:
        raise ValueError("the adversary needs 1 <= s <= k - 1")
    seq = debruijn_sequence(sigma, s)
    codes = kmer_codes(seq, s, sigma).astype(np.int64)
    ranks = np.empty(sigma**s, dtype=np.int64)
    ranks[codes] = np.arange(len(codes))[::-1]
    return seq, syncmer(k, s, mask=(1,), sigma=sigma, ranks=ranks)

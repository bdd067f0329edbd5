"""K-mer encoding and navigation of the implicit de Bruijn graph.

A k-mer is stored as its radix-sigma code with the first character as the
most significant digit, so the graph never needs to be materialised:
successors drop the leading digit and append one, predecessors do the
reverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import KmerError, ParamsError

NUCLEOTIDES = "ACGT"
MAX_CODE_SPACE = 2**63


@dataclass(frozen=True)
class GraphParams:
    sigma: int
    k: int

    def __post_init__(self):
        if not isinstance(self.sigma, int) or self.sigma < 2:
            raise ParamsError(f"alphabet size must be an integer >= 2, got {self.sigma!r}")
        if not isinstance(self.k, int) or self.k < 2:
            raise ParamsError(f"k must be an integer >= 2, got {self.k!r}")
        if self.sigma**self.k > MAX_CODE_SPACE:
            raise ParamsError(f"sigma^k = {self.sigma}^{self.k} exceeds the 64-bit code space")

    @property
    def size(self) -> int:
        """Number of k-mers (nodes of D_k)."""
        return self.sigma**self.k

    @property
    def prefix_count(self) -> int:
        """Number of (k-1)-mers, which is also the number of F-move labels."""
        return self.sigma ** (self.k - 1)


def encode(s: str, params: GraphParams) -> int:
    if len(s) != params.k:
        raise KmerError(f"expected a string of length {params.k}, got {len(s)}: {s!r}")
    code = 0
    for ch in s:
        code = code * params.sigma + _symbol_value(ch, params.sigma)
    return code


def _symbol_value(ch: str, sigma: int) -> int:
    if sigma == 4 and ch.upper() in NUCLEOTIDES:
        return NUCLEOTIDES.index(ch.upper())
    if ch.isdigit() and int(ch) < sigma:
        return int(ch)
    if sigma > 10 and ch.isalpha():
        value = ord(ch.lower()) - ord("a") + 10
        if value < sigma:
            return value
    raise KmerError(f"character {ch!r} is not a symbol of an alphabet of size {sigma}")


_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def decode(code: int, params: GraphParams, length: int | None = None) -> str:
    """Digit string of ``code``; ``length`` defaults to k (pass k-1 for prefixes)."""
    length = params.k if length is None else length
    if params.sigma > len(_DIGIT_CHARS):
        raise KmerError("alphabet too large for a one-character-per-symbol rendering")
    out = []
    for _ in range(length):
        code, r = divmod(code, params.sigma)
        out.append(_DIGIT_CHARS[r])
    return "".join(reversed(out))


def digits(code: int, params: GraphParams) -> list[int]:
    out = [0] * params.k
    for i in range(params.k - 1, -1, -1):
        code, out[i] = divmod(code, params.sigma)
    return out


def check_kmer(u: int, params: GraphParams) -> None:
    if not 0 <= u < params.size:
        raise KmerError(f"k-mer code {u} outside [0, {params.size})")


def successors(u: int, params: GraphParams) -> list[int]:
    base = (u % params.prefix_count) * params.sigma
    return [base + a for a in range(params.sigma)]


def predecessors(u: int, params: GraphParams) -> list[int]:
    tail = u // params.sigma
    return [a * params.prefix_count + tail for a in range(params.sigma)]


def rotate(u: int, params: GraphParams) -> int:
    """Left circular rotation: the first character moves to the end."""
    return (u % params.prefix_count) * params.sigma + u // params.prefix_count


class Pcr(NamedTuple):
    id: int
    members: tuple[int, ...]


def pcr_of(u: int, params: GraphParams) -> Pcr:
    orbit = [u]
    v = rotate(u, params)
    while v != u:
        orbit.append(v)
        v = rotate(v, params)
    start = orbit.index(min(orbit))
    return Pcr(orbit[start], tuple(orbit[start:] + orbit[:start]))


@lru_cache(maxsize=32)
def enumerate_pcrs(params: GraphParams) -> tuple[Pcr, ...]:
    """All rotation classes, sorted by canonical id, members in rotation order."""
    n = params.size
    seen = np.zeros(n, dtype=bool)
    out = []
    for u in range(n):
        if seen[u]:
            continue
        # u is the first unseen code, hence the minimal rotation of its class
        orbit = [u]
        v = rotate(u, params)
        while v != u:
            orbit.append(v)
            v = rotate(v, params)
        seen[orbit] = True
        out.append(Pcr(u, tuple(orbit)))
    return tuple(out)


@lru_cache(maxsize=32)
def pcr_index(params: GraphParams) -> np.ndarray:
    """Array mapping each k-mer code to the position of its PCR in enumerate_pcrs."""
    idx = np.empty(params.size, dtype=np.int64)
    for i, p in enumerate(enumerate_pcrs(params)):
        idx[list(p.members)] = i
    idx.setflags(write=False)
    return idx


def left_companions(f: int, params: GraphParams) -> list[int]:
    _check_prefix(f, params)
    return [a * params.prefix_count + f for a in range(params.sigma)]


def right_companions(f: int, params: GraphParams) -> list[int]:
    _check_prefix(f, params)
    return [f * params.sigma + a for a in range(params.sigma)]


def _check_prefix(f: int, params: GraphParams) -> None:
    if not 0 <= f < params.prefix_count:
        raise KmerError(f"(k-1)-mer code {f} outside [0, {params.prefix_count})")


def homopolymer_symbol(f: int, params: GraphParams) -> int | None:
    """Symbol c when f = c^(k-1), else None."""
    c = f % params.sigma
    repunit = (params.prefix_count - 1) // (params.sigma - 1)
    return c if f == c * repunit else None


def _totient(n: int) -> int:
    return sum(1 for i in range(1, n + 1) if gcd(i, n) == 1)


def necklace_count(params: GraphParams) -> int:
    k = params.k
    total = sum(_totient(d) * params.sigma ** (k // d) for d in range(1, k + 1) if k % d == 0)
    return total // k


def pcr_set_count(params: GraphParams) -> int:
    """Product of class sizes, grouped by period: d^(number of classes of period d)."""
    k, sigma = params.k, params.sigma
    divisors = [d for d in range(1, k + 1) if k % d == 0]
    primitive = {}
    for d in divisors:
        primitive[d] = sigma**d - sum(primitive[e] for e in divisors if e < d and d % e == 0)
    count = 1
    for d in divisors:
        count *= d ** (primitive[d] // d)
    return count


class KmerSet:
    """Dense membership bitmap over all sigma^k k-mers."""

    __slots__ = ("params", "bits", "_count")

    def __init__(self, params: GraphParams, members: Iterable[int] = ()):
        self.params = params
        self.bits = np.zeros(params.size, dtype=np.uint8)
        for u in members:
            check_kmer(u, params)
            self.bits[u] = 1
        self._count = int(self.bits.sum())

    @classmethod
    def from_bits(cls, params: GraphParams, bits) -> "KmerSet":
        out = cls.__new__(cls)
        out.params = params
        out.bits = np.ascontiguousarray(bits, dtype=np.uint8).copy()
        if out.bits.shape != (params.size,):
            raise KmerError("membership array has the wrong length")
        out._count = int(out.bits.sum())
        return out

    @classmethod
    def full(cls, params: GraphParams) -> "KmerSet":
        return cls.from_bits(params, np.ones(params.size, dtype=np.uint8))

    def __contains__(self, u: int) -> bool:
        return bool(self.bits[u])

    def add(self, u: int) -> None:
        if not self.bits[u]:
            self.bits[u] = 1
            self._count += 1

    def discard(self, u: int) -> None:
        if self.bits[u]:
            self.bits[u] = 0
            self._count -= 1

    def flip(self, u: int) -> None:
        if self.bits[u]:
            self.discard(u)
        else:
            self.add(u)

    def __len__(self) -> int:
        return self._count

    def __iter__(self) -> Iterator[int]:
        return iter(int(u) for u in np.flatnonzero(self.bits))

    def copy(self) -> "KmerSet":
        return KmerSet.from_bits(self.params, self.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KmerSet)
            and self.params == other.params
            and bool(np.array_equal(self.bits, other.bits))
        )

    def __hash__(self):
        return hash((self.params, self.bits.tobytes()))

    def __repr__(self) -> str:
        shown = ", ".join(decode(u, self.params) for u in list(self)[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"KmerSet(sigma={self.params.sigma}, k={self.params.k}, {{{shown}{more}}})"


def parse_kmer_set(text: str) -> KmerSet:
    params = None
    codes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if params is None:
            fields = line.split()
            if len(fields) != 2:
                raise KmerError(f"line {lineno}: header must be '<sigma> <k>'")
            try:
                params = GraphParams(int(fields[0]), int(fields[1]))
            except ValueError as exc:
                raise KmerError(f"line {lineno}: {exc}") from exc
            continue
        codes.append(encode(line, params))
    if params is None:
        raise KmerError("missing '<sigma> <k>' header")
    return KmerSet(params, codes)


def format_kmer_set(kmers: KmerSet) -> str:
    lines = [f"{kmers.params.sigma} {kmers.params.k}"]
    lines.extend(decode(u, kmers.params) for u in kmers)
    return "\n".join(lines) + "\n"


def read_kmer_set(path) -> KmerSet:
    return parse_kmer_set(Path(path).read_text(encoding="utf-8"))


def write_kmer_set(kmers: KmerSet, path) -> None:
    Path(path).write_text(format_kmer_set(kmers), encoding="utf-8")

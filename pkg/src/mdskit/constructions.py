"""Closed-form minimum decycling sets and random PCR sets."""
from __future__ import annotations

import cmath
import math

import numpy as np

from .dbg_core import GraphParams, KmerSet, digits, enumerate_pcrs, necklace_count, pcr_index
from .decycling import is_decycling
from .errors import ConstructionInvalid, MaxTriesExceeded

ARG_TOLERANCE = 1e-9


def make_rng(seed) -> np.random.Generator:
    """Portable seeded generator (PCG64) used everywhere randomness appears."""
    return np.random.Generator(np.random.PCG64(seed))


def _digit_matrix(params: GraphParams) -> np.ndarray:
    codes = np.arange(params.size, dtype=np.int64)
    out = np.empty((params.size, params.k), dtype=np.int64)
    for j in range(params.k - 1, -1, -1):
        out[:, j] = codes % params.sigma
        codes //= params.sigma
    return out


def _snap(z: complex) -> complex:
    # rounding removes sign noise on zero parts so argument ties are stable
    return complex(round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0)


def _harmonic_pick(members, params: GraphParams) -> int:
    """Choice inside a class whose first-harmonic weight vanishes.

    Uses the lowest harmonic h >= 2 with a nonzero weight for some rotation
    and keeps the rotation whose argument is first reached turning clockwise
    from pi (pi itself included). Ties go to the smaller code.
    """
    k = params.k
    rows = [digits(u, params) for u in members]
    for h in range(2, k + 1):
        roots = [cmath.exp(2j * math.pi * h * (j + 1) / k) for j in range(k)]
        weights = [_snap(sum(d * r for d, r in zip(row, roots))) for row in rows]
        if any(abs(w) > ARG_TOLERANCE for w in weights):
            break
    keys = []
    for u, w in zip(members, weights):
        angle = (math.pi - math.atan2(w.imag, w.real)) % (2 * math.pi)
        keys.append((round(angle, 9), u))
    return min(keys)[1]


def mykkeltveit_set(params: GraphParams) -> KmerSet:
    """Weight-embedding construction.

    Each k-mer x_1..x_k maps to sum_j x_j w^j with w = exp(2 pi i / k). A
    left rotation multiplies the weight by 1/w, so in a class with nonzero
    weight exactly one rotation has its argument in the half-open sector
    [pi, pi + 2 pi / k), and that rotation is chosen. For k >= 3 this is the
    rotation whose imaginary part is <= 0 while the next one's is > 0.
    """
    roots = np.exp(2j * np.pi * np.arange(1, params.k + 1) / params.k)
    weights = _digit_matrix(params) @ roots
    real = np.round(weights.real, 9) + 0.0
    imag = np.round(weights.imag, 9) + 0.0
    offset = np.mod(np.arctan2(imag, real) - np.pi, 2 * np.pi)
    width = 2 * np.pi / params.k
    entering = (offset < width - ARG_TOLERANCE) | (offset > 2 * np.pi - ARG_TOLERANCE)
    vanishing = np.abs(weights) <= ARG_TOLERANCE
    chosen = []
    for pcr in enumerate_pcrs(params):
        members = pcr.members
        if len(members) == 1:
            chosen.append(members[0])
        elif vanishing[list(members)].all():
            chosen.append(_harmonic_pick(members, params))
        else:
            hits = [u for u in members if entering[u]]
            if not hits:
                raise ConstructionInvalid(f"no rotation selected in class {pcr.id}")
            chosen.append(min(hits))
    return _validated(KmerSet(params, chosen), "Mykkeltveit")


def lyndon_factorization(word) -> list:
    """Duval's algorithm: factors as slices of ``word``."""
    n = len(word)
    i = 0
    out = []
    while i < n:
        j, m = i + 1, i
        while j < n and word[m] <= word[j]:
            m = i if word[m] < word[j] else m + 1
            j += 1
        while i <= m:
            out.append(word[i : i + j - m])
            i += j - m
    return out


def _champarnaud_score(word) -> int | None:
    """Length of y in word = y l^e (l the last Lyndon factor, e maximal), if |y| < |l|."""
    factors = lyndon_factorization(word)
    last = factors[-1]
    e = 0
    while e < len(factors) and factors[-1 - e] == last:
        e += 1
    head = len(word) - e * len(last)
    return head if head < len(last) else None


def champarnaud_set(params: GraphParams) -> KmerSet:
    chosen = []
    for pcr in enumerate_pcrs(params):
        best = None
        for u in pcr.members:
            score = _champarnaud_score(tuple(digits(u, params)))
            if score is not None and (best is None or score > best[0]):
                best = (score, u)
        if best is None:
            raise ConstructionInvalid(f"no rotation selected in class {pcr.id}")
        chosen.append(best[1])
    return _validated(KmerSet(params, chosen), "Champarnaud")


def _validated(M: KmerSet, name: str) -> KmerSet:
    if len(M) != necklace_count(M.params):
        raise ConstructionInvalid(f"{name} set has {len(M)} k-mers, expected {necklace_count(M.params)}")
    per_class = np.bincount(pcr_index(M.params)[np.flatnonzero(M.bits)], minlength=len(enumerate_pcrs(M.params)))
    if not (per_class == 1).all():
        raise ConstructionInvalid(f"{name} set is not a PCR set")
    if not is_decycling(M):
        raise ConstructionInvalid(f"{name} set leaves a cycle")
    return M


def random_pcr_set(params: GraphParams, seed=None, rng=None) -> KmerSet:
    rng = make_rng(seed) if rng is None else rng
    chosen = [p.members[int(rng.integers(len(p.members)))] for p in enumerate_pcrs(params)]
    return KmerSet(params, chosen)


REJECTION_SIZE_LIMIT = 64


def random_mds(params: GraphParams, seed=None, method: str = "auto", max_tries: int = 200_000,
               walk_jumps: int = 20) -> KmerSet:
    """Random minimum decycling set.

    ``rejection`` draws PCR sets until one decycles (uniform over MDSs but only
    practical for tiny graphs). ``walk`` starts from the Mykkeltveit set and
    alternates random F-move runs with random I-move jumps between
    components; it is not uniform. ``auto`` picks rejection when
    sigma^k <= 64.
    """
    rng = make_rng(seed)
    if method == "auto":
        method = "rejection" if params.size <= REJECTION_SIZE_LIMIT else "walk"
    if method == "rejection":
        for _ in range(max_tries):
            candidate = random_pcr_set(params, rng=rng)
            if is_decycling(candidate):
                return candidate
        raise MaxTriesExceeded(f"no decycling PCR set found in {max_tries} draws")
    if method != "walk":
        raise ValueError(f"unknown sampling method {method!r}")
    from .mds_space import Mds, random_walk

    start = Mds.from_kmer_set(mykkeltveit_set(params))
    return random_walk(start, rng, jumps=walk_jumps).kmer_set()

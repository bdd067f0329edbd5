"""Moves between minimum decycling sets and the structure they induce.

An MDS is handled as a membership bitmap; because it holds one k-mer per
rotation class the bitmap and the chosen-per-class vector carry the same
information, and bitmap bytes make a cheap hashable key.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import networkx as nx
import numpy as np

from . import kernels
from .dbg_core import (
    GraphParams,
    KmerSet,
    decode,
    enumerate_pcrs,
    homopolymer_symbol,
    pcr_index,
)
from .decycling import constrained_edges, is_decycling, remaining_path_length
from .errors import InstanceTooLarge, InvalidMove, MdsError


class Mds:
    __slots__ = ("params", "bits", "decycling", "_key")

    def __init__(self, params: GraphParams, bits, decycling: bool | None = None):
        self.params = params
        self.bits = np.ascontiguousarray(bits, dtype=np.uint8)
        self.bits.setflags(write=False)
        self._key = self.bits.tobytes()
        self.decycling = decycling

    @classmethod
    def from_kmer_set(cls, M: KmerSet) -> "Mds":
        counts = np.bincount(pcr_index(M.params)[np.flatnonzero(M.bits)], minlength=len(enumerate_pcrs(M.params)))
        if not (counts == 1).all():
            raise MdsError("the k-mer set does not hold exactly one k-mer per rotation class")
        return cls(M.params, M.bits.copy(), is_decycling(M))

    @classmethod
    def from_chosen(cls, params: GraphParams, chosen) -> "Mds":
        return cls.from_kmer_set(KmerSet(params, chosen))

    @classmethod
    def _trusted(cls, params, bits) -> "Mds":
        return cls(params, bits, True)

    @property
    def key(self) -> bytes:
        return self._key

    @property
    def chosen(self) -> tuple[int, ...]:
        """Chosen k-mer of every rotation class, in canonical class order."""
        members = np.flatnonzero(self.bits)
        order = np.argsort(pcr_index(self.params)[members], kind="stable")
        return tuple(int(u) for u in members[order])

    def kmer_set(self) -> KmerSet:
        return KmerSet.from_bits(self.params, self.bits)

    def is_decycling(self) -> bool:
        if self.decycling is None:
            self.decycling = is_decycling(self.kmer_set())
        return self.decycling

    def rpl(self) -> int:
        return remaining_path_length(self.kmer_set())

    def __eq__(self, other):
        return isinstance(other, Mds) and self.params == other.params and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self.chosen < other.chosen

    def label(self) -> str:
        """Hex string of the chosen vector (one byte per code when they fit)."""
        width = max(2, (self.params.size - 1).bit_length() + 3 >> 2)
        return "".join(f"{u:0{width}x}" for u in self.chosen)

    def __repr__(self):
        return "Mds(" + ",".join(decode(u, self.params) for u in self.chosen) + ")"


class Move(NamedTuple):
    kind: str  # "F", "RF" or "I"
    f: int
    mask: int = 0

    def render(self, params: GraphParams) -> str:
        f = decode(self.f, params, params.k - 1)
        return f"{self.kind}({f})" if self.kind != "I" else f"I({f},{self.mask})"


def _grids(M: Mds):
    s, t = M.params.sigma, M.params.prefix_count
    return M.bits.reshape(s, t), M.bits.reshape(t, s)


def valid_f_moves(M: Mds) -> list[int]:
    p = M.params
    return kernels.valid_f_moves(M.bits, p.sigma, p.k)


def valid_rf_moves(M: Mds) -> list[int]:
    return [int(f) for f in np.flatnonzero(_grids(M)[1].all(axis=1))]


def apply_f_move(M: Mds, f: int) -> Mds:
    p = M.params
    left = np.arange(p.sigma) * p.prefix_count + f
    right = f * p.sigma + np.arange(p.sigma)
    if not M.bits[left].all():
        raise InvalidMove(f"F-move {decode(f, p, p.k - 1)} needs every left companion in the set")
    bits = M.bits.copy()
    bits[left] = 0
    bits[right] = 1
    return Mds(p, bits, M.decycling)


def apply_rf_move(M: Mds, f: int) -> Mds:
    p = M.params
    left = np.arange(p.sigma) * p.prefix_count + f
    right = f * p.sigma + np.arange(p.sigma)
    if not M.bits[right].all():
        raise InvalidMove(f"RF-move {decode(f, p, p.k - 1)} needs every right companion in the set")
    bits = M.bits.copy()
    bits[right] = 0
    bits[left] = 1
    return Mds(p, bits, M.decycling)


def i_masks(f: int, params: GraphParams) -> list[int]:
    """Admissible I-move masks for f (homopolymers keep their own bit cleared)."""
    full = (1 << params.sigma) - 1
    c = homopolymer_symbol(f, params)
    if c is None:
        return list(range(1, full))
    own = 1 << c
    return [m for m in range(1, full) if not m & own and m != full ^ own]


def _mask_of(M: Mds, f: int) -> int | None:
    """Current left-companion mask at f, or None when some a has neither af nor fa."""
    p = M.params
    mask = 0
    for a in range(p.sigma):
        left = M.bits[a * p.prefix_count + f]
        if left:
            mask |= 1 << a
        elif not M.bits[f * p.sigma + a]:
            return None
    c = homopolymer_symbol(f, p)
    if c is not None:
        mask &= ~(1 << c)
    return mask


def valid_i_moves(M: Mds) -> list[Move]:
    p = M.params
    left, right = _grids(M)
    covered = (left.astype(bool) | right.T.astype(bool)).all(axis=0)
    masks = (left.astype(np.int64) << np.arange(p.sigma)[:, None]).sum(axis=0)
    out = []
    for f in np.flatnonzero(covered):
        f = int(f)
        mask = int(masks[f])
        c = homopolymer_symbol(f, p)
        if c is not None:
            mask &= ~(1 << c)
        if mask in i_masks(f, p):
            out.append(Move("I", f, mask))
    return out


def apply_i_move(M: Mds, mv: Move) -> Mds:
    p = M.params
    if mv.kind != "I" or mv.mask not in i_masks(mv.f, p) or _mask_of(M, mv.f) != mv.mask:
        raise InvalidMove(f"{mv.render(p)} is not valid in this set")
    bits = M.bits.copy()
    for a in range(p.sigma):
        if mv.mask >> a & 1:
            bits[a * p.prefix_count + mv.f] = 0
            bits[mv.f * p.sigma + a] = 1
    return Mds(p, bits, M.decycling)


def apply_move(M: Mds, mv: Move) -> Mds:
    if mv.kind == "F":
        return apply_f_move(M, mv.f)
    if mv.kind == "RF":
        return apply_rf_move(M, mv.f)
    return apply_i_move(M, mv)


def component_i_moves(M: Mds) -> list[Move]:
    """I-moves valid in at least one MDS of M's component, found without traversal.

    Im(f, m) is ruled out exactly when a constrained edge af -> fb has
    m_a = 1 and m_b = 0.
    """
    p = M.params
    t, s = p.prefix_count, p.sigma
    blocked = [0] * t  # bit (a * s + b) set when edge af -> fb is constrained
    for u, v in constrained_edges(M.kmer_set()):
        f = u % t
        blocked[f] |= 1 << ((u // t) * s + v % s)
    out = []
    for f in range(t):
        pairs = [(a, b) for a in range(s) for b in range(s) if blocked[f] >> (a * s + b) & 1]
        for mask in i_masks(f, p):
            if not any(mask >> a & 1 and not mask >> b & 1 for a, b in pairs):
                out.append(Move("I", f, mask))
    return out


def fingerprint_hash(moves) -> str:
    text = ";".join(f"{mv.f}:{mv.mask}" for mv in sorted(moves))
    return hashlib.blake2b(text.encode(), digest_size=8).hexdigest()


# ---------------------------------------------------------------- components


@dataclass
class ComponentSummary:
    fingerprint: tuple
    mds_count: int
    layer_sizes: list[int]
    min_rpl: int | None
    max_rpl: int | None
    representative: Mds
    members: list[Mds] | None = field(default=None, repr=False)

    @property
    def fingerprint_hash(self) -> str:
        return fingerprint_hash(self.fingerprint)


def _layers(M: Mds) -> Iterator[tuple[int, set[bytes]]]:
    """Successive F-move layers R_0 = {M}, R_{t+1} = {fX : X in R_t}.

    Stops once a full round of sigma^(k-1) layers repeats the sizes of the
    previous round (R_t is contained in R_{t+n}, so equal sizes mean equal
    sets). The last round yielded is the whole component.
    """
    p = M.params
    n = p.prefix_count
    s, t = p.sigma, p.prefix_count
    sizes: list[int] = []
    layer = {M.key}
    step = 0
    stable = 0
    while True:
        yield step, layer
        sizes.append(len(layer))
        if step >= n and sizes[step] == sizes[step - n]:
            stable += 1
            if stable >= n:
                return
        else:
            stable = 0
        nxt = set()
        for key in layer:
            bits = np.frombuffer(key, dtype=np.uint8)
            for f in kernels.valid_f_moves(bits, s, p.k):
                moved = bits.copy()
                moved[np.arange(s) * t + f] = 0
                moved[f * s + np.arange(s)] = 1
                nxt.add(moved.tobytes())
        layer = nxt
        step += 1


def enumerate_component(M: Mds, mode: str = "count", with_rpl: bool = False,
                        with_fingerprint: bool = True) -> ComponentSummary:
    """Layered BFS over F-moves.

    ``count`` keeps two layers in memory; ``collect`` also returns every MDS
    of the component in ``members``. Layer indices are relative to the
    lexicographically smallest MDS of the component.
    """
    if mode not in ("count", "collect"):
        raise ValueError(f"unknown mode {mode!r}")
    p = M.params
    n = p.prefix_count
    history: list[tuple[int, set[bytes]]] = []
    for step, layer in _layers(M):
        history.append((step, layer))
        if len(history) > n:
            history.pop(0)
    final = history[-n:] if len(history) >= n else history
    layer_sizes = [len(layer) for _, layer in final]
    best = None
    best_pos = 0
    members = [] if mode == "collect" else None
    lo = hi = None
    for pos, (_, layer) in enumerate(final):
        for key in layer:
            mds = Mds._trusted(p, np.frombuffer(key, dtype=np.uint8))
            if best is None or mds.chosen < best.chosen:
                best, best_pos = mds, pos
            if members is not None:
                members.append(mds)
            if with_rpl:
                r = mds.rpl()
                lo = r if lo is None else min(lo, r)
                hi = r if hi is None else max(hi, r)
    layer_sizes = layer_sizes[best_pos:] + layer_sizes[:best_pos]
    if len(layer_sizes) < n:
        layer_sizes += [0] * (n - len(layer_sizes))
    fp = tuple(component_i_moves(best)) if with_fingerprint else ()
    return ComponentSummary(fp, sum(len(layer) for _, layer in final), layer_sizes, lo, hi, best, members)


def stream_component(M: Mds) -> Iterator[Mds]:
    """Yield every MDS of M's component once, holding two layers at a time.

    The layered walk is run once to learn where the component closes, then
    replayed and the closing round is streamed.
    """
    p = M.params
    total = 0
    for step, _ in _layers(M):
        total = step
    first = total - p.prefix_count + 1
    for step, layer in _layers(M):
        if step >= first:
            for key in layer:
                yield Mds._trusted(p, np.frombuffer(key, dtype=np.uint8))


def component_members(M: Mds) -> list[Mds]:
    return enumerate_component(M, mode="collect", with_fingerprint=False).members


def layer_partition(M: Mds) -> list[set[bytes]]:
    """The sigma^(k-1) layers of M's component, indexed from M's own layer."""
    p = M.params
    n = p.prefix_count
    history = []
    for step, layer in _layers(M):
        history.append(layer)
        if len(history) > n:
            history.pop(0)
    # the last yielded step is a multiple-of-n offset away from step 0 modulo n
    last_step = step
    shift = (last_step - n + 1) % n
    ordered = [None] * n
    for i, layer in enumerate(history):
        ordered[(shift + i) % n] = layer
    return ordered


def _terminal(M: Mds, excluded: set[int], limit: int) -> Mds:
    """Apply valid F-moves outside ``excluded`` until none remain."""
    bits = M.bits.copy()
    p = M.params
    s, t = p.sigma, p.prefix_count
    for _ in range(limit):
        moves = [f for f in kernels.valid_f_moves(bits, s, p.k) if f not in excluded]
        if not moves:
            return Mds(p, bits, M.decycling)
        for f in moves:
            # commuting moves: each stays valid after applying the others
            bits[np.arange(s) * t + f] = 0
            bits[f * s + np.arange(s)] = 1
    raise MdsError("F-move descent did not terminate")


def i_move_witness(M: Mds, mv: Move, search_limit: int = 1_000_000) -> Mds | None:
    """An MDS in M's component where ``mv`` is valid, or None if there is none.

    First descends with every F-move except f until f is the only one left,
    applies f, then descends again avoiding the F-moves that would pull the
    right companions fa (m_a = 0) back out. Falls back to a plain search of
    the component when the descent does not land on a valid position.
    """
    p = M.params
    s = p.sigma
    limit = p.size * p.prefix_count + 16
    try:
        X = _terminal(M, {mv.f}, limit)
        if mv.f in valid_f_moves(X):
            X = apply_f_move(X, mv.f)
            keep = {(mv.f * s + a) % p.prefix_count for a in range(s) if not mv.mask >> a & 1}
            X = _terminal(X, keep, limit)
            if _mask_of(X, mv.f) == mv.mask:
                return X
    except MdsError:
        pass
    seen = 0
    for X in stream_component(M):
        if _mask_of(X, mv.f) == mv.mask:
            return X
        seen += 1
        if seen > search_limit:
            break
    return None


def _shuffled(items, rng):
    items = list(items)
    if rng is not None:
        rng.shuffle(items)
    return items


def traverse_components(start: Mds, limit: int | None = None, seed=None, paranoid: bool = False,
                        mode: str = "count", with_rpl: bool = False, on_component=None):
    """Breadth-first walk of the component graph.

    Components are deduplicated by their I-move fingerprint. With
    ``paranoid`` every revisit also compares canonical representatives and
    records any disagreement in the ``collisions`` list of the returned
    report.
    """
    from .constructions import make_rng

    rng = make_rng(seed) if seed is not None else None
    first = enumerate_component(start, mode=mode, with_rpl=with_rpl)
    seen = {first.fingerprint: first.representative}
    queue = deque([first])
    out = []
    collisions = []
    while queue:
        comp = queue.popleft()
        out.append(comp)
        if on_component is not None:
            on_component(comp)
        if limit is not None and len(out) >= limit:
            break
        for mv in _shuffled(comp.fingerprint, rng):
            witness = i_move_witness(comp.representative, mv)
            if witness is None:
                raise MdsError(f"no witness for {mv.render(start.params)} in its component")
            nxt = apply_i_move(witness, mv)
            fp = tuple(component_i_moves(nxt))
            if fp in seen:
                if paranoid:
                    rep = enumerate_component(nxt, with_fingerprint=False).representative
                    if rep != seen[fp]:
                        collisions.append((fp, seen[fp], rep))
                continue
            summary = enumerate_component(nxt, mode=mode, with_rpl=with_rpl)
            seen[fp] = summary.representative
            queue.append(summary)
            if limit is not None and len(out) + len(queue) >= limit:
                break
    return TraversalReport(out, collisions)


@dataclass
class TraversalReport:
    components: list[ComponentSummary]
    collisions: list

    @property
    def mds_count(self) -> int:
        return sum(c.mds_count for c in self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


def random_walk(M: Mds, rng, jumps: int = 20, fmoves: int | None = None) -> Mds:
    fmoves = 2 * M.params.k if fmoves is None else fmoves
    for _ in range(jumps):
        for _ in range(fmoves):
            moves = valid_f_moves(M)
            M = apply_f_move(M, moves[int(rng.integers(len(moves)))])
        candidates = component_i_moves(M)
        if not candidates:
            continue
        mv = candidates[int(rng.integers(len(candidates)))]
        witness = i_move_witness(M, mv)
        if witness is not None:
            M = apply_i_move(witness, mv)
    return M


# ---------------------------------------------------------- exhaustive checks

BRUTE_FORCE_SIZE = 64
BRUTE_FORCE_FORCED_SIZE = 128


def enumerate_all_mds_bruteforce(params: GraphParams, force: bool = False) -> list[Mds]:
    """Every decycling PCR set, by pruned backtracking."""
    bound = BRUTE_FORCE_FORCED_SIZE if force else BRUTE_FORCE_SIZE
    if params.size > bound:
        hint = "" if force or params.size > BRUTE_FORCE_FORCED_SIZE else " (pass force=True)"
        raise InstanceTooLarge(f"brute force limited to sigma^k <= {bound}{hint}")
    pcrs = sorted(enumerate_pcrs(params), key=lambda c: (len(c.members), c.id))
    classes = [sorted(c.members) for c in pcrs]
    out = []
    for row in kernels.enumerate_mds(params.sigma, params.k, classes):
        bits = np.zeros(params.size, dtype=np.uint8)
        bits[list(row)] = 1
        out.append(Mds._trusted(params, bits))
    return out


def group_components(all_mds: list[Mds]) -> list[list[Mds]]:
    """Split a complete MDS list into F-move components (union-find)."""
    index = {m.key: i for i, m in enumerate(all_mds)}
    parent = list(range(len(all_mds)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, m in enumerate(all_mds):
        for f in valid_f_moves(m):
            j = index[apply_f_move(m, f).key]
            ri, rj = root(i), root(j)
            if ri != rj:
                parent[ri] = rj
    groups: dict[int, list[Mds]] = {}
    for i, m in enumerate(all_mds):
        groups.setdefault(root(i), []).append(m)
    return sorted(groups.values(), key=lambda g: min(x.chosen for x in g))


@dataclass
class ConjectureReport:
    name: str
    holds: bool
    components: int
    mds_count: int
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "holds" if self.holds else "FAILS"
        extra = " ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{self.name}: {verdict} components={self.components} mds={self.mds_count} {extra}".rstrip()


def _start(params: GraphParams) -> Mds:
    from .constructions import mykkeltveit_set

    return Mds.from_kmer_set(mykkeltveit_set(params))


def verify_conjecture_connectivity(params: GraphParams, force: bool = False) -> ConjectureReport:
    """Everything reachable from the Mykkeltveit set versus the exhaustive list."""
    truth = {m.key for m in enumerate_all_mds_bruteforce(params, force=force)}
    report = traverse_components(_start(params), mode="collect")
    reached = {m.key for comp in report for m in comp.members}
    missing = len(truth - reached)
    extra = len(reached - truth)
    return ConjectureReport(
        "connectivity", missing == 0 and extra == 0, len(report), len(reached),
        {"missing": missing, "extra": extra, "exhaustive": len(truth)},
    )


def verify_conjecture_imove_signature(params: GraphParams, force: bool = False) -> ConjectureReport:
    """Per-component union of valid I-moves must differ between components."""
    groups = group_components(enumerate_all_mds_bruteforce(params, force=force))
    prints = []
    for group in groups:
        moves = set()
        for m in group:
            moves.update(valid_i_moves(m))
        prints.append(tuple(sorted(moves)))
    distinct = len(set(prints))
    return ConjectureReport(
        "imove-fingerprint", distinct == len(groups), len(groups), sum(len(g) for g in groups),
        {"distinct": distinct},
    )


def all_pcr_sets(params: GraphParams, bound: int = 4096) -> Iterator[KmerSet]:
    from itertools import product

    pcrs = enumerate_pcrs(params)
    total = 1
    for c in pcrs:
        total *= len(c.members)
    if total > bound:
        raise InstanceTooLarge(f"{total} PCR sets exceed the bound {bound}")
    for combo in product(*(c.members for c in pcrs)):
        yield KmerSet(params, combo)


@dataclass
class NonDecyclingGraphReport:
    nodes: int
    edges: int
    components: int
    all_dags: bool
    longest_path: int
    crossing_edges: int

    @property
    def holds(self) -> bool:
        return self.all_dags and self.crossing_edges == 0


def nondecycling_fmove_graph_check(params: GraphParams) -> NonDecyclingGraphReport:
    """F-move graph over non-decycling PCR sets: acyclic per weak component."""
    if params.size > 16:
        raise InstanceTooLarge("the non-decycling F-move graph check is limited to sigma^k <= 16")
    sets = list(all_pcr_sets(params))
    status = {}
    for S in sets:
        status[S.bits.tobytes()] = is_decycling(S)
    g = nx.DiGraph()
    crossing = 0
    s, t = params.sigma, params.prefix_count
    for S in sets:
        key = S.bits.tobytes()
        if status[key]:
            continue
        g.add_node(key)
        for f in kernels.valid_f_moves(S.bits, s, params.k):
            bits = S.bits.copy()
            bits[np.arange(s) * t + f] = 0
            bits[f * s + np.arange(s)] = 1
            target = bits.tobytes()
            if status[target]:
                crossing += 1
            else:
                g.add_edge(key, target)
    # MDS side: an F-move out of an MDS must stay among MDSs
    for S in sets:
        key = S.bits.tobytes()
        if not status[key]:
            continue
        for f in kernels.valid_f_moves(S.bits, s, params.k):
            bits = S.bits.copy()
            bits[np.arange(s) * t + f] = 0
            bits[f * s + np.arange(s)] = 1
            if not status[bits.tobytes()]:
                crossing += 1
    comps = list(nx.weakly_connected_components(g))
    all_dags = True
    longest = 0
    for comp in comps:
        sub = g.subgraph(comp)
        if not nx.is_directed_acyclic_graph(sub):
            all_dags = False
            continue
        longest = max(longest, nx.dag_longest_path_length(sub))
    return NonDecyclingGraphReport(g.number_of_nodes(), g.number_of_edges(), len(comps), all_dags, longest, crossing)


def mds_graph_dot(params: GraphParams, bound: int = 32) -> str:
    """DOT rendering of the whole F-move graph on MDSs, one cluster per component."""
    if params.size > bound:
        raise InstanceTooLarge(f"DOT output limited to sigma^k <= {bound}")
    groups = group_components(enumerate_all_mds_bruteforce(params))
    lines = ["digraph mds {", "  node [shape=box, fontname=monospace];"]
    for i, group in enumerate(groups):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="component {i} ({len(group)} MDSs)";')
        for m in sorted(group, key=lambda x: x.chosen):
            lines.append(f'    "{m.label()}";')
        lines.append("  }")
    for group in groups:
        for m in sorted(group, key=lambda x: x.chosen):
            for f in valid_f_moves(m):
                target = apply_f_move(m, f)
                lines.append(f'  "{m.label()}" -> "{target.label()}" [label="{decode(f, params, params.k - 1)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Cycle checks and path lengths on D_k with a k-mer set removed."""
from __future__ import annotations

from typing import NamedTuple

import networkx as nx
import numpy as np

from . import kernels
from .dbg_core import GraphParams, KmerSet, decode, predecessors
from .errors import InstanceTooLarge, NotDecycling

SMALL_INSTANCE_BOUND = 256


class Cycle(NamedTuple):
    nodes: tuple[int, ...]

    def render(self, params: GraphParams) -> str:
        return " -> ".join(decode(u, params) for u in self.nodes + self.nodes[:1])


def _canonical(nodes) -> Cycle:
    nodes = [int(u) for u in nodes]
    i = nodes.index(min(nodes))
    return Cycle(tuple(nodes[i:] + nodes[:i]))


def find_cycle_avoiding(M: KmerSet) -> Cycle | None:
    p = M.params
    found = kernels.find_cycle(M.bits, p.sigma, p.k)
    return None if found is None else _canonical(found)


def is_decycling(M: KmerSet) -> bool:
    return find_cycle_avoiding(M) is None


def _lengths(M: KmerSet) -> np.ndarray:
    p = M.params
    lengths = np.zeros(p.size, dtype=np.int32)
    done = kernels.path_lengths(M.bits, p.sigma, p.k, lengths)
    if done != p.size - len(M):
        raise NotDecycling(cycle=find_cycle_avoiding(M))
    return lengths


def remaining_path_length(M: KmerSet) -> int:
    """Number of vertices on the longest path of D_k that avoids M."""
    lengths = _lengths(M)
    return int(lengths.max()) if lengths.size else 0


def longest_remaining_path(M: KmerSet) -> list[int]:
    """One longest M-avoiding path, as a list of k-mer codes in walk order."""
    lengths = _lengths(M)
    if not lengths.size or lengths.max() == 0:
        return []
    v = int(lengths.argmax())
    path = [v]
    while lengths[v] > 1:
        v = next(u for u in predecessors(v, M.params) if lengths[u] == lengths[v] - 1 and not M.bits[u])
        path.append(v)
    path.reverse()
    return path


def _check_small(params: GraphParams, bound: int) -> None:
    if params.size > bound:
        raise InstanceTooLarge(f"sigma^k = {params.size} exceeds the cycle-enumeration bound {bound}")


def debruijn_digraph(params: GraphParams) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(params.size))
    t = params.prefix_count
    g.add_edges_from((u, (u % t) * params.sigma + a) for u in range(params.size) for a in range(params.sigma))
    return g


def enumerate_cycles(params: GraphParams, bound: int = SMALL_INSTANCE_BOUND) -> list[Cycle]:
    """Every simple cycle of D_k once, min node first, sorted by (length, nodes)."""
    _check_small(params, bound)
    cycles = [_canonical(c) for c in nx.simple_cycles(debruijn_digraph(params))]
    return sorted(cycles, key=lambda c: (len(c.nodes), c.nodes))


def hitting_number(M: KmerSet, C: Cycle) -> int:
    return int(sum(1 for u in C.nodes if M.bits[u]))


def signature(M: KmerSet, cycles: list[Cycle] | None = None) -> tuple[int, ...]:
    if cycles is None:
        cycles = enumerate_cycles(M.params)
    bits = M.bits
    return tuple(int(bits[list(c.nodes)].sum()) for c in cycles)


def constrained_edges(M: KmerSet) -> set[tuple[int, int]]:
    """Edges lying on some cycle that meets M exactly once.

    For each m in M the graph keeps only m from the set; an edge u->v is on a
    cycle through m iff u is reachable from m and m is reachable from v.
    """
    p = M.params
    if not is_decycling(M):
        raise NotDecycling(cycle=find_cycle_avoiding(M))
    t = p.prefix_count
    bits = M.bits.copy()
    fwd = np.zeros(p.size, dtype=np.uint8)
    bwd = np.zeros(p.size, dtype=np.uint8)
    out: set[tuple[int, int]] = set()
    for m in np.flatnonzero(M.bits):
        m = int(m)
        bits[m] = 0
        kernels.reachable(bits, p.sigma, p.k, m, True, fwd)
        kernels.reachable(bits, p.sigma, p.k, m, False, bwd)
        bits[m] = 1
        sources = np.flatnonzero(fwd)
        for a in range(p.sigma):
            targets = (sources % t) * p.sigma + a
            keep = bwd[targets].astype(bool)
            out.update(zip(sources[keep].tolist(), targets[keep].tolist()))
    return out

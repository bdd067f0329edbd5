"""Simulated annealing over components, and per-component path-length ranges."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .constructions import champarnaud_set, make_rng, mykkeltveit_set, random_mds
from .dbg_core import GraphParams
from .errors import InstanceTooLarge, InvalidMove
from .mds_space import (
    Mds,
    Move,
    apply_f_move,
    apply_i_move,
    apply_move,
    component_i_moves,
    enumerate_component,
    fingerprint_hash,
    i_move_witness,
    valid_f_moves,
    valid_i_moves,
    valid_rf_moves,
)


@dataclass
class AnnealConfig:
    objective: str = "min"
    fmoves_per_component: int | None = None  # None means 2k
    iterations: int = 200
    initial_temperature: float | None = None  # None means k
    cooling_factor: float = 0.995
    seed: int = 0
    start: str = "mykkeltveit"

    def __post_init__(self):
        if self.objective not in ("min", "max"):
            raise ValueError("objective must be 'min' or 'max'")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.fmoves_per_component is not None and self.fmoves_per_component < 1:
            raise ValueError("fmoves_per_component must be >= 1")
        if self.start not in ("mykkeltveit", "champarnaud", "random"):
            raise ValueError(f"unknown start {self.start!r}")

    def resolved(self, params: GraphParams) -> "AnnealConfig":
        out = AnnealConfig(**asdict(self))
        if out.fmoves_per_component is None:
            out.fmoves_per_component = 2 * params.k
        if out.initial_temperature is None:
            out.initial_temperature = float(params.k)
        return out


@dataclass
class AnnealResult:
    best: Mds
    best_rpl: int
    trace: list = field(default_factory=list)  # (iteration, fingerprint hash, local best, temperature)
    stopped_early: bool = False  # no I-move available from the current component


def start_mds(params: GraphParams, start: str, seed) -> Mds:
    if start == "mykkeltveit":
        return Mds.from_kmer_set(mykkeltveit_set(params))
    if start == "champarnaud":
        return Mds.from_kmer_set(champarnaud_set(params))
    return Mds.from_kmer_set(random_mds(params, seed=seed))


def _local_walk(entry: Mds, steps: int, rng, better) -> tuple[int, Mds]:
    best_val, best = entry.rpl(), entry
    M = entry
    for _ in range(steps):
        moves = valid_f_moves(M)
        M = apply_f_move(M, moves[int(rng.integers(len(moves)))])
        val = M.rpl()
        if better(val, best_val):
            best_val, best = val, M
    return best_val, best


def anneal(params: GraphParams, cfg: AnnealConfig) -> AnnealResult:
    cfg = cfg.resolved(params)
    rng = make_rng(cfg.seed)
    sign = 1 if cfg.objective == "min" else -1
    better = (lambda a, b: a < b) if sign == 1 else (lambda a, b: a > b)

    current = start_mds(params, cfg.start, cfg.seed)
    local_val, local_best = _local_walk(current, cfg.fmoves_per_component, rng, better)
    best_val, best = local_val, local_best
    temperature = cfg.initial_temperature
    trace = []
    stopped = False
    for it in range(cfg.iterations):
        moves = component_i_moves(current)
        trace.append((it, fingerprint_hash(moves), local_val, temperature))
        if not moves:
            stopped = True
            break
        mv = moves[int(rng.integers(len(moves)))]
        witness = i_move_witness(current, mv)
        if witness is not None:
            entry = apply_i_move(witness, mv)
            cand_val, cand_best = _local_walk(entry, cfg.fmoves_per_component, rng, better)
            delta = sign * (cand_val - local_val)
            if delta < 0 or rng.random() < math.exp(-delta / temperature):
                current, local_val, local_best = entry, cand_val, cand_best
                if better(local_val, best_val):
                    best_val, best = local_val, local_best
        temperature *= cfg.cooling_factor
    return AnnealResult(best, best_val, trace, stopped)


def anneal_many(params: GraphParams, cfg: AnnealConfig, seeds, threads: int = 1) -> list[AnnealResult]:
    """Independent chains, one per seed; ``threads`` > 1 runs them in processes."""
    configs = [AnnealConfig(**{**asdict(cfg), "seed": s}) for s in seeds]
    if threads <= 1 or len(configs) <= 1:
        return [anneal(params, c) for c in configs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(anneal, [params] * len(configs), configs))


EXHAUSTIVE_RANGE_SIZE = 2**12


def component_rpl_range(M: Mds, budget="exhaustive", samples: int = 1000, seed=0) -> tuple[int, int]:
    """(min, max) remaining path length over M's component.

    ``exhaustive`` enumerates the component; ``sample`` random-walks
    ``samples`` F-moves from M.
    """
    if budget == "exhaustive":
        if M.params.size > EXHAUSTIVE_RANGE_SIZE:
            raise InstanceTooLarge(f"exhaustive component range is limited to sigma^k <= {EXHAUSTIVE_RANGE_SIZE}")
        summary = enumerate_component(M, with_rpl=True, with_fingerprint=False)
        return summary.min_rpl, summary.max_rpl
    if budget != "sample":
        raise ValueError(f"unknown budget {budget!r}")
    rng = make_rng(seed)
    lo = hi = M.rpl()
    for _ in range(samples):
        moves = valid_f_moves(M)
        M = apply_f_move(M, moves[int(rng.integers(len(moves)))])
        r = M.rpl()
        lo, hi = min(lo, r), max(hi, r)
    return lo, hi


def path_length_move_delta_check(M: Mds, mv: Move) -> tuple[int, int]:
    """Remaining path length before and after applying ``mv``."""
    if mv.kind == "F" and mv.f not in valid_f_moves(M):
        raise InvalidMove("F-move not valid")
    if mv.kind == "RF" and mv.f not in valid_rf_moves(M):
        raise InvalidMove("RF-move not valid")
    if mv.kind == "I" and mv not in valid_i_moves(M):
        raise InvalidMove("I-move not valid")
    return M.rpl(), apply_move(M, mv).rpl()

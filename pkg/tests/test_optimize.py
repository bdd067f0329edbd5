import pytest

from mdskit.constructions import mykkeltveit_set
from mdskit.dbg_core import GraphParams
from mdskit.mds_space import Mds, Move, apply_rf_move, enumerate_component, valid_f_moves, valid_rf_moves
from mdskit.optimize import (
    AnnealConfig,
    anneal,
    anneal_many,
    component_rpl_range,
    path_length_move_delta_check,
)
from mdskit.errors import InvalidMove

EXACT = {4: (5, 7), 5: (11, 12), 6: (13, 26)}


def test_config_validation():
    for bad in ({"objective": "median"}, {"iterations": 0}, {"cooling_factor": 1.0},
                {"cooling_factor": 0.0}, {"fmoves_per_component": 0}, {"start": "nowhere"}):
        with pytest.raises(ValueError):
            AnnealConfig(**bad)
    cfg = AnnealConfig().resolved(GraphParams(2, 6))
    assert cfg.fmoves_per_component == 12 and cfg.initial_temperature == 6.0


def test_anneal_deterministic():
    p = GraphParams(2, 6)
    a = anneal(p, AnnealConfig(seed=5, iterations=40))
    b = anneal(p, AnnealConfig(seed=5, iterations=40))
    assert a.best == b.best and a.best_rpl == b.best_rpl and a.trace == b.trace
    assert a.best.rpl() == a.best_rpl
    assert len(a.trace) == 40
    temps = [row[3] for row in a.trace]
    assert temps[0] == 6.0 and all(x > y for x, y in zip(temps, temps[1:]))


def test_anneal_stops_without_i_moves():
    r = anneal(GraphParams(2, 5), AnnealConfig(iterations=50))
    assert r.stopped_early and len(r.trace) == 1
    assert 11 <= r.best_rpl <= 12


@pytest.mark.parametrize("k", [4, 5, 6])
@pytest.mark.parametrize("objective", ["min", "max"])
def test_anneal_reaches_exhaustive_optimum(k, objective):
    lo, hi = EXACT[k]
    results = anneal_many(GraphParams(2, k), AnnealConfig(objective), range(10))
    values = [r.best_rpl for r in results]
    assert all(lo <= v <= hi for v in values)
    assert (min(values) if objective == "min" else max(values)) == (lo if objective == "min" else hi)


def test_anneal_many_parallel_matches_serial():
    p = GraphParams(2, 4)
    cfg = AnnealConfig(iterations=20)
    serial = [r.best_rpl for r in anneal_many(p, cfg, [1, 2], threads=1)]
    parallel = [r.best_rpl for r in anneal_many(p, cfg, [1, 2], threads=2)]
    assert serial == parallel


def test_component_ranges_k4(components_k4):
    covered = set()
    for g in components_k4:
        lo, hi = component_rpl_range(g[0])
        assert hi - lo <= 4
        assert (lo, hi) == (min(m.rpl() for m in g), max(m.rpl() for m in g))
        covered.update(range(lo, hi + 1))
        if len(g) == 1:
            assert lo == hi
    assert covered == {5, 6, 7}


def test_component_range_sampled_within_exhaustive():
    M = Mds.from_kmer_set(mykkeltveit_set(GraphParams(2, 6)))
    lo, hi = component_rpl_range(M)
    slo, shi = component_rpl_range(M, "sample", samples=300, seed=1)
    assert lo <= slo <= shi <= hi
    with pytest.raises(ValueError):
        component_rpl_range(M, "guess")


def test_delta_check(all_mds_k4):
    for M in all_mds_k4:
        for f in valid_f_moves(M):
            before, after = path_length_move_delta_check(M, Move("F", f))
            assert abs(after - before) <= 1
        for f in valid_rf_moves(M):
            N = apply_rf_move(M, f)
            assert N.rpl() == path_length_move_delta_check(M, Move("RF", f))[1]
            b2, a2 = path_length_move_delta_check(N, Move("F", f))
            assert a2 == M.rpl()
    M = all_mds_k4[0]
    bad = next(f for f in range(8) if f not in valid_f_moves(M))
    with pytest.raises(InvalidMove):
        path_length_move_delta_check(M, Move("F", bad))


def test_single_component_range_matches_summary():
    M = Mds.from_kmer_set(mykkeltveit_set(GraphParams(2, 5)))
    s = enumerate_component(M, with_rpl=True)
    assert component_rpl_range(M) == (s.min_rpl, s.max_rpl) == (11, 12)

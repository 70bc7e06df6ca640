"""Tests for single-symbol recovery and multi-erasure peeling repair."""

import random

import pytest

from fibered_lrc.construction import build_evaluation_set, recovery_indices, surface_params
from fibered_lrc.lrc_code import encode, generator_matrix
from fibered_lrc.recovery import (
    ErasurePattern,
    IncompleteRecoverySet,
    recover_horizontal,
    recover_vertical,
    repair,
)


@pytest.fixture(scope="module")
def code49(f49):
    es = build_evaluation_set(surface_params(f49, 3), [0])
    return es, generator_matrix(es)


@pytest.fixture(scope="module")
def code49_full(f49):
    es = build_evaluation_set(surface_params(f49, 3), [0, 1])
    return es, generator_matrix(es)


def _erase(codeword, es, triples):
    cw = list(codeword)
    for trip in triples:
        cw[es.point_index(*trip)] = None
    return cw


def _oracle_unrecoverable(es, triples):
    # value-free peeling on the fiber graph; confluent, so any order works
    erased = set(triples)
    changed = True
    while changed:
        changed = False
        for trip in sorted(erased):
            hor, ver = recovery_indices(es, *trip)
            if not (set(ver) & erased) or not (set(hor) & erased):
                erased.remove(trip)
                changed = True
                break
    return erased


def test_zero_codeword(code49):
    es, gm = code49
    cw = list(encode(gm, [0] * 5))
    for pt in es.points:
        trip = (pt.l, pt.i, pt.j)
        hole = _erase(cw, es, [trip])
        assert recover_vertical(es, hole, trip) == 0
        assert recover_horizontal(es, hole, trip) == 0


def test_single_hole_round_trip(code49, code49_full):
    for (es, gm), trials, seed in [(code49, 30, 11), (code49_full, 10, 12)]:
        rng = random.Random(seed)
        for _ in range(trials):
            msg = [rng.randrange(es.field.order) for _ in range(5)]
            cw = encode(gm, msg)
            for idx, pt in enumerate(es.points):
                trip = (pt.l, pt.i, pt.j)
                hole = _erase(cw, es, [trip])
                assert recover_vertical(es, hole, trip) == cw[idx]
                assert recover_horizontal(es, hole, trip) == cw[idx]


def test_availability_disjoint_paths(code49):
    es, gm = code49
    rng = random.Random(21)
    cw = encode(gm, [rng.randrange(49) for _ in range(5)])
    target = (0, 1, 2)
    idx = es.point_index(*target)
    hor, ver = recovery_indices(es, *target)
    # second erasure in the vertical set: only the horizontal path survives
    hole = _erase(cw, es, [target, ver[0]])
    with pytest.raises(IncompleteRecoverySet):
        recover_vertical(es, hole, target)
    assert recover_horizontal(es, hole, target) == cw[idx]
    # and symmetrically
    hole = _erase(cw, es, [target, hor[0]])
    with pytest.raises(IncompleteRecoverySet):
        recover_horizontal(es, hole, target)
    assert recover_vertical(es, hole, target) == cw[idx]


def test_repair_single_erasure(code49):
    es, gm = code49
    cw = encode(gm, [3, 0, 48, 7, 1])
    for pt in es.points:
        trip = (pt.l, pt.i, pt.j)
        res = repair(es, cw, ErasurePattern.of([trip]))
        assert res.codeword == cw
        assert not res.unrecovered
        assert res.rounds == 1
        assert res.paths[trip] == "V"  # vertical preferred when both free


def test_repair_two_in_one_vertical_set(code49):
    es, gm = code49
    cw = encode(gm, [1, 2, 3, 4, 5])
    a, b = (0, 0, 1), (0, 2, 1)  # same fiber j=1
    res = repair(es, cw, ErasurePattern.of([a, b]))
    assert res.codeword == cw and not res.unrecovered
    assert res.paths[a] == "H" and res.paths[b] == "H"
    assert res.rounds == 1


def test_repair_crossed_fibers(code49):
    # whole vertical fiber plus whole horizontal fiber: the crossing symbol
    # is blocked in round one and repairs only after both sides peel
    es, gm = code49
    cw = encode(gm, [9, 9, 9, 9, 9])
    triples = {(0, i, 0) for i in range(4)} | {(0, 0, j) for j in range(4)}
    assert len(triples) == 7
    res = repair(es, cw, ErasurePattern.of(triples))
    assert res.codeword == cw and not res.unrecovered
    assert res.rounds == 2
    assert res.paths[(0, 0, 0)] == "V"


def test_repair_matches_reachability_oracle(code49_full):
    es, gm = code49_full
    rng = random.Random(3407)
    all_triples = [(pt.l, pt.i, pt.j) for pt in es.points]
    for _ in range(60):
        msg = [rng.randrange(49) for _ in range(5)]
        cw = encode(gm, msg)
        k = rng.randrange(1, 21)
        pattern = rng.sample(all_triples, k)
        res = repair(es, cw, ErasurePattern.of(pattern))
        assert res.unrecovered == _oracle_unrecoverable(es, pattern)
        assert res.unrecovered <= set(pattern)
        assert res.rounds <= es.n
        for idx, v in enumerate(res.codeword):
            pt = es.points[idx]
            if (pt.l, pt.i, pt.j) in res.unrecovered:
                assert v is None
            else:
                assert v == cw[idx]
        # fixpoint: nothing left has a fully present recovery set
        left = res.unrecovered
        for trip in left:
            hor, ver = recovery_indices(es, *trip)
            assert set(ver) & left and set(hor) & left


def test_repair_empty_and_preerased(code49):
    es, gm = code49
    cw = encode(gm, [5, 4, 3, 2, 1])
    res = repair(es, cw, ErasurePattern.of([]))
    assert res.codeword == cw and res.rounds == 0 and not res.paths
    # a None symbol counts as erased even when the pattern misses it
    hole = _erase(cw, es, [(0, 3, 3)])
    res = repair(es, hole, ErasurePattern.of([]))
    assert res.codeword == cw and res.paths[(0, 3, 3)] == "V"


def test_repair_rejects_bad_triple(code49):
    es, gm = code49
    cw = encode(gm, [1, 1, 1, 1, 1])
    with pytest.raises(IndexError):
        repair(es, cw, ErasurePattern.of([(0, 9, 0)]))

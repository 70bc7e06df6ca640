"""Deterministic storage-failure repair simulator.

Each trial encodes a random message, knocks out a set of storage nodes,
and runs the peeling repairer over the surviving symbols.  Randomness
comes from numpy's PCG64 stream seeded per scenario, so a fixed seed
gives a byte-identical report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construction import EvaluationSet
from .lrc_code import encode, generator_matrix
from .recovery import ErasurePattern, repair


class BadScenario(ValueError):
    """Scenario parameters are inconsistent with the code profile."""


@dataclass(frozen=True)
class StorageScenario:
    es: EvaluationSet
    failures: int            # simultaneous node failures per trial
    trials: int
    seed: int
    node_of: tuple[int, ...]  # symbol index -> node id

    @property
    def node_count(self) -> int:
        return len(set(self.node_of))


def storage_scenario(es: EvaluationSet, failures: int, trials: int, seed: int,
                     group_by_fiber: bool = False) -> StorageScenario:
    """One symbol per node by default; group_by_fiber co-locates each
    vertical fiber (r+1 symbols) on a single node."""
    if group_by_fiber:
        # vertical fiber (l, j): points (l, 0..r, j), stride r+1 in layout
        node_of = tuple(p.l * (es.r + 1) + p.j for p in es.points)
    else:
        node_of = tuple(range(es.n))
    nodes = len(set(node_of))
    if not 0 <= failures <= nodes:
        raise BadScenario(f"failures {failures} outside [0, {nodes}]")
    if trials < 1:
        raise BadScenario(f"trials {trials} < 1")
    if seed < 0:
        raise BadScenario(f"seed {seed} < 0")
    return StorageScenario(es, failures, trials, seed, node_of)


@dataclass(frozen=True)
class SimReport:
    failures: int
    trials: int
    seed: int
    nodes: int
    repaired_per_trial: tuple[int, ...]
    unrecovered_per_trial: tuple[int, ...]
    success_rate: float          # fraction of trials fully repaired
    reads_per_repair: int        # symbols read per repaired symbol (= r)
    path_histogram: dict         # {"V": count, "H": count} across all trials

    def to_dict(self) -> dict:
        return {
            "schema": "fibered-lrc/v1",
            "kind": "sim-report",
            "failures": self.failures,
            "trials": self.trials,
            "seed": self.seed,
            "nodes": self.nodes,
            "repaired_per_trial": list(self.repaired_per_trial),
            "unrecovered_per_trial": list(self.unrecovered_per_trial),
            "success_rate": self.success_rate,
            "reads_per_repair": self.reads_per_repair,
            "path_histogram": dict(self.path_histogram),
        }


def run_simulation(scenario: StorageScenario) -> SimReport:
    es = scenario.es
    fld = es.field
    gm = generator_matrix(es)
    rng = np.random.Generator(np.random.PCG64(scenario.seed))
    nodes = scenario.node_count

    symbols_on = {}
    for pos, node in enumerate(scenario.node_of):
        symbols_on.setdefault(node, []).append(pos)
    node_ids = sorted(symbols_on)

    repaired_counts, unrecovered_counts = [], []
    hist = {"V": 0, "H": 0}
    for _ in range(scenario.trials):
        message = [int(v) for v in rng.integers(0, fld.order, size=gm.k)]
        cw = encode(gm, message)
        picked = rng.choice(nodes, size=scenario.failures, replace=False)
        erased = [pos for node in picked for pos in symbols_on[node_ids[node]]]
        pattern = ErasurePattern.of(
            (es.point_at(pos).l, es.point_at(pos).i, es.point_at(pos).j)
            for pos in erased)
        holed = list(cw)
        for pos in erased:
            holed[pos] = None
        res = repair(es, holed, pattern)
        for trip, path in res.paths.items():
            assert res.codeword[es.point_index(*trip)] == cw[es.point_index(*trip)]
            hist[path] += 1
        repaired_counts.append(len(res.paths))
        unrecovered_counts.append(len(res.unrecovered))

    successes = sum(1 for u in unrecovered_counts if u == 0)
    return SimReport(
        failures=scenario.failures,
        trials=scenario.trials,
        seed=scenario.seed,
        nodes=nodes,
        repaired_per_trial=tuple(repaired_counts),
        unrecovered_per_trial=tuple(unrecovered_counts),
        success_rate=successes / scenario.trials,
        reads_per_repair=es.r,
        path_histogram=hist,
    )

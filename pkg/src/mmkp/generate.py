"""Seeded random instances and the exhaustive source-instance sweeps."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator

from .core import InputError, Instance
from .sources import MmvcInstance, QSatInstance, VcInstance


def random_instance(n: int, k: int, m: int, theta: int = 0, wmin: int = -3, wmax: int = 3,
                    density: float = 0.5, seed: int = 0) -> Instance:
    """Each pair ``i < j`` (in lexicographic order) is kept with probability
    ``density`` and then gets a weight drawn uniformly from the nonzero
    integers in ``[wmin, wmax]``."""
    if not 0.0 <= density <= 1.0:
        raise InputError(f"density {density} outside [0, 1]")
    values = [w for w in range(wmin, wmax + 1) if w != 0]
    if not values:
        raise InputError(f"weight range [{wmin}, {wmax}] has no nonzero value")
    rng = random.Random(seed)
    weights = {}
    for pair in combinations(range(1, n + 1), 2):
        if rng.random() < density:
            weights[pair] = rng.choice(values)
    return Instance(n, k, m, theta, weights)


def all_vc_instances(max_vertices: int = 4, max_budget: int = 2) -> Iterator[VcInstance]:
    """Every labeled graph on 1..max_vertices vertices, with every budget."""
    for count in range(1, max_vertices + 1):
        pairs = list(combinations(range(1, count + 1), 2))
        for mask in range(1 << len(pairs)):
            edges = frozenset(p for b, p in enumerate(pairs) if mask >> b & 1)
            for budget in range(min(max_budget, count) + 1):
                yield VcInstance(count, edges, budget)


def all_mmvc_instances(max_index: int = 2, max_group: int = 2, max_edges: int = 3,
                       max_budget: int = 1) -> Iterator[MmvcInstance]:
    """Every standard-layout source with at most ``max_edges`` edges.

    Budgets with ``2 * budget`` above the side size are skipped since the
    k = 2 compiler rejects them.
    """
    for index_count in range(1, max_index + 1):
        for group_size in range(1, max_group + 1):
            base = MmvcInstance.standard(index_count, group_size)
            where = base.group_of
            allowed = [(u, v) for u, v in combinations(range(1, base.vertex_count + 1), 2)
                       if not (where[u][0] == where[v][0] and where[u][1] != where[v][1])]
            for size in range(max_edges + 1):
                for edges in combinations(allowed, size):
                    for budget in range(max_budget + 1):
                        if 2 * budget <= base.side_size:
                            yield MmvcInstance(base.groups, frozenset(edges), budget)


def random_qsat(n_x: int, n_y: int, n_clauses: int, seed: int) -> QSatInstance:
    """Uniform random 3-CNF over X = 1..n_x and Y = n_x+1..n_x+n_y."""
    rng = random.Random(seed)
    variables = list(range(1, n_x + n_y + 1))
    clauses = []
    for _ in range(n_clauses):
        clauses.append(tuple(rng.choice(variables) * rng.choice((1, -1)) for _ in range(3)))
    return QSatInstance(tuple(range(1, n_x + 1)), tuple(range(n_x + 1, n_x + n_y + 1)), tuple(clauses))


# Hand-built forall-exists formulas; each has two clauses after padding, so the
# k = 3 gadget has 22 nodes.  Literals are DIMACS style.
QSAT_SUITE = {
    "mixed-signs-yes": QSatInstance((1,), (2, 3), ((1, 2, 3), (-1, -2, 3))),
    "clash-no": QSatInstance((1,), (2,), ((1, 2, 2), (1, -2, -2))),
    "clash-two-x-no": QSatInstance((1, 4), (2,), ((1, 2, 2), (4, -2, -2))),
    "two-x-yes": QSatInstance((1, 4), (2, 3), ((1, 2, 3), (4, -2, -3))),
    "opposite-x-yes": QSatInstance((1,), (2,), ((1, 2, 2), (-1, -2, -2))),
    "split-clause-yes": QSatInstance((1, 2), (3,), ((1, 2, 3),)),
    "padded-yes": QSatInstance((1,), (2, 3), ((1, 2, 3),)),
    "unused-x-no": QSatInstance((1, 3), (2,), ((1, 2, 2), (1, -2, -2))),
}

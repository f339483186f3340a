"""Exact best responses for the attacker, who removes at most ``m`` nodes.

Two independent solvers share one contract.  ``best_attack_exhaustive``
scores every node set of size ``<= m`` (vectorised per cardinality) and is
the reference.  ``best_attack_bnb`` runs a depth-first branch and bound over
assigned nodes only.  Both break ties towards the smallest cardinality and
then the lexicographically smallest sorted node tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .core import NEG_INF, Instance, Partition, Value, check_partition, deficit


@dataclass(frozen=True)
class AttackResult:
    attack: tuple[int, ...]
    value: Value


@dataclass(frozen=True)
class Verdict:
    holds: bool
    value: Value
    witness: Optional[tuple[int, ...]] = None

    def __str__(self):
        if self.holds:
            return "HOLDS"
        return "FAILS(" + ",".join(map(str, self.witness)) + ")"


def _emptying_attack(p: Partition) -> tuple[int, ...]:
    # smallest subset, ties to the lexicographically smallest node tuple
    return min(p.subsets, key=lambda s: (len(s), s))


def _in_subset_matrix(inst: Instance, p: Partition) -> tuple[np.ndarray, np.ndarray]:
    lab = np.array(p.labels(inst.n), dtype=np.int64)
    same = (lab[:, None] == lab[None, :]) & (lab[:, None] >= 0)
    return np.where(same, inst.matrix, 0), lab


def best_attack_exhaustive(inst: Instance, p: Partition) -> AttackResult:
    check_partition(inst, p)
    if any(len(s) == 0 for s in p.subsets):
        return AttackResult((), NEG_INF)
    a, lab = _in_subset_matrix(inst, p)
    base = int(a.sum()) // 2
    gain = a.sum(axis=1)
    sizes = [len(s) for s in p.subsets]
    best_attack: tuple[int, ...] = ()
    best_value: Value = base
    for size in range(1, inst.m + 1):
        combos = np.array(list(combinations(range(1, inst.n + 1), size)), dtype=np.intp)
        if len(combos) == 0:
            break
        dead = np.zeros(len(combos), dtype=bool)
        for idx, sz in enumerate(sizes):
            if sz <= size:
                dead |= (lab[combos] == idx).sum(axis=1) == sz
        if dead.any():
            first = int(np.argmax(dead))
            return AttackResult(tuple(int(v) for v in combos[first]), NEG_INF)
        vals = base - gain[combos].sum(axis=1)
        for s, t in combinations(range(size), 2):
            vals = vals + a[combos[:, s], combos[:, t]]
        i = int(np.argmin(vals))
        if vals[i] < best_value:
            best_value = int(vals[i])
            best_attack = tuple(int(v) for v in combos[i])
    return AttackResult(best_attack, best_value)


class _Search:
    """Branch and bound state for one (instance, partition) pair."""

    def __init__(self, inst: Instance, p: Partition):
        rows = inst.rows
        lab = p.labels(inst.n)
        self.cands = sorted(p.assigned())
        self.mates = {}
        pos_gain = []
        value = 0
        for v in self.cands:
            mates = [(u, rows[v][u]) for u in p.subsets[lab[v]] if u != v and rows[v][u]]
            self.mates[v] = mates
            pos_gain.append(sum(w for _, w in mates if w > 0))
            value += sum(w for u, w in mates if u > v)
        self.value = value
        # suffix_top[t][r]: sum of the r largest positive gains among cands[t:]
        m = inst.m
        self.suffix_top = []
        for t in range(len(self.cands) + 1):
            top = sorted(pos_gain[t:], reverse=True)[:m]
            acc = [0]
            for g in top:
                acc.append(acc[-1] + g)
            acc += [acc[-1]] * (m + 1 - len(acc))
            self.suffix_top.append(acc)
        self.removed: set[int] = set()
        self.examined = 0

    def removal_delta(self, v: int) -> int:
        return sum(w for u, w in self.mates[v] if u not in self.removed)

    def run(self, size: int, incumbent: Value, stop_below: Optional[int]):
        """Best attack of exactly ``size`` nodes strictly below ``incumbent``."""
        found: list = [None, incumbent]
        chosen: list[int] = []
        cands = self.cands
        count = len(cands)

        def dfs(start: int, value: int) -> bool:
            left = size - len(chosen)
            if left == 0:
                self.examined += 1
                if value < found[1]:
                    found[0], found[1] = tuple(chosen), value
                    if stop_below is not None and value < stop_below:
                        return True
                return False
            for t in range(start, count - left + 1):
                if found[1] is not NEG_INF and value - self.suffix_top[t][left] >= found[1]:
                    return False
                v = cands[t]
                delta = self.removal_delta(v)
                chosen.append(v)
                self.removed.add(v)
                stop = dfs(t + 1, value - delta)
                self.removed.discard(v)
                chosen.pop()
                if stop:
                    return True
            return False

        dfs(0, self.value)
        return found[0], found[1]


def _bnb(inst: Instance, p: Partition, stop_below: Optional[int] = None) -> tuple[AttackResult, int]:
    check_partition(inst, p)
    if deficit(p, inst.m) > 0:
        return AttackResult(_emptying_attack(p), NEG_INF), 0
    search = _Search(inst, p)
    best_attack: tuple[int, ...] = ()
    best_value: int = search.value
    search.examined = 1
    if stop_below is not None and best_value < stop_below:
        return AttackResult((), best_value), 1
    for size in range(1, min(inst.m, len(search.cands)) + 1):
        incumbent = best_value if stop_below is None else min(best_value, stop_below)
        attack, value = search.run(size, incumbent, stop_below)
        if attack is not None:
            best_attack, best_value = attack, value
            if stop_below is not None and best_value < stop_below:
                break
    return AttackResult(best_attack, best_value), search.examined


def best_attack_bnb(inst: Instance, p: Partition) -> AttackResult:
    return _bnb(inst, p)[0]


def find_failing_attack(inst: Instance, p: Partition, theta: Optional[int] = None):
    """Some attack with value below ``theta`` (default ``inst.theta``), or None.

    Stops at the first such attack, so the witness is not necessarily optimal.
    Returns ``(result_or_None, attacks_examined)``.
    """
    theta = inst.theta if theta is None else theta
    res, examined = _bnb(inst, p, stop_below=theta)
    if res.value < theta:
        return res, examined
    return None, examined


def verify(inst: Instance, p: Partition) -> Verdict:
    """Does every attack of at most ``m`` nodes leave value >= theta?"""
    res = best_attack_bnb(inst, p)
    if res.value >= inst.theta:
        return Verdict(True, res.value)
    return Verdict(False, res.value, res.attack)

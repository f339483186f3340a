"""Naive brute-force deciders for the source problems and the reduction
cross-check harness.

The deciders deliberately share no code with the partition solvers they are
used to certify: plain enumeration of covers and truth assignments.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Union

from .attacker import best_attack_exhaustive, verify
from .core import InputError, NEG_INF, Partition
from .defender import CCG, LOCAL_SEARCH, SearchConfig, solve_ccg, solve_exhaustive
from .reductions import (
    check_proper_2partition,
    proper_3partition_for,
    reduce_mmvc_to_mm2p,
    reduce_qsat_to_mm3p,
    reduce_vc_to_attacker,
)
from .sources import MmvcInstance, QSatInstance, VcInstance, literal_true


class OracleRefused(RuntimeError):
    """The source instance exceeds the enumeration bound of an oracle."""


@dataclass(frozen=True)
class OracleAnswer:
    yes: bool
    witness: object = None


def _covers(edges, cover) -> bool:
    return all(u in cover or v in cover for u, v in edges)


def solve_min_vertex_cover(src: VcInstance) -> OracleAnswer:
    """yes(cover) with the lexicographically smallest minimum cover, or no."""
    if src.vertex_count > 20 and src.budget > 4:
        raise OracleRefused(f"{src.vertex_count} vertices with budget {src.budget}")
    for size in range(src.budget + 1):
        for cover in combinations(range(1, src.vertex_count + 1), size):
            if _covers(src.edges, set(cover)):
                return OracleAnswer(True, cover)
    return OracleAnswer(False)


def solve_mmvc(src: MmvcInstance) -> OracleAnswer:
    """yes, or no(p) with the first side choice whose induced graph has no small cover."""
    if src.index_count > 6 or src.side_size > 12:
        raise OracleRefused(f"{src.index_count} indices, side size {src.side_size}")
    for bits in product((0, 1), repeat=src.index_count):
        choice = {i + 1: b for i, b in enumerate(bits)}
        chosen = set(src.chosen_vertices(choice))
        edges = [(u, v) for u, v in src.edges if u in chosen and v in chosen]
        ok = any(
            _covers(edges, set(cover))
            for size in range(min(src.budget, len(chosen)) + 1)
            for cover in combinations(sorted(chosen), size)
        )
        if not ok:
            return OracleAnswer(False, choice)
    return OracleAnswer(True)


def formula_true(clauses, assignment: dict[int, int]) -> bool:
    return all(any(literal_true(l, assignment) for l in c) for c in clauses)


def solve_qsat2(src: QSatInstance) -> OracleAnswer:
    """yes, or no(tau_x) with the first universal assignment no tau_y can answer."""
    if len(src.x_vars) > 12 or len(src.y_vars) > 12:
        raise OracleRefused(f"|X|={len(src.x_vars)}, |Y|={len(src.y_vars)}")
    for xbits in product((0, 1), repeat=len(src.x_vars)):
        tau_x = dict(zip(src.x_vars, xbits))
        if not any(
            formula_true(src.clauses, {**tau_x, **dict(zip(src.y_vars, ybits))})
            for ybits in product((0, 1), repeat=len(src.y_vars))
        ):
            return OracleAnswer(False, tau_x)
    return OracleAnswer(True)


# ------------------------------------------------------------ cross-check


@dataclass
class XcheckReport:
    kind: str
    passed: bool
    source_answer: bool
    target_answer: str
    mode: str = "full"
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "mode": self.mode,
            "source_answer": "yes" if self.source_answer else "no",
            "target_answer": self.target_answer,
            **self.details,
        }


def _xcheck_vc(src: VcInstance) -> XcheckReport:
    oracle = solve_min_vertex_cover(src)
    inst, p = reduce_vc_to_attacker(src)
    verdict = verify(inst, p)
    details = {"cover": list(oracle.witness) if oracle.yes else None}
    if not verdict.holds:
        details["attack"] = list(verdict.witness)
        # the failing set must itself be a cover
        ok_witness = _covers(src.edges, set(verdict.witness))
    else:
        ok_witness = True
    passed = oracle.yes == (not verdict.holds) and ok_witness
    return XcheckReport("vc", passed, oracle.yes, "FAILS" if not verdict.holds else "HOLDS", details=details)


def _xcheck_mmvc(src: MmvcInstance) -> XcheckReport:
    oracle = solve_mmvc(src)
    inst, gm = reduce_mmvc_to_mm2p(src)
    verdict = solve_exhaustive(inst, SearchConfig(allow_incomplete=True))
    details = {"theta": inst.theta, "Lambda": gm.params["Lambda"]}
    if verdict.answer == "YES":
        details["certificate"] = [list(s) for s in verdict.certificate]
        details["certificate_proper"] = check_proper_2partition(inst, gm, verdict.certificate)
    if not oracle.yes:
        details["falsifying_choice"] = oracle.witness
    passed = oracle.yes == (verdict.answer == "NO")
    return XcheckReport("mmvc", passed, oracle.yes, verdict.answer, details=details)


def random_improper_3partitions(inst, gm, count: int, seed: int) -> list[Partition]:
    """Uniform random complete 3-partitions, half of them, and single moves or
    swaps applied to random proper partitions for the other half.  Proper
    partitions are never returned."""
    rng = random.Random(seed)
    proper = {proper_3partition_for(gm, dict(zip(gm.source.x_vars, bits)))
              for bits in product((0, 1), repeat=len(gm.source.x_vars))}
    out: list[Partition] = []
    n = inst.n
    while len(out) < count:
        if len(out) % 2 == 0:
            lab = [rng.randrange(3) for _ in range(n)]
        else:
            base = sorted(proper)[rng.randrange(len(proper))]
            lab = base.labels(n)[1:]
            u = rng.randrange(n)
            if rng.random() < 0.5:
                lab[u] = (lab[u] + rng.randrange(1, 3)) % 3
            else:
                v = rng.randrange(n)
                lab[u], lab[v] = lab[v], lab[u]
        subsets = [[v + 1 for v in range(n) if lab[v] == c] for c in range(3)]
        p = Partition(subsets)
        if any(not s for s in p.subsets) or p in proper:
            continue
        out.append(p)
    return out


def _xcheck_qsat(src: QSatInstance, samples: int = 200, seed: int = 0, max_iterations: int = 64) -> XcheckReport:
    """Restricted certification: proper partitions exhaustively, improper ones by sampling."""
    oracle = solve_qsat2(src)
    inst, gm = reduce_qsat_to_mm3p(src)
    xs = gm.source.x_vars
    proper = []
    defeated = []
    for bits in product((0, 1), repeat=len(xs)):
        tau = dict(zip(xs, bits))
        p = proper_3partition_for(gm, tau)
        res = best_attack_exhaustive(inst, p)
        proper.append((tau, p))
        defeated.append(res.value is NEG_INF or res.value < inst.theta)
    details = {
        "n": inst.n,
        "m": inst.m,
        "Lambda": gm.params["Lambda"],
        "mu1": gm.params["mu1"],
        "mu2": gm.params["mu2"],
        "theta": inst.theta,
        "proper_partitions": len(proper),
        "proper_defeated": sum(defeated),
    }
    if oracle.yes:
        improper = random_improper_3partitions(inst, gm, samples, seed)
        survivors = []
        for p in improper:
            res = best_attack_exhaustive(inst, p)
            if not (res.value is NEG_INF or res.value < inst.theta):
                survivors.append([list(s) for s in p])
        details["improper_sampled"] = len(improper)
        details["improper_survivors"] = survivors
        passed = all(defeated) and not survivors
        target = "NO(restricted)"
    else:
        cfg = SearchConfig(
            algorithm=CCG,
            master=LOCAL_SEARCH,
            max_iterations=max_iterations,
            seed=seed,
            restarts=0,
            warm_starts=tuple(p for _, p in proper),
        )
        verdict = solve_ccg(inst, cfg)
        details["ccg_iterations"] = verdict.iterations
        passed = False
        if verdict.answer == "YES":
            cert = verdict.certificate
            details["certificate"] = [list(s) for s in cert]
            matches = [tau for tau, p in proper if p == cert]
            falsifying = [tau for tau in matches if not _exists_y(gm.source, tau)]
            details["certificate_tau_x"] = falsifying[0] if falsifying else None
            passed = bool(falsifying) and verify(inst, cert).holds
        target = verdict.answer
    return XcheckReport("qsat", passed, oracle.yes, target, mode="restricted", details=details)


def _exists_y(src: QSatInstance, tau_x: dict[int, int]) -> bool:
    return any(
        formula_true(src.clauses, {**tau_x, **dict(zip(src.y_vars, ybits))})
        for ybits in product((0, 1), repeat=len(src.y_vars))
    )


def xcheck(source: Union[VcInstance, MmvcInstance, QSatInstance], **kwargs) -> XcheckReport:
    """Decide the source with its oracle and the reduced instance with the
    partition solvers, and check that the answers correspond."""
    start = time.perf_counter()
    if isinstance(source, VcInstance):
        report = _xcheck_vc(source)
    elif isinstance(source, MmvcInstance):
        report = _xcheck_mmvc(source)
    elif isinstance(source, QSatInstance):
        report = _xcheck_qsat(source, **kwargs)
    else:
        raise InputError(f"unsupported source {type(source).__name__}")
    report.seconds = time.perf_counter() - start
    return report

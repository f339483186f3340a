"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary
(and on stdout when this file is run as a script).
"""

import itertools
import math
import random
import time
from collections import Counter

import pytest

from mmkp import cli
from mmkp.attacker import best_attack_bnb, best_attack_exhaustive, verify
from mmkp.core import NEG_INF, Partition
from mmkp.defender import CCG, SearchConfig, solve_ccg, solve_exhaustive
from mmkp.formats import parse_instance, serialize_instance, serialize_mmvc, serialize_qsat, serialize_vc
from mmkp.generate import QSAT_SUITE, all_mmvc_instances, all_vc_instances, random_instance, random_qsat
from mmkp.oracles import solve_qsat2, xcheck
from mmkp.reductions import f_nm, normalize_clauses, proper_3partition_for, reduce_qsat_to_mm3p
from mmkp.sources import MmvcInstance, VcInstance

from conftest import ACCEPTANCE_LINES


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] AC{number} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def random_partition(rng, n, k):
    # mostly assigned nodes, so that many partitions keep a finite value
    labels = [-1 if rng.random() < 0.15 else rng.randrange(k) for _ in range(n)]
    return Partition([[v + 1 for v in range(n) if labels[v] == c] for c in range(k)])


def test_ac1_attacker_exactness():
    start = time.perf_counter()
    agree = finite = 0
    for seed in range(500):
        rng = random.Random(seed)
        n = rng.randint(2, 12)
        k = rng.randint(1, min(3, n))
        m = rng.randint(0, min(3, n))
        inst = random_instance(n, k, m, 0, -5, 5, rng.uniform(0.2, 1.0), seed)
        p = random_partition(rng, n, k)
        value = best_attack_exhaustive(inst, p).value
        agree += best_attack_bnb(inst, p).value == value
        finite += value is not NEG_INF
    secs = time.perf_counter() - start
    ok = agree == 500 and secs < 60
    assert record(1, "attacker exactness", ok,
                  f"{agree}/500 bnb == exhaustive ({finite} finite), {secs:.1f}s (< 60s)")


def test_ac2_defender_agreement():
    start = time.perf_counter()
    agree = certified = 0
    answers = Counter()
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(2, 10)
        k = rng.randint(1, min(3, n))
        m = rng.randint(0, 2)
        theta = rng.randint(-3, 8)
        incomplete = rng.random() < 0.5
        inst = random_instance(n, k, m, theta, -3, 4, rng.uniform(0.3, 1.0), seed)
        ex = solve_exhaustive(inst, SearchConfig(allow_incomplete=incomplete))
        cg = solve_ccg(inst, SearchConfig(algorithm=CCG, allow_incomplete=incomplete))
        answers[ex.answer] += 1
        agree += ex.answer == cg.answer
        certs = [v.certificate for v in (ex, cg) if v.answer == "YES"]
        certified += all(verify(inst, c).holds for c in certs)
    secs = time.perf_counter() - start
    ok = agree == 200 and certified == 200
    assert record(2, "defender agreement", ok,
                  f"{agree}/200 CCG == exhaustive ({answers['YES']} YES, {answers['NO']} NO), "
                  f"certificates re-verified on {certified}/200, {secs:.1f}s")


def test_ac3_vc_equivalence():
    start = time.perf_counter()
    cases = list(all_vc_instances(4, 2))
    passed = sum(xcheck(src).passed for src in cases)
    secs = time.perf_counter() - start
    ok = passed == len(cases) and secs < 10
    assert record(3, "vertex cover equivalence", ok, f"{passed}/{len(cases)} labeled graphs x budgets, {secs:.1f}s (< 10s)")


def test_ac4_mmvc_equivalence():
    start = time.perf_counter()
    cases = list(all_mmvc_instances(2, 2, 3, 1))
    passed = sum(xcheck(src).passed for src in cases)
    secs = time.perf_counter() - start
    ok = passed == len(cases) and secs < 300
    assert record(4, "k=2 equivalence", ok, f"{passed}/{len(cases)} sources, {secs:.1f}s (< 300s)")


def test_ac5_f_nm():
    start = time.perf_counter()
    checked = bad = 0
    for n in range(2, 13):
        for m in range(1, n // 2 + 1):
            g = f_nm(n, m, 0)
            low = f_nm(n, m, m)
            for x in range(2 * m + 1):
                val = f_nm(n, m, x)
                checked += 1
                if val != g + x * (x - 2 * m) or (x != m and not val > low):
                    bad += 1
    secs = time.perf_counter() - start
    ok = bad == 0 and secs < 1
    assert record(5, "f_nm convexity and closed form", ok, f"{checked - bad}/{checked} points, {secs:.3f}s (< 1s)")


def audit_structure(src):
    inst, gm = reduce_qsat_to_mm3p(src)
    lam, m, alpha = gm.params["Lambda"], inst.m, gm.params["alpha"]
    problems = []
    if inst.n != 10 * alpha + 2 or alpha != 2:
        problems.append("node count")
    if not set(inst.weights.values()) <= {lam, lam + 1}:
        problems.append("weight alphabet")
    theta = (math.comb(2 * m, 2) + 2 * math.comb(m + 1, 2)) * lam
    if inst.theta != theta + gm.params["mu1"] + gm.params["mu2"] + 1:
        problems.append("theta")
    xs = [v for v in gm.source.x_vars if v not in gm.padding_vars]
    for bits in itertools.product((0, 1), repeat=len(xs)):
        p = proper_3partition_for(gm, dict(zip(xs, bits)))
        for hub, mu in zip(gm.half_nodes, (gm.params["mu1"], gm.params["mu2"])):
            s = next(s for s in p.subsets if hub in s)
            links = sum(1 for u, v in itertools.combinations(s, 2) if inst.weight(u, v) == lam + 1)
            if links != mu:
                problems.append(f"mu at {bits}")
    return problems


def test_ac6_qsat_restricted_certification():
    start = time.perf_counter()
    results = {}
    for name, src in QSAT_SUITE.items():
        problems = audit_structure(src)
        rep = xcheck(src, samples=200, seed=0)
        yes = solve_qsat2(src).yes
        results[name] = (not problems and rep.passed, yes)
    secs = time.perf_counter() - start
    passed = sum(ok for ok, _ in results.values())
    kinds = Counter("yes" if yes else "no" for _, yes in results.values())
    ok = passed == len(results) >= 5 and kinds["yes"] and kinds["no"] and secs < 600
    assert record(6, "k=3 restricted certification", ok,
                  f"{passed}/{len(results)} formulas ({kinds['yes']} yes, {kinds['no']} no), {secs:.1f}s (< 600s)")


def test_ac7_normalization():
    start = time.perf_counter()
    same = split = 0
    for seed in range(100):
        rng = random.Random(seed)
        src = random_qsat(rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 6), seed)
        norm = normalize_clauses(src)
        split += norm.clauses != src.clauses
        same += solve_qsat2(src).yes == solve_qsat2(norm).yes
    secs = time.perf_counter() - start
    ok = same == 100 and secs < 30
    assert record(7, "normalization soundness", ok,
                  f"{same}/100 unchanged answers ({split} formulas rewritten), {secs:.1f}s (< 30s)")


def run_cli(capsys, argv):
    code = cli.main(["--no-timing", *argv])
    return code, capsys.readouterr().out


def test_ac8_determinism_and_round_trip(tmp_path, capsys):
    d = tmp_path
    (d / "inst.mmkp").write_text(serialize_instance(random_instance(7, 2, 1, 1, -3, 4, 0.7, seed=9)))
    (d / "inst.part").write_text("part 2\ns 1 1 2 3\ns 2 4 5 6 7\n")
    (d / "g.vc").write_text(serialize_vc(VcInstance(4, frozenset({(1, 2), (2, 3), (3, 4)}), 2)))
    (d / "g.mmvc").write_text(serialize_mmvc(MmvcInstance.standard(2, 2, {(1, 5), (2, 6)}, 1)))
    (d / "f.qdimacs").write_text(serialize_qsat(QSAT_SUITE["two-x-yes"]))
    commands = [
        ["verify", "inst.mmkp", "inst.part"],
        ["attack", "inst.mmkp", "inst.part"],
        ["attack", "inst.mmkp", "inst.part", "--algo", "exhaustive"],
        ["solve", "inst.mmkp", "--out", "cert.part"],
        ["solve", "inst.mmkp", "--algo", "ccg", "--allow-incomplete", "--out", "cert.part"],
        ["solve", "inst.mmkp", "--algo", "ccg", "--master", "local", "--seed", "5", "--out", "cert.part"],
        ["reduce", "vc", "g.vc", "--out", "r.mmkp"],
        ["reduce", "mmvc", "g.mmvc", "--out", "r.mmkp"],
        ["reduce", "qsat", "f.qdimacs", "--out", "r.mmkp"],
        ["gen", "--n", "9", "--k", "3", "--seed", "4", "--out", "gen.mmkp"],
        ["gen", "--n", "9", "--seed", "4"],
        ["xcheck", "vc", "--max-vertices", "3"],
        ["xcheck", "mmvc", "g.mmvc"],
        ["xcheck", "qsat", "f.qdimacs", "--samples", "20", "--seed", "3"],
    ]
    outputs = ["cert.part", "r.mmkp", "r.mmkp.part", "r.mmkp.gadget.json", "gen.mmkp"]

    def snapshot(argv):
        for name in outputs:
            (d / name).unlink(missing_ok=True)
        code, out = run_cli(capsys, [a if not a.endswith(tuple(".mmkp .part .vc .mmvc .qdimacs".split())) else str(d / a)
                                     for a in argv])
        files = {name: (d / name).read_bytes() for name in outputs if (d / name).exists()}
        return code, out, files

    identical = 0
    for argv in commands:
        identical += snapshot(argv) == snapshot(argv)

    trips = 0
    for seed in range(100):
        rng = random.Random(seed)
        n = rng.randint(1, 15)
        inst = random_instance(n, rng.randint(1, n), rng.randint(0, n), rng.randint(-50, 50),
                               -rng.randint(1, 9), rng.randint(1, 9), rng.random(), seed)
        text = serialize_instance(inst)
        trips += serialize_instance(parse_instance(text)) == text and parse_instance(text) == inst
    ok = identical == len(commands) and trips == 100
    assert record(8, "determinism and round-trip", ok,
                  f"{identical}/{len(commands)} commands byte-identical across two runs, {trips}/100 round-trips")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

"""Command-line entry point ``mmkp``.

Exit status: 0 decided / pass, 1 decided negative (verify FAILS, solve NO,
xcheck failure), 2 UNKNOWN or refusal, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from pathlib import Path

from .attacker import best_attack_bnb, best_attack_exhaustive, verify
from .core import InputError, format_value
from .defender import CCG, EXHAUSTIVE, LOCAL_SEARCH, SearchConfig, SearchSpaceTooLarge, solve
from .formats import (
    parse_instance,
    parse_mmvc,
    parse_partition,
    parse_qsat,
    parse_vc,
    serialize_instance,
    serialize_partition,
)
from .generate import QSAT_SUITE, all_mmvc_instances, all_vc_instances, random_instance
from .oracles import OracleRefused, xcheck
from .reductions import reduce_mmvc_to_mm2p, reduce_qsat_to_mm3p, reduce_vc_to_attacker

EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load(path: str, parser):
    try:
        return parser(_read(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _attack_list(attack) -> list[int]:
    return [int(v) for v in attack]


def cmd_verify(args) -> tuple[dict, int]:
    inst = _load(args.instance, parse_instance)
    p = _load(args.partition, parse_partition)
    v = verify(inst, p)
    report = {"command": "verify", "answer": "HOLDS" if v.holds else "FAILS",
              "value": format_value(v.value), "theta": inst.theta}
    if not v.holds:
        report["witness"] = _attack_list(v.witness)
    return report, EXIT_OK if v.holds else EXIT_NEGATIVE


def cmd_attack(args) -> tuple[dict, int]:
    inst = _load(args.instance, parse_instance)
    p = _load(args.partition, parse_partition)
    solver = best_attack_exhaustive if args.algo == "exhaustive" else best_attack_bnb
    res = solver(inst, p)
    return {"command": "attack", "algo": args.algo, "attack": _attack_list(res.attack),
            "value": format_value(res.value)}, EXIT_OK


def cmd_solve(args) -> tuple[dict, int]:
    inst = _load(args.instance, parse_instance)
    cfg = SearchConfig(allow_incomplete=args.allow_incomplete, algorithm=args.algo, master=args.master,
                       max_iterations=args.max_iter, seed=args.seed)
    report = {"command": "solve", "algo": args.algo, "master": args.master,
              "allow_incomplete": args.allow_incomplete, "seed": args.seed}
    try:
        verdict = solve(inst, cfg)
    except SearchSpaceTooLarge as exc:
        report.update(answer="REFUSED", reason=str(exc), space_size=exc.size)
        return report, EXIT_UNKNOWN
    report.update(answer=verdict.answer, partitions_examined=verdict.partitions_examined,
                  attacks_examined=verdict.attacks_examined)
    if args.algo == CCG:
        report["iterations"] = verdict.iterations
    if verdict.certificate is not None:
        report["certificate"] = [list(s) for s in verdict.certificate]
        if args.out:
            Path(args.out).write_text(serialize_partition(verdict.certificate))
            report["certificate_file"] = args.out
    code = {"YES": EXIT_OK, "NO": EXIT_NEGATIVE}.get(verdict.answer, EXIT_UNKNOWN)
    return report, code


def _gadget_sidecar(gm, extra: dict) -> str:
    data = {"kind": gm.kind, **extra, **gm.params}
    if gm.padding_log:
        data["padding_log"] = gm.padding_log
    if gm.kind == "qsat":
        data["clauses"] = [list(c) for c in gm.clauses]
    data["roles"] = {str(v): r for v, r in sorted(gm.node_roles.items())}
    if gm.one_links:
        data["one_links"] = [list(e) for e in sorted(gm.one_links)]
    return json.dumps(data, indent=2) + "\n"


def cmd_reduce(args) -> tuple[dict, int]:
    out = Path(args.out)
    report = {"command": "reduce", "kind": args.kind, "instance_file": str(out)}
    if args.kind == "vc":
        src = _load(args.source, parse_vc)
        inst, p = reduce_vc_to_attacker(src)
        part = out.with_name(out.name + ".part")
        part.write_text(serialize_partition(p))
        report["partition_file"] = str(part)
        gm = None
    elif args.kind == "mmvc":
        inst, gm = reduce_mmvc_to_mm2p(_load(args.source, parse_mmvc))
    else:
        inst, gm = reduce_qsat_to_mm3p(_load(args.source, parse_qsat))
    out.write_text(serialize_instance(inst))
    if gm is not None:
        side = out.with_name(out.name + ".gadget.json")
        side.write_text(_gadget_sidecar(gm, {}))
        report["gadget_file"] = str(side)
        report.update({k: v for k, v in gm.params.items()})
    report.update(n=inst.n, k=inst.k, m=inst.m, theta=inst.theta, weights=len(inst.weights))
    return report, EXIT_OK


def cmd_gen(args) -> tuple[dict, int]:
    inst = random_instance(args.n, args.k, args.m, args.theta, args.wmin, args.wmax, args.density, args.seed)
    text = serialize_instance(inst)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
        return None, EXIT_OK
    return {"command": "gen", "instance_file": args.out, "seed": args.seed,
            "n": inst.n, "weights": len(inst.weights)}, EXIT_OK


def cmd_xcheck(args) -> tuple[dict, int]:
    if args.kind == "vc":
        sources = [_load(f, parse_vc) for f in args.sources] or list(
            all_vc_instances(args.max_vertices, args.max_budget))
        names = args.sources or [f"vc-{i}" for i in range(len(sources))]
    elif args.kind == "mmvc":
        sources = [_load(f, parse_mmvc) for f in args.sources] or list(
            all_mmvc_instances(args.max_index, args.max_group, args.max_edges, args.max_budget))
        names = args.sources or [f"mmvc-{i}" for i in range(len(sources))]
    else:
        if args.sources:
            sources = [_load(f, parse_qsat) for f in args.sources]
            names = args.sources
        else:
            names, sources = list(QSAT_SUITE), list(QSAT_SUITE.values())
    failures = []
    passed = 0
    for name, src in zip(names, sources):
        kwargs = {"samples": args.samples, "seed": args.seed} if args.kind == "qsat" else {}
        rep = xcheck(src, **kwargs)
        if rep.passed:
            passed += 1
        else:
            failures.append({"case": name, **rep.as_dict()})
    report = {"command": "xcheck", "kind": args.kind, "seed": args.seed, "cases": len(sources),
              "passed": passed, "failed": len(failures), "failures": failures}
    return report, EXIT_OK if not failures else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mmkp", description="Max-min k-partition solvers and reductions.")
    ap.add_argument("--no-timing", action="store_true", help="omit wall_time from the report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="does the partition keep value >= theta under every attack?")
    p.add_argument("instance")
    p.add_argument("partition")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("attack", help="best attack on a partition")
    p.add_argument("instance")
    p.add_argument("partition")
    p.add_argument("--algo", choices=["bnb", "exhaustive"], default="bnb")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("solve", help="decide the defender problem")
    p.add_argument("instance")
    p.add_argument("--algo", choices=[EXHAUSTIVE, CCG], default=EXHAUSTIVE)
    p.add_argument("--master", choices=[EXHAUSTIVE, LOCAL_SEARCH], default=EXHAUSTIVE)
    p.add_argument("--allow-incomplete", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--out", help="write the certificate partition here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="compile a source instance")
    p.add_argument("kind", choices=["vc", "mmvc", "qsat"])
    p.add_argument("source")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--theta", type=int, default=0)
    p.add_argument("--wmin", type=int, default=-3)
    p.add_argument("--wmax", type=int, default=3)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("xcheck", help="certify a reduction against brute-force oracles")
    p.add_argument("kind", choices=["vc", "mmvc", "qsat"])
    p.add_argument("sources", nargs="*", help="source files; default is the built-in sweep")
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--max-budget", type=int, default=None)
    p.add_argument("--max-index", type=int, default=2)
    p.add_argument("--max-group", type=int, default=2)
    p.add_argument("--max-edges", type=int, default=3)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_xcheck)
    return ap


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"mmkp: warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    warnings.showwarning = _show_warning
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "max_budget", 0) is None:
        args.max_budget = 2 if args.kind == "vc" else 1
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except InputError as exc:
        print(f"mmkp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OracleRefused, SearchSpaceTooLarge) as exc:
        report, code = {"command": args.command, "answer": "REFUSED", "reason": str(exc)}, EXIT_UNKNOWN
    if report is not None:
        if not args.no_timing:
            report["wall_time"] = round(time.perf_counter() - start, 6)
        print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())

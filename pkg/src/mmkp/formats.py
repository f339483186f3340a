"""Line-oriented text formats.

Instance file::

    mmkp 1
    p <n> <k> <m> <theta>
    w <i> <j> <weight>        # 1 <= i < j <= n, weight != 0, each pair once

Partition file::

    part <k>
    s <idx> <node>...         # idx in 1..k; unassigned nodes are omitted

Vertex cover source (``vc 1``) and max-min vertex cover source (``mmvc 1``)::

    v <vertex count>
    m <budget>
    g <index> <side> <vertex>...   # mmvc only
    e <u> <v>

Forall-exists 3-SAT source, QDIMACS style::

    p cnf <vars> <clauses>    # optional
    a <x-vars...> 0
    e <y-vars...> 0
    <lit> <lit> <lit> 0

``#`` starts a comment everywhere; in the QSAT format so does a ``c`` line.
"""

from __future__ import annotations

from typing import Iterator

from .core import InputError, Instance, Partition
from .sources import MmvcInstance, QSatInstance, VcInstance


class ParseError(InputError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _lines(text: str, c_comments: bool = False) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body or (c_comments and (body == "c" or body.startswith("c "))):
            continue
        yield no, body.split()


def _ints(tokens: list[str], no: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", no) from None


def _header(lines, expected: str) -> None:
    try:
        no, tok = next(lines)
    except StopIteration:
        raise ParseError(f"empty file, expected header '{expected} 1'") from None
    if tok != [expected, "1"]:
        raise ParseError(f"expected header '{expected} 1', got {' '.join(tok)!r}", no)


def parse_instance(text: str) -> Instance:
    lines = _lines(text)
    _header(lines, "mmkp")
    dims = None
    weights: dict[tuple[int, int], int] = {}
    for no, tok in lines:
        kind, args = tok[0], _ints(tok[1:], no)
        if kind == "p":
            if dims is not None:
                raise ParseError("duplicate 'p' line", no)
            if len(args) != 4:
                raise ParseError("'p' line needs n k m theta", no)
            dims = args
        elif kind == "w":
            if dims is None:
                raise ParseError("'w' line before 'p' line", no)
            if len(args) != 3:
                raise ParseError("'w' line needs i j weight", no)
            i, j, w = args
            if i == j:
                raise ParseError(f"self-loop weight on node {i} (w(i,i) is always 0)", no)
            if not (1 <= i < j <= dims[0]):
                raise ParseError(f"pair ({i}, {j}) must satisfy 1 <= i < j <= n", no)
            if w == 0:
                raise ParseError("zero weights must be omitted", no)
            if (i, j) in weights:
                raise ParseError(f"pair ({i}, {j}) given twice", no)
            weights[(i, j)] = w
        else:
            raise ParseError(f"unknown directive {kind!r}", no)
    if dims is None:
        raise ParseError("missing 'p' line")
    n, k, m, theta = dims
    try:
        return Instance(n, k, m, theta, weights)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def serialize_instance(inst: Instance) -> str:
    out = ["mmkp 1", f"p {inst.n} {inst.k} {inst.m} {inst.theta}"]
    out += [f"w {i} {j} {w}" for (i, j), w in inst.weights.items()]
    return "\n".join(out) + "\n"


def parse_partition(text: str) -> Partition:
    lines = _lines(text)
    try:
        no, tok = next(lines)
    except StopIteration:
        raise ParseError("empty file, expected header 'part <k>'") from None
    if len(tok) != 2 or tok[0] != "part":
        raise ParseError("expected header 'part <k>'", no)
    (k,) = _ints(tok[1:], no)
    if k < 1:
        raise ParseError("k must be positive", no)
    subsets: list = [None] * k
    seen: dict[int, int] = {}
    for no, tok in lines:
        if tok[0] != "s":
            raise ParseError(f"unknown directive {tok[0]!r}", no)
        args = _ints(tok[1:], no)
        if not args:
            raise ParseError("'s' line needs an index", no)
        idx, nodes = args[0], args[1:]
        if not 1 <= idx <= k:
            raise ParseError(f"subset index {idx} outside 1..{k}", no)
        if subsets[idx - 1] is not None:
            raise ParseError(f"subset {idx} given twice", no)
        for v in nodes:
            if v < 1:
                raise ParseError(f"invalid node {v}", no)
            if v in seen:
                raise ParseError(f"node {v} already in subset {seen[v]}", no)
            seen[v] = idx
        subsets[idx - 1] = nodes
    return Partition([s or [] for s in subsets])


def serialize_partition(p: Partition) -> str:
    out = [f"part {p.k}"]
    for idx, s in enumerate(p.subsets, start=1):
        out.append(" ".join(["s", str(idx), *map(str, s)]))
    return "\n".join(out) + "\n"


def _graph_source(text: str, header: str):
    lines = _lines(text)
    _header(lines, header)
    count = budget = None
    edges = []
    groups: dict[int, dict[int, list[int]]] = {}
    for no, tok in lines:
        kind, args = tok[0], _ints(tok[1:], no)
        if kind == "v" and len(args) == 1:
            count = args[0]
        elif kind == "m" and len(args) == 1:
            budget = args[0]
        elif kind == "e" and len(args) == 2:
            if args[0] == args[1]:
                raise ParseError(f"self-loop on vertex {args[0]}", no)
            edges.append(tuple(args))
        elif kind == "g" and header == "mmvc" and len(args) >= 3:
            idx, side, verts = args[0], args[1], args[2:]
            if side not in (0, 1) or idx < 1:
                raise ParseError(f"bad group ({idx}, {side})", no)
            if side in groups.setdefault(idx, {}):
                raise ParseError(f"group ({idx}, {side}) given twice", no)
            groups[idx][side] = verts
        else:
            raise ParseError(f"unknown or malformed directive {' '.join(tok)!r}", no)
    if count is None or budget is None:
        raise ParseError("missing 'v' or 'm' line")
    return count, budget, edges, groups


def parse_vc(text: str) -> VcInstance:
    count, budget, edges, _ = _graph_source(text, "vc")
    try:
        return VcInstance(count, frozenset(edges), budget)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def serialize_vc(src: VcInstance) -> str:
    out = ["vc 1", f"v {src.vertex_count}", f"m {src.budget}"]
    out += [f"e {u} {v}" for u, v in sorted(src.edges)]
    return "\n".join(out) + "\n"


def parse_mmvc(text: str) -> MmvcInstance:
    count, budget, edges, groups = _graph_source(text, "mmvc")
    if sorted(groups) != list(range(1, len(groups) + 1)) or any(len(g) != 2 for g in groups.values()):
        raise ParseError("groups must cover indices 1..|I| with both sides")
    try:
        src = MmvcInstance(tuple((groups[i][0], groups[i][1]) for i in sorted(groups)), frozenset(edges), budget)
    except InputError as exc:
        raise ParseError(str(exc)) from None
    if src.vertex_count != count:
        raise ParseError(f"'v {count}' does not match the {src.vertex_count} grouped vertices")
    return src


def serialize_mmvc(src: MmvcInstance) -> str:
    out = ["mmvc 1", f"v {src.vertex_count}", f"m {src.budget}"]
    for i, (a, b) in enumerate(src.groups, start=1):
        out.append(" ".join(["g", str(i), "0", *map(str, a)]))
        out.append(" ".join(["g", str(i), "1", *map(str, b)]))
    out += [f"e {u} {v}" for u, v in sorted(src.edges)]
    return "\n".join(out) + "\n"


def parse_qsat(text: str) -> QSatInstance:
    xs: list[int] = []
    ys: list[int] = []
    clauses = []
    for no, tok in _lines(text, c_comments=True):
        if tok[0] == "p":
            continue
        if tok[0] in ("a", "e"):
            args = _ints(tok[1:], no)
            if args and args[-1] == 0:
                args = args[:-1]
            (xs if tok[0] == "a" else ys).extend(args)
            continue
        args = _ints(tok, no)
        if not args or args[-1] != 0:
            raise ParseError("clause line must end with 0", no)
        if len(args) != 4:
            raise ParseError(f"clause has {len(args) - 1} literals, expected 3", no)
        clauses.append(tuple(args[:3]))
    try:
        return QSatInstance(tuple(xs), tuple(ys), tuple(clauses))
    except InputError as exc:
        raise ParseError(str(exc)) from None


def serialize_qsat(src: QSatInstance) -> str:
    out = [f"p cnf {src.max_var()} {len(src.clauses)}"]
    out.append(" ".join(["a", *map(str, src.x_vars), "0"]))
    out.append(" ".join(["e", *map(str, src.y_vars), "0"]))
    out += [" ".join([*map(str, c), "0"]) for c in src.clauses]
    return "\n".join(out) + "\n"

"""Gadget compilers from the three source problems to max-min k-partition.

* vertex cover -> attacker problem on a single-subset partition (k = 1)
* max-min vertex cover -> complement of the k = 2 defender problem
* forall-exists 3-SAT -> complement of the k = 3 defender problem, using
  only weights 0, L and L + 1

Every compiler returns the target instance together with a ``GadgetMap``
describing what each node stands for.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .core import InputError, Instance, Partition, SmallKWarning
from .sources import MmvcInstance, QSatInstance, VcInstance


@dataclass
class GadgetMap:
    kind: str  # "vc", "mmvc" or "qsat"
    node_roles: dict[int, str]
    one_links: frozenset = frozenset()
    params: dict = field(default_factory=dict)
    padding_log: list[str] = field(default_factory=list)
    # mmvc: index -> (side-0 nodes, side-1 nodes)
    groups: dict = field(default_factory=dict)
    # qsat
    source: Optional[QSatInstance] = None
    clauses: tuple = ()
    clause_x: tuple = ()
    tetrads: dict = field(default_factory=dict)
    k_nodes: tuple = ()
    half_nodes: tuple = ()
    padding_vars: tuple = ()


def reduce_vc_to_attacker(src: VcInstance) -> tuple[Instance, Partition]:
    """Unit weights on edges, threshold 1, one subset holding every vertex.

    The graph has a cover of size ``<= budget`` iff the partition fails
    verification.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallKWarning)
        inst = Instance(src.vertex_count, 1, src.budget, 1, {e: 1 for e in src.edges})
    return inst, Partition([range(1, src.vertex_count + 1)])


def f_nm(n: int, m: int, x: int) -> int:
    """In-subset pair count of two n-node subsets after x and 2m - x removals."""
    if not (0 <= x <= 2 * m <= n):
        raise InputError(f"need 0 <= x <= 2m <= n, got n={n}, m={m}, x={x}")
    return 2 * math.comb(n, 2) - sum(n - i for i in range(1, x + 1)) - sum(n - j for j in range(1, 2 * m - x + 1))


def reduce_mmvc_to_mm2p(src: MmvcInstance) -> tuple[Instance, GadgetMap]:
    """Complete weighted graph on the source vertices.

    Edge pairs weigh 2, the two sides of one index are tied by ``-L`` with
    ``L = (vertex count)^2``, all other pairs weigh 1.  The source is a yes
    instance iff the result is a defender NO instance.

    With ``2 * budget == side size`` the attacker can empty a whole side, so
    the equivalence needs ``budget <= 1`` or ``2 * budget < side size``.
    """
    n = src.side_size
    m = src.budget
    if 2 * m > n:
        raise InputError(f"need 2 * budget <= side size, got budget={m}, side size={n}")
    total = src.vertex_count
    lam = total * total
    where = src.group_of
    weights = {}
    for u, v in combinations(range(1, total + 1), 2):
        (iu, su), (iv, sv) = where[u], where[v]
        if iu == iv and su != sv:
            weights[(u, v)] = -lam
        elif (u, v) in src.edges:
            weights[(u, v)] = 2
        else:
            weights[(u, v)] = 1
    theta = f_nm(n, m, m) + 1
    inst = Instance(total, 2, 2 * m, theta, weights)
    roles = {v: f"V[{i},{s}]" for v, (i, s) in where.items()}
    gm = GadgetMap(
        kind="mmvc",
        node_roles=roles,
        params={"Lambda": lam, "side_size": n, "budget": m, "theta": theta, "n": total},
        groups={i + 1: g for i, g in enumerate(src.groups)},
    )
    return inst, gm


def check_proper_2partition(inst: Instance, gm: GadgetMap, p: Partition) -> bool:
    """Complete 2-partition that separates the two sides of every index."""
    if gm.kind != "mmvc" or gm.params.get("n") != inst.n or inst.k != 2:
        raise InputError("gadget map does not belong to this k = 2 instance")
    if p.k != 2 or not p.is_complete(inst.n):
        return False
    lab = p.labels(inst.n)
    for side0, side1 in gm.groups.values():
        if any(lab[u] == lab[v] for u in side0 for v in side1):
            return False
    return True


def proper_2partition_for(gm: GadgetMap, choice: dict[int, int]) -> Partition:
    """Subset 1 holds side ``choice[i]`` of every index ``i``, subset 2 the rest."""
    first = [v for i, g in gm.groups.items() for v in g[choice[i]]]
    second = [v for i, g in gm.groups.items() for v in g[1 - choice[i]]]
    return Partition([first, second])


# ---------------------------------------------------------------- k = 3


def normalize_clauses(src: QSatInstance) -> QSatInstance:
    """Split every clause with two X-literals using a fresh Y-variable.

    ``x | x' | y`` becomes ``(x | z | y) & (x' | -z | y)``.  Clauses with three
    X-literals are kept as they are; see ``three_x_clauses``.
    """
    fresh = src.max_var()
    xs = set(src.x_vars)
    ys = list(src.y_vars)
    out = []
    for clause in src.clauses:
        xl = [l for l in clause if abs(l) in xs]
        if len(xl) != 2:
            out.append(clause)
            continue
        (yl,) = [l for l in clause if abs(l) not in xs]
        fresh += 1
        ys.append(fresh)
        out.append((xl[0], fresh, yl))
        out.append((xl[1], -fresh, yl))
    return QSatInstance(src.x_vars, tuple(ys), tuple(out))


def three_x_clauses(src: QSatInstance) -> list[int]:
    """1-based positions of clauses made only of X-literals."""
    return [i for i, c in enumerate(src.clauses, start=1) if len(src.x_literals(c)) == 3]


def _prepare_clauses(src: QSatInstance) -> tuple[QSatInstance, list[str], tuple[int, ...]]:
    """Y-clauses first, then pad until the clause count is even and
    Y-clauses make up fewer than half of it."""
    norm = normalize_clauses(src)
    bad = three_x_clauses(norm)
    if bad:
        clause = norm.clauses[bad[0] - 1]
        raise InputError(f"clause {bad[0]} {clause} has 3 X-literals after normalization")
    log = []
    if norm.clauses != src.clauses:
        log.append(f"normalized {len(src.clauses)} clauses into {len(norm.clauses)}")
    y_clauses = [c for c in norm.clauses if norm.x_literal(c) is None]
    x_clauses = [c for c in norm.clauses if norm.x_literal(c) is not None]
    xs, ys = list(norm.x_vars), list(norm.y_vars)
    padding_vars: list[int] = []
    fresh = norm.max_var()
    if not x_clauses:
        if not ys:
            fresh += 1
            ys.append(fresh)
            log.append(f"added fresh Y-variable {fresh}")
        fresh += 1
        xs.append(fresh)
        padding_vars.append(fresh)
        y = ys[0]
        x_clauses.append((fresh, y, -y))
        log.append(f"added fresh X-variable {fresh} and tautology ({fresh} {y} {-y})")
    originals = list(x_clauses)
    r = 0
    while (len(y_clauses) + len(x_clauses)) % 2 or not 2 * len(y_clauses) < len(y_clauses) + len(x_clauses):
        dup = originals[r % len(originals)]
        x_clauses.append(dup)
        log.append(f"duplicated clause {dup}")
        r += 1
    out = QSatInstance(tuple(xs), tuple(ys), tuple(y_clauses + x_clauses))
    return out, log, tuple(padding_vars)


def reduce_qsat_to_mm3p(src: QSatInstance) -> tuple[Instance, GadgetMap]:
    """Two 4-node tetrads per clause, a 2a-clique K and two half-nodes.

    Node order: tetrads ``N[i,0], N[i,1]`` in clause order, slots (x, y, y', z)
    or (y, y', y'', z) for clauses without an X-literal, then K, then the two
    half-nodes.  The source is a forall-exists yes instance iff the result is
    a defender NO instance.
    """
    qs, log, padding_vars = _prepare_clauses(src)
    clauses = qs.clauses
    alpha = len(clauses)
    half = alpha // 2
    n = 10 * alpha + 2
    m = 2 * alpha
    lam = n * n
    clause_x = tuple(qs.x_literal(c) for c in clauses)

    roles: dict[int, str] = {}
    literal: dict[int, Optional[int]] = {}  # Y-literal carried by a node, if any
    is_x: dict[int, bool] = {}
    tetrads: dict[tuple[int, int], tuple[int, ...]] = {}
    where: dict[int, tuple[int, int]] = {}
    node = 0
    for i, clause in enumerate(clauses, start=1):
        xl = clause_x[i - 1]
        if xl is None:
            slots = [("y", clause[0]), ("y'", clause[1]), ("y''", clause[2])]
        else:
            ylits = list(clause)
            ylits.remove(xl)
            slots = [("x", None), ("y", ylits[0]), ("y'", ylits[1])]
        slots.append(("z", None))
        for j in (0, 1):
            ids = []
            for tag, lit in slots:
                node += 1
                ids.append(node)
                roles[node] = f"{tag}[{i},{j}]"
                literal[node] = lit
                is_x[node] = tag == "x"
                where[node] = (i, j)
            tetrads[(i, j)] = tuple(ids)
    k_nodes = tuple(range(node + 1, node + m + 1))
    for r, v in enumerate(k_nodes, start=1):
        roles[v] = f"K[{r}]"
    v_half1, v_half2 = node + m + 1, node + m + 2
    roles[v_half1] = "v1/2"
    roles[v_half2] = "v2/2"
    assert v_half2 == n

    def starred(a: tuple[int, int], b: tuple[int, int]) -> bool:
        (i, j), (i2, j2) = a, b
        xa, xb = clause_x[i - 1], clause_x[i2 - 1]
        if xa is None and xb is None:
            return j != j2
        if xa is None or xb is None:
            return False
        if xa == xb:
            return j != j2
        if xa == -xb:
            return j == j2
        return False

    weights: dict[tuple[int, int], int] = {}
    one = lam + 1
    for (ta, nodes_a), (tb, nodes_b) in combinations(sorted(tetrads.items()), 2):
        if starred(ta, tb):
            continue
        for u in nodes_a:
            for v in nodes_b:
                lu, lv = literal[u], literal[v]
                weights[(u, v)] = one if lu is not None and lv is not None and lu == -lv else lam
    for (i, j), ids in tetrads.items():
        lits = [v for v in ids if roles[v][0] in "xy"]
        z = ids[3]
        for u, v in combinations(ids, 2):
            if u in lits and v in lits:
                weights[(u, v)] = one
            elif j == 0 and clause_x[i - 1] is not None and {u, v} == {ids[0], z}:
                weights[(u, v)] = one
            else:
                weights[(u, v)] = lam
    t_nodes = [v for ids in tetrads.values() for v in ids]
    for u, v in combinations(k_nodes, 2):
        weights[(u, v)] = lam
    for u in k_nodes:
        for v in t_nodes:
            weights[(v, u)] = lam
    for (i, j), ids in tetrads.items():
        hub = v_half1 if i <= half else v_half2
        for v in ids:
            positive_z = j == 1 and v == ids[3] and clause_x[i - 1] is not None
            weights[(v, hub)] = one if positive_z else lam

    one_links = frozenset(e for e, w in weights.items() if w == one)
    gm = GadgetMap(
        kind="qsat",
        node_roles=roles,
        one_links=one_links,
        padding_log=log,
        source=qs,
        clauses=clauses,
        clause_x=clause_x,
        tetrads=tetrads,
        k_nodes=k_nodes,
        half_nodes=(v_half1, v_half2),
        padding_vars=padding_vars,
    )
    zero = {v: 0 for v in qs.x_vars}
    p0 = _proper_subsets(gm, zero)
    mu1 = count_one_links(gm, p0[1])
    mu2 = count_one_links(gm, p0[2])
    theta = (math.comb(2 * m, 2) + 2 * math.comb(m + 1, 2)) * lam + mu1 + mu2 + 1
    gm.params = {"alpha": alpha, "n": n, "m": m, "Lambda": lam, "mu1": mu1, "mu2": mu2, "theta": theta}
    inst = Instance(n, 3, m, theta, {(min(e), max(e)): w for e, w in weights.items()})
    return inst, gm


def count_one_links(gm: GadgetMap, nodes: Iterable[int]) -> int:
    s = set(nodes)
    return sum(1 for u, v in gm.one_links if u in s and v in s)


def _proper_subsets(gm: GadgetMap, assignment: dict[int, int]) -> tuple[list[int], list[int], list[int]]:
    def side(lit: Optional[int]) -> int:
        if lit is None:
            return 0
        value = assignment[abs(lit)]
        return value if lit > 0 else 1 - value

    half = len(gm.clauses) // 2
    big = list(gm.k_nodes)
    small = [[gm.half_nodes[0]], [gm.half_nodes[1]]]
    for i, lit in enumerate(gm.clause_x, start=1):
        j = side(lit)
        big.extend(gm.tetrads[(i, j)])
        small[0 if i <= half else 1].extend(gm.tetrads[(i, 1 - j)])
    return big, small[0], small[1]


def proper_3partition_for(gm: GadgetMap, p_assign: dict[int, int]) -> Partition:
    """The proper 3-partition for an X assignment; subset sizes 3m, m + 1, m + 1.

    Padding variables introduced by the compiler may be left out (they
    default to 0); every other X-variable must be assigned.
    """
    if gm.kind != "qsat":
        raise InputError("not a k = 3 gadget map")
    full = dict(p_assign)
    for v in gm.source.x_vars:
        if v not in full:
            if v in gm.padding_vars:
                full[v] = 0
            else:
                raise InputError(f"X-variable {v} is unassigned")
        elif full[v] not in (0, 1):
            raise InputError(f"X-variable {v} assigned {full[v]!r}")
    return Partition(_proper_subsets(gm, full))

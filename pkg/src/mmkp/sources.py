"""Source problems of the three reductions: vertex cover, max-min vertex
cover over grouped vertices, and forall-exists 3-SAT."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .core import InputError


def _edge_set(edges: Iterable[Iterable[int]]) -> frozenset[tuple[int, int]]:
    out = set()
    for e in edges:
        u, v = e
        if u == v:
            raise InputError(f"self-loop on vertex {u}")
        out.add((min(u, v), max(u, v)))
    return frozenset(out)


@dataclass(frozen=True)
class VcInstance:
    """Is there a vertex cover with at most ``budget`` vertices?"""

    vertex_count: int
    edges: frozenset
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "edges", _edge_set(self.edges))
        if self.vertex_count < 1:
            raise InputError("vertex count must be positive")
        if not 0 <= self.budget <= self.vertex_count:
            raise InputError(f"budget {self.budget} outside 0..{self.vertex_count}")
        for u, v in self.edges:
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise InputError(f"edge ({u}, {v}) references an unknown vertex")


@dataclass(frozen=True)
class MmvcInstance:
    """Max-min vertex cover: for every side choice ``p`` over the indices, does
    the graph induced by the chosen groups have a cover of size ``<= budget``?

    ``groups[i]`` is the pair ``(V_{i,0}, V_{i,1})`` for index ``i + 1``.
    """

    groups: tuple
    edges: frozenset
    budget: int

    def __post_init__(self):
        groups = tuple((tuple(sorted(a)), tuple(sorted(b))) for a, b in self.groups)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "edges", _edge_set(self.edges))
        if not groups:
            raise InputError("need at least one index")
        size = len(groups[0][0])
        if size < 1 or any(len(a) != size or len(b) != size for a, b in groups):
            raise InputError("all groups must have the same positive size")
        seen = [v for a, b in groups for v in a + b]
        if sorted(seen) != list(range(1, len(seen) + 1)):
            raise InputError("groups must partition the vertices 1..count")
        where = self.group_of
        for u, v in self.edges:
            if u not in where or v not in where:
                raise InputError(f"edge ({u}, {v}) references an unknown vertex")
            (iu, su), (iv, sv) = where[u], where[v]
            if iu == iv and su != sv:
                raise InputError(f"edge ({u}, {v}) joins the two sides of index {iu}")
        if self.budget < 0:
            raise InputError("negative budget")

    @classmethod
    def standard(cls, index_count: int, group_size: int, edges=(), budget: int = 0) -> "MmvcInstance":
        """Groups laid out as consecutive vertex blocks (1,0), (1,1), (2,0), ..."""
        groups = []
        for i in range(index_count):
            base = 2 * i * group_size
            groups.append((range(base + 1, base + group_size + 1),
                           range(base + group_size + 1, base + 2 * group_size + 1)))
        return cls(tuple(groups), frozenset(edges), budget)

    @property
    def index_count(self) -> int:
        return len(self.groups)

    @property
    def group_size(self) -> int:
        return len(self.groups[0][0])

    @property
    def side_size(self) -> int:
        """Vertices selected by any side choice."""
        return self.index_count * self.group_size

    @property
    def vertex_count(self) -> int:
        return 2 * self.side_size

    @property
    def group_of(self) -> dict[int, tuple[int, int]]:
        """vertex -> (1-based index, side)."""
        return {v: (i + 1, side) for i, g in enumerate(self.groups) for side in (0, 1) for v in g[side]}

    def chosen_vertices(self, choice: dict[int, int]) -> tuple[int, ...]:
        return tuple(sorted(v for i, g in enumerate(self.groups) for v in g[choice[i + 1]]))


@dataclass(frozen=True)
class QSatInstance:
    """Forall-exists 3-CNF.  Literals are signed variable ids, as in DIMACS."""

    x_vars: tuple
    y_vars: tuple
    clauses: tuple

    def __post_init__(self):
        xs = tuple(sorted(set(self.x_vars)))
        ys = tuple(sorted(set(self.y_vars)))
        object.__setattr__(self, "x_vars", xs)
        object.__setattr__(self, "y_vars", ys)
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        if set(xs) & set(ys):
            raise InputError("a variable is both universal and existential")
        if any(v <= 0 for v in xs + ys):
            raise InputError("variable ids must be positive")
        known = set(xs) | set(ys)
        for idx, c in enumerate(self.clauses, start=1):
            if len(c) != 3:
                raise InputError(f"clause {idx} has {len(c)} literals, expected 3")
            for lit in c:
                if lit == 0 or abs(lit) not in known:
                    raise InputError(f"clause {idx} uses undeclared literal {lit}")

    def x_literals(self, clause) -> list[int]:
        xs = set(self.x_vars)
        return [l for l in clause if abs(l) in xs]

    def x_literal(self, clause) -> Optional[int]:
        lits = self.x_literals(clause)
        if len(lits) > 1:
            raise InputError(f"clause {clause} has {len(lits)} X-literals")
        return lits[0] if lits else None

    def max_var(self) -> int:
        return max(self.x_vars + self.y_vars, default=0)


def literal_true(lit: int, assignment: dict[int, int]) -> bool:
    value = assignment[abs(lit)]
    return bool(value) if lit > 0 else not value

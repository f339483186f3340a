"""Data model and evaluation semantics for max-min k-partition instances.

Nodes are the integers ``1..n``.  Weights are symmetric and integral; a pair
that is absent from the weight map has weight zero.  A partition is a fixed
number ``k`` of pairwise-disjoint node subsets, possibly leaving some nodes
unassigned.  The value of a partition is the total weight of node pairs that
share a subset, or ``NEG_INF`` as soon as one of the subsets is empty.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

WEIGHT_LIMIT = 2**62


class InputError(ValueError):
    """Raised for malformed instances, partitions or attack sets."""


class SmallKWarning(UserWarning):
    """Emitted for k = 1 instances, which fall outside the usual 2 <= k domain."""


@functools.total_ordering
class _NegInf:
    """Value of a partition that has an empty subset.  Below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("mmkp.NEG_INF")

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()

Value = Union[int, _NegInf]


def format_value(value: Value) -> str:
    return "-inf" if value is NEG_INF else str(int(value))


def parse_value(text: str) -> Value:
    return NEG_INF if text == "-inf" else int(text)


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Instance:
    """A max-min k-partition instance.

    ``weights`` may be given with pairs in either orientation; it is stored
    with ``i < j`` keys and zero entries dropped.
    """

    n: int
    k: int
    m: int
    theta: int
    weights: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        n, k, m = self.n, self.k, self.m
        if n < 1:
            raise InputError(f"node count must be positive, got {n}")
        if not 1 <= k <= n:
            raise InputError(f"need 1 <= k <= n, got k={k}, n={n}")
        if k == 1:
            warnings.warn("k = 1 instance", SmallKWarning, stacklevel=3)
        if not 0 <= m <= n:
            raise InputError(f"need 0 <= m <= n, got m={m}, n={n}")
        clean: dict[tuple[int, int], int] = {}
        for (i, j), w in self.weights.items():
            if i == j:
                raise InputError(f"self-loop weight on node {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise InputError(f"pair ({i}, {j}) out of range 1..{n}")
            key = _pair(i, j)
            w = int(w)
            if key in clean and clean[key] != w:
                raise InputError(f"conflicting weights for pair {key}")
            if w != 0:
                clean[key] = w
        total = sum(abs(w) for w in clean.values())
        if total >= WEIGHT_LIMIT or abs(self.theta) >= WEIGHT_LIMIT:
            raise InputError("weight magnitudes exceed the 2^62 limit")
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    def weight(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self.weights.get(_pair(i, j), 0)

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        """Dense symmetric ``(n + 1) x (n + 1)`` int64 matrix; row/column 0 unused."""
        a = np.zeros((self.n + 1, self.n + 1), dtype=np.int64)
        for (i, j), w in self.weights.items():
            a[i, j] = a[j, i] = w
        a.setflags(write=False)
        return a

    @functools.cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        """Plain-Python dense rows, same layout as ``matrix``."""
        return tuple(tuple(int(x) for x in row) for row in self.matrix)

    def nodes(self) -> range:
        return range(1, self.n + 1)

    def replace(self, **changes) -> "Instance":
        data = dict(n=self.n, k=self.k, m=self.m, theta=self.theta, weights=self.weights)
        data.update(changes)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmallKWarning)
            return Instance(**data)


def _canonical_subsets(subsets: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    seen: set[int] = set()
    out = []
    for s in subsets:
        nodes = tuple(sorted(set(int(v) for v in s)))
        for v in nodes:
            if v in seen:
                raise InputError(f"node {v} appears in more than one subset")
            seen.add(v)
        out.append(nodes)
    out.sort(key=lambda s: (len(s) == 0, s[0] if s else 0))
    return tuple(out)


@dataclass(frozen=True, order=True)
class Partition:
    """Unordered collection of disjoint node subsets, kept in canonical form:
    subsets sorted by smallest node, nodes ascending, empty subsets last."""

    subsets: tuple[tuple[int, ...], ...]

    def __init__(self, subsets: Iterable[Iterable[int]]):
        object.__setattr__(self, "subsets", _canonical_subsets(subsets))

    @property
    def k(self) -> int:
        return len(self.subsets)

    def __iter__(self):
        return iter(self.subsets)

    def __len__(self):
        return len(self.subsets)

    def assigned(self) -> set[int]:
        return {v for s in self.subsets for v in s}

    def is_complete(self, n: int) -> bool:
        return len(self.assigned()) == n

    def labels(self, n: int) -> list[int]:
        """Subset index per node (index 0 unused), -1 for unassigned nodes."""
        lab = [-1] * (n + 1)
        for idx, s in enumerate(self.subsets):
            for v in s:
                lab[v] = idx
        return lab

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.subsets) + "}"


def canonicalize(p: Union[Partition, Iterable[Iterable[int]]]) -> Partition:
    if isinstance(p, Partition):
        p = p.subsets
    return Partition(p)


def _check_nodes(inst: Instance, nodes: Iterable[int]) -> None:
    for v in nodes:
        if not 1 <= v <= inst.n:
            raise InputError(f"node {v} out of range 1..{inst.n}")


def check_partition(inst: Instance, p: Partition) -> None:
    if p.k != inst.k:
        raise InputError(f"partition has {p.k} subsets, instance expects k={inst.k}")
    _check_nodes(inst, p.assigned())


def subset_weight(inst: Instance, S: Iterable[int]) -> int:
    nodes = sorted(set(S))
    _check_nodes(inst, nodes)
    rows = inst.rows
    total = 0
    for a, i in enumerate(nodes):
        row = rows[i]
        for j in nodes[a + 1:]:
            total += row[j]
    return total


def partition_value(inst: Instance, p: Partition) -> Value:
    check_partition(inst, p)
    if any(len(s) == 0 for s in p.subsets):
        return NEG_INF
    return sum(subset_weight(inst, s) for s in p.subsets)


def apply_attack(p: Partition, M: Iterable[int]) -> Partition:
    removed = set(M)
    return Partition([v for v in s if v not in removed] for s in p.subsets)


def deficit(p: Partition, m: int) -> int:
    return sum(max(0, m + 1 - len(s)) for s in p.subsets)

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmkp.core import (
    NEG_INF,
    InputError,
    Instance,
    Partition,
    apply_attack,
    canonicalize,
    deficit,
    format_value,
    parse_value,
    partition_value,
    subset_weight,
)


@pytest.fixture
def triangle():
    return Instance(3, 2, 1, 0, {(1, 2): 2, (1, 3): 1, (2, 3): -1})


def test_subset_weight_examples(triangle):
    assert subset_weight(triangle, {1, 2, 3}) == 2
    assert subset_weight(Instance(5, 2, 0, 0), {5}) == 0
    assert subset_weight(triangle, set()) == 0


def test_subset_weight_rejects_unknown_node(triangle):
    with pytest.raises(InputError):
        subset_weight(triangle, {1, 4})


def test_partition_value_examples():
    inst = Instance(3, 2, 1, 0, {(1, 2): 5})
    assert partition_value(inst, Partition([[1, 2], [3]])) == 5
    assert partition_value(inst, Partition([[1, 2, 3], []])) is NEG_INF
    ones = Instance(4, 2, 1, 0, {p: 1 for p in itertools.combinations(range(1, 5), 2)})
    assert partition_value(ones, Partition([[1], [2]])) == 0


def test_partition_value_checks_subset_count(triangle):
    with pytest.raises(InputError):
        partition_value(triangle, Partition([[1], [2], [3]]))


def test_overlap_rejected():
    with pytest.raises(InputError):
        Partition([[1, 2], [2, 3]])


def test_apply_attack_examples():
    assert apply_attack(Partition([[1, 2], [3, 4]]), {2, 3}) == Partition([[1], [4]])
    p = Partition([[1, 2], [3, 4]])
    assert apply_attack(p, set()) == p
    out = apply_attack(Partition([[1], [2, 3]]), {1})
    assert out.subsets == ((2, 3), ())


def test_deficit_examples():
    assert deficit(Partition([[1], [2, 3]]), 1) == 1
    assert deficit(Partition([[1], [2, 3]]), 0) == 0
    assert deficit(Partition([[], [1]]), 2) == 5


def test_canonicalize_examples():
    assert canonicalize([[3, 4], [1, 2]]).subsets == ((1, 2), (3, 4))
    p = Partition([[1, 2], [3, 4]])
    assert canonicalize(p) == p
    assert canonicalize([[2], [], [1]]).subsets == ((1,), (2,), ())


def test_neg_inf_ordering():
    assert NEG_INF < -10**30
    assert not NEG_INF > 0
    assert min(3, NEG_INF, -7) is NEG_INF
    assert NEG_INF == NEG_INF and NEG_INF != 0
    assert format_value(NEG_INF) == "-inf" and parse_value("-inf") is NEG_INF
    assert parse_value(format_value(-12)) == -12


def test_instance_validation():
    with pytest.raises(InputError):
        Instance(3, 4, 0, 0)
    with pytest.raises(InputError):
        Instance(3, 2, 4, 0)
    with pytest.raises(InputError):
        Instance(3, 2, 0, 0, {(1, 1): 3})
    with pytest.raises(InputError):
        Instance(3, 2, 0, 0, {(1, 2): 3, (2, 1): 4})
    with pytest.raises(InputError):
        Instance(3, 2, 0, 0, {(1, 2): 2**62})
    inst = Instance(3, 2, 0, 0, {(2, 1): 3, (1, 3): 0})
    assert inst.weights == {(1, 2): 3}
    assert inst.weight(2, 1) == 3 and inst.weight(1, 3) == 0


# ---------------------------------------------------------------- properties


@st.composite
def instances(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    ws = draw(st.lists(st.integers(-5, 5), min_size=len(pairs), max_size=len(pairs)))
    return Instance(n, 2, 1, 0, dict(zip(pairs, ws)))


@given(instances(), st.data())
def test_subset_weight_additive(inst, data):
    labels = data.draw(st.lists(st.integers(0, 2), min_size=inst.n, max_size=inst.n))
    S = {v for v, c in zip(inst.nodes(), labels) if c == 0}
    T = {v for v, c in zip(inst.nodes(), labels) if c == 1}
    cross = sum(inst.weight(i, j) for i in S for j in T)
    assert subset_weight(inst, S | T) == subset_weight(inst, S) + subset_weight(inst, T) + cross


@given(instances(), st.data())
def test_value_ignores_subset_order(inst, data):
    labels = data.draw(st.lists(st.integers(-1, 1), min_size=inst.n, max_size=inst.n))
    subsets = [[v for v, c in zip(inst.nodes(), labels) if c == idx] for idx in (0, 1)]
    assert partition_value(inst, Partition(subsets)) == partition_value(inst, Partition(subsets[::-1]))


@given(st.lists(st.integers(0, 3), min_size=6, max_size=6), st.sets(st.integers(1, 6)), st.sets(st.integers(1, 6)))
def test_attack_composition(labels, m1, m2):
    p = Partition([[v for v in range(1, 7) if labels[v - 1] == c] for c in range(3)])
    assert apply_attack(apply_attack(p, m1), m2) == apply_attack(p, m1 | m2)


@given(instances(), st.data())
def test_covering_attack_gives_neg_inf(inst, data):
    labels = data.draw(st.lists(st.integers(0, 1), min_size=inst.n, max_size=inst.n))
    p = Partition([[v for v, c in zip(inst.nodes(), labels) if c == idx] for idx in (0, 1)])
    victim = p.subsets[data.draw(st.integers(0, 1))]
    extra = data.draw(st.sets(st.sampled_from(list(inst.nodes()))))
    assert partition_value(inst, apply_attack(p, set(victim) | extra)) is NEG_INF


@settings(max_examples=60)
@given(st.lists(st.integers(-1, 2), min_size=6, max_size=6), st.integers(0, 3))
def test_positive_deficit_allows_emptying(labels, m):
    inst = Instance(6, 3, m, 0, {(1, 2): 1, (3, 4): 2})
    p = Partition([[v for v in range(1, 7) if labels[v - 1] == c] for c in range(3)])
    emptying = any(
        partition_value(inst, apply_attack(p, M)) is NEG_INF
        for size in range(m + 1)
        for M in itertools.combinations(range(1, 7), size)
    )
    if deficit(p, m) > 0:
        assert emptying
    else:
        assert not emptying

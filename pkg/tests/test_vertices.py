"""Closed-form extremal boxes: construction, validity, locality, extremality."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nsbox import (
    JointBox,
    LocalLabel,
    NonlocalLabel,
    Scenario,
    convex_decomposition,
    deterministic_box,
    deterministic_strategies,
    embed,
    enumerate_vertices,
    exact_rank,
    is_local,
    is_valid_box,
    local_vertex,
    marginal,
    nonlocal_entry_fn,
    nonlocal_vertex,
    polytope_dimension,
    uniform_box,
)

F = Fraction


def pr_box() -> JointBox:
    return nonlocal_vertex(Scenario.symmetric(2), (0, 0, 0))


# ---------------------------------------------------------------------------
# closed forms


def test_local_vertex_constant_strategy():
    box = local_vertex(Scenario.symmetric(2), (0, 0, 0, 0))
    for x, y in itertools.product((0, 1), repeat=2):
        assert box.prob(x, y, 0, 0) == 1


def test_local_vertex_input_dependent_alice():
    box = local_vertex(Scenario.symmetric(2), (1, 0, 0, 0))
    support = [(x, y, a, b) for (x, y, a, b) in box.scenario.coords() if box.prob(x, y, a, b)]
    # Alice answers 0 on input 0 and 1 on input 1; Bob always answers 0
    assert support == [(0, 0, 0, 0), (0, 1, 0, 0), (1, 0, 1, 0), (1, 1, 1, 0)]


def test_local_vertex_offset_arithmetic_d3():
    box = local_vertex(Scenario.symmetric(3), (2, 1, 0, 0))
    # a = (2x + 1) mod 3: outcome 1 on input 0, outcome 0 on input 1
    assert marginal(box, "A", 0, 1) == 1
    assert marginal(box, "A", 1, 0) == 1


def test_pr_box_table():
    pr = pr_box()
    # correlated on three input pairs, anticorrelated on (1, 1), weight 1/2
    for x, y in ((0, 0), (0, 1), (1, 0)):
        assert pr.prob(x, y, 0, 0) == F(1, 2) and pr.prob(x, y, 1, 1) == F(1, 2)
        assert pr.prob(x, y, 0, 1) == 0 and pr.prob(x, y, 1, 0) == 0
    assert pr.prob(1, 1, 0, 1) == F(1, 2) and pr.prob(1, 1, 1, 0) == F(1, 2)
    assert pr.prob(1, 1, 0, 0) == 0


def test_nonlocal_vertex_congruence_d3():
    box = nonlocal_vertex(Scenario.symmetric(3), (0, 0, 1))
    cells = [(a, b) for a in range(3) for b in range(3) if box.prob(0, 0, a, b)]
    assert cells == [(0, 1), (1, 2), (2, 0)]  # (b - a) mod 3 == 1
    assert all(box.prob(0, 0, a, b) == F(1, 3) for a, b in cells)


def test_label_validation():
    s = Scenario.symmetric(2)
    with pytest.raises(ValueError):
        local_vertex(s, (2, 0, 0, 0))
    with pytest.raises(ValueError):
        local_vertex(s, (0, 0, 0))
    with pytest.raises(ValueError):
        nonlocal_vertex(s, (0, 0, -1))
    asym = Scenario.from_dims([2, 3, 4, 5])
    with pytest.raises(ValueError):
        nonlocal_vertex(asym, (2, 0, 0))  # range is min over the four inputs


def test_every_label_yields_a_valid_box():
    for d in (2, 3, 4, 5, 6):
        s = Scenario.symmetric(d)
        for label in itertools.product(range(d), repeat=4):
            assert is_valid_box(local_vertex(s, label)).ok
        for label in itertools.product(range(d), repeat=3):
            assert is_valid_box(nonlocal_vertex(s, label)).ok
    asym = Scenario.from_dims([2, 3, 2, 3])
    for label in itertools.product(range(2), repeat=3):
        box = nonlocal_vertex(asym, label)
        assert is_valid_box(box).ok
        assert marginal(box, "B", 1, 2) == 0  # outcomes beyond the reduced range


def test_enumeration_counts_and_dedup():
    s2 = Scenario.symmetric(2)
    assert len(enumerate_vertices(s2, "local")) == 16
    assert len(enumerate_vertices(s2, "nonlocal")) == 8
    both = enumerate_vertices(s2, "all")
    assert len(both) == 24
    tables = {box.table for _label, box in both}
    assert len(tables) == 24  # distinct as tables, not just as labels
    assert all(isinstance(lab, LocalLabel) for lab, _ in both[:16])
    assert all(isinstance(lab, NonlocalLabel) for lab, _ in both[16:])

    s3 = Scenario.symmetric(3)
    assert len(enumerate_vertices(s3, "local")) == 81
    assert len(enumerate_vertices(s3, "nonlocal")) == 27


def test_local_family_is_complete_over_reduced_range():
    # at d = 2 and 3 the affine labels hit every deterministic strategy whose
    # answers stay within the first d outcomes, exactly once
    for d in (2, 3):
        s = Scenario.symmetric(d)
        family = {local_vertex(s, label).table
                  for label in itertools.product(range(d), repeat=4)}
        direct = {deterministic_box(s, fa, fb).table
                  for fa in itertools.product(range(d), repeat=2)
                  for fb in itertools.product(range(d), repeat=2)}
        assert family == direct
        assert len(family) == d ** 4


# ---------------------------------------------------------------------------
# locality


def test_local_vertices_are_local():
    s = Scenario.symmetric(2)
    for label in itertools.product(range(2), repeat=4):
        assert is_local(local_vertex(s, label))


def test_nonlocal_vertices_are_nonlocal():
    for d in (2, 3, 4):
        s = Scenario.symmetric(d)
        for label in itertools.product(range(d), repeat=3):
            assert not is_local(nonlocal_vertex(s, label)), (d, label)


def test_uniform_box_is_local_with_explicit_mixture():
    s = Scenario.symmetric(2)
    u = uniform_box(s)
    assert is_local(u)
    # independent oracle: the equal mixture of all deterministic strategies
    # reproduces the uniform table exactly
    strategies = list(deterministic_strategies(s))
    weight = F(1, len(strategies))
    mixed = [F(0)] * s.num_coords
    for fa, fb in strategies:
        for i, p in enumerate(deterministic_box(s, fa, fb).table):
            mixed[i] += weight * p
    assert tuple(mixed) == u.table


def test_is_local_rejects_invalid_boxes():
    s = Scenario.symmetric(2)
    table = list(pr_box().table)
    table[0] += F(1, 8)
    with pytest.raises(ValueError, match="invalid box"):
        is_local(JointBox(s, tuple(table)))


# ---------------------------------------------------------------------------
# embedding


def test_embed_pr_into_three_outcomes():
    target = Scenario.symmetric(3)
    big = embed(pr_box(), target)
    assert is_valid_box(big).ok
    assert marginal(big, "A", 0, 2) == 0 and marginal(big, "B", 1, 2) == 0
    assert big.prob(0, 0, 0, 0) == F(1, 2)
    assert not is_local(big)  # embedding cannot make a nonlocal box local


def test_embed_keeps_local_boxes_local():
    small = local_vertex(Scenario.symmetric(2), (1, 1, 0, 1))
    assert is_local(embed(small, Scenario.from_dims([3, 2, 2, 4])))


def test_embed_cannot_shrink():
    with pytest.raises(ValueError):
        embed(uniform_box(Scenario.symmetric(3)), Scenario.symmetric(2))


# ---------------------------------------------------------------------------
# extremality and affine rank


def test_affine_rank_of_vertex_set_matches_dimension():
    for d in (2, 3):
        s = Scenario.symmetric(d)
        boxes = [box for _label, box in enumerate_vertices(s, "all")]
        anchor = boxes[0].table
        diffs = [[p - q for p, q in zip(box.table, anchor)] for box in boxes[1:]]
        assert exact_rank(diffs) == polytope_dimension(s)


def test_nonlocal_d2_vertices_are_extremal():
    s = Scenario.symmetric(2)
    everything = enumerate_vertices(s, "all")
    for k in range(16, 24):
        target = everything[k][1]
        others = [box for i, (_lab, box) in enumerate(everything) if i != k]
        assert convex_decomposition(target, others) is None


def test_convex_decomposition_positive_control():
    s = Scenario.symmetric(2)
    u = uniform_box(s)
    locals_only = [box for _lab, box in enumerate_vertices(s, "local")]
    weights = convex_decomposition(u, locals_only)
    assert weights is not None
    assert sum(weights) == 1 and all(w >= 0 for w in weights)
    rebuilt = [F(0)] * s.num_coords
    for w, box in zip(weights, locals_only):
        if w:
            for i, p in enumerate(box.table):
                rebuilt[i] += w * p
    assert tuple(rebuilt) == u.table


def test_convex_decomposition_scenario_mismatch():
    with pytest.raises(ValueError):
        convex_decomposition(uniform_box(Scenario.symmetric(2)),
                             [uniform_box(Scenario.symmetric(3))])


# ---------------------------------------------------------------------------
# randomized structural checks


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(2, 4), st.integers(2, 4), st.integers(2, 4), st.integers(2, 4)),
       st.integers(0, 63))
def test_random_nonlocal_labels_are_valid_and_uniform(dims, seed):
    s = Scenario.from_dims(list(dims))
    d = s.min_outputs
    label = (seed % d, (seed // d) % d, (seed // (d * d)) % d)
    box = nonlocal_vertex(s, label)
    assert is_valid_box(box).ok
    entry = nonlocal_entry_fn(s, label)
    assert all(box.prob(x, y, a, b) == entry(x, y, a, b) for (x, y, a, b) in s.coords())
    for a in range(d):
        assert marginal(box, "A", 0, a) == F(1, d)
    for a in range(d, s.alice[0]):
        assert marginal(box, "A", 0, a) == 0

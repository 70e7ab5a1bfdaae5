from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from mereology import (
    BehaviorType,
    EmptySystemError,
    MereologyError,
    NotSurjectiveError,
    Part,
    SystemMismatchError,
    bottom,
    compatible,
    compatible_family,
    determines,
    disjoint,
    join,
    meet,
    observationally_equivalent,
    part_determines,
    part_from_observation,
    part_leq,
    part_order_conditions,
    render_label,
    restrict,
    same_partition,
    strongly_disjoint,
    top,
)
from mereology import oracle

from .conftest import systems_with_parts


def labels(n):
    return BehaviorType([f"s{i}" for i in range(n)], id=f"S{n}")


def index_of(part, **values):
    return part.index(tuple(values.items()))


# --- behavior types and parts -------------------------------------------------


def test_behavior_type_rejects_duplicates_and_empty():
    with pytest.raises(MereologyError):
        BehaviorType(["a", "a"])
    with pytest.raises(EmptySystemError):
        BehaviorType([])


def test_part_must_be_surjective():
    s = labels(3)
    with pytest.raises(NotSurjectiveError):
        Part(s, BehaviorType(["x", "y", "z"]), [0, 0, 1])
    with pytest.raises(MereologyError):
        Part(s, BehaviorType(["x"]), [0, 0])
    with pytest.raises(MereologyError):
        Part(s, BehaviorType(["x"]), [0, 0, 1])


def test_restrict_top_and_bottom():
    s = labels(5)
    assert restrict(top(s), 3) == 3
    assert all(restrict(bottom(s), i) == 0 for i in range(5))
    with pytest.raises(IndexError):
        restrict(top(s), 5)


def test_restrict_bicycle_projection(bicycle):
    pedal = bicycle.parts["Pedal"]
    s = bicycle.system.index((("p", F(1)), ("w", F(4))))
    assert pedal.codomain[restrict(pedal, s)] == (("p", F(1)),)


def test_observational_equivalence():
    s = labels(4)
    assert observationally_equivalent(top(s), 2, 2)
    assert not observationally_equivalent(top(s), 1, 2)
    assert observationally_equivalent(bottom(s), 0, 3)


def test_part_from_observation(water):
    w3 = part_from_observation(water.system, lambda b: dict(b)["T"][3])
    # independently: the distinct T_3 values in trajectory order
    seen = []
    for b in water.system:
        t3 = dict(b)["T"][3]
        if t3 not in seen:
            seen.append(t3)
    assert list(w3.codomain) == seen
    assert same_partition(w3, water.parts["Water_3"])
    assert same_partition(part_from_observation(water.system, lambda b: 0), bottom(water.system))
    assert same_partition(part_from_observation(water.system, lambda b: b), top(water.system))


def test_top_and_bottom_sizes():
    s = labels(5)
    assert len(top(s)) == 5
    assert len(bottom(s)) == 1
    assert part_leq(bottom(s), top(s)) is not None


def test_render_label():
    assert render_label((("p", F(1)), ("w", F(5, 2)))) == "(p=1, w=2.5)"
    assert render_label((("T", (F(1, 3), F(2))),)) == "(T=[1/3, 2])"
    assert render_label(F(-1, 8)) == "-0.125"
    assert render_label("tok") == "tok"


# --- part order ---------------------------------------------------------------


def test_everything_between_bottom_and_top(bicycle):
    for p in bicycle.parts.values():
        assert part_leq(p, bicycle.parts["Top"]) is not None
        assert part_leq(bicycle.parts["Bottom"], p) is not None


def test_pedal_not_below_wheel(bicycle):
    pedal, wheel = bicycle.parts["Pedal"], bicycle.parts["Wheel"]
    assert part_leq(pedal, wheel) is None
    # independently: two grid points with equal w but distinct p
    pts = [dict(b) for b in bicycle.system]
    assert any(a["w"] == b["w"] and a["p"] != b["p"] for a in pts for b in pts)


def test_witness_commutes_and_is_surjective(water):
    w = part_leq(water.parts["Water_1"], water.parts["Water_0"])
    assert w is not None
    assert np.array_equal(w.factor[water.parts["Water_0"].map], water.parts["Water_1"].map)
    assert set(w.factor) == set(range(len(water.parts["Water_1"])))


def test_mismatched_systems_rejected():
    a, b = labels(2), labels(3)
    with pytest.raises(SystemMismatchError):
        part_leq(top(a), top(b))
    with pytest.raises(SystemMismatchError):
        meet(top(a), top(b))
    with pytest.raises(SystemMismatchError):
        compatible(top(a), 0, top(b), 0)


@settings(max_examples=150, deadline=None)
@given(systems_with_parts(3))
def test_part_order_is_a_preorder(data):
    _, (p, q, r) = data
    assert part_leq(p, p) is not None
    if part_leq(p, q) is not None and part_leq(q, r) is not None:
        assert part_leq(p, r) is not None
    assert (part_leq(p, q) is not None) == oracle.oracle_part_leq(p, q)


@settings(max_examples=150, deadline=None)
@given(systems_with_parts(2))
def test_witness_is_unique(data):
    _, (p, q) = data
    w = part_leq(q, p)
    if w is None:
        return
    # any factor map must send a P-class to the Q-image of each of its members
    for a, fiber in enumerate(p.fibers):
        assert {q.map[s] for s in fiber} == {w.factor[a]}


# --- lattice ------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(systems_with_parts(3))
def test_meet_join_bounds_and_universality(data):
    _, (p, q, r) = data
    m, j = meet(p, q), join(p, q)
    assert part_leq(m, p) and part_leq(m, q)
    assert part_leq(p, j) and part_leq(q, j)
    if part_leq(r, p) and part_leq(r, q):
        assert part_leq(r, m)
    if part_leq(p, r) and part_leq(q, r):
        assert part_leq(j, r)


@settings(max_examples=100, deadline=None)
@given(systems_with_parts(1))
def test_lattice_units_and_idempotence(data):
    s, (p,) = data
    assert same_partition(meet(p, p), p)
    assert same_partition(join(p, p), p)
    assert same_partition(meet(p, top(s)), p)
    assert same_partition(join(p, bottom(s)), p)


def test_bicycle_join_is_top(bicycle):
    assert same_partition(join(bicycle.parts["Pedal"], bicycle.parts["Wheel"]), bicycle.parts["Top"])


def test_ecosystem_meet_is_bottom(ecosystem):
    m = meet(ecosystem.parts["Fox_0"], ecosystem.parts["Rabbit_0"])
    assert same_partition(m, ecosystem.parts["Bottom"])


def test_meet_uses_generated_equivalence():
    # a ~ b through the chain s0-s1-s2 although no single behavior links the ends
    s = labels(3)
    p = Part(s, BehaviorType(["x", "y"]), [0, 0, 1])
    q = Part(s, BehaviorType(["u", "v"]), [0, 1, 1])
    assert len(meet(p, q)) == 1
    assert same_partition(meet(p, q), oracle.oracle_meet(p, q))


# --- relations ----------------------------------------------------------------


def test_bicycle_compatibility(bicycle):
    pedal, wheel = bicycle.parts["Pedal"], bicycle.parts["Wheel"]
    p1 = index_of(pedal, p=F(1))
    assert compatible(pedal, p1, wheel, index_of(wheel, w=F(4)))
    assert not compatible(pedal, p1, wheel, index_of(wheel, w=F(1)))


def test_ecosystem_initial_populations_compatible(ecosystem):
    fox, rabbit = ecosystem.parts["Fox_0"], ecosystem.parts["Rabbit_0"]
    assert all(compatible(fox, a, rabbit, b) for a in range(len(fox)) for b in range(len(rabbit)))
    assert strongly_disjoint(fox, rabbit) and disjoint(fox, rabbit)


def test_water_compatibility_and_determination(water):
    w0, w1 = water.parts["Water_0"], water.parts["Water_1"]
    t0 = w0.index(F(10))
    # T_1 = T_0 + k (R - T_0) = 10 + (20 - 10)/2
    assert compatible(w0, t0, w1, w1.index(F(15)))
    assert F(16) not in w1.codomain
    assert determines(w0, t0, w1, w1.index(F(15)))


def test_water_frozen_dynamics():
    from mereology import build_water

    model = build_water(k=0)
    for t in range(1, 7):
        assert same_partition(model.parts[f"Water_{t}"], model.parts["Water_0"])


def test_compatible_family(bicycle):
    pedal, wheel, whole = bicycle.parts["Pedal"], bicycle.parts["Wheel"], bicycle.parts["Top"]
    assert compatible_family([])
    assert compatible_family([(pedal, 3)])
    point = whole.index((("p", F(1)), ("w", F(4))))
    fam = [(pedal, index_of(pedal, p=F(1))), (wheel, index_of(wheel, w=F(4))), (whole, point)]
    assert compatible_family(fam)
    assert compatible_family(fam) == oracle.oracle_compatible_family(fam)
    fam[1] = (wheel, index_of(wheel, w=F(1)))
    assert not compatible_family(fam)


def test_determination_trivia(bicycle):
    pedal, wheel, whole = bicycle.parts["Pedal"], bicycle.parts["Wheel"], bicycle.parts["Top"]
    assert determines(pedal, 2, pedal, 2)
    assert determines(whole, 17, wheel, restrict(wheel, 17))
    assert part_determines(whole, pedal)
    assert part_determines(pedal, bicycle.parts["Bottom"])
    assert not part_determines(wheel, pedal)


@settings(max_examples=200, deadline=None)
@given(systems_with_parts(2))
def test_determination_is_unique(data):
    _, (p, q) = data
    for a in range(len(p)):
        assert sum(determines(p, a, q, b) for b in range(len(q))) <= 1


@settings(max_examples=200, deadline=None)
@given(systems_with_parts(2))
def test_part_order_conditions_agree(data):
    _, (p, q) = data
    conds = part_order_conditions(p, q)
    assert len(set(conds)) == 1
    assert conds[0] == oracle.oracle_part_leq(q, p)


def test_part_order_conditions_examples(bicycle):
    whole, pedal, wheel = (bicycle.parts[n] for n in ("Top", "Pedal", "Wheel"))
    assert part_order_conditions(whole, wheel) == (True,) * 4
    assert part_order_conditions(pedal, pedal) == (True,) * 4
    assert part_order_conditions(wheel, pedal) == (False,) * 4


@settings(max_examples=200, deadline=None)
@given(systems_with_parts(2))
def test_compatibility_symmetric_and_disjointness(data):
    _, (p, q) = data
    for a in range(len(p)):
        for b in range(len(q)):
            assert compatible(p, a, q, b) == compatible(q, b, p, a)
    if strongly_disjoint(p, q):
        assert disjoint(p, q)


def test_disjointness_trivia():
    s = labels(2)
    assert not disjoint(top(s), top(s))
    assert not strongly_disjoint(top(s), top(s))


def test_kernel_is_equivalence(bicycle):
    p = bicycle.parts["Wheel"]
    n = len(bicycle.system)
    k = p.map[:, None] == p.map[None, :]
    assert k.diagonal().all() and np.array_equal(k, k.T)
    assert not ((k.astype(int) @ k.astype(int) > 0) & ~k).any()
    assert k.shape == (n, n)

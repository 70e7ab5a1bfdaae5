from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mereology import (
    BehaviorType,
    CarrierMismatchError,
    Constraint,
    MereologyError,
    allows,
    bottom,
    compatible,
    determines,
    ensures,
    entails,
    exists_along,
    forall_along,
    kripke_modalities,
    necessity,
    part_leq,
    point_constraint,
    possibility,
    pullback_along,
    roundtrip_allows,
    roundtrip_ensures,
    top,
)
from mereology import oracle

from .conftest import part_with_constraint, systems_with_parts


def constraint(part, bits):
    return Constraint(part.codomain, bits)


def on(part, pred):
    return Constraint.from_predicate(part.codomain, pred)


# --- entailment and the adjoint triple ---------------------------------------


def test_entails_basics(bicycle):
    wheel = bicycle.parts["Wheel"]
    le2 = on(wheel, lambda b: dict(b)["w"] <= 2)
    le1 = on(wheel, lambda b: dict(b)["w"] <= 1)
    assert entails(le2, le2)
    assert entails(Constraint.false(wheel.codomain), le2)
    assert not entails(le2, le1)
    with pytest.raises(CarrierMismatchError):
        entails(le2, Constraint.true(bicycle.parts["Pedal"].codomain))


def test_exists_along_top_to_pedal(bicycle):
    whole, pedal = bicycle.parts["Top"], bicycle.parts["Pedal"]
    w = part_leq(pedal, whole)
    phi = on(whole, lambda b: dict(b)["w"] == 4)
    out = exists_along(w, phi)
    # brute force over grid fibers
    want = {dict(b)["p"] for b in bicycle.system if dict(b)["w"] == 4}
    assert {dict(x)["p"] for x in out.labels()} == want
    # w = 4 >= 2p
    assert max(want) == 2 and len(want) == len(pedal) - 1


def test_exists_forall_constants(bicycle):
    w = part_leq(bicycle.parts["Pedal"], bicycle.parts["Top"])
    whole = bicycle.parts["Top"].codomain
    for phi, expect in ((Constraint.true(whole), True), (Constraint.false(whole), False)):
        assert (exists_along(w, phi).bits == expect).all()
        assert (forall_along(w, phi).bits == expect).all()
    assert pullback_along(w, Constraint.true(bicycle.parts["Pedal"].codomain)).bits.all()


def test_pullback_through_water_point(water):
    w1 = water.parts["Water_1"]
    w = part_leq(w1, water.parts["Top"])
    psi = on(w1, lambda t: t == 15)
    pulled = pullback_along(w, psi)
    assert pulled.labels() == [b for b in water.system if dict(b)["T"][1] == 15]


def test_pullback_carrier_checked(bicycle):
    w = part_leq(bicycle.parts["Pedal"], bicycle.parts["Top"])
    with pytest.raises(CarrierMismatchError):
        pullback_along(w, Constraint.true(bicycle.parts["Wheel"].codomain))


@settings(max_examples=150, deadline=None)
@given(part_with_constraint(2))
def test_unit_and_counit(data):
    _, (p, q), bits = data
    w = part_leq(q, p) or part_leq(bottom(p.system), p)
    phi = constraint(p, bits)
    assert entails(phi, pullback_along(w, exists_along(w, phi)))
    assert entails(pullback_along(w, forall_along(w, phi)), phi)


@settings(max_examples=150, deadline=None)
@given(part_with_constraint(2), st.data())
def test_adjoint_triple(data, draw):
    _, (p, q), bits = data
    w = part_leq(q, p)
    if w is None:
        w = part_leq(bottom(p.system), p)
    target = w.target.codomain
    phi = constraint(p, bits)
    psi = Constraint(target, draw.draw(st.lists(st.booleans(), min_size=len(target), max_size=len(target))))
    xi = Constraint(p.codomain, draw.draw(st.lists(st.booleans(), min_size=len(p), max_size=len(p))))
    assert entails(exists_along(w, phi), psi) == entails(phi, pullback_along(w, psi))
    # pullback is left adjoint to forall
    assert entails(pullback_along(w, psi), xi) == entails(psi, forall_along(w, xi))


# --- allows / ensures ---------------------------------------------------------


def test_bicycle_allows_closed_form(bicycle):
    wheel, pedal = bicycle.parts["Wheel"], bicycle.parts["Pedal"]
    slow = on(wheel, lambda b: dict(b)["w"] <= 2)
    out = allows(wheel, pedal, slow)
    r = bicycle.params["r"]
    assert {dict(x)["p"] for x in out.labels()} == {dict(x)["p"] for x in pedal.codomain if dict(x)["p"] <= 2 / r}
    assert out == oracle.oracle_allows(wheel, pedal, slow)
    # the reverse ensurance is everywhere false: every pedal speed allows a fast wheel
    assert not ensures(wheel, pedal, slow).bits.any()


def test_allows_trivia(bicycle):
    whole, pedal = bicycle.parts["Top"], bicycle.parts["Pedal"]
    assert not allows(pedal, whole, Constraint.false(pedal.codomain)).bits.any()
    phi = on(whole, lambda b: dict(b)["p"] + dict(b)["w"] > 1)
    assert allows(whole, whole, phi) == phi
    assert ensures(pedal, whole, Constraint.true(pedal.codomain)).bits.all()


def test_water_ensures_from_single_start(water):
    w0, w2 = water.parts["Water_0"], water.parts["Water_2"]
    out = ensures(w0, w2, on(w0, lambda t: t == 10))
    # brute force: T_2 values reached only from T_0 = 10
    starts = {}
    for b in water.system:
        T = dict(b)["T"]
        starts.setdefault(T[2], set()).add(T[0])
    assert out[w2.index(F(35, 2))]
    assert {x for x in out.labels()} == {t2 for t2, s in starts.items() if s == {F(10)}}


def test_point_constraints_recover_relations(bicycle):
    pedal, wheel = bicycle.parts["Pedal"], bicycle.parts["Wheel"]
    for a in range(len(pedal)):
        via_allows = allows(pedal, wheel, point_constraint(pedal, a))
        for b in range(len(wheel)):
            assert via_allows[b] == compatible(pedal, a, wheel, b)
            assert ensures(wheel, pedal, point_constraint(wheel, b))[a] == determines(pedal, a, wheel, b)
    assert point_constraint(pedal, 4)[4]
    with pytest.raises(IndexError):
        point_constraint(pedal, len(pedal))


@settings(max_examples=200, deadline=None)
@given(part_with_constraint(2), st.data())
def test_modal_laws(data, draw):
    _, (p, q), bits = data
    phi = constraint(p, bits)
    other = constraint(p, draw.draw(st.lists(st.booleans(), min_size=len(p), max_size=len(p))))
    psi = Constraint(q.codomain, draw.draw(st.lists(st.booleans(), min_size=len(q), max_size=len(q))))
    # de Morgan duality
    assert ~allows(p, q, ~phi) == ensures(p, q, phi)
    # ensuring entails allowing
    assert entails(ensures(p, q, phi), allows(p, q, phi))
    # monotone
    if entails(phi, other):
        assert entails(allows(p, q, phi), allows(p, q, other))
        assert entails(ensures(p, q, phi), ensures(p, q, other))
    # allows from P to Q is left adjoint to ensures from Q to P
    assert entails(allows(p, q, phi), psi) == entails(phi, ensures(q, p, psi))
    # joins and meets
    assert allows(p, q, phi | other) == allows(p, q, phi) | allows(p, q, other)
    assert ensures(p, q, phi & other) == ensures(p, q, phi) & ensures(p, q, other)


@settings(max_examples=200, deadline=None)
@given(part_with_constraint(2), st.data())
def test_roundtrips_adjoint(data, draw):
    _, (p, q), bits = data
    phi = constraint(p, bits)
    psi = constraint(p, draw.draw(st.lists(st.booleans(), min_size=len(p), max_size=len(p))))
    assert entails(roundtrip_allows(p, q, phi), psi) == entails(phi, roundtrip_ensures(p, q, psi))


@settings(max_examples=150, deadline=None)
@given(systems_with_parts(2, max_size=6))
def test_roundtrip_identity_iff_part_order(data):
    _, (p, q) = data
    identity = all(
        roundtrip_allows(p, q, Constraint.from_mask(p.codomain, m)).bits.tolist()
        == Constraint.from_mask(p.codomain, m).bits.tolist()
        for m in range(2 ** len(p))
    )
    assert identity == (part_leq(p, q) is not None)


def test_roundtrip_through_top_is_identity(bicycle):
    pedal, whole = bicycle.parts["Pedal"], bicycle.parts["Top"]
    phi = on(pedal, lambda b: dict(b)["p"] < 0)
    assert roundtrip_allows(pedal, whole, phi) == phi
    assert roundtrip_ensures(pedal, whole, phi) == phi


def test_possibility_and_necessity(bicycle):
    wheel = bicycle.parts["Wheel"]
    some = on(wheel, lambda b: dict(b)["w"] > 3)
    for phi, poss, nec in (
        (Constraint.true(wheel.codomain), True, True),
        (Constraint.false(wheel.codomain), False, False),
        (some, True, False),
    ):
        assert (possibility(wheel, phi).bits == poss).all()
        assert (necessity(wheel, phi).bits == nec).all()


# --- Kripke frames -----------------------------------------------------------


def worlds(n):
    return BehaviorType(range(n), id=f"W{n}")


def test_kripke_discrete_and_total_frames():
    w = worlds(5)
    phi = Constraint(w, [1, 0, 1, 1, 0])
    ident = np.eye(5, dtype=bool)
    assert kripke_modalities(w, ident, phi) == (phi, phi)
    total = np.ones((5, 5), dtype=bool)
    dia, box = kripke_modalities(w, total, phi)
    assert dia == possibility(top(w), phi) and box == necessity(top(w), phi)


def test_kripke_accepts_pairs_and_rejects_non_equivalences():
    w = worlds(3)
    phi = Constraint(w, [1, 0, 0])
    pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)]
    dia, box = kripke_modalities(w, pairs, phi)
    assert dia.bits.tolist() == [True, True, False] and box.bits.tolist() == [False, False, False]
    with pytest.raises(MereologyError, match="symmetric"):
        kripke_modalities(w, [(0, 0), (1, 1), (2, 2), (0, 1)], phi)
    with pytest.raises(MereologyError, match="reflexive"):
        kripke_modalities(w, [(0, 0)], phi)
    with pytest.raises(MereologyError, match="transitive"):
        kripke_modalities(w, [(i, i) for i in range(3)] + [(0, 1), (1, 0), (1, 2), (2, 1)], phi)


@st.composite
def frames(draw):
    n = draw(st.integers(1, 8))
    cls = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    rel = np.array([[cls[i] == cls[j] for j in range(n)] for i in range(n)])
    bits = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return n, rel, bits


@settings(max_examples=200, deadline=None)
@given(frames())
def test_kripke_matches_direct_semantics(frame):
    n, rel, bits = frame
    w = worlds(n)
    dia, box = kripke_modalities(w, rel, Constraint(w, bits))
    want_dia, want_box = oracle.oracle_kripke(rel.tolist(), Constraint(w, bits))
    assert dia.bits.tolist() == want_dia and box.bits.tolist() == want_box

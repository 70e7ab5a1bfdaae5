import numpy as np
import pytest
from hypothesis import given, settings

from mereology import Constraint, allows, ensures, join, meet, random_system, same_partition
from mereology import oracle

from .conftest import part_with_constraint, systems_with_parts
from .differential import compare_model


def test_oracle_trivia(bicycle):
    pedal, whole = bicycle.parts["Pedal"], bicycle.parts["Top"]
    assert same_partition(oracle.oracle_meet(pedal, pedal), pedal)
    assert same_partition(oracle.oracle_join(pedal, whole), whole)
    assert oracle.oracle_allows(pedal, whole, Constraint.true(pedal.codomain)).bits.all()


@pytest.mark.parametrize("name", ["bicycle", "water", "ecosystem"])
def test_examples_agree_with_oracle(name, request):
    checked, bad = compare_model(request.getfixturevalue(name))
    assert checked > 1000
    assert bad == []


@pytest.mark.parametrize("seed", range(40))
def test_random_systems_agree_with_oracle(seed):
    rng = np.random.default_rng([3, seed])
    model = random_system([3, seed], int(rng.integers(1, 9)), int(rng.integers(2, 5)))
    _, bad = compare_model(model, seed, samples=6)
    assert bad == []


@settings(max_examples=150, deadline=None)
@given(part_with_constraint(2))
def test_modalities_agree_with_oracle(data):
    _, (p, q), bits = data
    phi = Constraint(p.codomain, bits)
    assert allows(p, q, phi) == oracle.oracle_allows(p, q, phi)
    assert ensures(p, q, phi) == oracle.oracle_ensures(p, q, phi)


@settings(max_examples=150, deadline=None)
@given(systems_with_parts(2))
def test_lattice_agrees_with_oracle(data):
    _, (p, q) = data
    assert same_partition(meet(p, q), oracle.oracle_meet(p, q))
    assert same_partition(join(p, q), oracle.oracle_join(p, q))

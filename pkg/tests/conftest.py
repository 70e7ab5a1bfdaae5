from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from mereology import BehaviorType, Part, build_bicycle, build_ecosystem, build_water

ROOT = Path(__file__).resolve().parent
SPECS = ROOT.parent / "src" / "mereology" / "specs"
GOLDEN = ROOT / "golden"
EXAMPLES = ("bicycle", "water", "ecosystem")


@pytest.fixture(scope="session")
def bicycle():
    return build_bicycle()


@pytest.fixture(scope="session")
def water():
    return build_water(windows=[(0, 1)])


@pytest.fixture(scope="session")
def ecosystem():
    return build_ecosystem(deadlines=[3])


def surjection(draw, n: int) -> list[int]:
    k = draw(st.integers(1, n))
    mapping = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    # relabel to first occurrence so the image is 0..m-1
    ids: dict = {}
    return [ids.setdefault(x, len(ids)) for x in mapping]


@st.composite
def systems_with_parts(draw, count: int = 3, max_size: int = 7):
    """A behavior type with ``count`` random parts on it."""
    n = draw(st.integers(1, max_size))
    system = BehaviorType([f"s{i}" for i in range(n)], id=f"h{n}")
    parts = []
    for j in range(count):
        mapping = surjection(draw, n)
        k = max(mapping) + 1
        parts.append(Part(system, BehaviorType([f"x{j}.{i}" for i in range(k)], id=f"X{j}"), mapping))
    return system, parts


@st.composite
def part_with_constraint(draw, count: int = 2, max_size: int = 7):
    system, parts = draw(systems_with_parts(count, max_size))
    bits = draw(st.lists(st.booleans(), min_size=len(parts[0]), max_size=len(parts[0])))
    return system, parts, np.array(bits, dtype=bool)

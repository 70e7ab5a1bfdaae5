"""Finite behavior types, parts as quotients, and the relations between parts.

A part of a system is a surjection out of the system's behavior type. Here
every behavior type is a finite, ordered tuple of hashable labels, so a part
is stored as an integer array ``map`` of length ``|B_S|`` whose values index
the part's own behavior type. Two behaviors of the system are
observationally equivalent for a part when the part maps them to the same
index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

from .unionfind import UnionFind

__all__ = [
    "MereologyError",
    "EmptySystemError",
    "SystemMismatchError",
    "NotSurjectiveError",
    "BehaviorType",
    "Part",
    "PartOrderWitness",
    "render_label",
    "restrict",
    "observationally_equivalent",
    "part_from_observation",
    "part_leq",
    "meet",
    "join",
    "top",
    "bottom",
    "same_partition",
    "compatible",
    "compatible_family",
    "determines",
    "part_determines",
    "part_order_conditions",
    "strongly_disjoint",
    "disjoint",
    "compatibility_matrix",
    "determination_matrix",
]


class MereologyError(ValueError):
    pass


class EmptySystemError(MereologyError):
    pass


class SystemMismatchError(MereologyError):
    pass


class NotSurjectiveError(MereologyError):
    pass


def render_label(label: Any) -> str:
    """Human-readable rendering of a behavior label.

    Rationals print as decimals when they have a finite decimal expansion
    and as ``a/b`` otherwise, so the output is valid DSL number syntax.
    """
    if isinstance(label, bool):
        return "true" if label else "false"
    if isinstance(label, (Fraction, int)):
        return _render_number(Fraction(label))
    if isinstance(label, str):
        return label
    if isinstance(label, tuple):
        if label and all(
            isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], str)
            for item in label
        ):
            return "(" + ", ".join(f"{k}={render_label(v)}" for k, v in label) + ")"
        return "[" + ", ".join(render_label(item) for item in label) + "]"
    if isinstance(label, frozenset):
        return "{" + ", ".join(sorted(render_label(item) for item in label)) + "}"
    return repr(label)


def _render_number(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = abs(x.numerator) * 10**digits // x.denominator
    whole, frac = divmod(scaled, 10**digits)
    sign = "-" if x < 0 else ""
    return f"{sign}{whole}.{frac:0{digits}d}"


class BehaviorType:
    """A finite, nonempty, ordered set of behavior labels."""

    __slots__ = ("id", "labels", "_index")

    def __init__(self, labels: Iterable[Hashable], id: Optional[str] = None):
        labels = tuple(labels)
        if not labels:
            raise EmptySystemError("behavior type must have at least one behavior")
        index = {}
        for i, label in enumerate(labels):
            if label in index:
                raise MereologyError(f"duplicate behavior label {render_label(label)}")
            index[label] = i
        self.id = id
        self.labels = labels
        self._index = index

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no behavior {render_label(label)} in {self.id or 'behavior type'}") from None

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, BehaviorType):
            return NotImplemented
        return self.id == other.id and self.labels == other.labels

    def __hash__(self):
        return hash((self.id, len(self.labels)))

    def __repr__(self):
        return f"BehaviorType(id={self.id!r}, size={len(self)})"


class Part:
    """A surjection ``map: B_S -> B_P`` presenting a part ``P`` of a system.

    Fibers and the ``|B_S| x |B_P|`` indicator matrix are computed once, on
    first use; the relational operations below only touch those.
    """

    __slots__ = ("system", "codomain", "map", "name", "size", "_fibers", "_indicator", "_list", "_hash", "_kernel")

    def __init__(self, system: BehaviorType, codomain: BehaviorType, mapping: Sequence[int], name: Optional[str] = None):
        m = np.array(mapping, dtype=np.intp)
        if m.shape != (len(system),):
            raise MereologyError(f"map has shape {m.shape}, expected ({len(system)},)")
        if m.min() < 0 or m.max() >= len(codomain):
            raise MereologyError("map sends a behavior outside the codomain")
        counts = np.bincount(m, minlength=len(codomain))
        if not counts.all():
            missing = int(np.flatnonzero(counts == 0)[0])
            raise NotSurjectiveError(
                f"part behavior {render_label(codomain[missing])} is not the restriction of any system behavior"
            )
        m.flags.writeable = False
        self.system = system
        self.codomain = codomain
        self.map = m
        self.name = name
        self.size = len(codomain)
        self._list = tuple(m.tolist())
        self._fibers = None
        self._indicator = None
        self._hash = None
        self._kernel = None

    @property
    def fibers(self) -> tuple:
        """System behavior indices over each part behavior."""
        if self._fibers is None:
            fibers = [[] for _ in range(self.size)]
            for s, a in enumerate(self._list):
                fibers[a].append(s)
            self._fibers = tuple(tuple(f) for f in fibers)
        return self._fibers

    @property
    def indicator(self) -> np.ndarray:
        if self._indicator is None:
            ind = np.zeros((len(self.map), self.size), dtype=bool)
            ind[np.arange(len(self.map)), self.map] = True
            ind.flags.writeable = False
            self._indicator = ind
        return self._indicator

    def __len__(self):
        return self.size

    @property
    def kernel(self) -> tuple:
        """The map relabeled in first-occurrence order; equal iff the partitions agree."""
        if self._kernel is None:
            ids = {}
            self._kernel = tuple(ids.setdefault(a, len(ids)) for a in self._list)
        return self._kernel

    def index(self, label) -> int:
        return self.codomain.index(label)

    def blocks(self):
        """The partition of ``B_S`` as lists of system labels, one per part behavior."""
        return [[self.system[s] for s in fiber] for fiber in self.fibers]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Part):
            return NotImplemented
        return (
            self.system == other.system
            and self.codomain.labels == other.codomain.labels
            and self._list == other._list
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.system.id, self._list))
        return self._hash

    def __repr__(self):
        name = f"{self.name!r}, " if self.name else ""
        return f"Part({name}{len(self.system)} -> {len(self.codomain)})"


@dataclass(frozen=True, eq=False)
class PartOrderWitness:
    """Evidence that ``target`` is a part of ``source``: the unique ``factor``
    with ``factor[source.map[s]] == target.map[s]`` for every ``s``."""

    source: Part
    target: Part
    factor: np.ndarray
    _graph: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        f = self.factor
        n_p, n_q = self.source.size, self.target.size
        if f.shape != (n_p,):
            raise MereologyError("factor map has the wrong length")
        if not np.array_equal(f[self.source.map], self.target.map):
            raise MereologyError("factor map does not commute with the restrictions")
        if not np.bincount(f, minlength=n_q).all():
            raise NotSurjectiveError("factor map is not surjective")
        object.__setattr__(self, "_graph", None)

    def graph(self) -> np.ndarray:
        """Boolean ``|B_P| x |B_Q|`` matrix of the factor map."""
        if self._graph is None:
            g = np.zeros((self.source.size, self.target.size), dtype=bool)
            g[np.arange(self.source.size), self.factor] = True
            g.flags.writeable = False
            object.__setattr__(self, "_graph", g)
        return self._graph


def _check_shared(*parts: Part):
    first = parts[0].system
    for p in parts[1:]:
        if p.system is not first and p.system != first:
            raise SystemMismatchError("parts belong to different systems")


def _check_index(n: int, i: int, what: str):
    if not 0 <= i < n:
        raise IndexError(f"{what} index {i} out of range for size {n}")


def restrict(part: Part, s: int) -> int:
    _check_index(len(part.system), s, "system behavior")
    return part._list[s]


def observationally_equivalent(part: Part, s: int, s2: int) -> bool:
    return restrict(part, s) == restrict(part, s2)


def part_from_observation(system: BehaviorType, observe: Callable[[Any], Hashable], name: Optional[str] = None) -> Part:
    """The quotient of ``system`` by equality of ``observe``.

    Codomain labels are the observed values in first-occurrence order.
    """
    ids: dict = {}
    mapping = [ids.setdefault(observe(b), len(ids)) for b in system.labels]
    return Part(system, BehaviorType(ids, id=name), mapping, name=name)


def top(system: BehaviorType) -> Part:
    return Part(system, system, range(len(system)), name="Top")


def bottom(system: BehaviorType) -> Part:
    if len(system) == 0:
        raise EmptySystemError("the empty system has no singleton bottom part")
    return Part(system, BehaviorType(["*"], id="Bottom"), [0] * len(system), name="Bottom")


def same_partition(p: Part, q: Part) -> bool:
    """``p`` and ``q`` are isomorphic parts: same kernel pair on ``B_S``."""
    _check_shared(p, q)
    return p.kernel == q.kernel


def part_leq(q: Part, p: Part) -> Optional[PartOrderWitness]:
    """Witness that ``q`` is a part of ``p`` (``q <= p``), or ``None``.

    Succeeds iff every ``p``-class lies inside a single ``q``-class.
    """
    _check_shared(p, q)
    image = [-1] * p.size
    for a, b in zip(p._list, q._list):
        seen = image[a]
        if seen < 0:
            image[a] = b
        elif seen != b:
            return None
    factor = np.array(image, dtype=np.intp)
    factor.flags.writeable = False
    w = object.__new__(PartOrderWitness)
    # commutes by construction; surjective because q.map is
    for attr, value in (("source", p), ("target", q), ("factor", factor), ("_graph", None)):
        object.__setattr__(w, attr, value)
    return w


def meet(p: Part, q: Part, name: Optional[str] = None) -> Part:
    """Largest common part: ``(B_P + B_Q)`` modulo the equivalence generated by compatibility."""
    _check_shared(p, q)
    n = len(p)
    uf = UnionFind(n + len(q))
    for a, b in set(zip(p._list, q._list)):
        uf.union(a, n + b)
    cls = [uf.find(a) for a in p._list]
    ids: dict = {}
    mapping = [ids.setdefault(c, len(ids)) for c in cls]
    members: list = [[] for _ in ids]
    for a in range(n):
        members[ids[uf.find(a)]].append(p.codomain[a])
    labels = [tuple(m) for m in members]
    return Part(p.system, BehaviorType(labels, id=name), mapping, name=name)


def join(p: Part, q: Part, name: Optional[str] = None) -> Part:
    """Smallest part containing both: the image of ``B_S -> B_P x B_Q``."""
    _check_shared(p, q)
    ids: dict = {}
    mapping = [ids.setdefault(pair, len(ids)) for pair in zip(p._list, q._list)]
    labels = [(p.codomain[a], q.codomain[b]) for a, b in ids]
    return Part(p.system, BehaviorType(labels, id=name), mapping, name=name)


def compatible(p: Part, a: int, q: Part, b: int) -> bool:
    _check_shared(p, q)
    _check_index(len(p), a, "part behavior")
    _check_index(len(q), b, "part behavior")
    qmap = q._list
    return any(qmap[s] == b for s in p.fibers[a])


def compatible_family(assignments: Iterable[tuple[Part, int]]) -> bool:
    """Whether one system behavior restricts to every ``(part, index)`` given."""
    assignments = list(assignments)
    if not assignments:
        return True
    _check_shared(*(p for p, _ in assignments))
    p0, a0 = assignments[0]
    _check_index(len(p0), a0, "part behavior")
    candidates = set(p0.fibers[a0])
    for p, a in assignments[1:]:
        _check_index(len(p), a, "part behavior")
        candidates.intersection_update(p.fibers[a])
        if not candidates:
            return False
    return True


def determines(p: Part, a: int, q: Part, b: int) -> bool:
    _check_shared(p, q)
    _check_index(len(p), a, "part behavior")
    _check_index(len(q), b, "part behavior")
    qmap = q._list
    return all(qmap[s] == b for s in p.fibers[a])


def part_determines(p: Part, q: Part) -> bool:
    """Every behavior of ``p`` determines some behavior of ``q``."""
    return bool(determination_matrix(p, q).any(axis=1).all())


@lru_cache(maxsize=4096)
def _compat(p: Part, q: Part) -> np.ndarray:
    c = p.indicator.T @ q.indicator
    c.flags.writeable = False
    return c


def compatibility_matrix(p: Part, q: Part) -> np.ndarray:
    """Boolean ``|B_P| x |B_Q|`` matrix of ``c(a, b)``; cached per part pair."""
    _check_shared(p, q)
    return _compat(p, q)


def determination_matrix(p: Part, q: Part) -> np.ndarray:
    """Boolean ``|B_P| x |B_Q|`` matrix of ``a determines b``."""
    _check_shared(p, q)
    return ~(p.indicator.T @ ~q.indicator)


def part_order_conditions(p: Part, q: Part) -> tuple[bool, bool, bool, bool]:
    """Four characterisations of ``q <= p``, each computed on its own terms:

    1. a factor map ``B_P -> B_Q`` exists;
    2. every ``a`` is compatible with exactly one ``b``;
    3. every ``a`` determines some ``b``;
    4. compatibility implies determination.
    """
    c = compatibility_matrix(p, q)
    d = determination_matrix(p, q)
    b1 = part_leq(q, p) is not None
    b2 = bool((c.sum(axis=1) == 1).all())
    b3 = part_determines(p, q)
    b4 = bool((~c | d).all())
    return b1, b2, b3, b4


def strongly_disjoint(p: Part, q: Part) -> bool:
    return bool(compatibility_matrix(p, q).all())


def disjoint(p: Part, q: Part) -> bool:
    return len(meet(p, q)) == 1

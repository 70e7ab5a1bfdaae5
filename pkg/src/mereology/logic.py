"""Constraints as predicates on behavior types and the operators between them.

Truth values are two-valued. A constraint is stored extensionally as a
boolean vector over its carrier. The module-level ``_exists``, ``_forall``,
``_allows`` and ``_ensures`` kernels act on the last axis of a boolean array,
so the law suite can push a whole batch of constraints through the same code
path that the single-constraint functions use.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional

import numpy as np

from .core import (
    BehaviorType,
    MereologyError,
    Part,
    PartOrderWitness,
    bottom,
    _check_shared,
    _compat,
    render_label,
    top,
)

__all__ = [
    "CarrierMismatchError",
    "Constraint",
    "entails",
    "exists_along",
    "pullback_along",
    "forall_along",
    "allows",
    "ensures",
    "point_constraint",
    "roundtrip_allows",
    "roundtrip_ensures",
    "possibility",
    "necessity",
    "equivalence_part",
    "kripke_modalities",
]


class CarrierMismatchError(MereologyError):
    pass


class Constraint:
    """A predicate ``B -> {true, false}`` on a behavior type."""

    __slots__ = ("carrier", "bits")

    def __init__(self, carrier: BehaviorType, bits):
        b = np.array(bits, dtype=bool)
        if b.shape != (len(carrier),):
            raise CarrierMismatchError(f"constraint has {b.size} bits, carrier has {len(carrier)} behaviors")
        b.flags.writeable = False
        self.carrier = carrier
        self.bits = b

    @classmethod
    def true(cls, carrier):
        return cls(carrier, np.ones(len(carrier), dtype=bool))

    @classmethod
    def false(cls, carrier):
        return cls(carrier, np.zeros(len(carrier), dtype=bool))

    @classmethod
    def from_predicate(cls, carrier, pred: Callable):
        return cls(carrier, [bool(pred(label)) for label in carrier.labels])

    @classmethod
    def from_labels(cls, carrier, labels: Iterable):
        bits = np.zeros(len(carrier), dtype=bool)
        for label in labels:
            bits[carrier.index(label)] = True
        return cls(carrier, bits)

    @classmethod
    def from_mask(cls, carrier, mask: int):
        """Bit ``i`` of the integer ``mask`` is the value at behavior ``i``."""
        return cls(carrier, [(mask >> i) & 1 for i in range(len(carrier))])

    def labels(self):
        return [self.carrier[i] for i in np.flatnonzero(self.bits)]

    def _other(self, other):
        if not isinstance(other, Constraint):
            return NotImplemented
        _same_carrier(self.carrier, other.carrier)
        return other.bits

    def __and__(self, other):
        return Constraint(self.carrier, self.bits & self._other(other))

    def __or__(self, other):
        return Constraint(self.carrier, self.bits | self._other(other))

    def __invert__(self):
        return Constraint(self.carrier, ~self.bits)

    def __getitem__(self, i):
        return bool(self.bits[i])

    def __len__(self):
        return len(self.bits)

    def __eq__(self, other):
        if not isinstance(other, Constraint):
            return NotImplemented
        return self.carrier == other.carrier and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self):
        shown = ", ".join(render_label(x) for x in self.labels()[:8])
        more = ", ..." if self.bits.sum() > 8 else ""
        return f"Constraint({{{shown}{more}}})"


def _same_carrier(a: BehaviorType, b: BehaviorType):
    if a is not b and a != b:
        raise CarrierMismatchError(f"constraint carriers differ: {a.id!r} vs {b.id!r}")


def _check_on(phi: Constraint, part: Part):
    _same_carrier(phi.carrier, part.codomain)


# Kernels over the last axis. ``rel`` is a boolean |B_P| x |B_Q| relation.

def _any_product(a, b):
    """Boolean matrix product."""
    if a.size < 4096:
        return a @ b
    # numpy's bool matmul has no BLAS path; float32 counts stay exact at these sizes
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def _exists(rel, bits):
    return _any_product(bits, rel)


def _forall(rel, bits):
    return ~_any_product(~bits, rel)


def _allows(p: Part, q: Part, bits):
    return _exists(_compat(p, q), bits)


def _ensures(p: Part, q: Part, bits):
    return _forall(_compat(p, q), bits)


def _entails(a, b):
    return ~(a & ~b).any(axis=-1)


def entails(phi: Constraint, psi: Constraint) -> bool:
    _same_carrier(phi.carrier, psi.carrier)
    return bool(_entails(phi.bits, psi.bits))


def exists_along(w: PartOrderWitness, phi: Constraint) -> Constraint:
    """Push ``phi`` on the larger part forward: true at ``q`` iff some ``p`` over ``q`` satisfies it."""
    _check_on(phi, w.source)
    return Constraint(w.target.codomain, _exists(w.graph(), phi.bits))


def pullback_along(w: PartOrderWitness, psi: Constraint) -> Constraint:
    _check_on(psi, w.target)
    return Constraint(w.source.codomain, psi.bits[w.factor])


def forall_along(w: PartOrderWitness, phi: Constraint) -> Constraint:
    _check_on(phi, w.source)
    return Constraint(w.target.codomain, _forall(w.graph(), phi.bits))


def allows(p: Part, q: Part, phi: Constraint) -> Constraint:
    """Behaviors of ``q`` compatible with some behavior of ``p`` satisfying ``phi``."""
    _check_shared(p, q)
    _check_on(phi, p)
    return Constraint(q.codomain, _allows(p, q, phi.bits))


def ensures(p: Part, q: Part, phi: Constraint) -> Constraint:
    """Behaviors of ``q`` all of whose compatible ``p``-behaviors satisfy ``phi``."""
    _check_shared(p, q)
    _check_on(phi, p)
    return Constraint(q.codomain, _ensures(p, q, phi.bits))


def point_constraint(p: Part, a: int) -> Constraint:
    if not 0 <= a < len(p):
        raise IndexError(f"part behavior index {a} out of range for size {len(p)}")
    bits = np.zeros(len(p), dtype=bool)
    bits[a] = True
    return Constraint(p.codomain, bits)


def roundtrip_allows(p: Part, q: Part, phi: Constraint) -> Constraint:
    return allows(q, p, allows(p, q, phi))


def roundtrip_ensures(p: Part, q: Part, phi: Constraint) -> Constraint:
    return ensures(q, p, ensures(p, q, phi))


def possibility(p: Part, phi: Constraint) -> Constraint:
    return roundtrip_allows(p, bottom(p.system), phi)


def necessity(p: Part, phi: Constraint) -> Constraint:
    return roundtrip_ensures(p, bottom(p.system), phi)


def _as_relation(worlds: BehaviorType, relation) -> np.ndarray:
    n = len(worlds)
    rel = np.asarray(relation)
    if rel.dtype == bool and rel.shape != (n, n):
        raise MereologyError(f"relation matrix has shape {rel.shape}, expected ({n}, {n})")
    if rel.dtype != bool:
        rel = np.zeros((n, n), dtype=bool)
        for i, j in relation:
            rel[i, j] = True
    if not rel.diagonal().all():
        raise MereologyError("accessibility relation is not reflexive")
    if not np.array_equal(rel, rel.T):
        raise MereologyError("accessibility relation is not symmetric")
    if ((rel @ rel) & ~rel).any():
        raise MereologyError("accessibility relation is not transitive")
    return rel


def equivalence_part(worlds: BehaviorType, relation, name: Optional[str] = None) -> Part:
    """The quotient ``W -> W/A`` of an equivalence relation given as a boolean
    matrix or as an iterable of index pairs."""
    rel = _as_relation(worlds, relation)
    ids: dict = {}
    mapping = [ids.setdefault(tuple(np.flatnonzero(row)), len(ids)) for row in rel]
    labels = [frozenset(worlds[j] for j in cls) for cls in ids]
    return Part(worlds, BehaviorType(labels, id=name), mapping, name=name)


def kripke_modalities(worlds: BehaviorType, relation, phi: Constraint) -> tuple[Constraint, Constraint]:
    """Possibility and necessity of ``phi`` in the frame ``(worlds, relation)``,
    computed as round trips through the quotient part."""
    _same_carrier(phi.carrier, worlds)
    whole = top(worlds)
    quotient = equivalence_part(worlds, relation)
    return roundtrip_allows(whole, quotient, phi), roundtrip_ensures(whole, quotient, phi)

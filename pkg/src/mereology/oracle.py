"""Definitional evaluators used as ground truth in differential tests.

Everything here quantifies directly over the system's behaviors with plain
loops and calls nothing in ``core``/``logic`` beyond reading ``Part.map``
and constructing result objects. Slow on purpose.
"""

from __future__ import annotations

from .core import BehaviorType, Part, PartOrderWitness
from .logic import Constraint


def _sys(p: Part):
    return range(len(p.system))


def _restriction(p: Part) -> list[int]:
    """The restriction map ``s -> s|_P`` as a plain list."""
    return [int(x) for x in p.map]


def oracle_compatible(p: Part, a: int, q: Part, b: int) -> bool:
    rp, rq = _restriction(p), _restriction(q)
    for s in _sys(p):
        if rp[s] == a and rq[s] == b:
            return True
    return False


def oracle_determines(p: Part, a: int, q: Part, b: int) -> bool:
    rp, rq = _restriction(p), _restriction(q)
    for s in _sys(p):
        if rp[s] == a and rq[s] != b:
            return False
    return True


def oracle_compatible_family(assignments) -> bool:
    assignments = list(assignments)
    system = assignments[0][0].system if assignments else None
    if system is None:
        return True
    maps = [(_restriction(p), a) for p, a in assignments]
    for s in range(len(system)):
        if all(rp[s] == a for rp, a in maps):
            return True
    return False


def oracle_part_leq(q: Part, p: Part) -> bool:
    """``s ~_P s'`` implies ``s ~_Q s'`` for every pair."""
    rp, rq = _restriction(p), _restriction(q)
    for s in _sys(p):
        for t in _sys(p):
            if rp[s] == rp[t] and rq[s] != rq[t]:
                return False
    return True


def oracle_allows(p: Part, q: Part, phi: Constraint) -> Constraint:
    rp, rq, holds = _restriction(p), _restriction(q), phi.bits.tolist()
    bits = []
    for b in range(len(q.codomain)):
        bits.append(any(rq[s] == b and holds[rp[s]] for s in _sys(p)))
    return Constraint(q.codomain, bits)


def oracle_ensures(p: Part, q: Part, phi: Constraint) -> Constraint:
    rp, rq, holds = _restriction(p), _restriction(q), phi.bits.tolist()
    bits = []
    for b in range(len(q.codomain)):
        bits.append(all(rq[s] != b or holds[rp[s]] for s in _sys(p)))
    return Constraint(q.codomain, bits)


def _factor(w: PartOrderWitness) -> list[int]:
    # p|_Q computed through some system behavior over each p, not the stored factor
    src, tgt = _restriction(w.source), _restriction(w.target)
    out = []
    for x in range(len(w.source.codomain)):
        s = src.index(x)
        out.append(tgt[s])
    return out


def oracle_exists_along(w: PartOrderWitness, phi: Constraint) -> Constraint:
    n_p, n_q = len(w.source.codomain), len(w.target.codomain)
    f, holds = _factor(w), phi.bits.tolist()
    bits = [any(f[x] == y and holds[x] for x in range(n_p)) for y in range(n_q)]
    return Constraint(w.target.codomain, bits)


def oracle_forall_along(w: PartOrderWitness, phi: Constraint) -> Constraint:
    n_p, n_q = len(w.source.codomain), len(w.target.codomain)
    f, holds = _factor(w), phi.bits.tolist()
    bits = [all(f[x] != y or holds[x] for x in range(n_p)) for y in range(n_q)]
    return Constraint(w.target.codomain, bits)


def oracle_pullback_along(w: PartOrderWitness, psi: Constraint) -> Constraint:
    f, holds = _factor(w), psi.bits.tolist()
    bits = [holds[f[x]] for x in range(len(w.source.codomain))]
    return Constraint(w.source.codomain, bits)


def _compatible_pairs(p: Part, q: Part) -> list[tuple[int, int]]:
    """Every ``(a, b)`` with ``c(a, b)``, read off the system behaviors."""
    rp, rq = _restriction(p), _restriction(q)
    pairs = []
    for s in _sys(p):
        if (rp[s], rq[s]) not in pairs:
            pairs.append((rp[s], rq[s]))
    return pairs


def _closure(n: int, pairs) -> list[set[int]]:
    """Reflexive-symmetric-transitive closure as explicit reachable sets."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in pairs:
        adj[i].append(j)
        adj[j].append(i)
    out = []
    for x in range(n):
        seen = {x}
        stack = [x]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(seen)
    return out


def _part_from_classes(system: BehaviorType, cls: list[int], labels) -> Part:
    return Part(system, BehaviorType(labels), cls)


def oracle_meet(p: Part, q: Part) -> Part:
    """Quotient of the disjoint union by the explicit closure of compatibility."""
    n_p, n_q = len(p.codomain), len(q.codomain)
    pairs = [(a, n_p + b) for a, b in _compatible_pairs(p, q)]
    reach = _closure(n_p + n_q, pairs)
    reps = [min(reach[x]) for x in range(n_p + n_q)]
    distinct = sorted(set(reps[a] for a in range(n_p)))
    rp = _restriction(p)
    cls = [distinct.index(reps[rp[s]]) for s in _sys(p)]
    return _part_from_classes(p.system, cls, [f"class{i}" for i in range(len(distinct))])


def oracle_join(p: Part, q: Part) -> Part:
    pairs = sorted(_compatible_pairs(p, q))
    rp, rq = _restriction(p), _restriction(q)
    cls = [pairs.index((rp[s], rq[s])) for s in _sys(p)]
    return _part_from_classes(p.system, cls, pairs)


def oracle_kripke(relation, phi: Constraint) -> tuple[list[bool], list[bool]]:
    """Classical Kripke semantics by a double loop over worlds."""
    n = len(phi.bits)
    diamond = [any(relation[w][v] and phi.bits[v] for v in range(n)) for w in range(n)]
    box = [all(not relation[w][v] or phi.bits[v] for v in range(n)) for w in range(n)]
    return diamond, box

"""Machine-checked laws of the part/constraint calculus.

``law_suite`` evaluates every law over all ordered pairs (and, where needed,
chains) of a model's named parts. Constraints on a part with at most
``EXHAUSTIVE_LIMIT`` behaviors are enumerated exhaustively; larger parts get
``SAMPLE_SIZE`` seeded random constraints plus every point constraint and the
two constant ones. Point constraints are always included because a
join-preserving operator is the identity iff it fixes every point.

Laws are checked on batches: a ``(N, |B_P|)`` boolean matrix pushed through
the same kernels the single-constraint API uses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from . import core
from .core import Part, PartOrderWitness, render_label
from .logic import _allows, _any_product, _ensures, _entails, _exists, _forall
from .models import SystemModel

EXHAUSTIVE_LIMIT = 6
SAMPLE_SIZE = 64


@dataclass
class LawReport:
    law: str
    system: str
    passed: bool
    checked: int = 0
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "system": self.system,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


class _Failure(Exception):
    def __init__(self, **details):
        self.details = details


def _bits(row) -> list[int]:
    return [int(x) for x in row]


def _first(mask) -> tuple:
    return tuple(int(i) for i in np.argwhere(mask)[0])


def constraint_batch(n: int, rng: np.random.Generator) -> np.ndarray:
    """All ``2**n`` predicates on ``n`` behaviors, or a seeded sample."""
    if n <= EXHAUSTIVE_LIMIT:
        masks = np.arange(2**n)[:, None]
        return ((masks >> np.arange(n)) & 1).astype(bool)
    sample = rng.random((SAMPLE_SIZE, n)) < 0.5
    fixed = np.vstack([np.eye(n, dtype=bool), np.zeros((1, n), bool), np.ones((1, n), bool)])
    return np.vstack([sample, fixed])


def _words(bits) -> np.ndarray:
    """Rows packed into 64-bit words, ``(N, ceil(n / 64))``."""
    packed = np.packbits(bits, axis=1)
    out = np.zeros((len(packed), -(-packed.shape[1] // 8) * 8), dtype=np.uint8)
    out[:, :packed.shape[1]] = packed
    return out.view(np.uint64)


def _entail_table(a, b):
    """``out[i, j]`` iff ``a[i]`` entails ``b[j]``."""
    if a.shape[0] * b.shape[0] < 1024:
        return ~_any_product(a, ~b.T)
    # a entails b iff a & ~b has no bit set
    wa, wb = _words(a), _words(~b)
    if wa.shape[1] == 1:
        return (wa[:, None, 0] & wb[None, :, 0]) == 0
    return ~(wa[:, None, :] & wb[None, :, :]).any(axis=-1)


class _Context:
    """Per-model caches.

    Most laws are checked for one source part against every part at once:
    targets sit side by side along the columns (``offsets``) and the
    constraint batches of all parts are stacked along the rows (``rows``).
    """

    def __init__(self, model: SystemModel, seed):
        self.model = model
        self.system = model.system
        self.parts = dict(model.parts)
        self.names = list(self.parts)
        self.top = core.top(self.system)
        rng = np.random.default_rng(seed)
        self.batch = {name: constraint_batch(len(p), rng) for name, p in self.parts.items()}
        self.exhaustive = {name: len(p) <= EXHAUSTIVE_LIMIT for name, p in self.parts.items()}
        self.upper = {name: np.triu_indices(len(b)) for name, b in self.batch.items()}
        self.batch_top = constraint_batch(len(self.top), rng)
        sizes = [len(p) for p in self.parts.values()]
        heights = [len(self.batch[n]) for n in self.names]
        self.col_starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.intp)
        self.row_starts = np.concatenate([[0], np.cumsum(heights)[:-1]]).astype(np.intp)
        self.offsets = {n: slice(int(s), int(s) + k) for n, s, k in zip(self.names, self.col_starts, sizes)}
        self.rows = {n: slice(int(s), int(s) + k) for n, s, k in zip(self.names, self.row_starts, heights)}
        self.width, self.height = sum(sizes), sum(heights)
        self.col_owner = np.repeat(np.arange(len(sizes)), sizes)
        self.row_owner = np.repeat(np.arange(len(heights)), heights)
        self._witness: dict = {}
        self._cache: dict = {}

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def locate_col(self, c: int) -> tuple[str, int]:
        k = int(self.col_owner[c])
        return self.names[k], int(c - self.col_starts[k])

    def locate_row(self, r: int) -> tuple[str, int]:
        k = int(self.row_owner[r])
        return self.names[k], int(r - self.row_starts[k])

    def compat_to(self, n1: str) -> np.ndarray:
        """Compatibility from ``n1`` to every part, ``|B_P| x width``."""
        p = self.parts[n1]
        return self._cached(("compat_to", n1), lambda: np.hstack([core._compat(p, q) for q in self.parts.values()]))

    def compat_from(self, n1: str) -> np.ndarray:
        """Compatibility from every part to ``n1``, ``width x |B_P|``."""
        p = self.parts[n1]
        return self._cached(("compat_from", n1), lambda: np.vstack([core._compat(q, p) for q in self.parts.values()]))

    def _stacked(self, n1: str, op: str) -> np.ndarray:
        """``op`` from part ``n1`` to every part at once, targets side by side."""

        def build():
            rel, phi = self.compat_to(n1), self.batch[n1]
            return _exists(rel, phi) if op == "allows" else _forall(rel, phi)

        return self._cached((op, n1), build)

    def allows(self, n1: str, n2: str) -> np.ndarray:
        """``allows`` from part ``n1`` to ``n2`` applied to ``n1``'s whole batch."""
        return self._stacked(n1, "allows")[:, self.offsets[n2]]

    def ensures(self, n1: str, n2: str) -> np.ndarray:
        return self._stacked(n1, "ensures")[:, self.offsets[n2]]

    def ensures_into(self, n1: str) -> np.ndarray:
        """``ensures`` from every part to ``n1`` on that part's batch, ``height x |B_P|``."""
        return self._cached(("ensures_into", n1), lambda: np.vstack([self.ensures(n, n1) for n in self.names]))

    def psi(self, fill: bool) -> np.ndarray:
        """Every batch in its own column block, ``fill`` elsewhere; ``height x width``."""

        def build():
            out = np.full((self.height, self.width), fill, dtype=bool)
            for n in self.names:
                out[self.rows[n], self.offsets[n]] = self.batch[n]
            return out

        return self._cached(("psi", fill), build)

    def block_mask(self, n1: str) -> np.ndarray:
        """Row block ``k`` of ``n1``'s batch repeated once per part, open on column block ``k``."""

        def build():
            own = self.col_owner[None, :] == np.arange(len(self.names))[:, None]
            return np.repeat(own, len(self.batch[n1]), axis=0)

        return self._cached(("block_mask", n1), build)

    def roundtrips(self, n1: str, op: str) -> np.ndarray:
        """``op`` from ``n1`` to each part and back, ``(parts * N) x |B_P|``, one row block per part."""

        def build():
            out = self._stacked(n1, op)
            tiled = np.tile(out if op == "allows" else ~out, (len(self.names), 1)) & self.block_mask(n1)
            prod = _any_product(tiled, self.compat_from(n1))
            return prod if op == "allows" else ~prod

        return self._cached(("roundtrip", op, n1), build)

    def roundtrip_allows(self, n1: str, n2: str) -> np.ndarray:
        n = len(self.batch[n1])
        k = self.names.index(n2)
        return self.roundtrips(n1, "allows")[k * n:(k + 1) * n]

    def graphs_to(self, hi: str) -> np.ndarray:
        """Factor-map graphs from ``hi`` onto every part below it (zero blocks elsewhere)."""

        def build():
            out = np.zeros((len(self.parts[hi]), self.width), dtype=bool)
            for lo in self.names:
                w = self.witness(lo, hi)
                if w is not None:
                    out[:, self.offsets[lo]] = w.graph()
            return out

        return self._cached(("graphs_to", hi), build)

    def pulled_up(self, hi: str) -> np.ndarray:
        """Every part's batch pulled back to ``hi``; rows of parts not below ``hi`` are empty."""
        return self._cached(("pulled_up", hi), lambda: _any_product(self.psi(False), self.graphs_to(hi).T))

    def below(self, hi: str) -> np.ndarray:
        """Per part: is it below ``hi``."""
        return self._cached(("below", hi), lambda: np.array([self.witness(lo, hi) is not None for lo in self.names]))

    def above(self, lo: str) -> np.ndarray:
        return self._cached(("above", lo), lambda: np.array([self.witness(lo, hi) is not None for hi in self.names]))

    def top_graphs(self) -> np.ndarray:
        return self._cached("top_graphs", lambda: np.hstack([self.top_witness(n).graph() for n in self.names]))

    def self_entailment(self, name: str) -> np.ndarray:
        phi = self.batch[name]
        return self._cached(("entails", name), lambda: _entail_table(phi, phi))

    def pairs(self) -> Iterator[tuple[str, Part, str, Part]]:
        for (n1, p), (n2, q) in itertools.product(self.parts.items(), repeat=2):
            yield n1, p, n2, q

    def witness(self, lo: str, hi: str) -> Optional[PartOrderWitness]:
        """Witness for ``parts[lo] <= parts[hi]``."""
        key = (lo, hi)
        if key not in self._witness:
            self._witness[key] = core.part_leq(self.parts[lo], self.parts[hi])
        return self._witness[key]

    def top_witness(self, name: str) -> PartOrderWitness:
        key = ("<top>", name)
        if key not in self._witness:
            self._witness[key] = core.part_leq(self.parts[name], self.top)
        return self._witness[key]

    def scalar_to(self, n1: str) -> tuple[np.ndarray, np.ndarray]:
        """Compatibility and determination from ``n1`` to every part, counted over system behaviors."""

        def build():
            if "indicators" not in self._cache:
                self._cache["indicators"] = np.hstack([q.indicator for q in self.parts.values()]).astype(np.intp)
            p = self.parts[n1]
            counts = p.indicator.T.astype(np.intp) @ self._cache["indicators"]
            fiber = np.bincount(p.map, minlength=len(p))
            # c: some behavior over a lands on b; d: every behavior over a does
            return counts > 0, counts == fiber[:, None]

        return self._cached(("scalar", n1), build)


Law = Callable[[_Context], int]
LAWS: dict[str, Law] = {}


def law(name: str):
    def register(fn):
        LAWS[name] = fn
        return fn

    return register


def _cx(**kw) -> _Failure:
    return _Failure(**kw)


@law("adjoint_exists_pullback")
def _adjoint_exists_pullback(ctx) -> int:
    checked = 0
    for hi in ctx.names:
        rows = ctx.below(hi)[ctx.row_owner]
        phi = ctx.batch[hi]
        lhs = _entail_table(_exists(ctx.graphs_to(hi), phi), ctx.psi(True)[rows])
        rhs = _entail_table(phi, ctx.pulled_up(hi)[rows])
        checked += lhs.size
        if not np.array_equal(lhs, rhs):
            i, r = _first(lhs != rhs)
            lo, j = ctx.locate_row(int(np.flatnonzero(rows)[r]))
            raise _cx(parts=[hi, lo], phi=_bits(phi[i]), psi=_bits(ctx.batch[lo][j]))
    return checked


@law("adjoint_pullback_forall")
def _adjoint_pullback_forall(ctx) -> int:
    checked = 0
    for hi in ctx.names:
        rows = ctx.below(hi)[ctx.row_owner]
        xi = ctx.batch[hi]
        lhs = _entail_table(ctx.pulled_up(hi)[rows], xi)
        rhs = _entail_table(ctx.psi(False)[rows], _forall(ctx.graphs_to(hi), xi))
        checked += lhs.size
        if not np.array_equal(lhs, rhs):
            r, i = _first(lhs != rhs)
            lo, j = ctx.locate_row(int(np.flatnonzero(rows)[r]))
            raise _cx(parts=[hi, lo], psi=_bits(ctx.batch[lo][j]), xi=_bits(xi[i]))
    return checked


@law("functoriality_identity")
def _functoriality_identity(ctx) -> int:
    checked = 0
    for name in ctx.parts:
        w = ctx.witness(name, name)
        phi = ctx.batch[name]
        for op, out in (
            ("exists", _exists(w.graph(), phi)),
            ("pullback", phi[:, w.factor]),
            ("forall", _forall(w.graph(), phi)),
        ):
            checked += len(phi)
            bad = (out != phi).any(axis=1)
            if bad.any():
                i = int(np.argmax(bad))
                raise _cx(parts=[name], operator=op, phi=_bits(phi[i]))
    return checked


@law("functoriality_composition")
def _functoriality_composition(ctx) -> int:
    # every chain r <= q <= p with q distinct from p and r; all r at once
    checked = 0
    index = {n: k for k, n in enumerate(ctx.names)}
    for p, q in itertools.product(ctx.names, repeat=2):
        if q == p:
            continue  # reduces to functoriality_identity
        w_pq = ctx.witness(q, p)
        if w_pq is None:
            continue
        chain = ctx.below(q).copy()
        chain[index[q]] = False
        if not chain.any():
            continue
        broken = chain & ~ctx.below(p)
        if broken.any():
            raise _cx(parts=[p, q, ctx.names[int(np.argmax(broken))]], detail="part order is not transitive")
        cols, rows = chain[ctx.col_owner], chain[ctx.row_owner]
        phi = ctx.batch[p]
        cases = (
            (
                "exists",
                _exists(ctx.graphs_to(q), _exists(w_pq.graph(), phi))[:, cols],
                _exists(ctx.graphs_to(p), phi)[:, cols],
            ),
            ("pullback", ctx.pulled_up(q)[rows][:, w_pq.factor], ctx.pulled_up(p)[rows]),
            (
                "forall",
                _forall(ctx.graphs_to(q), _forall(w_pq.graph(), phi))[:, cols],
                _forall(ctx.graphs_to(p), phi)[:, cols],
            ),
        )
        for op, composite, direct in cases:
            if op == "pullback":
                checked += len(composite)
                bad = (composite != direct).any(axis=1)
                if bad.any():
                    r, j = ctx.locate_row(int(np.flatnonzero(rows)[np.argmax(bad)]))
                    raise _cx(parts=[p, q, r], operator=op, constraint=_bits(ctx.batch[r][j]))
                continue
            checked += len(phi) * int(chain.sum())
            if not np.array_equal(composite, direct):
                i, c = _first(composite != direct)
                r, _ = ctx.locate_col(int(np.flatnonzero(cols)[c]))
                raise _cx(parts=[p, q, r], operator=op, constraint=_bits(phi[i]))
    return checked


def _kernel(p: Part) -> np.ndarray:
    return p.map[:, None] == p.map[None, :]


@law("exists_is_kernel_closure")
def _exists_is_kernel_closure(ctx) -> int:
    checked = 0
    phi = ctx.batch_top
    for name, p in ctx.parts.items():
        w = ctx.top_witness(name)
        lhs = _exists(w.graph(), phi)[:, w.factor]
        rhs = _any_product(phi, _kernel(p))
        checked += len(phi)
        bad = (lhs != rhs).any(axis=1)
        if bad.any():
            i = int(np.argmax(bad))
            raise _cx(parts=[name], phi=_bits(phi[i]))
    return checked


@law("forall_is_kernel_interior")
def _forall_is_kernel_interior(ctx) -> int:
    checked = 0
    phi = ctx.batch_top
    for name, p in ctx.parts.items():
        w = ctx.top_witness(name)
        lhs = _forall(w.graph(), phi)[:, w.factor]
        rhs = ~_any_product(~phi, _kernel(p))
        checked += len(phi)
        bad = (lhs != rhs).any(axis=1)
        if bad.any():
            i = int(np.argmax(bad))
            raise _cx(parts=[name], phi=_bits(phi[i]))
    return checked


@law("unit_counit")
def _unit_counit(ctx) -> int:
    checked = 0
    phi = ctx.batch_top
    for name in ctx.parts:
        w = ctx.top_witness(name)
        unit = _entails(phi, _exists(w.graph(), phi)[:, w.factor])
        counit = _entails(_forall(w.graph(), phi)[:, w.factor], phi)
        checked += 2 * len(phi)
        bad = ~(unit & counit)
        if bad.any():
            i = int(np.argmax(bad))
            raise _cx(parts=[name], phi=_bits(phi[i]))
    return checked


@law("allows_ensures_as_quantifiers")
def _allows_ensures_as_quantifiers(ctx) -> int:
    checked = 0
    graphs = ctx.top_graphs()
    for n1 in ctx.names:
        phi = ctx.batch[n1]
        pulled = phi[:, ctx.top_witness(n1).factor]
        for op, fast, slow in (
            ("allows", ctx._stacked(n1, "allows"), _exists(graphs, pulled)),
            ("ensures", ctx._stacked(n1, "ensures"), _forall(graphs, pulled)),
        ):
            checked += len(phi) * len(ctx.names)
            if not np.array_equal(fast, slow):
                i, c = _first(fast != slow)
                n2, _ = ctx.locate_col(c)
                raise _cx(parts=[n1, n2], operator=op, phi=_bits(phi[i]))
    return checked


@law("allows_ensures_de_morgan")
def _de_morgan(ctx) -> int:
    checked = 0
    for n1, p, n2, q in ctx.pairs():
        phi = ctx.batch[n1]
        lhs = ~_allows(p, q, ~phi)
        rhs = ctx.ensures(n1, n2)
        checked += len(phi)
        bad = (lhs != rhs).any(axis=1)
        if bad.any():
            i = int(np.argmax(bad))
            raise _cx(parts=[n1, n2], phi=_bits(phi[i]))
    return checked


@law("modalities_monotone")
def _monotone(ctx) -> int:
    checked = 0
    for n1 in ctx.names:
        phi = ctx.batch[n1]
        premise = ctx.self_entailment(n1)
        count = int(premise.sum())
        for op in ("allows", "ensures"):
            out = ctx._stacked(n1, op)
            checked += count * len(ctx.names)
            # entailment across all targets side by side is the conjunction of the per-target tables
            if not (premise & ~_entail_table(out, out)).any():
                continue
            for n2 in ctx.names:
                o = out[:, ctx.offsets[n2]]
                bad = premise & ~_entail_table(o, o)
                if bad.any():
                    i, j = _first(bad)
                    raise _cx(parts=[n1, n2], operator=op, phi=_bits(phi[i]), psi=_bits(phi[j]))
    return checked


@law("ensures_entails_allows")
def _ensures_entails_allows(ctx) -> int:
    checked = 0
    for n1 in ctx.names:
        phi = ctx.batch[n1]
        bad = ctx._stacked(n1, "ensures") & ~ctx._stacked(n1, "allows")
        checked += len(phi) * len(ctx.names)
        if bad.any():
            i, c = _first(bad)
            n2, _ = ctx.locate_col(c)
            raise _cx(parts=[n1, n2], phi=_bits(phi[i]))
    return checked


@law("allows_ensures_adjunction")
def _allows_ensures_adjunction(ctx) -> int:
    # allows from P to Q is left adjoint to ensures from Q to P
    checked = 0
    for n1 in ctx.names:
        phi = ctx.batch[n1]
        lhs = _entail_table(ctx._stacked(n1, "allows"), ctx.psi(True))
        rhs = _entail_table(phi, ctx.ensures_into(n1))
        checked += lhs.size
        if not np.array_equal(lhs, rhs):
            i, r = _first(lhs != rhs)
            n2, j = ctx.locate_row(r)
            raise _cx(parts=[n1, n2], phi=_bits(phi[i]), psi=_bits(ctx.batch[n2][j]))
    return checked


@law("allows_joins_ensures_meets")
def _joins_meets(ctx) -> int:
    # binary joins/meets plus the empty family; finite families follow by induction.
    # All target parts are checked at once on the side-by-side batches.
    checked = 0
    for n1, p in ctx.parts.items():
        phi = ctx.batch[n1]
        n = phi.shape[1]
        # rows packed to bytes; OR/AND commute with packing
        al = np.packbits(ctx._stacked(n1, "allows"), axis=1)
        en = np.packbits(ctx._stacked(n1, "ensures"), axis=1)
        # both sides are symmetric in the pair, so i <= j suffices
        i, j = ctx.upper[n1]
        rel = ctx.compat_to(n1)
        if ctx.exhaustive[n1]:
            # row k of an exhaustive batch is the constraint with bitmask k
            al_or, en_and = al[i | j], en[i & j]
        else:
            al_or = np.packbits(_exists(rel, phi[i] | phi[j]), axis=1)
            en_and = np.packbits(_forall(rel, phi[i] & phi[j]), axis=1)
        for op, lhs, rhs in (
            ("allows_or", al_or, al[i] | al[j]),
            ("ensures_and", en_and, en[i] & en[j]),
        ):
            checked += len(lhs) * len(ctx.parts)
            bad = (lhs != rhs).any(axis=-1)
            if bad.any():
                k = int(np.argmax(bad))
                raise _cx(parts=[n1], operator=op, phi=_bits(phi[i[k]]), psi=_bits(phi[j[k]]))
        empty = _exists(rel, np.zeros(n, bool)) | ~_forall(rel, np.ones(n, bool))
        if empty.any():
            n2, _ = ctx.locate_col(int(np.argmax(empty)))
            raise _cx(parts=[n1, n2], operator="empty family")
    return checked


@law("roundtrip_adjunction")
def _roundtrip_adjunction(ctx) -> int:
    checked = 0
    k = len(ctx.names)
    for n1 in ctx.names:
        phi = ctx.batch[n1]
        n = len(phi)
        lhs = _entail_table(ctx.roundtrips(n1, "allows"), phi).reshape(k, n, n)
        rhs = _entail_table(phi, ctx.roundtrips(n1, "ensures")).reshape(n, k, n).transpose(1, 0, 2)
        checked += lhs.size
        if not np.array_equal(lhs, rhs):
            t, i, j = _first(lhs != rhs)
            raise _cx(parts=[n1, ctx.names[t]], phi=_bits(phi[i]), psi=_bits(phi[j]))
    return checked


@law("roundtrip_identity_iff_leq")
def _roundtrip_identity(ctx) -> int:
    checked = 0
    for n1, p, n2, q in ctx.pairs():
        phi = ctx.batch[n1]
        identity = bool((ctx.roundtrip_allows(n1, n2) == phi).all())
        below = ctx.witness(n1, n2) is not None
        checked += 1
        if identity != below:
            raise _cx(parts=[n1, n2], roundtrip_identity=identity, leq=below)
    return checked


@law("allows_entails_ensures_iff_leq")
def _allows_entails_ensures(ctx) -> int:
    checked = 0
    for n1 in ctx.names:
        escapes = (ctx._stacked(n1, "allows") & ~ctx._stacked(n1, "ensures")).any(axis=0)
        holds = ~np.logical_or.reduceat(escapes, ctx.col_starts)
        below = ctx.above(n1)
        checked += len(ctx.names)
        if not np.array_equal(holds, below):
            t = int(np.argmax(holds != below))
            raise _cx(parts=[n1, ctx.names[t]], allows_entails_ensures=bool(holds[t]), leq=bool(below[t]))
    return checked


@law("pointwise_recovery")
def _pointwise_recovery(ctx) -> int:
    checked = 0
    same_block = ctx.col_owner[:, None] == ctx.col_owner[None, :]
    off_diagonal = same_block & ~np.eye(ctx.width, dtype=bool)
    for n1, p in ctx.parts.items():
        c, d = ctx.scalar_to(n1)
        from_all = ctx.compat_from(n1)
        via_allows = _exists(ctx.compat_to(n1), np.eye(len(p), dtype=bool))
        # point constraints of every target at once
        via_allows_rev = _exists(from_all, np.eye(ctx.width, dtype=bool)).T
        via_ensures = _forall(from_all, ~off_diagonal).T
        checked += 3 * c.size
        for op, got, want in (
            ("c = allows(=p)", via_allows, c),
            ("c = allows(=q)", via_allows_rev, c),
            ("d = ensures(=q)", via_ensures, d),
        ):
            if not np.array_equal(got, want):
                a, col = _first(got != want)
                n2, b = ctx.locate_col(col)
                raise _cx(parts=[n1, n2], operator=op, a=a, b=b)
    return checked


@law("determination_unique")
def _determination_unique(ctx) -> int:
    checked = 0
    for n1, p in ctx.parts.items():
        _, d = ctx.scalar_to(n1)
        counts = np.add.reduceat(d, ctx.col_starts, axis=1, dtype=np.intp)
        checked += counts.size
        if (counts > 1).any():
            a, t = _first(counts > 1)
            n2 = ctx.names[t]
            row = d[a, ctx.offsets[n2]]
            raise _cx(parts=[n1, n2], a=a, determined=[int(b) for b in np.flatnonzero(row)])
    return checked


@law("part_order_characterizations")
def _part_order_characterizations(ctx) -> int:
    checked = 0
    for n1, p, n2, q in ctx.pairs():
        values = core.part_order_conditions(p, q)
        checked += 1
        if len(set(values)) != 1:
            raise _cx(parts=[n1, n2], conditions=list(values))
    return checked


@law("strongly_disjoint_implies_disjoint")
def _strongly_disjoint(ctx) -> int:
    checked = 0
    for n1, p, n2, q in ctx.pairs():
        checked += 1
        if core.strongly_disjoint(p, q) and not core.disjoint(p, q):
            raise _cx(parts=[n1, n2])
    return checked


@law("compatibility_symmetric")
def _symmetry(ctx) -> int:
    full = np.vstack([ctx.scalar_to(n)[0] for n in ctx.names])
    if not np.array_equal(full, full.T):
        x, y = _first(full != full.T)
        n1, a = ctx.locate_col(x)
        n2, b = ctx.locate_col(y)
        raise _cx(parts=[n1, n2], a=a, b=b)
    return full.size


@law("meet_join_bounds")
def _lattice(ctx) -> int:
    names, parts = ctx.names, list(ctx.parts.values())
    k = len(parts)
    pairs = list(itertools.combinations_with_replacement(range(k), 2))
    meets = [core.meet(parts[i], parts[j]) for i, j in pairs]
    joins = [core.join(parts[i], parts[j]) for i, j in pairs]
    # order among parts, meets and joins from kernels: lo <= hi iff hi's kernel lies in lo's
    maps = np.array([p.map for p in parts + meets + joins])
    kern = maps[:, :, None] == maps[:, None, :]
    leq = ~(kern[None, :] & ~kern[:, None]).any(axis=(2, 3))
    below = leq[:k, :k]
    for t, (i, j) in enumerate(pairs):
        m, jn = k + t, k + len(pairs) + t
        for lo, hi, what in ((m, i, "meet <= P"), (m, j, "meet <= Q"), (i, jn, "P <= join"), (j, jn, "Q <= join")):
            if not leq[lo, hi]:
                raise _cx(parts=[names[i], names[j]], bound=what)
        glb = below[:, i] & below[:, j] & ~leq[:k, m]
        if glb.any():
            raise _cx(parts=[names[i], names[j], names[int(np.argmax(glb))]], bound="meet is not the greatest lower bound")
        lub = below[i, :] & below[j, :] & ~leq[jn, :k]
        if lub.any():
            raise _cx(parts=[names[i], names[j], names[int(np.argmax(lub))]], bound="join is not the least upper bound")
    return len(pairs) * (4 + 2 * k)


def law_suite(model: SystemModel, seed=0, laws: Optional[list[str]] = None) -> list[LawReport]:
    """Run every registered law (or the named subset) on ``model``.

    Failures are reported, never raised; a failing report carries the part
    names and constraint bit-vectors needed to replay it.
    """
    if len(model.parts) < 2:
        raise core.MereologyError("law suite needs at least two named parts")
    ctx = _Context(model, seed)
    system_id = model.system.id or "system"
    reports = []
    for name in laws or LAWS:
        fn = LAWS[name]
        try:
            checked = fn(ctx)
        except _Failure as failure:
            reports.append(LawReport(name, system_id, False, 0, failure.details))
        else:
            reports.append(LawReport(name, system_id, True, checked))
    return reports


def describe_failure(report: LawReport, model: SystemModel) -> str:
    """One-line rendering of a counterexample with behavior labels resolved."""
    cx = dict(report.counterexample or {})
    parts = cx.get("parts", [])
    out = []
    for key, value in cx.items():
        if isinstance(value, list) and value and key not in ("parts", "conditions", "determined"):
            carrier = model.parts[parts[0]].codomain if key == "phi" and parts else None
            if carrier is not None and len(carrier) == len(value):
                value = "{" + ", ".join(render_label(carrier[i]) for i, bit in enumerate(value) if bit) + "}"
        out.append(f"{key}={value}")
    return f"{report.law} failed on {report.system}: " + ", ".join(out)


@dataclass
class RandomRun:
    seed: int
    index: int
    size: int
    num_parts: int
    reports: list[LawReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def random_law_runs(num_systems: int, seed: int = 0, max_size: int = 8) -> Iterator[RandomRun]:
    """Law suite over ``num_systems`` seeded random systems, in seed order.

    System ``i`` uses size and part count drawn from ``default_rng([seed, i])``
    and is built by ``random_system([seed, i], ...)``.
    """
    from .models import random_system

    if not 1 <= max_size <= 8:
        raise core.MereologyError("max size must be in 1..8")
    for i in range(num_systems):
        rng = np.random.default_rng([seed, i])
        size = int(rng.integers(1, max_size + 1))
        num_parts = int(rng.integers(2, 5))
        model = random_system([seed, i], size, num_parts)
        yield RandomRun(seed, i, size, num_parts, law_suite(model, seed=[seed, i]))

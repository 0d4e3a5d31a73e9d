"""Buchberger's algorithm for ideals and submodules of free modules.

Internally a term is a packed integer: exponent ``i`` occupies bits
``[16 i, 16 i + 15)`` with bit ``16 i + 15`` kept clear as a guard, and the
module component sits above all exponent fields.  Multiplication is integer
addition and divisibility is a guarded subtraction.

The same engine serves ideals (every term in component 0), submodules of
``R^r``, and the "span over a subring" computations used by the ring layer.
"""

from __future__ import annotations

import contextlib
import contextvars
import heapq
from dataclasses import dataclass
from typing import Sequence

from .errors import AmbientMismatch, BudgetExceeded
from .poly import (
    MAX_EXPONENT,
    DegRevLex,
    MonomialOrder,
    PolyRing,
    Polynomial,
    _DIGIT_BITS,
    order_eliminates,
)

_FIELD = 16
_FIELD_MASK = (1 << _FIELD) - 1

# ---------------------------------------------------------------------------
# resource budget


@dataclass
class Budget:
    max_spairs: int | None = 1_000_000
    max_terms: int | None = 20_000_000
    spairs: int = 0

    def charge_pair(self):
        self.spairs += 1
        if self.max_spairs is not None and self.spairs > self.max_spairs:
            raise BudgetExceeded("S-pairs processed", self.max_spairs)

    def check_terms(self, n):
        if self.max_terms is not None and n > self.max_terms:
            raise BudgetExceeded("terms in basis", self.max_terms)


_budget: contextvars.ContextVar[Budget | None] = contextvars.ContextVar("gcx_budget", default=None)


@contextlib.contextmanager
def budget(max_spairs: int | None = None, max_terms: int | None = None):
    """Cap S-pair and term counts for every Groebner call in the block.

    The S-pair count accumulates across all calls made inside the block.
    """
    b = Budget(
        max_spairs if max_spairs is not None else Budget.max_spairs,
        max_terms if max_terms is not None else Budget.max_terms,
    )
    token = _budget.set(b)
    try:
        yield b
    finally:
        _budget.reset(token)


def _current_budget() -> Budget:
    b = _budget.get()
    return b if b is not None else Budget()


# ---------------------------------------------------------------------------
# module orders


class ModuleOrder:
    """Order on terms ``x^a e_c``; component 0 is the largest position."""

    def __init__(self, term_order: MonomialOrder, rank: int, kind: str = "top"):
        if kind not in ("top", "pot"):
            raise ValueError("kind must be 'top' or 'pot'")
        self.term_order = term_order
        self.rank = rank
        self.kind = kind
        self.nvars = term_order.nvars

    def digits(self, comp, exps):
        pos = self.rank - comp
        if self.kind == "pot":
            return (pos,) + tuple(self.term_order.digits(exps))
        return tuple(self.term_order.digits(exps)) + (pos,)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleOrder)
            and (self.term_order, self.rank, self.kind) == (other.term_order, other.rank, other.kind)
        )

    def __hash__(self):
        return hash((self.term_order, self.rank, self.kind))

    def __repr__(self):
        return f"ModuleOrder({self.term_order!r}, rank={self.rank}, {self.kind})"


class _IdealOrder:
    def __init__(self, order: MonomialOrder):
        self.order = order
        self.nvars = order.nvars

    def digits(self, comp, exps):
        return self.order.digits(exps)


class _SyzygyOrder:
    """Target components (first ``n_target``) dominate the tag components;
    inside each block terms compare by DegRevLex, then position."""

    def __init__(self, nvars, n_target, rank):
        self.inner = DegRevLex(nvars)
        self.nvars = nvars
        self.n_target = n_target
        self.rank = rank

    def digits(self, comp, exps):
        return (1 if comp < self.n_target else 0,) + self.inner.digits(exps) + (self.rank - comp,)


class _SpanOrder:
    """Order for spans over a subring generated by the last ``n_base`` variables.

    Any term involving an eliminated variable, or lying in a target component,
    beats every term built from base variables in a tag component.
    """

    def __init__(self, n_elim, n_base, n_target, rank):
        self.elim = DegRevLex(n_elim)
        self.base = DegRevLex(n_base)
        self.n_elim = n_elim
        self.nvars = n_elim + n_base
        self.n_target = n_target
        self.rank = rank

    def digits(self, comp, exps):
        k = self.n_elim
        return (
            self.elim.digits(exps[:k])
            + (1 if comp < self.n_target else 0,)
            + self.base.digits(exps[k:])
            + (self.rank - comp,)
        )


# ---------------------------------------------------------------------------
# engine


class _Elem:
    __slots__ = ("lm", "key", "tail", "poly", "deg")

    def __init__(self, lm, key, poly, deg):
        self.lm = lm
        self.key = key
        self.poly = poly
        self.tail = [(m, c) for m, c in poly.items() if m != lm]
        self.deg = deg


class _Engine:
    """Packed-term arithmetic and Buchberger's algorithm for one computation."""

    def __init__(self, nvars: int, p: int, order):
        self.n = nvars
        self.p = p
        self.order = order
        self.cshift = _FIELD * nvars
        self.guard = sum(1 << (_FIELD * i + _FIELD - 1) for i in range(nvars))
        self.expmask = (1 << self.cshift) - 1
        self._keys: dict = {}
        self._unpacked: dict = {}

    # packing ----------------------------------------------------------
    def pack(self, comp, exps):
        m = comp << self.cshift
        for i, e in enumerate(exps):
            if e >= MAX_EXPONENT:
                raise OverflowError(f"exponent {e} too large")
            m |= e << (_FIELD * i)
        return m

    def unpack(self, m):
        r = self._unpacked.get(m)
        if r is None:
            exps = tuple((m >> (_FIELD * i)) & _FIELD_MASK for i in range(self.n))
            r = (m >> self.cshift, exps)
            self._unpacked[m] = r
        return r

    def key(self, m):
        k = self._keys.get(m)
        if k is None:
            comp, exps = self.unpack(m)
            k = 0
            for d in self.order.digits(comp, exps):
                k = (k << _DIGIT_BITS) | d
            self._keys[m] = k
        return k

    def degree(self, m):
        return sum(self.unpack(m)[1])

    def divides(self, a, b):
        """Does term ``a`` divide term ``b``?"""
        d = (b | self.guard) - a
        return d >= 0 and (d & self.guard) == self.guard and (d >> self.cshift) == 0

    def lcm(self, a, b):
        ca, ea = self.unpack(a)
        return self.pack(ca, [max(x, y) for x, y in zip(ea, self.unpack(b)[1])])

    def coprime(self, a, b):
        ea, eb = self.unpack(a)[1], self.unpack(b)[1]
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))

    # conversion -------------------------------------------------------
    def from_vector(self, vec: Sequence[Polynomial]) -> dict:
        out = {}
        for comp, f in enumerate(vec):
            for m, c in f._d.items():
                out[self.pack(comp, m)] = c
        return out

    def to_vector(self, d: dict, rank: int, ring: PolyRing) -> tuple:
        parts = [dict() for _ in range(rank)]
        for m, c in d.items():
            comp, exps = self.unpack(m)
            parts[comp][exps] = c
        return tuple(Polynomial(ring, x) for x in parts)

    def leading(self, d: dict):
        key = self.key
        return max(d, key=key)

    def make_monic(self, d: dict):
        lm = self.leading(d)
        lc = d[lm]
        if lc != 1:
            p = self.p
            if p:
                inv = pow(lc, -1, p)
                d = {m: c * inv % p for m, c in d.items()}
            else:
                inv = 1 / lc
                d = {m: c * inv for m, c in d.items()}
        return lm, d

    # reduction --------------------------------------------------------
    def reduce(self, f: dict, basis: Sequence[_Elem], full: bool = True) -> dict:
        """Remainder of ``f`` modulo ``basis`` (all monic)."""
        if not f or not basis:
            return dict(f)
        f = dict(f)
        key = self.key
        p = self.p
        guard = self.guard
        cshift = self.cshift
        heap = [-key(m) for m in f]
        heapq.heapify(heap)
        bykey = {key(m): m for m in f}
        rem = {}
        lms = [(g.lm, g) for g in basis]
        while heap:
            k = -heapq.heappop(heap)
            m = bykey[k]
            c = f.get(m)
            if c is None:
                continue
            red = None
            for lm, g in lms:
                d = (m | guard) - lm
                if d >= 0 and (d & guard) == guard and (d >> cshift) == 0:
                    red = g
                    q = m - lm
                    break
            del f[m]
            if red is None:
                rem[m] = c
                if not full:
                    for mm, cc in f.items():
                        rem[mm] = cc
                    return rem
                continue
            for gm, gc in red.tail:
                nm = gm + q
                old = f.get(nm)
                if old is None:
                    nc = -c * gc
                    if p:
                        nc %= p
                    f[nm] = nc
                    nk = key(nm)
                    bykey[nk] = nm
                    heapq.heappush(heap, -nk)
                else:
                    nc = old - c * gc
                    if p:
                        nc %= p
                    if nc:
                        f[nm] = nc
                    else:
                        del f[nm]
        return rem

    # Buchberger -------------------------------------------------------
    def _elem(self, d: dict) -> _Elem:
        lm, d = self.make_monic(d)
        return _Elem(lm, self.key(lm), d, self.degree(lm))

    def groebner(self, polys: Sequence[dict], module: bool) -> list[_Elem]:
        bud = _current_budget()
        elems: list[_Elem] = []
        active: list[int] = []
        pairs: dict = {}
        heap: list = []
        key = self.key
        use_product = not module

        def spoly(i, j, lcm):
            a, b = elems[i], elems[j]
            qa, qb = lcm - a.lm, lcm - b.lm
            p = self.p
            out = {}
            for m, c in a.tail:
                out[m + qa] = c
            for m, c in b.tail:
                nm = m + qb
                v = out.get(nm, 0) - c
                if p:
                    v %= p
                if v:
                    out[nm] = v
                else:
                    out.pop(nm, None)
            return out

        def update(h):
            hl = elems[h].lm
            hc = hl >> self.cshift
            new = []
            for g in active:
                gl = elems[g].lm
                if (gl >> self.cshift) != hc:
                    continue
                new.append((g, self.lcm(hl, gl), use_product and self.coprime(hl, gl)))
            # chain criterion among the new pairs
            kept = []
            for idx, (g, l, disjoint) in enumerate(new):
                if disjoint:
                    kept.append((g, l, True))
                    continue
                dominated = False
                for jdx, (g2, l2, _) in enumerate(new):
                    if jdx == idx:
                        continue
                    if l2 != l and self.divides(l2, l):
                        dominated = True
                        break
                    if l2 == l and jdx < idx:
                        dominated = True
                        break
                if not dominated:
                    kept.append((g, l, False))
            # drop old pairs whose lcm is strictly divisible by LM(h)
            for (i, j), l in list(pairs.items()):
                if self.divides(hl, l):
                    l1 = self.lcm(elems[i].lm, hl)
                    l2 = self.lcm(elems[j].lm, hl)
                    if l1 != l and l2 != l:
                        del pairs[(i, j)]
            for g, l, disjoint in kept:
                if disjoint:
                    continue
                pr = (g, h)
                pairs[pr] = l
                heapq.heappush(heap, (self.degree(l), key(l), g, h))
            active[:] = [g for g in active if not self.divides(hl, elems[g].lm)]
            active.append(h)

        def add(d):
            elems.append(self._elem(d))
            update(len(elems) - 1)

        inputs = sorted((d for d in polys if d), key=lambda d: key(self.leading(d)))
        for d in inputs:
            r = self.reduce(d, [elems[i] for i in active])
            if r:
                add(r)
        total_terms = 0
        while heap:
            _, _, i, j = heapq.heappop(heap)
            l = pairs.pop((i, j), None)
            if l is None:
                continue
            bud.charge_pair()
            s = spoly(i, j, l)
            if not s:
                continue
            r = self.reduce(s, [elems[g] for g in active])
            if r:
                add(r)
                total_terms += len(r)
                bud.check_terms(total_terms)
        return self.interreduce([elems[i] for i in active])

    def interreduce(self, basis: list[_Elem]) -> list[_Elem]:
        basis = sorted(basis, key=lambda e: e.key)
        minimal = []
        for e in basis:
            if not any(self.divides(g.lm, e.lm) for g in minimal):
                minimal.append(e)
        out = []
        for idx, e in enumerate(minimal):
            others = minimal[:idx] + minimal[idx + 1 :]
            tail = {m: c for m, c in e.tail}
            tail = self.reduce(tail, others)
            d = dict(tail)
            d[e.lm] = e.poly[e.lm]
            out.append(_Elem(e.lm, e.key, d, e.deg))
        return out


# ---------------------------------------------------------------------------
# public ideal interface


def _ambient(gens: Sequence[Polynomial], ring: PolyRing | None) -> PolyRing:
    if ring is None:
        if not gens:
            raise ValueError("cannot infer the ambient ring of an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if not ring.compatible(g.ring):
            raise AmbientMismatch(f"{g.ring!r} vs {ring!r}")
    return ring


class GroebnerBasis:
    """Reduced Groebner basis of an ideal: monic generators sorted by
    increasing leading monomial."""

    def __init__(self, ring: PolyRing, order: MonomialOrder, engine: _Engine, elems: list[_Elem]):
        self.ring = ring.with_order(order) if ring.order != order else ring
        self.order = order
        self._engine = engine
        self._elems = elems
        self.generators = [engine.to_vector(e.poly, 1, self.ring)[0] for e in elems]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.order == other.order and self.generators == other.generators

    def __hash__(self):
        return hash(tuple(self.generators))

    def __repr__(self):
        return f"GroebnerBasis({[str(g) for g in self.generators]})"

    def is_unit_ideal(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant() and bool(self.generators[0])

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.generators]

    def reduce(self, f: Polynomial) -> Polynomial:
        if not self.ring.compatible(f.ring):
            raise AmbientMismatch(f"{f.ring!r} vs {self.ring!r}")
        eng = self._engine
        d = eng.reduce(eng.from_vector([f]), self._elems)
        return eng.to_vector(d, 1, f.ring)[0]

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def contains_ideal(self, gens: Sequence[Polynomial]) -> bool:
        return all(self.contains(g) for g in gens)


def groebner_basis(gens: Sequence[Polynomial], order: MonomialOrder | None = None,
                   ring: PolyRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    ring = _ambient(gens, ring)
    order = order or ring.order
    if order.nvars != ring.nvars:
        raise AmbientMismatch("order and ring have different variable counts")
    eng = _Engine(ring.nvars, ring.field.p, _IdealOrder(order))
    elems = eng.groebner([eng.from_vector([g]) for g in gens], module=False)
    return GroebnerBasis(ring, order, eng, elems)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.reduce(f)


def elimination_ideal(gens: Sequence[Polynomial], order: MonomialOrder | None = None,
                      drop_front: int = 0, ring: PolyRing | None = None) -> list[Polynomial]:
    """Generators of ``(gens) ∩ k[x_{drop_front}, ...]`` as a reduced basis.

    Results live in the ring of the remaining variables.
    """
    ring = _ambient(gens, ring)
    n = ring.nvars
    if order is None:
        from .poly import elimination_order

        order = elimination_order(drop_front, n - drop_front)
    if not order_eliminates(order, drop_front):
        raise ValueError(f"order {order!r} does not eliminate the first {drop_front} variables")
    gens = _substitute_linear(list(gens), drop_front)[0]
    gb = groebner_basis(gens, order, ring)
    sub = PolyRing(ring.field, ring.names[drop_front:])
    out = []
    for g in gb:
        if all(not any(m[:drop_front]) for m in g._d):
            out.append(Polynomial(sub, {m[drop_front:]: c for m, c in g._d.items()}))
    return out


def _substitute_linear(relations: list[Polynomial], n_elim: int, max_rest: int = 64):
    """Remove eliminable variables that some relation expresses linearly.

    A relation ``c*y + rest`` with ``y`` among the first ``n_elim`` variables
    and ``y`` absent from ``rest`` lets us substitute ``y := -rest/c``.  The
    elimination ideal and all spans over the remaining variables are unchanged.
    Returns the new relations and the substitutions, in application order.
    """
    rels = [r for r in relations if r]
    subs: list[tuple[int, Polynomial]] = []
    if not rels:
        return rels, subs
    ring = rels[0].ring
    field = ring.field
    units = [tuple(1 if j == y else 0 for j in range(ring.nvars)) for y in range(n_elim)]
    changed = True
    while changed:
        changed = False
        for idx, r in enumerate(rels):
            hit = None
            for y in range(n_elim):
                c = r._d.get(units[y])
                if c is None:
                    continue
                if len(r) - 1 <= max_rest and all(m[y] == 0 for m in r._d if m != units[y]):
                    hit = (y, c)
                    break
            if hit is None:
                continue
            y, c = hit
            rest = Polynomial(ring, {m: v for m, v in r._d.items() if m != units[y]})
            value = -rest * field.inv(c)
            subs.append((y, value))
            new = []
            for j, s in enumerate(rels):
                if j == idx:
                    continue
                s = _substitute(s, y, value)
                if s:
                    new.append(s)
            rels = new
            changed = True
            break
    return rels, subs


def _substitute(f: Polynomial, y: int, value: Polynomial) -> Polynomial:
    if not any(m[y] for m in f._d):
        return f
    ring = f.ring
    images = [ring.var(j) if j != y else value for j in range(ring.nvars)]
    return f.evaluate(images, ring)


def _apply_subs(f: Polynomial, subs) -> Polynomial:
    for y, value in subs:
        f = _substitute(f, y, value)
    return f


# ---------------------------------------------------------------------------
# modules

ModuleVector = tuple


def _vec_ring(vectors, ring):
    for v in vectors:
        for f in v:
            return f.ring if ring is None else ring
    if ring is None:
        raise ValueError("cannot infer the ambient ring")
    return ring


class ModuleGB:
    """Reduced Groebner basis of a submodule of ``R^rank`` (``R`` possibly a
    quotient ring given by ``relations``, which are folded into the basis)."""

    def __init__(self, ring, rank, order, engine, elems):
        self.ring = ring
        self.rank = rank
        self.order = order
        self._engine = engine
        self._elems = elems
        self.generators = [engine.to_vector(e.poly, rank, ring) for e in elems]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other):
        if not isinstance(other, ModuleGB):
            return NotImplemented
        return self.rank == other.rank and self.generators == other.generators

    def reduce(self, v) -> tuple:
        if len(v) != self.rank:
            raise AmbientMismatch("vector has the wrong number of components")
        eng = self._engine
        d = eng.reduce(eng.from_vector(v), self._elems)
        return eng.to_vector(d, self.rank, self.ring)

    def contains(self, v) -> bool:
        return all(not f for f in self.reduce(v))


def module_gb(vectors, order: ModuleOrder | None = None, relations: Sequence[Polynomial] = (),
              ring: PolyRing | None = None, rank: int | None = None) -> ModuleGB:
    """Reduced Groebner basis of the submodule generated by ``vectors``.

    With ``relations`` the computation happens in ``(R/J)^rank`` realised as
    ``R^rank / J R^rank``.
    """
    vectors = [tuple(v) for v in vectors]
    ring = _vec_ring(vectors, ring or (relations[0].ring if relations else None))
    if rank is None:
        if not vectors:
            raise ValueError("rank required for an empty generator list")
        rank = len(vectors[0])
    if any(len(v) != rank for v in vectors):
        raise AmbientMismatch("vectors have different component counts")
    order = order or ModuleOrder(DegRevLex(ring.nvars), rank, "top")
    eng = _Engine(ring.nvars, ring.field.p, order)
    rows = [eng.from_vector(v) for v in vectors]
    zero = ring.zero()
    for r in relations:
        for k in range(rank):
            rows.append(eng.from_vector([zero] * k + [r] + [zero] * (rank - k - 1)))
    elems = eng.groebner(rows, module=True)
    return ModuleGB(ring, rank, order, eng, elems)


def submodule_membership(v, gb: ModuleGB):
    """``(is_member, normal_form)`` for a vector against a module basis."""
    nf = gb.reduce(tuple(v))
    return all(not f for f in nf), nf


def syzygies(vectors, relations: Sequence[Polynomial] = (), ring: PolyRing | None = None) -> list[tuple]:
    """Generators of ``{c : sum_j c_j v_j = 0}`` (modulo ``relations``).

    Computed by eliminating the target components from the module spanned by
    ``(v_j, e_j)``.
    """
    vectors = [tuple(v) for v in vectors]
    ring = _vec_ring(vectors, ring or (relations[0].ring if relations else None))
    if not vectors:
        return []
    t = len(vectors[0])
    m = len(vectors)
    rank = t + m
    eng = _Engine(ring.nvars, ring.field.p, _SyzygyOrder(ring.nvars, t, rank))
    zero, one = ring.zero(), ring.one()
    rows = []
    for j, v in enumerate(vectors):
        tags = [zero] * m
        tags[j] = one
        rows.append(eng.from_vector(list(v) + tags))
    for r in relations:
        for k in range(t):
            rows.append(eng.from_vector([zero] * k + [r] + [zero] * (rank - k - 1)))
    elems = eng.groebner(rows, module=True)
    out = []
    for e in elems:
        if (e.lm >> eng.cshift) >= t:
            vec = eng.to_vector(e.poly, rank, ring)
            out.append(vec[t:])
    return out


# ---------------------------------------------------------------------------
# spans over a subring


class SubringSpan:
    """Span of vectors over the subring generated by the trailing variables.

    The ambient is ``P = k[y_1..y_a, w_1..w_b]`` modulo ``relations``; the
    subring is the image of ``k[w]``.  For vectors ``v_1..v_m`` in ``(P/J)^t``
    this computes a Groebner basis of

        J * P^t  +  < v_i - e_{t+i} >   in   P^(t+m)

    under an order eliminating the ``y`` variables and the target components.
    Its part free of both describes the ``k[w]``-linear relations among the
    ``v_i``, and normal forms of target vectors decide ``k[w]``-span membership
    with explicit coefficients.
    """

    def __init__(self, ring: PolyRing, n_elim: int, relations: Sequence[Polynomial],
                 vectors: Sequence[Sequence[Polynomial]], simplify: bool = True):
        vectors = [tuple(v) for v in vectors]
        self.ring = ring
        self.n_elim = n_elim
        self.base_ring = PolyRing(ring.field, ring.names[n_elim:])
        self.t = len(vectors[0]) if vectors else 1
        self.m = len(vectors)
        rels = [ring(r) for r in relations if r]
        self._subs = []
        if simplify:
            rels, self._subs = _substitute_linear(rels, n_elim)
            vectors = [tuple(_apply_subs(f, self._subs) for f in v) for v in vectors]
        self.relations = rels
        rank = self.t + self.m
        self.rank = rank
        eng = _Engine(ring.nvars, ring.field.p, _SpanOrder(n_elim, ring.nvars - n_elim, self.t, rank))
        self._engine = eng
        zero, one = ring.zero(), ring.one()
        rows = []
        for i, v in enumerate(vectors):
            tags = [zero] * self.m
            tags[i] = -one
            rows.append(eng.from_vector(list(v) + tags))
        for r in rels:
            for k in range(self.t):
                rows.append(eng.from_vector([zero] * k + [r] + [zero] * (rank - k - 1)))
        self._elems = eng.groebner(rows, module=True)

    def _in_base_tags(self, m) -> bool:
        comp, exps = self._engine.unpack(m)
        return comp >= self.t and not any(exps[: self.n_elim])

    def _to_base(self, f: Polynomial) -> Polynomial:
        k = self.n_elim
        return Polynomial(self.base_ring, {m[k:]: c for m, c in f._d.items()})

    def syzygies(self) -> list[tuple]:
        """Generators of the ``k[w]``-module of relations among the vectors,
        as rows of polynomials in the base ring."""
        eng = self._engine
        out = []
        for e in self._elems:
            if self._in_base_tags(e.lm):
                vec = eng.to_vector(e.poly, self.rank, self.ring)
                out.append(tuple(self._to_base(f) for f in vec[self.t:]))
        return out

    def express(self, v) -> tuple | None:
        """Coefficients ``q`` in the base ring with ``v = sum q_i v_i``, or None."""
        v = tuple(v)
        if len(v) != self.t:
            raise AmbientMismatch("vector has the wrong number of components")
        v = tuple(_apply_subs(self.ring(f), self._subs) for f in v)
        eng = self._engine
        zero = self.ring.zero()
        d = eng.reduce(eng.from_vector(list(v) + [zero] * self.m), self._elems)
        if not all(self._in_base_tags(m) for m in d):
            return None
        vec = eng.to_vector(d, self.rank, self.ring)
        return tuple(self._to_base(f) for f in vec[self.t:])

    def contains(self, v) -> bool:
        return self.express(v) is not None

"""Finitely presented algebras and the constructions performed on them.

A base subring is always given by generators inside the bigger ring; questions
"over the base" become ideal and module questions in the graph ring
``k[vars of C, w]/(I_C + (w_j - a_j))`` under an order eliminating C's variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import AmbientMismatch, IllDefinedMap, NotFinite
from .groebner import GroebnerBasis, SubringSpan, elimination_ideal, groebner_basis
from .poly import DegRevLex, Field, PolyRing, Polynomial, format_polynomial

DEFAULT_FINITENESS_ROUNDS = 64


def embed(f: Polynomial, ring: PolyRing, offset: int) -> Polynomial:
    """Copy ``f`` into ``ring`` with its variables starting at ``offset``."""
    n = f.ring.nvars
    pre = (0,) * offset
    post = (0,) * (ring.nvars - offset - n)
    return Polynomial(ring, {pre + m + post: c for m, c in f._d.items()})


def unique_names(names: Sequence[str], taken: Sequence[str] = ()) -> list[str]:
    seen = set(taken)
    out = []
    for n in names:
        while n in seen:
            n = n + "'"
        seen.add(n)
        out.append(n)
    return out


class PresentedRing:
    """``k[x_1..x_n]/I`` with ``I`` stored as a reduced DegRevLex basis."""

    def __init__(self, field: Field, names: Sequence[str], relations: Sequence = (), gb: GroebnerBasis | None = None):
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {list(names)}")
        self.field = field
        self.names = tuple(names)
        self.poly_ring = PolyRing(field, self.names, DegRevLex(len(self.names)))
        self.relations = [self.poly_ring(r) for r in relations]
        self._gb = gb

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = groebner_basis(self.relations, self.poly_ring.order, self.poly_ring)
        return self._gb

    def ideal(self) -> list[Polynomial]:
        return list(self.gb)

    def is_zero_ring(self) -> bool:
        return self.gb.is_unit_ideal()

    def reduce(self, f) -> Polynomial:
        return self.gb.reduce(self(f))

    def is_zero(self, f) -> bool:
        return not self.reduce(f)

    def __call__(self, value) -> Polynomial:
        if isinstance(value, Polynomial):
            if value.ring.nvars != self.nvars or value.ring.field != self.field:
                raise AmbientMismatch(f"{value.ring!r} is not the ambient of {self!r}")
            return value if value.ring is self.poly_ring else Polynomial(self.poly_ring, value._d)
        return self.poly_ring(value)

    def gens(self) -> list[Polynomial]:
        return self.poly_ring.gens()

    def var(self, name) -> Polynomial:
        return self.poly_ring.var(name)

    def one(self) -> Polynomial:
        return self.poly_ring.one()

    def zero(self) -> Polynomial:
        return self.poly_ring.zero()

    def format(self, f: Polynomial) -> str:
        return format_polynomial(f, self.names)

    def same_presentation(self, other: "PresentedRing") -> bool:
        return self.field == other.field and self.names == other.names and self.gb == other.gb

    def rename(self, names: Sequence[str]) -> "PresentedRing":
        r = PresentedRing(self.field, names, self.relations)
        if self._gb is not None:
            r._gb = groebner_basis(list(self._gb), r.poly_ring.order, r.poly_ring)
        return r

    def __repr__(self):
        rels = ", ".join(self.format(g) for g in self.relations)
        return f"{self.field!r}[{', '.join(self.names)}]/({rels})"


def polynomial_ring(field: Field, names: Sequence[str]) -> PresentedRing:
    return PresentedRing(field, names, [])


class RingMap:
    """Ring homomorphism determined by the images of the source variables."""

    def __init__(self, source: PresentedRing, target: PresentedRing, images: Sequence, check: bool = True):
        if len(images) != source.nvars:
            raise AmbientMismatch(f"need {source.nvars} images, got {len(images)}")
        if source.field != target.field:
            raise AmbientMismatch("source and target fields differ")
        self.source = source
        self.target = target
        self.images = [target(im) for im in images]
        if check:
            self.check()

    def check(self):
        for r in self.source.gb:
            v = self.apply_raw(r)
            if not self.target.is_zero(v):
                raise IllDefinedMap(
                    f"relation {self.source.format(r)} maps to {self.target.format(self.target.reduce(v))} != 0"
                )

    def apply_raw(self, f: Polynomial) -> Polynomial:
        """Image of ``f`` before reduction modulo the target ideal."""
        f = self.source(f)
        if not self.images:
            return self.target.poly_ring.const(f.constant_coeff())
        return f.evaluate(self.images, self.target.poly_ring)

    def __call__(self, f) -> Polynomial:
        return self.target.reduce(self.apply_raw(self.source(f)))

    def compose(self, inner: "RingMap", check: bool = False) -> "RingMap":
        """``self ∘ inner``."""
        return RingMap(inner.source, self.target, [self.apply_raw(im) for im in inner.images], check=check)

    def equals(self, other: "RingMap") -> bool:
        return all(self.target.is_zero(a - b) for a, b in zip(self.images, other.images))

    def __repr__(self):
        pairs = ", ".join(f"{n} -> {self.target.format(i)}" for n, i in zip(self.source.names, self.images))
        return f"RingMap({pairs})"


def identity_map(ring: PresentedRing) -> RingMap:
    return RingMap(ring, ring, ring.gens(), check=False)


# ---------------------------------------------------------------------------
# graph rings


@dataclass
class GraphRing:
    """``k[y, w]`` with relations ``I_C(y) + (w_j - a_j(y))``: ``y`` are the
    variables of C (eliminated), ``w`` those of the base."""

    ring: PolyRing
    n_elim: int
    relations: list

    def lift_target(self, f: Polynomial) -> Polynomial:
        return embed(f, self.ring, 0)


def graph_ring(f: RingMap, extra: Sequence[Polynomial] = (), extra_names: Sequence[str] = ()) -> GraphRing:
    """Graph ring of ``f: D -> C``; ``extra`` are further elements of C given
    fresh base variables ``u_k = extra_k`` appended after D's variables."""
    C, D = f.target, f.source
    base_names = unique_names(list(D.names) + list(extra_names), C.names)
    ring = PolyRing(C.field, list(C.names) + base_names)
    nC = C.nvars
    rels = [embed(g, ring, 0) for g in C.relations]
    for j, im in enumerate(f.images):
        rels.append(ring.var(nC + j) - embed(im, ring, 0))
    for k, g in enumerate(extra):
        rels.append(ring.var(nC + D.nvars + k) - embed(C(g), ring, 0))
    return GraphRing(ring, nC, rels)


class BaseSpan:
    """The D-submodule of C spanned by given elements, for ``f: D -> C``."""

    def __init__(self, f: RingMap, elements: Sequence[Polynomial]):
        self.map = f
        self.elements = [f.target(e) for e in elements]
        g = graph_ring(f)
        self._graph = g
        vectors = [(g.lift_target(e),) for e in self.elements]
        if not vectors:
            vectors = []
        self._span = SubringSpan(g.ring, g.n_elim, g.relations, vectors) if vectors else None

    def express(self, c) -> tuple | None:
        """Coefficients in D's ambient with ``c = sum d_k e_k`` in C, or None."""
        c = self.map.target(c)
        if self._span is None:
            return () if self.map.target.is_zero(c) else None
        row = self._span.express((self._graph.lift_target(c),))
        if row is None:
            return None
        D = self.map.source
        return tuple(D(Polynomial(D.poly_ring, q._d)) for q in row)

    def contains(self, c) -> bool:
        return self.express(c) is not None

    def contains_all(self, cs) -> bool:
        return all(self.contains(c) for c in cs)

    def relations(self) -> list[tuple]:
        """D-linear relations among the spanning elements."""
        if self._span is None:
            return []
        D = self.map.source
        return [tuple(D(Polynomial(D.poly_ring, q._d)) for q in row) for row in self._span.syzygies()]


def combine(f: RingMap, row: Sequence[Polynomial], elements: Sequence[Polynomial]) -> Polynomial:
    """``sum f(row_k) * elements_k`` reduced in the target."""
    C = f.target
    acc = C.zero()
    for q, e in zip(row, elements):
        if q:
            acc = acc + f.apply_raw(q) * C(e)
    return C.reduce(acc)


# ---------------------------------------------------------------------------
# operations


def ring_map_kernel(f: RingMap) -> GroebnerBasis:
    """Reduced basis of ``ker(f)`` in the source ambient (contains I_source)."""
    g = graph_ring(f)
    ker = elimination_ideal(g.relations, drop_front=g.n_elim, ring=g.ring)
    S = f.source
    gens = [S(Polynomial(S.poly_ring, k._d)) for k in ker] + list(S.relations)
    return groebner_basis(gens, S.poly_ring.order, S.poly_ring)


def kernel_witness(f: RingMap) -> Polynomial | None:
    """A kernel element nonzero in the source, or None when ``f`` is injective."""
    for k in ring_map_kernel(f):
        r = f.source.reduce(k)
        if r:
            return r
    return None


def is_injective(f: RingMap) -> bool:
    return kernel_witness(f) is None


@dataclass
class Tensor:
    ring: PresentedRing
    first: RingMap
    second: RingMap


def tensor_over_base(d_to_c1: RingMap, d_to_c2: RingMap, suffixes=("1", "2")) -> Tensor:
    """``C1 ⊗_D C2`` presented on the disjoint union of both variable sets."""
    if d_to_c1.source.nvars != d_to_c2.source.nvars or d_to_c1.source.field != d_to_c2.source.field:
        raise AmbientMismatch("the two maps must share their source")
    C1, C2 = d_to_c1.target, d_to_c2.target
    names = unique_names([n + suffixes[0] for n in C1.names] + [n + suffixes[1] for n in C2.names])
    ring = PolyRing(C1.field, names)
    n1 = C1.nvars
    rels = [embed(g, ring, 0) for g in C1.relations] + [embed(g, ring, n1) for g in C2.relations]
    for a, b in zip(d_to_c1.images, d_to_c2.images):
        r = embed(a, ring, 0) - embed(b, ring, n1)
        if r:
            rels.append(r)
    T = PresentedRing(C1.field, names, rels)
    first = RingMap(C1, T, [T.var(i) for i in range(n1)], check=False)
    second = RingMap(C2, T, [T.var(n1 + i) for i in range(C2.nvars)], check=False)
    return Tensor(T, first, second)


def tensor_over_subalgebra(B: PresentedRing, gens: Sequence[Polynomial], suffixes=("1", "2")) -> Tensor:
    """``B ⊗_A B`` for the subalgebra ``A`` of ``B`` generated by ``gens``."""
    A, to_B = subalgebra_presentation(B, gens, check=False) if gens else (None, None)
    if A is None:
        A = PresentedRing(B.field, [])
        to_B = RingMap(A, B, [], check=False)
    return tensor_over_base(to_B, to_B, suffixes)


def subalgebra_presentation(ambient: PresentedRing, gens: Sequence, names: Sequence[str] | None = None,
                            check: bool = True):
    """``k[u_1..u_m]/K`` with ``K`` the kernel of ``u_j -> gens_j``, and the map
    onto the subalgebra."""
    if not gens:
        raise ValueError("need at least one generator")
    gens = [ambient.reduce(ambient(g)) for g in gens]
    names = list(names) if names else [f"u{j + 1}" for j in range(len(gens))]
    P = PresentedRing(ambient.field, names)
    f = RingMap(P, ambient, gens, check=False)
    K = ring_map_kernel(f)
    P = PresentedRing(ambient.field, names, list(K), gb=K)
    return P, RingMap(P, ambient, gens, check=check)


def subalgebra_express(ambient: PresentedRing, gens: Sequence, element) -> Polynomial | None:
    """A polynomial ``q`` in ``len(gens)`` variables with ``q(gens) = element``,
    or None if the element is outside the generated subalgebra."""
    gens = [ambient(g) for g in gens]
    P = PresentedRing(ambient.field, [f"u{j + 1}" for j in range(len(gens))])
    f = RingMap(P, ambient, gens, check=False)
    g = graph_ring(f)
    from .poly import elimination_order

    order = elimination_order(g.n_elim, g.ring.nvars - g.n_elim)
    gb = groebner_basis(g.relations, order, g.ring)
    r = gb.reduce(g.lift_target(ambient(element)))
    if any(any(m[: g.n_elim]) for m in r._d):
        return None
    k = g.n_elim
    return Polynomial(P.poly_ring, {m[k:]: c for m, c in r._d.items()})


def subalgebra_contains(ambient: PresentedRing, gens: Sequence, element) -> bool:
    return subalgebra_express(ambient, gens, element) is not None


def ideal_equal(r1: PresentedRing, r2: PresentedRing, correspondence: Sequence[int] | None = None) -> bool:
    """Do the defining ideals coincide once r1's variable i is identified with
    r2's variable ``correspondence[i]``?"""
    if r1.nvars != r2.nvars or r1.field != r2.field:
        return False
    if correspondence is None:
        correspondence = list(range(r1.nvars))
    images = [r2.var(j) for j in correspondence]
    moved = [g.evaluate(images, r2.poly_ring) if images else r2(g) for g in r1.gb]
    if not all(r2.is_zero(g) for g in moved):
        return False
    back = [0] * r1.nvars
    for i, j in enumerate(correspondence):
        back[j] = i
    images = [r1.var(i) for i in back]
    return all(r1.is_zero(g.evaluate(images, r1.poly_ring) if images else r1(g)) for g in r2.gb)


def ideal_equal_by_names(r1: PresentedRing, r2: PresentedRing) -> bool:
    if sorted(r1.names) != sorted(r2.names):
        return False
    return ideal_equal(r1, r2, [r2.names.index(n) for n in r1.names])


# ---------------------------------------------------------------------------
# finiteness


@dataclass
class FinitenessCertificate:
    """Module generators of C over D with closure witnesses.

    ``witnesses[(v, i)]`` is a row of D-elements expressing
    ``(variable v of C) * generators[i]`` in terms of ``generators``.
    """

    map: RingMap
    generators: list
    witnesses: dict = field(default_factory=dict)
    rounds: int = 0

    def verify(self) -> bool:
        C = self.map.target
        if not self.generators or not C.is_zero(C(self.generators[0]) - C.one()):
            return False
        for v in range(C.nvars):
            for i, g in enumerate(self.generators):
                row = self.witnesses.get((v, i))
                if row is None:
                    return False
                lhs = C.reduce(C.var(v) * C(g))
                if not C.is_zero(lhs - combine(self.map, row, self.generators)):
                    return False
        return True

    def verify_by_membership(self) -> bool:
        span = BaseSpan(self.map, self.generators)
        C = self.map.target
        return all(
            span.contains(C.var(v) * C(g)) for v in range(C.nvars) for g in self.generators
        )


def finiteness_certificate(f: RingMap, max_rounds: int = DEFAULT_FINITENESS_ROUNDS) -> FinitenessCertificate:
    """Saturate the D-span of ``{1}`` under multiplication by C's variables."""
    C = f.target
    gens = [C.one()]
    span = BaseSpan(f, gens)
    rounds = 0
    i = 0
    while i < len(gens):
        for v in range(C.nvars):
            prod = C.reduce(C.var(v) * gens[i])
            if span.contains(prod):
                continue
            rounds += 1
            if rounds > max_rounds:
                raise NotFinite(f"no closure after {max_rounds} saturation rounds", cap="rounds")
            gens.append(prod)
            span = BaseSpan(f, gens)
        i += 1
    witnesses = {}
    for v in range(C.nvars):
        for i, g in enumerate(gens):
            witnesses[(v, i)] = span.express(C.var(v) * g)
    return FinitenessCertificate(f, gens, witnesses, rounds)

"""Groupoids coming from finite group actions and from Hopf-algebra coactions.

A groupoid on ``Spec B`` is stored through its arrow ring ``C`` and the two
ring maps ``s*, t*: B -> C``.  For a finite group the arrow ring is a product
of copies of ``B`` written with orthogonal idempotents ``f_g``; for a group
scheme ``Spec H`` it is ``B ⊗ H`` with ``t*`` the coaction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .canseq import DEFAULT_MAX_STAGES, CanonicalSequenceResult, canonical_sequence
from .errors import CoactionAxiomFailure, ModularCase, NotAGroup, NotDominant
from .poly import Field, Polynomial, monomials_of_degree
from .rings import (
    BaseSpan,
    FinitenessCertificate,
    PresentedRing,
    RingMap,
    Tensor,
    embed,
    finiteness_certificate,
    identity_map,
    is_injective,
    kernel_witness,
    subalgebra_contains,
    tensor_over_subalgebra,
    unique_names,
)

GROUP_CLOSURE_LIMIT = 1024

CAVEAT = ("complexity is computed relative to the supplied invariant generators; "
          "they are not checked to generate the full invariant ring")
DISCLAIMER = "flatness of the quotient map is not checked"


def point(field: Field) -> PresentedRing:
    return PresentedRing(field, [])


def _tensor_power(H: PresentedRing, k: int, prefix: Sequence[str] = ()) -> PresentedRing:
    """``P ⊗ H^{⊗k}`` over the field, with ``P`` a free prefix of variable names
    (relations of the prefix ring are added by the caller)."""
    names = list(prefix)
    rels = []
    for i in range(k):
        names += [f"{n}{i + 1}" for n in H.names]
    names = unique_names(names)
    ring = PresentedRing(H.field, names)
    off = len(prefix)
    for i in range(k):
        rels += [embed(r, ring.poly_ring, off + i * H.nvars) for r in H.relations]
    return ring, rels


# ---------------------------------------------------------------------------
# Hopf algebras


@dataclass
class HopfData:
    """A finite commutative Hopf algebra over the field.

    ``comultiplication`` has target ``H ⊗ H`` whose variables are H's names
    suffixed by 1 and 2; ``counit`` has target the zero-variable ring.
    """

    ring: PresentedRing
    comultiplication: RingMap
    counit: RingMap
    antipode: RingMap
    name: str = ""

    @classmethod
    def from_images(cls, ring: PresentedRing, comult: Sequence, counit: Sequence, antipode: Sequence,
                    name: str = "", check: bool = True) -> "HopfData":
        HH_free, rels = _tensor_power(ring, 2)
        HH = PresentedRing(ring.field, HH_free.names, rels)
        h = cls(ring, RingMap(ring, HH, list(comult)), RingMap(ring, point(ring.field), list(counit)),
                RingMap(ring, ring, list(antipode)), name)
        if check:
            h.check()
        return h

    @property
    def tensor_square(self) -> PresentedRing:
        return self.comultiplication.target

    def check(self) -> None:
        """Raise ``CoactionAxiomFailure`` unless the Hopf axioms hold on generators."""
        H, n = self.ring, self.ring.nvars
        field_ = H.field
        HHH_free, rels = _tensor_power(H, 3)
        HHH = PresentedRing(field_, HHH_free.names, rels)
        HH = self.tensor_square
        delta = self.comultiplication.images
        left = RingMap(HH, HHH, [embed(d, HHH.poly_ring, 0) for d in delta]
                       + [HHH.var(2 * n + i) for i in range(n)], check=False)
        right = RingMap(HH, HHH, [HHH.var(i) for i in range(n)]
                        + [embed(d, HHH.poly_ring, n) for d in delta], check=False)
        eps = [H.poly_ring.const(e.constant_coeff()) for e in self.counit.images]
        anti = self.antipode.images
        own = H.gens()
        for i in range(n):
            g = H.names[i]
            if not HHH.is_zero(left.apply_raw(delta[i]) - right.apply_raw(delta[i])):
                raise CoactionAxiomFailure("coassociativity", g)
            for images in (eps + own, own + eps):
                if not H.is_zero(RingMap(HH, H, images, check=False).apply_raw(delta[i]) - own[i]):
                    raise CoactionAxiomFailure("counit", g)
            for images in (anti + own, own + anti):
                lhs = RingMap(HH, H, images, check=False).apply_raw(delta[i])
                if not H.is_zero(lhs - eps[i]):
                    raise CoactionAxiomFailure("antipode", g)


def mu(n: int, field: Field, var: str = "z") -> HopfData:
    """``k[z]/(z^n - 1)`` with ``z`` group-like."""
    H = PresentedRing(field, [var], [f"{var}^{n} - 1"])
    return HopfData.from_images(H, [f"{var}1*{var}2"], ["1"], [f"{var}^{n - 1}"], name=f"mu_{n}")


def alpha(p: int, field: Field, var: str = "a") -> HopfData:
    """``k[a]/(a^p)`` with ``a`` primitive; a Hopf algebra only in characteristic p."""
    H = PresentedRing(field, [var], [f"{var}^{p}"])
    return HopfData.from_images(H, [f"{var}1 + {var}2"], ["0"], [f"-{var}"], name=f"alpha_{p}")


def alpha_coaction_image(p: int, x: str = "x", a: str = "a") -> str:
    """The expanded polynomial form of ``x -> x/(1 + a*x)`` when ``a^p = 0``."""
    terms = []
    for i in range(p):
        sign = "-" if i % 2 else "+"
        mon = f"{x}^{i + 1}" if i else x
        if i:
            mon = (f"{a}^{i}" if i > 1 else a) + "*" + mon
        terms.append(f"{sign} {mon}")
    s = " ".join(terms)
    return s[2:] if s.startswith("+ ") else s


# ---------------------------------------------------------------------------
# presentations


@dataclass
class ConstantGroup:
    elements: list                   # RingMaps B -> B, identity first

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass
class Coaction:
    hopf: HopfData
    rho: RingMap                     # B -> B ⊗ H


@dataclass
class GroupoidPresentation:
    base: PresentedRing
    arrows: PresentedRing
    source_map: RingMap
    target_map: RingMap
    origin: object

    @property
    def j(self) -> tuple:
        return (self.target_map, self.source_map)

    def projection(self, k: int) -> RingMap:
        """For a constant group: the arrow ring onto the factor of element ``k``."""
        if not isinstance(self.origin, ConstantGroup):
            raise TypeError("projections exist only for constant groups")
        B, C = self.base, self.arrows
        G = self.origin.order
        images = B.gens() + [B.one() if h == k else B.zero() for h in range(G)]
        return RingMap(C, B, images, check=False)

    def verify_structure(self) -> bool:
        """Replay ``s*`` and ``t*`` against the group data."""
        B = self.base
        if isinstance(self.origin, ConstantGroup):
            for k, sigma in enumerate(self.origin.elements):
                pr = self.projection(k)
                if not pr.compose(self.source_map).equals(identity_map(B)):
                    return False
                if not pr.compose(self.target_map).equals(sigma):
                    return False
            return True
        rho = self.origin.rho
        C = self.arrows
        return self.target_map.equals(RingMap(B, C, rho.images, check=False)) and self.source_map.equals(
            RingMap(B, C, [C.var(i) for i in range(B.nvars)], check=False))


def _map_key(sigma: RingMap) -> tuple:
    return tuple(sigma.target.reduce(im) for im in sigma.images)


def _close_group(B: PresentedRing, autos: Sequence[RingMap]) -> list:
    ident = identity_map(B)
    found = {_map_key(ident): ident}
    order = [ident]
    frontier = [ident]
    gens = list(autos)
    while frontier:
        nxt = []
        for g in frontier:
            for a in gens:
                h = RingMap(B, B, [B.reduce(im) for im in a.compose(g).images], check=False)
                k = _map_key(h)
                if k not in found:
                    if len(found) >= GROUP_CLOSURE_LIMIT:
                        raise NotAGroup(f"closure exceeds {GROUP_CLOSURE_LIMIT} elements", witness=(a, g))
                    found[k] = h
                    order.append(h)
                    nxt.append(h)
        frontier = nxt
    ident_key = _map_key(ident)
    for g in order:
        if not any(_map_key(RingMap(B, B, [B.reduce(im) for im in g.compose(h).images], check=False)) == ident_key
                   for h in order):
            raise NotAGroup("an element has no inverse in the closure", witness=(g, None))
    return order


def action_from_automorphisms(B: PresentedRing, autos: Sequence[RingMap]) -> GroupoidPresentation:
    """Groupoid of a finite group generated by ring automorphisms of ``B``."""
    for a in autos:
        a.check()
    elements = _close_group(B, autos)
    G = len(elements)
    idem = unique_names([f"f{k}" for k in range(G)], B.names)
    names = list(B.names) + idem
    C0 = PresentedRing(B.field, names)
    n = B.nvars
    f = [C0.var(n + k) for k in range(G)]
    rels = [embed(r, C0.poly_ring, 0) for r in B.relations]
    rels += [fk * fk - fk for fk in f]
    rels += [f[a] * f[b] for a in range(G) for b in range(a + 1, G)]
    rels.append(sum(f[1:], f[0]) - C0.one())
    C = PresentedRing(B.field, names, rels)
    s = RingMap(B, C, [C.var(i) for i in range(n)])
    t_images = []
    for i in range(n):
        acc = C.zero()
        for k, sigma in enumerate(elements):
            acc = acc + f[k] * embed(sigma.images[i], C.poly_ring, 0)
        t_images.append(acc)
    t = RingMap(B, C, t_images)
    return GroupoidPresentation(B, C, s, t, ConstantGroup(elements))


@dataclass
class CoactionTools:
    """Maps out of ``B ⊗ H`` used to state the coaction axioms."""

    ring: PresentedRing              # B ⊗ H ⊗ H
    rho_then_id: RingMap             # rho ⊗ id
    id_then_delta: RingMap           # id ⊗ comultiplication
    counit: RingMap                  # id ⊗ counit, onto B
    first: RingMap                   # B ⊗ H -> B ⊗ H ⊗ H on the first two factors


def coaction_tools(B: PresentedRing, hopf: HopfData, C: PresentedRing, rho: RingMap) -> CoactionTools:
    H = hopf.ring
    n, m = B.nvars, H.nvars
    BHH_free, hrels = _tensor_power(H, 2, prefix=B.names)
    BHH = PresentedRing(B.field, BHH_free.names,
                        [embed(r, BHH_free.poly_ring, 0) for r in B.relations] + hrels)
    rho_then_id = RingMap(C, BHH, [embed(im, BHH.poly_ring, 0) for im in rho.images]
                          + [BHH.var(n + m + j) for j in range(m)], check=False)
    id_then_delta = RingMap(C, BHH, [BHH.var(i) for i in range(n)]
                            + [embed(d, BHH.poly_ring, n) for d in hopf.comultiplication.images], check=False)
    eps = [B.poly_ring.const(e.constant_coeff()) for e in hopf.counit.images]
    counit = RingMap(C, B, B.gens() + eps, check=False)
    first = RingMap(C, BHH, [BHH.var(i) for i in range(n + m)], check=False)
    return CoactionTools(BHH, rho_then_id, id_then_delta, counit, first)


def action_from_coaction(B: PresentedRing, hopf: HopfData, rho_images: Sequence) -> GroupoidPresentation:
    """Groupoid of the group scheme ``Spec H`` acting through ``rho: B -> B ⊗ H``.

    ``rho_images`` are written in the variables of B followed by those of H.
    """
    H = hopf.ring
    n = B.nvars
    h_names = unique_names(H.names, B.names)
    C0 = PresentedRing(B.field, list(B.names) + h_names)
    rels = [embed(r, C0.poly_ring, 0) for r in B.relations] + [embed(r, C0.poly_ring, n) for r in H.relations]
    C = PresentedRing(B.field, C0.names, rels)
    rho = RingMap(B, C, list(rho_images))
    tools = coaction_tools(B, hopf, C, rho)
    rho_then_id, id_then_delta, counit, BHH = tools.rho_then_id, tools.id_then_delta, tools.counit, tools.ring
    for i in range(n):
        x = B.names[i]
        if not BHH.is_zero(rho_then_id.apply_raw(rho.images[i]) - id_then_delta.apply_raw(rho.images[i])):
            raise CoactionAxiomFailure("coassociativity", x)
        if not B.is_zero(counit.apply_raw(rho.images[i]) - B.var(i)):
            raise CoactionAxiomFailure("counit", x)
    s = RingMap(B, C, [C.var(i) for i in range(n)])
    return GroupoidPresentation(B, C, s, rho, Coaction(hopf, rho))


# ---------------------------------------------------------------------------
# stabilizer, invariants


@dataclass
class StabilizerResult:
    ring: PresentedRing
    structure_map: RingMap           # B -> stabilizer ring
    certificate: FinitenessCertificate | None
    finite: bool
    trivial: bool


def stabilizer(g: GroupoidPresentation, max_rounds: int = 64) -> StabilizerResult:
    """``C / (t*(x) - s*(x))``, with a finiteness certificate over ``B``."""
    B, C = g.base, g.arrows
    rels = list(C.relations)
    for i in range(B.nvars):
        d = g.target_map.images[i] - g.source_map.images[i]
        if d:
            rels.append(d)
    S = PresentedRing(C.field, C.names, rels)
    to_S = RingMap(B, S, g.source_map.images, check=False)
    cert = finiteness_certificate(to_S, max_rounds=max_rounds)
    trivial = is_injective(to_S) and BaseSpan(to_S, [S.one()]).contains_all(cert.generators)
    return StabilizerResult(S, to_S, cert, True, trivial)


def verify_invariants(g: GroupoidPresentation, gens: Sequence) -> list:
    B, C = g.base, g.arrows
    out = []
    for a in gens:
        a = B(a)
        out.append(C.is_zero(g.target_map.apply_raw(a) - g.source_map.apply_raw(a)))
    return out


# ---------------------------------------------------------------------------
# complexity


@dataclass
class AtLeast:
    n: int

    def __str__(self):
        return f"at least {self.n}"


@dataclass
class Undefined:
    reason: str

    def __str__(self):
        return f"undefined ({self.reason})"


@dataclass
class ComplexityReport:
    dominant: bool
    witness: Polynomial | None
    stabilizer: StabilizerResult | None
    sequence: CanonicalSequenceResult | None
    complexity: object               # int, AtLeast or Undefined
    fiber_square: Tensor | None = None
    map: RingMap | None = None
    caveat: str = CAVEAT
    disclaimer: str = DISCLAIMER


def fiber_square(B: PresentedRing, invariant_gens: Sequence) -> Tensor:
    """``B ⊗_A B`` for ``A`` generated by ``invariant_gens``; variables get
    suffixes 1 and 2."""
    gens = [B.reduce(B(a)) for a in invariant_gens]
    suffixes = ("_1", "_2") if any(n[-1].isdigit() for n in B.names) else ("1", "2")
    return tensor_over_subalgebra(B, gens, suffixes)


def complexity(g: GroupoidPresentation, invariant_gens: Sequence, max_stages: int = DEFAULT_MAX_STAGES
               ) -> ComplexityReport:
    """Length of the canonical sequence of ``B ⊗_A B -> C`` (first factor
    through ``s*``, second through ``t*``).

    Raises ``NotDominant`` (carrying the report) when that map has a kernel.
    """
    B = g.base
    bad = [B.format(B(a)) for a, ok in zip(invariant_gens, verify_invariants(g, invariant_gens)) if not ok]
    if bad:
        raise ValueError(f"not invariant: {', '.join(bad)}")
    gens = [B.reduce(B(a)) for a in invariant_gens]
    gens = [a for a in gens if a]
    if gens:
        from .rings import subalgebra_presentation

        A, to_B = subalgebra_presentation(B, gens, check=False)
        finiteness_certificate(to_B)
    T = fiber_square(B, gens)
    D, C = T.ring, g.arrows
    images = list(g.source_map.images) + list(g.target_map.images)
    rho = RingMap(D, C, images)
    stab = stabilizer(g)
    witness = kernel_witness(rho)
    if witness is not None:
        report = ComplexityReport(False, witness, stab, None, Undefined("not dominant"), T, rho)
        raise NotDominant(f"kernel element {D.format(witness)} maps to zero", witness, report)
    seq = canonical_sequence(rho, max_stages=max_stages)
    if isinstance(seq.length, int):
        value = seq.length
    else:
        value = AtLeast(max(len(seq.stages) - 1, 0))
    return ComplexityReport(True, None, stab, seq, value, T, rho)


# ---------------------------------------------------------------------------
# Reynolds operator


def _rref(rows: list, p: int) -> list:
    """Reduced row echelon form of dict-rows keyed by sortable column keys."""
    field_ = Field(p)
    out: list = []
    for r in rows:
        r = dict(r)
        for piv, prow in out:
            c = r.get(piv)
            if c:
                for k, v in prow.items():
                    nv = r.get(k, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        piv = max(r)
        inv = field_.inv(r[piv])
        r = {k: field_(v * inv) for k, v in r.items()}
        for i, (q, qrow) in enumerate(out):
            c = qrow.get(piv)
            if c:
                new = dict(qrow)
                for k, v in r.items():
                    nv = new.get(k, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                out[i] = (q, new)
        out.append((piv, r))
    return out


def _products_of_degree(gens: list, degrees: list, d: int, one):
    """All products of the given homogeneous generators with total degree d."""
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(acc)
            return
        for i in range(start, len(gens)):
            if degrees[i] <= remaining:
                rec(i, remaining - degrees[i], acc * gens[i])

    rec(0, d, one)
    return out


def reynolds_invariant_generators(B: PresentedRing, group: ConstantGroup, degree_bound: int | None = None) -> list:
    """Homogeneous invariant generators from averaging monomials.

    Each degree keeps a complement of the span of products of lower-degree
    generators inside the averaged space, then drops whatever the subalgebra
    generated so far already contains.
    """
    if B.relations:
        raise ValueError("the Reynolds route needs a free polynomial ring")
    p = B.field.p
    G = group.order
    if p and G % p == 0:
        raise ModularCase(f"group order {G} is divisible by the characteristic {p}; supply generators by hand")
    bound = degree_bound if degree_bound is not None else G
    order = B.poly_ring.order
    scale = B.field(Fraction(1, G))
    kept: list = []
    degrees: list = []
    for d in range(1, bound + 1):
        avgs = []
        for m in monomials_of_degree(B.nvars, d):
            mono = B.poly_ring.monomial(m)
            acc = B.zero()
            for sigma in group.elements:
                acc = acc + sigma.apply_raw(mono)
            acc = acc * scale
            if acc:
                avgs.append(acc)
        if not avgs:
            continue

        def row(f):
            return {order.key(m): c for m, c in f._d.items()}

        lower = _rref([row(q) for q in _products_of_degree(kept, degrees, d, B.one())], p)
        lower_pivots = {piv for piv, _ in lower}
        reduced = []
        for a in avgs:
            r = row(a)
            for piv, prow in lower:
                c = r.get(piv)
                if c:
                    for k, v in prow.items():
                        nv = r.get(k, 0) - c * v
                        if p:
                            nv %= p
                        if nv:
                            r[k] = nv
                        else:
                            r.pop(k, None)
            if r:
                reduced.append(r)
        basis = _rref(reduced, p)
        keys = {order.key(m): m for m in monomials_of_degree(B.nvars, d)}
        cands = []
        for piv, r in sorted(basis, key=lambda t: t[0], reverse=True):
            if piv in lower_pivots:
                continue
            cands.append(B.poly_ring.from_dict({keys[k]: v for k, v in r.items()}))
        for c in cands:
            if kept and subalgebra_contains(B, kept, c):
                continue
            kept.append(c)
            degrees.append(d)
    return kept

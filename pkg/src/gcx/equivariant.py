"""Free equivariant modules, their invariants, and the counit comparison.

Modules are ``B^r`` with basis labels.  For a finite group an element ``g``
acts semilinearly through a matrix ``M_g`` whose column ``k`` is ``g·e_k``,
so ``g·(sum b_k e_k) = M_g · g(b)`` and ``M_{gh} = M_g · g(M_h)``.  For a
coaction, ``e_k -> sum_j h_{jk} e_j`` with ``h_{jk}`` in ``B ⊗ H``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CoactionAxiomFailure, InvariantViolation, NotAGroup
from .groebner import SubringSpan, module_gb, syzygies
from .groupoids import Coaction, ConstantGroup, GroupoidPresentation, _map_key, coaction_tools
from .poly import Polynomial
from .rings import (
    PresentedRing,
    RingMap,
    finiteness_certificate,
    graph_ring,
    subalgebra_presentation,
)

Matrix = list  # list of rows


def _mat_mul(R: PresentedRing, a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b), len(b[0])
    return [[R.reduce(sum((a[i][t] * b[t][j] for t in range(m)), R.zero())) for j in range(k)] for i in range(n)]


def _mat_apply(sigma: RingMap, a: Matrix) -> Matrix:
    return [[sigma(x) for x in row] for row in a]


def _identity(R: PresentedRing, r: int) -> Matrix:
    return [[R.one() if i == j else R.zero() for j in range(r)] for i in range(r)]


def _mat_equal(R: PresentedRing, a: Matrix, b: Matrix) -> bool:
    return all(R.is_zero(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


@dataclass
class EquivariantModule:
    groupoid: GroupoidPresentation
    labels: list
    matrices: dict | None = None     # group element index -> matrix (constant groups)
    coaction: Matrix | None = None   # h[j][k] in B ⊗ H (coactions)

    @property
    def base(self) -> PresentedRing:
        return self.groupoid.base

    @property
    def rank(self) -> int:
        return len(self.labels)

    def act(self, k: int, v: Sequence[Polynomial]) -> tuple:
        """Group element ``k`` applied to the vector ``v``."""
        B = self.base
        sigma = self.groupoid.origin.elements[k]
        M = self.matrices[k]
        w = [sigma(x) for x in v]
        return tuple(B.reduce(sum((M[i][j] * w[j] for j in range(self.rank)), B.zero())) for i in range(self.rank))

    def coact(self, v: Sequence[Polynomial]) -> tuple:
        """``rho_M(v)`` as a vector over ``B ⊗ H``."""
        g = self.groupoid
        C = g.arrows
        w = [g.target_map.apply_raw(x) for x in v]
        h = self.coaction
        return tuple(C.reduce(sum((h[i][j] * w[j] for j in range(self.rank)), C.zero())) for i in range(self.rank))

    def is_fixed(self, v: Sequence[Polynomial]) -> bool:
        B = self.base
        v = [B(x) for x in v]
        if self.matrices is not None:
            return all(all(B.is_zero(a - b) for a, b in zip(self.act(k, v), v)) for k in self.matrices)
        g = self.groupoid
        C = g.arrows
        return all(C.is_zero(a - g.source_map.apply_raw(b)) for a, b in zip(self.coact(v), v))


def group_module(groupoid: GroupoidPresentation, labels: Sequence[str], generators: Sequence) -> EquivariantModule:
    """Module over a constant-group groupoid from ``(automorphism, matrix)``
    pairs on a generating set; the action is extended to the whole group and
    checked against the group law."""
    if not isinstance(groupoid.origin, ConstantGroup):
        raise TypeError("group_module needs a constant-group groupoid")
    B = groupoid.base
    r = len(labels)
    elements = groupoid.origin.elements
    index = {_map_key(s): k for k, s in enumerate(elements)}
    gens = []
    for sigma, M in generators:
        key = _map_key(sigma)
        if key not in index:
            raise NotAGroup("matrix given for a map outside the group", witness=(sigma, None))
        M = [[B.reduce(B(x)) for x in row] for row in M]
        if len(M) != r or any(len(row) != r for row in M):
            raise ValueError(f"action matrices must be {r}x{r}")
        gens.append((index[key], M))
    mats = {0: _identity(B, r)}
    frontier = [0]
    while frontier:
        nxt = []
        for h in frontier:
            for g, Mg in gens:
                sigma = elements[g]
                prod = RingMap(B, B, [B.reduce(im) for im in sigma.compose(elements[h]).images], check=False)
                gh = index[_map_key(prod)]
                M = _mat_mul(B, Mg, _mat_apply(sigma, mats[h]))
                if gh in mats:
                    if not _mat_equal(B, mats[gh], M):
                        raise NotAGroup("action matrices violate the group law", witness=(g, h))
                    continue
                mats[gh] = M
                nxt.append(gh)
        frontier = nxt
    if len(mats) != len(elements):
        raise NotAGroup("the given elements do not generate the group")
    return EquivariantModule(groupoid, list(labels), matrices=mats)


def coaction_module(groupoid: GroupoidPresentation, labels: Sequence[str], columns: Sequence[Sequence]) -> EquivariantModule:
    """Module over a coaction groupoid; ``columns[k]`` lists the coefficients of
    ``rho_M(e_k)`` on ``e_1..e_r`` as elements of ``B ⊗ H``."""
    if not isinstance(groupoid.origin, Coaction):
        raise TypeError("coaction_module needs a coaction groupoid")
    B, C = groupoid.base, groupoid.arrows
    r = len(labels)
    if len(columns) != r or any(len(c) != r for c in columns):
        raise ValueError(f"coaction needs {r} columns of length {r}")
    h = [[C.reduce(C(columns[k][j])) for k in range(r)] for j in range(r)]
    tools = coaction_tools(B, groupoid.origin.hopf, C, groupoid.origin.rho)
    T = tools.ring
    for k in range(r):
        for i in range(r):
            lhs = T.zero()
            for j in range(r):
                lhs = lhs + tools.rho_then_id.apply_raw(h[j][k]) * tools.first.apply_raw(h[i][j])
            if not T.is_zero(lhs - tools.id_then_delta.apply_raw(h[i][k])):
                raise CoactionAxiomFailure("module coassociativity", labels[k])
            want = B.one() if i == k else B.zero()
            if not B.is_zero(tools.counit.apply_raw(h[i][k]) - want):
                raise CoactionAxiomFailure("module counit", labels[k])
    return EquivariantModule(groupoid, list(labels), coaction=h)


# ---------------------------------------------------------------------------
# invariants


def _difference_vectors(m: EquivariantModule, v: Sequence[Polynomial]) -> list:
    """The stacked ``g·v - v`` over the group (or ``rho_M(v) - v⊗1``)."""
    if m.matrices is not None:
        out = []
        for k in sorted(m.matrices):
            if k == 0:
                continue
            out += [a - b for a, b in zip(m.act(k, v), v)]
        return out
    g = m.groupoid
    return [a - g.source_map.apply_raw(b) for a, b in zip(m.coact(v), v)]


def _invariant_subalgebra(B: PresentedRing, invariant_gens: Sequence) -> tuple:
    gens = [B.reduce(B(a)) for a in invariant_gens]
    gens = [a for a in gens if a]
    if gens:
        return subalgebra_presentation(B, gens, check=False)
    A = PresentedRing(B.field, [])
    return A, RingMap(A, B, [], check=False)


def module_invariants(m: EquivariantModule, invariant_gens: Sequence) -> list:
    """Generators of ``M^G`` as a module over the subalgebra ``A`` generated
    by ``invariant_gens``; each is a vector over ``B``."""
    B = m.base
    r = m.rank
    A, to_B = _invariant_subalgebra(B, invariant_gens)
    cert = finiteness_certificate(to_B)
    spanning = []
    for k in range(r):
        for c in cert.generators:
            v = [B.zero()] * r
            v[k] = B(c)
            spanning.append(tuple(v))
    # the differences live in B (groups) or B ⊗ H (coactions); both are A-algebras
    if m.matrices is not None:
        target = B
        a_to_target = to_B
    else:
        target = m.groupoid.arrows
        a_to_target = m.groupoid.source_map.compose(to_B)
    diffs = [_difference_vectors(m, v) for v in spanning]
    width = len(diffs[0]) if diffs else 0
    if width == 0:
        return _prune(m, to_B, spanning)
    G = graph_ring(a_to_target)
    vectors = [tuple(G.lift_target(target(x)) for x in d) for d in diffs]
    span = SubringSpan(G.ring, G.n_elim, G.relations, vectors)
    out = []
    for row in span.syzygies():
        acc = [B.zero()] * r
        for q, v in zip(row, spanning):
            if q:
                coeff = to_B.apply_raw(A(q))
                acc = [x + coeff * y for x, y in zip(acc, v)]
        acc = tuple(B.reduce(x) for x in acc)
        if any(acc):
            out.append(acc)
    for v in out:
        if not m.is_fixed(v):
            raise InvariantViolation("computed invariant is not fixed")
    return _prune(m, to_B, out)


def _vector_key(B: PresentedRing, v) -> tuple:
    order = B.poly_ring.order
    lead = [(k, f) for k, f in enumerate(v) if f]
    if not lead:
        return (0,)
    k, f = lead[0]
    return (f.total_degree(), k, order.key(f.leading_monomial()), len(f))


def _prune(m: EquivariantModule, to_B: RingMap, vectors: list) -> list:
    """Drop vectors already in the A-span of the ones kept so far."""
    B = m.base
    uniq = []
    for v in sorted(vectors, key=lambda v: _vector_key(B, v)):
        if v not in uniq:
            uniq.append(v)
    kept: list = []
    G = graph_ring(to_B)
    for v in uniq:
        if kept:
            span = SubringSpan(G.ring, G.n_elim, G.relations,
                               [tuple(G.lift_target(x) for x in w) for w in kept])
            if span.contains(tuple(G.lift_target(x) for x in v)):
                continue
        kept.append(v)
    return kept


# ---------------------------------------------------------------------------
# counit


@dataclass
class DescentVerdict:
    invariants_generators: list
    counit_image: list               # B-module generators inside M
    is_isomorphism: bool
    cokernel_witness: tuple | None
    witness_label: str | None = None
    kernel_witness: tuple | None = None  # B-coefficients on the invariant generators


def submodule_contains(B: PresentedRing, generators: Sequence, v, rank: int) -> bool:
    gb = module_gb([tuple(B(x) for x in g) for g in generators], relations=list(B.relations),
                   ring=B.poly_ring, rank=rank)
    return gb.contains(tuple(B(x) for x in v))


def modules_equal(B: PresentedRing, first: Sequence, second: Sequence, rank: int) -> bool:
    """Mutual membership of two submodules of ``B^rank``."""
    return (all(submodule_contains(B, first, v, rank) for v in second)
            and all(submodule_contains(B, second, v, rank) for v in first))


def counit_kernel_witness(m: EquivariantModule, invariant_gens: Sequence, inv: Sequence) -> tuple | None:
    """A relation ``sum c_i v_i = 0`` over ``B`` among the invariant
    generators ``v_i`` that is not a ``B``-combination of relations over ``A``,
    that is, a nonzero element of the kernel of ``B ⊗_A M^G -> M``."""
    B = m.base
    if not inv:
        return None
    A, to_B = _invariant_subalgebra(B, invariant_gens)
    G = graph_ring(to_B)
    span = SubringSpan(G.ring, G.n_elim, G.relations, [tuple(G.lift_target(x) for x in v) for v in inv])
    over_a = [tuple(B.reduce(to_B.apply_raw(A(q))) for q in row) for row in span.syzygies()]
    over_a = [row for row in over_a if any(row)]
    s = len(inv)
    for row in syzygies([tuple(B(x) for x in v) for v in inv], list(B.relations), B.poly_ring):
        row = tuple(B.reduce(c) for c in row)
        if not any(row):
            continue
        if not over_a or not submodule_contains(B, over_a, row, s):
            return row
    return None


def counit_check(m: EquivariantModule, invariant_gens: Sequence) -> DescentVerdict:
    """Is ``B ⊗_A M^G -> M`` an isomorphism?  Surjectivity is tested by
    membership of each basis vector; injectivity by comparing relations among
    the invariant generators over ``B`` with those over ``A``."""
    B = m.base
    inv = module_invariants(m, invariant_gens)
    r = m.rank
    gb = module_gb(inv, relations=list(B.relations), ring=B.poly_ring, rank=r)
    for k in range(r):
        e = tuple(B.one() if i == k else B.zero() for i in range(r))
        if not gb.contains(e):
            return DescentVerdict(inv, inv, False, e, m.labels[k])
    kernel = counit_kernel_witness(m, invariant_gens, inv)
    return DescentVerdict(inv, inv, kernel is None, None, kernel_witness=kernel)

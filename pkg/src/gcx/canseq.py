"""Canonical sequences of finite ring maps and the effectivity test.

For a finite map ``f: D -> C`` the tower ``C = A_0 ⊇ A_1 ⊇ ...`` is built by
``A_{i+1} = {a in A_i : a⊗1 = 1⊗a in A_i ⊗_D A_i}``.  Every stage is stored as
D-module generators inside C together with an abstract presentation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, CertificateInvalid, InvariantViolation
from .groebner import SubringSpan
from .poly import PolyRing, Polynomial
from .rings import (
    BaseSpan,
    FinitenessCertificate,
    PresentedRing,
    RingMap,
    embed,
    finiteness_certificate,
    kernel_witness,
    subalgebra_express,
    subalgebra_presentation,
    tensor_over_base,
    unique_names,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_STAGES = 8


@dataclass
class SubalgebraStage:
    index: int
    module_generators: list          # elements of C: 1, images of D's variables, extras
    n_leading: int                   # how many leading entries are 1 and D-images
    presentation: PresentedRing
    to_ambient: RingMap              # presentation -> C
    map_to_previous_stage: RingMap | None = None

    @property
    def extras(self) -> list:
        return self.module_generators[self.n_leading:]

    @property
    def essential_generators(self) -> list:
        """1 followed by the extras; these span the stage over D."""
        return [self.module_generators[0]] + self.extras


@dataclass
class Unresolved:
    budget: str

    def __str__(self):
        return f"unresolved ({self.budget})"


@dataclass
class CanonicalSequenceResult:
    map: RingMap
    stages: list
    length: object                   # int or Unresolved
    separated: bool | None
    dominant: bool
    dominance_witness: Polynomial | None = None
    certificate: FinitenessCertificate | None = None
    final_stage_repeats: bool = False

    @property
    def resolved(self) -> bool:
        return isinstance(self.length, int)


# ---------------------------------------------------------------------------
# helpers


def _sort_key(C: PresentedRing, g: Polynomial):
    lm = g.leading_monomial(C.poly_ring.order)
    return (g.total_degree(), C.poly_ring.order.key(lm) if lm is not None else -1, len(g))


def _normalize(C: PresentedRing, elements) -> list:
    out, seen = [], set()
    for e in elements:
        e = C.reduce(C(e))
        if e and e not in seen:
            seen.add(e)
            out.append(e)
    return out


def minimal_span_generators(f: RingMap, leading: Sequence[Polynomial], candidates) -> list:
    """Drop candidates already in the D-span of ``leading`` plus earlier keepers."""
    C = f.target
    kept: list = []
    span = BaseSpan(f, list(leading))
    cands = sorted(_normalize(C, candidates), key=lambda g: _sort_key(C, g))
    for c in cands:
        if span.contains(c):
            continue
        kept.append(c)
        span = BaseSpan(f, list(leading) + kept)
    return kept


def _make_stage(f: RingMap, index: int, extras: Sequence[Polynomial]) -> SubalgebraStage:
    C, D = f.target, f.source
    extras = sorted(_normalize(C, extras), key=lambda g: C.poly_ring.order.key(g.leading_monomial()), reverse=True)
    images = list(f.images)
    leading = [C.one()] + images
    names = list(D.names) + [f"u{k + 1}" for k in range(len(extras))]
    names = unique_names(names)
    alg_gens = images + extras
    if alg_gens:
        P, to_C = subalgebra_presentation(C, alg_gens, names, check=False)
    else:
        P = PresentedRing(C.field, [])
        to_C = RingMap(P, C, [], check=False)
    return SubalgebraStage(index, leading + list(extras), len(leading), P, to_C)


def _stage_certificate(f: RingMap, stage: SubalgebraStage) -> tuple[RingMap, list]:
    """D -> presentation of the stage, with module generators in its coordinates."""
    P = stage.presentation
    nD = f.source.nvars
    d_to_p = RingMap(f.source, P, [P.var(j) for j in range(nD)], check=False)
    gens = [P.one()] + [P.var(nD + k) for k in range(len(stage.extras))]
    return d_to_p, gens


def equalizer(alpha: RingMap, beta: RingMap, d_to_c: RingMap, d_to_e: RingMap,
              cert_c: FinitenessCertificate | Sequence[Polynomial],
              cert_e: FinitenessCertificate | None = None, check: bool = True) -> list:
    """D-module generators of ``{c in C : alpha(c) = beta(c)}``.

    ``cert_c`` provides D-module generators of C (a certificate or a plain
    list).  The output starts with 1 and the images of D's variables and every
    element satisfies ``alpha(g) - beta(g) = 0`` in E.
    """
    C, E, D = alpha.source, alpha.target, d_to_c.source
    gens = cert_c.generators if isinstance(cert_c, FinitenessCertificate) else list(cert_c)
    if check:
        if isinstance(cert_c, FinitenessCertificate) and not cert_c.verify():
            raise CertificateInvalid("certificate for C does not replay")
        if cert_e is not None and not cert_e.verify():
            raise CertificateInvalid("certificate for E does not replay")
        for j in range(D.nvars):
            a = alpha(d_to_c.images[j])
            b = beta(d_to_c.images[j])
            e = d_to_e(D.var(j))
            if not (E.is_zero(a - e) and E.is_zero(b - e)):
                raise ValueError(f"alpha and beta disagree on D's variable {D.names[j]}")
    # relations among delta_k = alpha(g_k) - beta(g_k) over D, in the graph ring of E
    deltas = [alpha.apply_raw(g) - beta.apply_raw(g) for g in gens]
    nE = E.nvars
    ring = PolyRing(E.field, list(E.names) + unique_names(D.names, E.names))
    rels = [embed(r, ring, 0) for r in E.relations]
    for j, im in enumerate(d_to_e.images):
        rels.append(ring.var(nE + j) - embed(im, ring, 0))
    span = SubringSpan(ring, nE, rels, [(embed(d, ring, 0),) for d in deltas])
    rows = span.syzygies()
    candidates = []
    for row in rows:
        acc = C.zero()
        for q, g in zip(row, gens):
            if q:
                acc = acc + d_to_c.apply_raw(Polynomial(D.poly_ring, q._d)) * C(g)
        acc = C.reduce(acc)
        if acc:
            candidates.append(acc)
    leading = [C.one()] + [C.reduce(im) for im in d_to_c.images]
    extras = minimal_span_generators(d_to_c, leading, candidates)
    out = leading + extras
    for g in out:
        if not E.is_zero(alpha.apply_raw(g) - beta.apply_raw(g)):
            raise InvariantViolation(f"equalizer output {C.format(g)} does not equalize")
    return out


def _next_stage(f: RingMap, stage: SubalgebraStage) -> SubalgebraStage:
    P = stage.presentation
    d_to_p, gens = _stage_certificate(f, stage)
    T = tensor_over_base(d_to_p, d_to_p)
    d_to_e = T.first.compose(d_to_p)
    out = equalizer(T.first, T.second, d_to_p, d_to_e, gens, check=False)
    nD = f.source.nvars
    extras_p = out[1 + nD:]
    extras_c = [stage.to_ambient(e) for e in extras_p]
    C = f.target
    extras_c = minimal_span_generators(f, [C.one()] + list(f.images), extras_c)
    nxt = _make_stage(f, stage.index + 1, extras_c)
    prev_gens = stage.to_ambient.images
    images = []
    for g in nxt.to_ambient.images:
        q = subalgebra_express(C, prev_gens, g) if prev_gens else None
        images.append(q if q is not None else P.zero())
    if prev_gens:
        nxt.map_to_previous_stage = RingMap(nxt.presentation, P,
                                            [P(Polynomial(P.poly_ring, q._d)) for q in images], check=False)
    return nxt


def spans_equal(f: RingMap, a: SubalgebraStage, b: SubalgebraStage) -> bool:
    """Mutual D-span membership of two stages."""
    sa = BaseSpan(f, a.essential_generators)
    sb = BaseSpan(f, b.essential_generators)
    return sa.contains_all(b.extras) and sb.contains_all(a.extras)


def canonical_sequence(f: RingMap, max_stages: int = DEFAULT_MAX_STAGES,
                       certificate: FinitenessCertificate | None = None) -> CanonicalSequenceResult:
    """Canonical sequence of a finite map ``f: D -> C``."""
    cert = certificate or finiteness_certificate(f)
    witness = kernel_witness(f)
    dominant = witness is None
    stages = [_make_stage(f, 0, cert.generators[1:])]
    length: object = Unresolved(f"max_stages={max_stages}")
    repeats = False
    try:
        for i in range(max_stages + 1):
            cur = stages[-1]
            if not cur.extras and i > 0:
                length, repeats = i, True
                break
            nxt = _next_stage(f, cur)
            if spans_equal(f, cur, nxt):
                length, repeats = i, True
                break
            if i == max_stages:
                break
            stages.append(nxt)
            log.debug("stage %d: %d extra generators", i + 1, len(nxt.extras))
    except BudgetExceeded as exc:
        length = Unresolved(str(exc))
    separated = None
    if isinstance(length, int):
        span1 = BaseSpan(f, [f.target.one()])
        separated = span1.contains_all(stages[-1].extras)
    return CanonicalSequenceResult(f, stages, length, separated, dominant, witness, cert, repeats)


# ---------------------------------------------------------------------------
# effectivity


@dataclass
class EffectivityVerdict:
    kind: str                        # Effective | NotEffective | NotDominant | Unresolved
    witness: Polynomial | None = None
    detail: str = ""

    def __str__(self):
        return self.kind


def is_effective_epi(f: RingMap, certificate: FinitenessCertificate | None = None) -> EffectivityVerdict:
    """Effective iff ``f`` is injective and its canonical sequence has length <= 1."""
    try:
        cert = certificate or finiteness_certificate(f)
        w = kernel_witness(f)
        if w is not None:
            return EffectivityVerdict("NotDominant", w)
        stage0 = _make_stage(f, 0, cert.generators[1:])
        stage1 = _next_stage(f, stage0)
    except BudgetExceeded as exc:
        return EffectivityVerdict("Unresolved", detail=str(exc))
    span1 = BaseSpan(f, [f.target.one()])
    for g in stage1.extras:
        if not span1.contains(g):
            return EffectivityVerdict("NotEffective", g)
    return EffectivityVerdict("Effective")


# ---------------------------------------------------------------------------
# replays


def stage_in_tensor(f: RingMap, stage: SubalgebraStage):
    d_to_p, _ = _stage_certificate(f, stage)
    return tensor_over_base(d_to_p, d_to_p)


def verify_stage_condition_ii(result: CanonicalSequenceResult, stages: Sequence[SubalgebraStage] | None = None) -> list:
    """For each consecutive pair, does every generator ``g`` of ``A_{i+1}``
    satisfy ``g⊗1 = 1⊗g`` in ``A_i ⊗_D A_i``?"""
    f = result.map
    C = f.target
    stages = list(stages if stages is not None else result.stages)
    out = []
    for prev, nxt in zip(stages, stages[1:]):
        T = stage_in_tensor(f, prev)
        P = prev.presentation
        ok = True
        for g in nxt.module_generators:
            q = subalgebra_express(C, prev.to_ambient.images, g) if prev.to_ambient.images else None
            if q is None:
                if C.is_zero(g - C.one() * g.constant_coeff()) and g.is_constant():
                    continue
                ok = False
                break
            q = P(Polynomial(P.poly_ring, q._d))
            if not T.ring.is_zero(T.first.apply_raw(q) - T.second.apply_raw(q)):
                ok = False
                break
        out.append(ok)
    return out


def verify_chain(result: CanonicalSequenceResult) -> list:
    """Is every generator of ``A_{i+1}`` in the D-span of ``A_i``?"""
    f = result.map
    out = []
    for prev, nxt in zip(result.stages, result.stages[1:]):
        span = BaseSpan(f, prev.essential_generators)
        out.append(span.contains_all(nxt.module_generators))
    return out


def corrupt_stage(stage: SubalgebraStage, f: RingMap, extra: Polynomial) -> SubalgebraStage:
    """A copy of ``stage`` with ``extra`` appended (used by tests)."""
    return _make_stage(f, stage.index, list(stage.extras) + [extra])

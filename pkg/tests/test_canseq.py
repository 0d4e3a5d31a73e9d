import pytest

from gcx.canseq import (
    canonical_sequence, corrupt_stage, equalizer, is_effective_epi, spans_equal, verify_chain,
    verify_stage_condition_ii,
)
from gcx.errors import BudgetExceeded
from gcx.groebner import budget
from gcx.poly import QQ, GF
from gcx.rings import (
    BaseSpan, PresentedRing, RingMap, finiteness_certificate, identity_map, ideal_equal,
    subalgebra_contains, subalgebra_presentation, tensor_over_base,
)


def cusp_map(field=QQ):
    C = PresentedRing(field, ["t"])
    D = PresentedRing(field, ["x", "y"], ["y^3 - x^4"])
    return RingMap(D, C, ["t^3", "t^4"])


def mu3_map(field=QQ):
    C = PresentedRing(field, ["x", "z"], ["z^3 - 1"])
    D = PresentedRing(field, ["x", "y"], ["x^3 - y^3"])
    return RingMap(D, C, ["x", "x*z"])


def triple_line():
    A = PresentedRing(QQ, ["x", "y"], ["x*y*(y - x)"])
    Ap = PresentedRing(QQ, ["x", "y", "e1", "e2", "e3"], [
        "e1^2 - e1", "e2^2 - e2", "e3^2 - e3", "e1*e2", "e1*e3", "e2*e3", "e1 + e2 + e3 - 1",
        "e1*x", "e2*y", "e3*(y - x)"])
    return RingMap(A, Ap, ["x", "y"])


def test_cuspidal_sequence():
    res = canonical_sequence(cusp_map())
    assert (res.length, res.separated, res.dominant) == (2, True, True)
    stage1 = res.stages[1]
    assert [str(g) for g in stage1.module_generators] == ["1", "t^3", "t^4", "t^5"]
    expected = PresentedRing(QQ, ["x", "y", "u1"], ["y^2 - x*u1", "u1^2 - x^2*y", "y*u1 - x^3"])
    assert ideal_equal(stage1.presentation, expected)
    assert verify_chain(res) == [True, True]
    assert verify_stage_condition_ii(res) == [True, True]


def test_stage_maps_to_previous():
    res = canonical_sequence(cusp_map())
    back = res.stages[1].map_to_previous_stage
    to_C = res.stages[0].to_ambient
    for g, im in zip(res.stages[1].to_ambient.images, back.images):
        assert res.map.target.is_zero(to_C.apply_raw(im) - g)


@pytest.mark.parametrize("p", [5, 7])
def test_cuspidal_length_stable_under_reduction_mod_p(p):
    assert canonical_sequence(cusp_map(GF(p))).length == 2


def test_identity_has_length_zero():
    C = PresentedRing(QQ, ["x", "y"], ["x*y"])
    res = canonical_sequence(identity_map(C))
    assert (res.length, res.separated, res.dominant) == (0, True, True)
    assert verify_stage_condition_ii(res) == []
    assert is_effective_epi(identity_map(C)).kind == "Effective"


def test_mu3_sequence():
    res = canonical_sequence(mu3_map())
    assert res.length == 2
    # stage generators x, y (= x*z) and u1 (= x*z^2)
    expected = PresentedRing(QQ, ["x", "y", "u1"], ["y^2 - x*u1", "x*y - u1^2", "x^2 - y*u1"])
    assert ideal_equal(res.stages[1].presentation, expected)


def test_mu3_equalizer_matches_twisted_generators():
    f = mu3_map()
    cert = finiteness_certificate(f)
    C = f.target
    T = tensor_over_base(f, f)
    out = equalizer(T.first, T.second, f, T.first.compose(f), cert)
    span = BaseSpan(f, out)
    reference = BaseSpan(f, ["1", "z*x", "z^2*x"])
    assert span.contains_all(["1", "z*x", "z^2*x"])
    assert reference.contains_all(out)
    for g in out:
        assert T.ring.is_zero(T.first.apply_raw(g) - T.second.apply_raw(g))
    assert [str(C.reduce(g)) for g in out[:3]] == ["1", "x", "x*z"]


def test_equalizer_of_equal_maps_is_everything():
    f = cusp_map()
    cert = finiteness_certificate(f)
    T = tensor_over_base(f, f)
    out = equalizer(T.first, T.first, f, T.first.compose(f), cert)
    assert BaseSpan(f, out).contains_all(cert.generators)


def test_triple_line_not_effective():
    f = triple_line()
    verdict = is_effective_epi(f)
    assert verdict.kind == "NotEffective"
    assert not BaseSpan(f, ["1"]).contains(verdict.witness)
    res = canonical_sequence(f)
    stage1 = res.stages[1]
    axes = ["x*e3", "x*e2", "y*e1"]
    P, _ = subalgebra_presentation(f.target, axes, ["u", "v", "w"])
    product = PresentedRing(QQ, ["u", "v", "w"], ["u*v", "u*w", "v*w"])
    assert ideal_equal(P, product)
    # the stage is the subalgebra k[u, v, w] with x = u + v and y = u + w
    assert f.target.is_zero("x - (x*e3 + x*e2)") and f.target.is_zero("y - (x*e3 + y*e1)")
    assert all(subalgebra_contains(f.target, axes, g) for g in stage1.module_generators)
    assert BaseSpan(f, stage1.essential_generators).contains_all(axes)


def test_unramified_degree_two_cover_is_effective():
    A = PresentedRing(QQ, ["x", "y"], ["x^2 - y^2"])
    Ap = PresentedRing(QQ, ["x", "y", "e"], ["e^2 - e", "e*(x - y)", "(1 - e)*(x + y)"])
    assert is_effective_epi(RingMap(A, Ap, ["x", "y"])).kind == "Effective"


def test_not_dominant_verdict():
    B = PresentedRing(QQ, ["x1", "x2"], ["x1^2", "x2^2"])
    C = PresentedRing(QQ, ["x", "z"], ["x^2", "z^2 - 1"])
    f = RingMap(B, C, ["x", "x*z"])
    v = is_effective_epi(f)
    assert v.kind == "NotDominant" and str(B.reduce(v.witness)) == "x1*x2"
    assert not canonical_sequence(f).dominant


def test_corrupted_stage_fails_condition_ii():
    f = cusp_map()
    res = canonical_sequence(f)
    bad = corrupt_stage(res.stages[1], f, f.target("t"))
    assert verify_stage_condition_ii(res, [res.stages[0], bad]) == [False]


def test_termination_is_mutual_membership():
    f = cusp_map()
    res = canonical_sequence(f)
    last = res.stages[-1]
    assert spans_equal(f, last, last)
    assert not spans_equal(f, res.stages[0], res.stages[1])


def test_stage_cap_and_budget_leave_length_unresolved():
    res = canonical_sequence(cusp_map(), max_stages=1)
    assert not res.resolved and res.separated is None
    with budget(max_spairs=100):
        res = canonical_sequence(mu3_map())
    assert not res.resolved and "S-pairs" in res.length.budget
    with pytest.raises(BudgetExceeded):
        with budget(max_spairs=10):
            canonical_sequence(mu3_map())


@pytest.mark.parametrize("n, length", [(2, 1), (3, 2), (4, 2)])
def test_mu_n_matches_monoid_oracle(n, length):
    from gcx.groupoids import action_from_coaction, complexity, mu
    from oracles import mu_stages

    stages = mu_stages(n, 8)
    assert len(stages) - 2 == length
    B = PresentedRing(QQ, ["x"])
    r = complexity(action_from_coaction(B, mu(n, QQ), ["x*z"]), [f"x^{n}"])
    assert r.complexity == length
    span = BaseSpan(r.map, r.sequence.stages[1].essential_generators)
    for m in range(9):
        for i in range(n):
            assert span.contains(f"x^{m}*z^{i}") == ((m, i) in stages[1])

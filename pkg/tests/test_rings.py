import pytest

from gcx.errors import IllDefinedMap, NotFinite
from gcx.poly import QQ, GF
from gcx.rings import (
    BaseSpan, PresentedRing, RingMap, finiteness_certificate, ideal_equal, ideal_equal_by_names,
    is_injective, kernel_witness, ring_map_kernel, subalgebra_contains, subalgebra_express,
    subalgebra_presentation, tensor_over_base, tensor_over_subalgebra,
)


@pytest.fixture
def cusp():
    C = PresentedRing(QQ, ["t"])
    D = PresentedRing(QQ, ["x", "y"], ["y^3 - x^4"])
    return RingMap(D, C, ["t^3", "t^4"])


def test_ill_defined_map_rejected():
    C = PresentedRing(QQ, ["t"])
    D = PresentedRing(QQ, ["x", "y"], ["y^2 - x^3"])
    with pytest.raises(IllDefinedMap):
        RingMap(D, C, ["t^3", "t^4"])


def test_kernel_of_parametrization():
    C = PresentedRing(QQ, ["t"])
    P = PresentedRing(QQ, ["x", "y"])
    f = RingMap(P, C, ["t^3", "t^4"])
    assert [str(g) for g in ring_map_kernel(f)] == ["x^4 - y^3"]
    assert kernel_witness(f) is not None


def test_injective_from_quotient(cusp):
    assert is_injective(cusp)


def test_kernel_witness_nonzero_in_source():
    B = PresentedRing(QQ, ["x1", "x2"], ["x1^2", "x2^2"])
    C = PresentedRing(QQ, ["x", "z"], ["x^2", "z^2 - 1"])
    f = RingMap(B, C, ["x", "x*z"])
    w = kernel_witness(f)
    assert w is not None and not B.is_zero(w)
    assert C.is_zero(f.apply_raw(w))


def test_tensor_over_base(cusp):
    T = tensor_over_base(cusp, cusp)
    assert T.ring.names == ("t1", "t2")
    assert T.ring.is_zero("t1^3 - t2^3") and T.ring.is_zero("t1^4 - t2^4")
    assert not T.ring.is_zero("t1 - t2")


def test_tensor_over_subalgebra():
    B = PresentedRing(QQ, ["x"])
    T = tensor_over_subalgebra(B, ["x^2"])
    assert T.ring.is_zero("x1^2 - x2^2")
    assert not T.ring.is_zero("x1 - x2")


def test_finiteness_certificate(cusp):
    cert = finiteness_certificate(cusp)
    assert [str(g) for g in cert.generators] == ["1", "t", "t^2"]
    assert cert.verify() and cert.verify_by_membership()


def test_certificate_replay_detects_tampering(cusp):
    cert = finiteness_certificate(cusp)
    key = next(iter(cert.witnesses))
    cert.witnesses[key] = tuple(c + c.ring.one() for c in cert.witnesses[key])
    assert not cert.verify()


def test_not_finite():
    C = PresentedRing(QQ, ["t", "s"])
    D = PresentedRing(QQ, ["x"])
    f = RingMap(D, C, ["t"])
    with pytest.raises(NotFinite):
        finiteness_certificate(f, max_rounds=5)


def test_subalgebra_presentation_and_membership():
    C = PresentedRing(QQ, ["t"])
    P, to_C = subalgebra_presentation(C, ["t^3", "t^4", "t^5"], ["x", "y", "z"])
    Q = PresentedRing(QQ, ["x", "y", "z"], ["y^2 - x*z", "z^2 - x^2*y", "y*z - x^3"])
    assert ideal_equal(P, Q)
    assert str(subalgebra_express(C, ["t^3", "t^4", "t^5"], "t^11")) == "u1^2*u3"
    assert not subalgebra_contains(C, ["t^3", "t^4"], "t^5")


def test_base_span():
    C = PresentedRing(QQ, ["t"])
    D = PresentedRing(QQ, ["s"])
    f = RingMap(D, C, ["t^2"])
    span = BaseSpan(f, ["1", "t"])
    row = span.express("t^5 + 1")
    assert [str(q) for q in row] == ["1", "s^2"]
    assert BaseSpan(f, ["1"]).express("t") is None


def test_ideal_equal_correspondence():
    r1 = PresentedRing(QQ, ["a", "b"], ["a^2 - b"])
    r2 = PresentedRing(QQ, ["b", "a"], ["a^2 - b"])
    assert ideal_equal(r1, r2, [1, 0])
    assert ideal_equal_by_names(r1, r2)
    assert not ideal_equal(r1, r2)


def test_finite_field_kernel():
    C = PresentedRing(GF(5), ["x", "z"], ["z^3 - 1"])
    D = PresentedRing(GF(5), ["x1", "x2"], ["x1^3 - x2^3"])
    assert is_injective(RingMap(D, C, ["x", "x*z"]))

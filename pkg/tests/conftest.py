import random
import sys

import pytest
import sympy
from hypothesis import settings

from gcx.poly import QQ, GF, PolyRing

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def to_sympy(f, symbols):
    """Convert a gcx polynomial to a sympy expression in ``symbols``."""
    expr = sympy.Integer(0)
    for c, m in f.terms:
        term = sympy.Rational(int(c.numerator), int(c.denominator)) if hasattr(c, "numerator") else sympy.Integer(int(c))
        for s, e in zip(symbols, m):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


def random_poly(rng: random.Random, ring: PolyRing, terms: int = 3, degree: int = 3, coeff: int = 5):
    d = {}
    for _ in range(terms):
        m = [0] * ring.nvars
        for _ in range(rng.randint(0, degree)):
            m[rng.randrange(ring.nvars)] += 1
        c = rng.randint(-coeff, coeff)
        if c:
            d[tuple(m)] = d.get(tuple(m), 0) + c
    return ring.from_dict(d)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def qq_xyz():
    return PolyRing(QQ, ["x", "y", "z"])


@pytest.fixture
def gf7_xy():
    return PolyRing(GF(7), ["x", "y"])


def pytest_terminal_summary(terminalreporter):
    outcomes = getattr(sys.modules.get("test_acceptance"), "OUTCOMES", None)
    if outcomes:
        terminalreporter.section("acceptance criteria")
        for number in sorted(outcomes):
            terminalreporter.write_line(outcomes[number].splitlines()[0])

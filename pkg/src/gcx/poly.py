"""Exact multivariate polynomials over Q and prime fields.

Variables are positional: a :class:`PolyRing` carries names purely for display,
and two rings with the same field and variable count are compatible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction

from .errors import AmbientMismatch

Monomial = tuple  # tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class Field:
    """Either the rationals (``p == 0``) or the prime field GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p and not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2**62:
            raise ValueError("prime must fit in a machine word")
        self.p = p

    @classmethod
    def parse(cls, desc: str) -> "Field":
        s = desc.strip().replace(" ", "")
        if s in ("QQ", "Q"):
            return cls(0)
        if s.upper().startswith("GF(") and s.endswith(")"):
            return cls(int(s[3:-1]))
        raise ValueError(f"unknown field descriptor {desc!r}")

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, value):
        """Coerce an int, Fraction or rational-like value into the field."""
        p = self.p
        if p:
            if isinstance(value, int):
                return value % p
            num, den = int(value.numerator), int(value.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes in GF({p})")
            return num * pow(den, -1, p) % p
        return _rational(value)

    def inv(self, a):
        if self.p:
            if a % self.p == 0:
                raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
            return pow(a, -1, self.p)
        return 1 / a

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


# ---------------------------------------------------------------------------
# monomial orders

_DIGIT_BITS = 20
_DIGIT_MAX = (1 << _DIGIT_BITS) - 1
MAX_EXPONENT = 1 << 15


class MonomialOrder:
    """A monomial order on a fixed number of variables.

    Orders are compared through integer keys: ``key(u) > key(v)`` iff ``u > v``.
    """

    kind = "abstract"

    def __init__(self, nvars: int):
        self.nvars = nvars
        self._memo: dict = {}

    def digits(self, exps: Sequence[int]) -> tuple:
        raise NotImplementedError

    def key(self, exps: Sequence[int]) -> int:
        k = self._memo.get(exps)
        if k is None:
            k = 0
            for d in self.digits(exps):
                k = (k << _DIGIT_BITS) | d
            if len(self._memo) > 500_000:
                self._memo.clear()
            self._memo[exps] = k
        return k

    def cmp(self, u: Sequence[int], v: Sequence[int]) -> int:
        if len(u) != self.nvars or len(v) != self.nvars:
            raise AmbientMismatch("monomial length does not match the order")
        ku, kv = self.key(tuple(u)), self.key(tuple(v))
        return (ku > kv) - (ku < kv)

    def _params(self):
        return (self.kind, self.nvars)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other._params() == self._params()

    def __hash__(self):
        return hash(self._params())


class Lex(MonomialOrder):
    kind = "lex"

    def digits(self, exps):
        return exps

    def __repr__(self):
        return f"Lex({self.nvars})"


class DegRevLex(MonomialOrder):
    kind = "degrevlex"

    def digits(self, exps):
        return (sum(exps),) + tuple(_DIGIT_MAX - e for e in reversed(exps))

    def __repr__(self):
        return f"DegRevLex({self.nvars})"


class Block(MonomialOrder):
    """Product order: compare the first block, then the next, and so on.

    ``Block([DegRevLex(2), DegRevLex(3)])`` eliminates the first two variables.
    """

    kind = "block"

    def __init__(self, blocks: Sequence[MonomialOrder]):
        super().__init__(sum(b.nvars for b in blocks))
        self.blocks = tuple(blocks)
        self._cuts = []
        start = 0
        for b in self.blocks:
            self._cuts.append((start, start + b.nvars))
            start += b.nvars

    @property
    def front_vars(self) -> int:
        return self.blocks[0].nvars

    def digits(self, exps):
        out = ()
        for b, (lo, hi) in zip(self.blocks, self._cuts):
            out += b.digits(exps[lo:hi])
        return out

    def eliminates(self, count: int) -> bool:
        """True when ``count`` is the size of a prefix of blocks, so that any
        monomial involving those variables beats every monomial free of them."""
        acc = 0
        for b in self.blocks:
            if acc == count:
                return True
            acc += b.nvars
        return acc == count

    def _params(self):
        return ("block", tuple(b._params() for b in self.blocks))

    def __repr__(self):
        return f"Block({list(self.blocks)!r})"


def elimination_order(n_front: int, n_rest: int) -> MonomialOrder:
    if n_front == 0:
        return DegRevLex(n_rest)
    if n_rest == 0:
        return DegRevLex(n_front)
    return Block([DegRevLex(n_front), DegRevLex(n_rest)])


def order_eliminates(order: MonomialOrder, count: int) -> bool:
    if count == 0:
        return True
    if isinstance(order, Lex):
        return True
    if isinstance(order, Block):
        return order.eliminates(count)
    return count == order.nvars


# ---------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """k[x_1..x_n] with display names and a default monomial order."""

    def __init__(self, field: Field, names: Sequence[str], order: MonomialOrder | None = None):
        self.field = field
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.order = order if order is not None else DegRevLex(self.nvars)
        if self.order.nvars != self.nvars:
            raise ValueError("order size does not match the number of variables")
        self._zero_mon = (0,) * self.nvars

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.names, order)

    def compatible(self, other: "PolyRing") -> bool:
        return self.field == other.field and self.nvars == other.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}]"

    # constructors -----------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self._zero_mon: c} if c else {})

    def var(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.names.index(i)
        mon = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mon: self.field(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise AmbientMismatch("exponent vector has the wrong length")
        c = self.field(coeff)
        return Polynomial(self, {exps: c} if c else {})

    def from_dict(self, terms: Mapping[tuple, object]) -> "Polynomial":
        f = self.field
        d = {}
        for m, c in terms.items():
            c = f(c)
            if c:
                d[tuple(m)] = c
        return Polynomial(self, d)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if not value.ring.compatible(self):
                raise AmbientMismatch(f"cannot coerce {value.ring!r} into {self!r}")
            return value if value.ring is self else Polynomial(self, value._d)
        if isinstance(value, str):
            from .parse import parse_polynomial

            return parse_polynomial(value, self)
        return self.const(value)


class Polynomial:
    """An immutable polynomial in canonical form.

    ``terms`` lists ``(coefficient, monomial)`` pairs strictly decreasing in
    the ring's order; equality is equality of canonical forms.
    """

    __slots__ = ("ring", "_d", "_terms", "_hash")

    def __init__(self, ring: PolyRing, d: dict):
        self.ring = ring
        self._d = d
        self._terms = None
        self._hash = None

    # structure --------------------------------------------------------
    @property
    def terms(self) -> tuple:
        if self._terms is None:
            key = self.ring.order.key
            mons = sorted(self._d, key=key, reverse=True)
            self._terms = tuple((self._d[m], m) for m in mons)
        return self._terms

    def as_dict(self) -> dict:
        return dict(self._d)

    def sorted_terms(self, order: MonomialOrder) -> list:
        mons = sorted(self._d, key=order.key, reverse=True)
        return [(self._d[m], m) for m in mons]

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self):
        return bool(self._d)

    def __len__(self):
        return len(self._d)

    def is_constant(self) -> bool:
        return not self._d or (len(self._d) == 1 and self.ring._zero_mon in self._d)

    def constant_coeff(self):
        return self._d.get(self.ring._zero_mon, self.ring.field(0))

    def leading_monomial(self, order: MonomialOrder | None = None):
        if not self._d:
            return None
        order = order or self.ring.order
        return max(self._d, key=order.key)

    def leading_coeff(self, order: MonomialOrder | None = None):
        m = self.leading_monomial(order)
        return self.ring.field(0) if m is None else self._d[m]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._d), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self._d), default=-1)

    def variables(self) -> set[int]:
        out = set()
        for m in self._d:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self._d:
            return self
        return self * self.ring.field.inv(self.leading_coeff(order))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._d}) <= 1

    def homogeneous_part(self, deg: int) -> "Polynomial":
        return Polynomial(self.ring, {m: c for m, c in self._d.items() if sum(m) == deg})

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if not self.ring.compatible(other.ring):
            raise AmbientMismatch(f"{self.ring!r} vs {other.ring!r}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) or hasattr(other, "denominator"):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {m: (-c) % p for m, c in self._d.items()})
        return Polynomial(self.ring, {m: -c for m, c in self._d.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        c = self.ring.field(other)
        if not c:
            return self.ring.zero()
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {m: v * c % p for m, v in self._d.items()})
        return Polynomial(self.ring, {m: v * c for m, v in self._d.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring.compatible(other.ring) and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._d == self.ring.const(other)._d
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    # substitution -----------------------------------------------------
    def evaluate(self, images: Sequence["Polynomial"], target: PolyRing | None = None) -> "Polynomial":
        """Substitute ``images[i]`` for variable ``i``."""
        if len(images) != self.ring.nvars:
            raise AmbientMismatch("need one image per variable")
        if target is None:
            target = images[0].ring if images else self.ring
        out = target.zero()
        powers: list[dict] = [dict() for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        acc = {}
        for c, m in self.terms:
            t = target.const(c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            _accumulate(acc, t._d, target.field.p)
        out = Polynomial(target, acc)
        return out

    def __call__(self, *images):
        return self.evaluate(list(images))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def _accumulate(acc: dict, d: dict, p: int) -> None:
    for m, c in d.items():
        v = acc.get(m)
        v = c if v is None else v + c
        if p:
            v %= p
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    if len(a._d) < len(b._d):
        a, b = b, a
    d = dict(a._d)
    _accumulate(d, b._d, a.ring.field.p)
    return Polynomial(a.ring, d)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    p = a.ring.field.p
    d: dict = {}
    get = d.get
    for m1, c1 in a._d.items():
        for m2, c2 in b._d.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            v = get(m)
            d[m] = c1 * c2 if v is None else v + c1 * c2
    if p:
        d = {m: c % p for m, c in d.items() if c % p}
    else:
        d = {m: c for m, c in d.items() if c}
    return Polynomial(a.ring, d)


def monomial_cmp(order: MonomialOrder, u: Sequence[int], v: Sequence[int]) -> int:
    """-1, 0 or 1 as ``u`` is smaller than, equal to or greater than ``v``."""
    return order.cmp(u, v)


# ---------------------------------------------------------------------------
# printing


def format_coefficient(c, p: int) -> str:
    if p:
        return str(int(c))
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def format_monomial(m: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, n in zip(m, names):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial, names: Sequence[str] | None = None) -> str:
    if not f._d:
        return "0"
    names = names or f.ring.names
    p = f.ring.field.p
    out = []
    for c, m in f.terms:
        neg = False
        if not p and c < 0:
            neg, c = True, -c
        cs = format_coefficient(c, p)
        ms = format_monomial(m, names)
        if not ms:
            body = cs
        elif cs == "1":
            body = ms
        else:
            body = f"{cs}*{ms}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def lcm_monomial(u: Sequence[int], v: Sequence[int]) -> tuple:
    return tuple(max(a, b) for a, b in zip(u, v))


def divides(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(u, v))


def monomials_of_degree(nvars: int, deg: int) -> Iterable[tuple]:
    if nvars == 0:
        if deg == 0:
            yield ()
        return
    for e in range(deg, -1, -1):
        for rest in monomials_of_degree(nvars - 1, deg - e):
            yield (e,) + rest

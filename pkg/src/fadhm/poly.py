"""Sparse multivariate polynomials and rational functions over the rationals.

A :class:`PolyRing` is a variable registry (an ordered tuple of names).
Polynomials store a dict mapping dense exponent tuples to nonzero
:class:`fractions.Fraction` coefficients, so two equal polynomials always
have identical term maps.  Python ints and Fractions coerce to constants in
every arithmetic operation, which lets numpy object arrays hold polynomial
entries directly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Sequence

Exp = tuple[int, ...]

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class PolyRing:
    """Ordered registry of variable names."""

    __slots__ = ("names", "index", "nvars", "_zero_exp")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for nm in names:
            if not _NAME_RE.match(nm):
                raise ValueError(f"invalid variable name {nm!r}")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.index = {nm: k for k, nm in enumerate(names)}
        self.nvars = len(names)
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({list(self.names)})"

    def __len__(self):
        return self.nvars

    @property
    def zero(self) -> Polynomial:
        return Polynomial._make(self, {})

    @property
    def one(self) -> Polynomial:
        return Polynomial._make(self, {self._zero_exp: Fraction(1)})

    def const(self, c) -> Polynomial:
        c = Fraction(c)
        return Polynomial._make(self, {self._zero_exp: c} if c else {})

    def var(self, name: str) -> Polynomial:
        k = self.index[name]
        e = [0] * self.nvars
        e[k] = 1
        return Polynomial._make(self, {tuple(e): Fraction(1)})

    def gens(self) -> list[Polynomial]:
        return [self.var(nm) for nm in self.names]

    def monomial(self, exp: Exp, coeff=1) -> Polynomial:
        coeff = Fraction(coeff)
        return Polynomial._make(self, {tuple(exp): coeff} if coeff else {})

    def coerce(self, x) -> Polynomial:
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise ValueError("polynomial from a different ring")
            return x
        return self.const(x)

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self)

    def extend(self, extra: Iterable[str]) -> PolyRing:
        return PolyRing(self.names + tuple(extra))


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exp, Fraction]):
        clean = {}
        for e, c in terms.items():
            e = tuple(int(a) for a in e)
            if len(e) != ring.nvars or min(e, default=0) < 0:
                raise ValueError(f"exponent {e} does not fit a ring with {ring.nvars} variables")
            c = Fraction(c)
            if c:
                clean[e] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def _make(cls, ring, terms):
        """Unchecked constructor: exponents well formed, coefficients nonzero Fractions."""
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def _clean(cls, ring, terms):
        return cls._make(ring, {e: c for e, c in terms.items() if c})

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials over different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(self.ring._zero_exp, Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring._zero_exp, Fraction(0))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._make(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._make(self.ring, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial(self.ring, {})
            return Polynomial._make(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial._clean(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Polynomial):
            if other.is_constant():
                return self * (1 / other.constant_value())
            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.ring.const(other), self)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, exp: Exp, coeff) -> Polynomial:
        coeff = Fraction(coeff)
        if not coeff:
            return self.ring.zero
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, RationalFunction):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    # structure ------------------------------------------------------------

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def support(self) -> set[str]:
        idx = set()
        for e in self.terms:
            idx.update(k for k, a in enumerate(e) if a)
        return {self.ring.names[k] for k in sorted(idx)}

    def leading(self, order) -> tuple[Exp, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def leading_monomial(self, order) -> Exp:
        return self.leading(order)[0]

    def monic(self, order) -> Polynomial:
        if not self.terms:
            return self
        return self * (1 / self.leading(order)[1])

    def diff(self, var) -> Polynomial:
        k = var if isinstance(var, int) else self.ring.index[var]
        out = {}
        for e, c in self.terms.items():
            a = e[k]
            if a:
                ne = list(e)
                ne[k] = a - 1
                out[tuple(ne)] = c * a
        return Polynomial._make(self.ring, out)

    def homogeneous_part(self, d: int) -> Polynomial:
        return Polynomial._make(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        nums = reduce(gcd, (c.numerator for c in self.terms.values()))
        dens = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in self.terms.values()))
        return Fraction(abs(nums), dens)

    # evaluation -----------------------------------------------------------

    def evaluate(self, values) -> Fraction:
        """Evaluate at a point given as a sequence (ring order) or a name mapping."""
        vals = _point_vector(self.ring, values)
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, a in zip(vals, e):
                if a:
                    t *= v**a
            total += t
        return total

    def substitute(self, mapping: Mapping[str, object]) -> Polynomial:
        """Substitute polynomials (or numbers) for some variables."""
        subs = {self.ring.index[k]: self.ring.coerce(v) for k, v in mapping.items()}
        out = self.ring.zero
        for e, c in self.terms.items():
            keep = list(e)
            t = self.ring.one
            for k, p in subs.items():
                if e[k]:
                    t = t * p ** e[k]
                    keep[k] = 0
            out = out + t.mul_term(tuple(keep), c)
        return out

    # text -----------------------------------------------------------------

    def to_text(self, order=None) -> str:
        if not self.terms:
            return "0"
        from .orders import MonomialOrder

        order = order or MonomialOrder.degrevlex(self.ring)
        exps = sorted(self.terms, key=order.key, reverse=True)
        parts = []
        for k, e in enumerate(exps):
            c = self.terms[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            factors = []
            for nm, a in zip(self.ring.names, e):
                if a == 1:
                    factors.append(nm)
                elif a:
                    factors.append(f"{nm}^{a}")
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if k == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    def to_json(self, order=None) -> list:
        """Term-list form ``[[coeff, {var: exp}], ...]`` sorted by the order."""
        from .orders import MonomialOrder

        order = order or MonomialOrder.degrevlex(self.ring)
        out = []
        for e in sorted(self.terms, key=order.key, reverse=True):
            mono = {nm: a for nm, a in zip(self.ring.names, e) if a}
            out.append([str(self.terms[e]), mono])
        return out

    @classmethod
    def from_json(cls, data: list, ring: PolyRing) -> Polynomial:
        out = ring.zero
        for coeff, mono in data:
            e = [0] * ring.nvars
            for nm, a in mono.items():
                e[ring.index[nm]] += int(a)
            out = out + ring.monomial(tuple(e), Fraction(coeff))
        return out


def _point_vector(ring: PolyRing, values) -> list[Fraction]:
    if isinstance(values, Mapping):
        return [Fraction(values[nm]) if nm in values else Fraction(0) for nm in ring.names]
    vals = list(values)
    if len(vals) != ring.nvars:
        raise ValueError(f"expected {ring.nvars} values, got {len(vals)}")
    return vals


# text grammar ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


class PolyParseError(ValueError):
    pass


def parse_poly(text: str, ring: PolyRing) -> Polynomial:
    """Parse the polynomial text grammar (``+ - * ^`` and parentheses).

    >>> R = PolyRing(["x", "y"])
    >>> str(parse_poly("x^2 - 3/2*x*y + 1", R))
    'x^2 - 3/2*x*y + 1'
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    tokens.append(("end", None))
    p = _Parser(tokens, ring)
    result = p.expr()
    if p.peek()[0] != "end":
        raise PolyParseError(f"trailing input near token {p.peek()[1]!r}")
    return result


class _Parser:
    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.k = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while self.peek() == ("op", "*"):
            self.take()
            acc = acc * self.power()
        return acc

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or "/" in val:
                raise PolyParseError("exponent must be a nonnegative integer")
            base = base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "name":
            if val not in self.ring.index:
                raise PolyParseError(f"unknown variable {val!r}")
            return self.ring.var(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise PolyParseError("missing ')'")
            return inner
        if (kind, val) == ("op", "-"):
            return -self.power()
        raise PolyParseError(f"unexpected token {val!r}")


# rational functions ---------------------------------------------------------


class RationalFunction:
    """Quotient num/den of polynomials; den is made monic under degrevlex.

    Equality is decided by cross-multiplication, so no gcds are ever taken.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.ring != den.ring:
            raise ValueError("numerator and denominator over different rings")
        from .orders import MonomialOrder

        if den.is_constant():
            num, den = num * (1 / den.constant_value()), den.ring.one
        else:
            lc = den.leading(MonomialOrder.degrevlex(den.ring))[1]
            if lc != 1:
                num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other, other.ring.one)
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.ring.const(other), self.ring.one)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RationalFunction(self.ring.zero, self.ring.one)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable (equality is up to cross-multiplication)")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def evaluate(self, values) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(values) / d

    def to_text(self) -> str:
        if self.den.is_constant() or self.num.is_zero():
            return self.num.to_text()
        q = _divide_exact(self.num, self.den)
        if q is not None:
            return q.to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"


def _divide_exact(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """a / b when b divides a, else None."""
    from .orders import MonomialOrder

    order = MonomialOrder.degrevlex(a.ring)
    lb, cb = b.leading(order)
    q, r = a.ring.zero, a
    while not r.is_zero():
        lr, cr = r.leading(order)
        shift = tuple(x - y for x, y in zip(lr, lb))
        if min(shift) < 0:
            return None
        t = a.ring.monomial(shift, cr / cb)
        q, r = q + t, r - t * b
    return q


def as_rational_function(x, ring: PolyRing) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(ring.coerce(x), ring.one)


def evaluate(x, values) -> Fraction:
    """Evaluate a number, Polynomial, or RationalFunction at a point."""
    if isinstance(x, (Polynomial, RationalFunction)):
        return x.evaluate(values)
    return Fraction(x)


def monomials_up_to(nvars: int, d: int) -> list[Exp]:
    """All exponent tuples of total degree <= d, grouped by degree."""
    out: list[Exp] = []
    for deg in range(d + 1):
        out.extend(_exact_degree(nvars, deg))
    return out


def _exact_degree(nvars: int, deg: int) -> list[Exp]:
    if nvars == 0:
        return [()] if deg == 0 else []
    if nvars == 1:
        return [(deg,)]
    return [(a,) + rest for a in range(deg, -1, -1) for rest in _exact_degree(nvars - 1, deg - a)]


def as_exp(ring: PolyRing, names: Sequence[str] | Mapping[str, int]) -> Exp:
    e = [0] * ring.nvars
    items = names.items() if isinstance(names, Mapping) else ((n, 1) for n in names)
    for nm, a in items:
        e[ring.index[nm]] += a
    return tuple(e)

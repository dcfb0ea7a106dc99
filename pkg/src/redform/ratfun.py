"""Exact arithmetic for univariate polynomials and rational functions over Q.

Values are immutable and normalized on construction: polynomials trim trailing
zero coefficients, rational functions keep a monic denominator coprime to the
numerator, and zero is represented as 0/1.  Two computation paths that reach
the same value therefore produce bit-identical representations.

Polynomials and rational functions do not carry a variable name; the name is
supplied when parsing or printing (and by :class:`redform.systems.DiffSystem`
for whole systems).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import DivisionByZero, ParseError, PoleAtPoint

Rat = Fraction


def _rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational constant")


class Poly:
    """Dense univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c) -> "Poly":
        return Poly((_rat(c),))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def monomial(c, k: int) -> "Poly":
        return Poly((0,) * k + (_rat(c),))

    ZERO: "Poly"
    ONE: "Poly"

    @property
    def degree(self) -> int:
        # -1 for the zero polynomial
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(k) - other.coeff(k) for k in range(n)))

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[: other.degree if other.degree > 0 else 0])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        if self.is_zero:
            return _as_poly(other).is_zero
        return (_as_poly(other) % self).is_zero

    def gcd(self, other) -> "Poly":
        a, b = self, _as_poly(other)
        while not b.is_zero:
            a, b = b, a % b
            if not b.is_zero:
                b = b.monic()
        return a.monic() if not a.is_zero else a

    def lcm(self, other) -> "Poly":
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Poly()
        g = self.gcd(other)
        return ((self * other) // g).monic()

    def xgcd(self, other):
        """Extended Euclid: return (g, s, t) with s*self + t*other = g, g monic."""
        a, b = self, _as_poly(other)
        sa, sb = Poly.const(1), Poly()
        ta, tb = Poly(), Poly.const(1)
        while not b.is_zero:
            q, r = divmod(a, b)
            a, b = b, r
            sa, sb = sb, sa - q * sb
            ta, tb = tb, ta - q * tb
        if a.is_zero:
            return a, sa, ta
        lead = a.leading
        inv = Poly.const(1 / lead)
        return a.monic(), sa * inv, ta * inv

    def monic(self) -> "Poly":
        if self.is_zero or self.leading == 1:
            return self
        inv = 1 / self.leading
        return Poly(tuple(c * inv for c in self.coeffs))

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def __call__(self, x0) -> Fraction:
        x0 = _rat(x0)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def shift(self, x0) -> "Poly":
        """Return p(u + x0), the expansion around x0 in the local variable u."""
        x0 = _rat(x0)
        shifted_x = Poly((x0, 1))
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * shifted_x + Poly.const(c)
        return acc

    def substitute_power(self, m: int) -> "Poly":
        """Return p(t^m) as a polynomial in t."""
        if m < 1:
            raise ValueError("substitution exponent must be >= 1")
        if self.is_zero:
            return self
        out = [Fraction(0)] * (self.degree * m + 1)
        for k, c in enumerate(self.coeffs):
            out[k * m] = c
        return Poly(out)

    def radical(self) -> "Poly":
        """Monic squarefree part (characteristic zero)."""
        if self.degree < 1:
            return Poly.const(1) if not self.is_zero else Poly()
        return (self // self.gcd(self.derivative())).monic()

    def __repr__(self):
        return f"Poly[{poly_str(self, 'x')}]"


Poly.ZERO = Poly()
Poly.ONE = Poly.const(1)


def _as_poly(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.const(value)
    return None


class RatFn:
    """Rational function num/den over Q with a canonical representation.

    Invariants: den is monic and nonzero, gcd(num, den) = 1, and the zero
    function is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if num is None or den is None:
            raise TypeError("RatFn components must be Poly or rational constants")
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if num.is_zero:
            self.num, self.den = Poly(), Poly.ONE
            return
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.leading
        if lead != 1:
            inv = 1 / lead
            num = num * Poly.const(inv)
            den = den * Poly.const(inv)
        self.num, self.den = num, den

    ZERO: "RatFn"
    ONE: "RatFn"

    @staticmethod
    def const(c) -> "RatFn":
        return RatFn(Poly.const(c))

    @staticmethod
    def x() -> "RatFn":
        return RatFn(Poly.x())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den == Poly.ONE

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self!r} is not constant")
        return self.num.coeff(0)

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        other = _as_ratfn(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFn", self.num.coeffs, self.den.coeffs))

    def __add__(self, other):
        other = _as_ratfn(other)
        if other is None:
            return NotImplemented
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ratfn(other)
        if other is None:
            return NotImplemented
        return RatFn(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        other = _as_ratfn(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        out = RatFn.__new__(RatFn)
        out.num, out.den = -self.num, self.den
        return out

    def __mul__(self, other):
        other = _as_ratfn(other)
        if other is None:
            return NotImplemented
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfn(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("division by the zero rational function")
        return RatFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfn(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            if self.is_zero:
                raise DivisionByZero("zero to a negative power")
            return RatFn(self.den, self.num) ** (-k)
        return RatFn(self.num ** k, self.den ** k)

    def inverse(self) -> "RatFn":
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        return RatFn(self.den, self.num)

    def derivative(self) -> "RatFn":
        return RatFn(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, x0) -> Fraction:
        x0 = _rat(x0)
        dv = self.den(x0)
        if dv == 0:
            raise PoleAtPoint(f"pole at {x0}")
        return self.num(x0) / dv

    def has_pole_at(self, x0) -> bool:
        return self.den(_rat(x0)) == 0

    def substitute_power(self, m: int) -> "RatFn":
        return RatFn(self.num.substitute_power(m), self.den.substitute_power(m))

    def __repr__(self):
        return f"RatFn[{ratfn_str(self, 'x')}]"


RatFn.ZERO = RatFn(Poly())
RatFn.ONE = RatFn(Poly.ONE)


def _as_ratfn(value):
    if isinstance(value, RatFn):
        return value
    if isinstance(value, (int, Fraction, Poly)):
        return RatFn(_as_poly(value))
    return None


def as_ratfn(value) -> RatFn:
    out = _as_ratfn(value)
    if out is None:
        raise TypeError(f"cannot interpret {value!r} as a rational function")
    return out


# ---------------------------------------------------------------------------
# Operation surface


def rf_arith(a: RatFn, b: RatFn, op: str) -> RatFn:
    """Exact field arithmetic; ``op`` is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_diff(a: RatFn) -> RatFn:
    return a.derivative()


def rf_eval(a: RatFn, x0) -> Fraction:
    return a(x0)


def rf_substitute_power(a: RatFn, m: int) -> RatFn:
    return a.substitute_power(m)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[()^+\-*/]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            tail = text[pos:].strip()
            if not tail:
                break
            raise ParseError(f"unexpected character {tail[0]!r} in {text!r}")
        if m.group("int") is not None:
            tokens.append(("int", int(m.group("int"))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _RatFnParser:
    """Recursive descent for integers, one variable, + - * / ^ and parens."""

    def __init__(self, tokens, var):
        self.tokens = tokens
        self.var = var
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, symbol):
        kind, value = self.take()
        if kind != "op" or value != symbol:
            raise ParseError(f"expected {symbol!r}")

    def parse(self) -> RatFn:
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError("trailing input after expression")
        return value

    def expr(self) -> RatFn:
        value = self.term()
        while True:
            kind, op = self.peek()
            if kind == "op" and op in "+-":
                self.pos += 1
                rhs = self.term()
                value = value + rhs if op == "+" else value - rhs
            else:
                return value

    def term(self) -> RatFn:
        value = self.factor()
        while True:
            kind, op = self.peek()
            if kind == "op" and op in "*/":
                self.pos += 1
                rhs = self.factor()
                if op == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero:
                        raise ParseError("division by zero in expression")
                    value = value / rhs
            else:
                return value

    def factor(self) -> RatFn:
        kind, op = self.peek()
        if kind == "op" and op in "+-":
            self.pos += 1
            inner = self.factor()
            return inner if op == "+" else -inner
        return self.power()

    def power(self) -> RatFn:
        base = self.atom()
        kind, op = self.peek()
        if kind == "op" and op == "^":
            self.pos += 1
            ekind, evalue = self.take()
            if ekind != "int":
                raise ParseError("exponent must be a non-negative integer")
            return base ** evalue
        return base

    def atom(self) -> RatFn:
        kind, value = self.take()
        if kind == "int":
            return RatFn.const(value)
        if kind == "name":
            if value != self.var:
                raise ParseError(
                    f"unknown symbol {value!r}, expected variable {self.var!r}"
                )
            return RatFn.x()
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError("unexpected end of expression" if kind is None else f"unexpected token {value!r}")


def parse_ratfn(text: str, var: str = "x") -> RatFn:
    """Parse a rational function string such as ``(x^2+1)/(2*x)``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    return _RatFnParser(tokens, var).parse()


def parse_rat(text) -> Fraction:
    """Parse an exact rational constant such as ``-3/2``."""
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid rational constant {text!r}") from exc


# ---------------------------------------------------------------------------
# Printing


def _frac_str(q: Fraction) -> str:
    return str(q)


def poly_str(p: Poly, var: str = "x") -> str:
    """Canonical string, highest degree first; reparses to the same value."""
    if p.is_zero:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _frac_str(mag)
        elif mag == 1:
            body = var if k == 1 else f"{var}^{k}"
        else:
            body = f"{_frac_str(mag)}*{var}" if k == 1 else f"{_frac_str(mag)}*{var}^{k}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


def ratfn_str(r: RatFn, var: str = "x") -> str:
    """Canonical string form; integer-cleared num/den when den is nontrivial."""
    if r.is_zero:
        return "0"
    if r.den == Poly.ONE:
        return poly_str(r.num, var)
    scale = 1
    for c in r.num.coeffs + r.den.coeffs:
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    num = r.num * Poly.const(scale)
    den = r.den * Poly.const(scale)
    content = 0
    for c in num.coeffs + den.coeffs:
        content = math.gcd(content, abs(c.numerator))
    if content > 1:
        num = num * Poly.const(Fraction(1, content))
        den = den * Poly.const(Fraction(1, content))
    return f"({poly_str(num, var)})/({poly_str(den, var)})"


# ---------------------------------------------------------------------------
# Root utilities


def _divisors(n: int):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def integer_roots(p: Poly, search_limit: int = 10 ** 14):
    """Return (roots, certified) for the integer roots of p.

    The search clears denominators and tests divisors of the trailing
    coefficient.  When that coefficient exceeds ``search_limit`` the divisor
    enumeration is skipped and only a small window is scanned, in which case
    ``certified`` is False.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has every integer as a root")
    scale = 1
    for c in p.coeffs:
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    coeffs = [int(c * scale) for c in p.coeffs]
    valuation = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        valuation += 1
    roots = set()
    if valuation:
        roots.add(0)
    if not coeffs:
        return sorted(roots), True
    a0 = abs(coeffs[0])
    stripped = Poly(coeffs)
    if a0 <= search_limit:
        for d in _divisors(a0):
            for cand in (d, -d):
                if stripped(cand) == 0:
                    roots.add(cand)
        return sorted(roots), True
    for cand in range(-64, 65):
        if cand != 0 and stripped(cand) == 0:
            roots.add(cand)
    return sorted(roots), False


def squarefree_factors(p: Poly):
    """Yun decomposition: [(s_k, k)] with p = lc * prod s_k^k, the s_k monic,
    squarefree and pairwise coprime (characteristic zero)."""
    if p.degree < 1:
        return []
    f = p.monic()
    c = f.gcd(f.derivative())
    w = f // c
    y = f.derivative() // c
    factors = []
    k = 1
    while w.degree >= 1:
        z = y - w.derivative()
        g = w.gcd(z) if not z.is_zero else w
        if g.degree >= 1:
            factors.append((g, k))
        w = w // g
        y = z // g
        k += 1
    return factors


def _fraction_sqrt(q: Fraction):
    if q < 0:
        return None
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        return None
    return Fraction(num, den)


def poly_sqrt(p: Poly):
    """Exact square root of a polynomial over Q, or None."""
    if p.is_zero:
        return Poly()
    if p.degree % 2 != 0:
        return None
    lead = _fraction_sqrt(p.leading)
    if lead is None:
        return None
    half = p.degree // 2
    root = [Fraction(0)] * (half + 1)
    root[half] = lead
    for k in range(half - 1, -1, -1):
        # match the coefficient of x^(k + half) in root^2
        acc = Fraction(0)
        for i in range(k + 1, half + 1):
            j = k + half - i
            if 0 <= j <= half:
                acc += root[i] * root[j]
        root[k] = (p.coeff(k + half) - acc) / (2 * lead)
    candidate = Poly(root)
    if candidate * candidate == p:
        return candidate
    return None


def ratfn_sqrt(r: RatFn):
    """Exact square root of a rational function over Q, or None."""
    if r.is_zero:
        return RatFn.ZERO
    num = poly_sqrt(r.num)
    den = poly_sqrt(r.den)
    if num is None or den is None:
        return None
    return RatFn(num, den)

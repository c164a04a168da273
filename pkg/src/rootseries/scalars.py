"""Scalar arithmetic: exact rationals, the xi-quotient ring, dense polynomials.

Rationals are :class:`fractions.Fraction`.  ``XiElement`` models
Q[xi]/(xi^d + 1) so that identities involving a d-th root of -1 hold for
every such root at once.  ``UniPoly`` is a dense univariate polynomial over
Q, used for shifted Stirling polynomials and as the base of the polynomial
derivation ring.
"""

from __future__ import annotations

import cmath
import math
import operator
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[Fraction, complex, "XiElement"]

_ARITH = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimals are rejected to keep inputs exact."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational of the form p/q: {text!r}") from None
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def fraction_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_complex(text: str) -> complex:
    """Parse ``"re,im"`` (or a bare real) into a finite complex float."""
    parts = text.split(",")
    if len(parts) == 1:
        z = complex(float(parts[0]), 0.0)
    elif len(parts) == 2:
        z = complex(float(parts[0]), float(parts[1]))
    else:
        raise ValueError(f"complex values are written re,im: {text!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {text!r}")
    return z


def rational_arith(a, b, op: str) -> Fraction:
    """Exact ``a <op> b`` for op in add/sub/mul/div.

    Raises ZeroDivisionError for division by zero.
    """
    try:
        fn = _ARITH[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    a, b = as_fraction(a), as_fraction(b)
    if op == "div" and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return fn(a, b)


def falling_factorial(x, k: int):
    """``(x)_k = x (x-1) ... (x-k+1)``; the empty product is 1 of the same kind."""
    if k < 0:
        raise ValueError("falling factorial needs k >= 0")
    if isinstance(x, UniPoly):
        result = type(x).constant(1)
    elif isinstance(x, XiElement):
        result = XiElement.one(x.d)
    elif isinstance(x, (int, Fraction)):
        result = Fraction(1)
    else:
        result = 1
    for i in range(k):
        result = result * (x - i)
    return result


def binomial(x, k: int):
    """Generalised binomial ``(x)_k / k!``; zero for negative k."""
    if k < 0:
        return Fraction(0)
    if isinstance(x, int):
        return Fraction(math.comb(x, k)) if x >= 0 else falling_factorial(Fraction(x), k) / math.factorial(k)
    return falling_factorial(x, k) / math.factorial(k)


class XiElement:
    """Element c_0 + c_1 xi + ... + c_{d-1} xi^{d-1} of Q[xi]/(xi^d + 1)."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = tuple(as_fraction(c) for c in coeffs)
        if not cs:
            raise ValueError("XiElement needs d >= 1 coefficients")
        self._coeffs = cs

    @classmethod
    def zero(cls, d: int) -> "XiElement":
        return cls([0] * d)

    @classmethod
    def one(cls, d: int) -> "XiElement":
        return cls.scalar(1, d)

    @classmethod
    def scalar(cls, c, d: int) -> "XiElement":
        return cls([c] + [0] * (d - 1))

    @classmethod
    def xi(cls, d: int) -> "XiElement":
        if d == 1:
            return cls([-1])
        return cls([0, 1] + [0] * (d - 2))

    @classmethod
    def xi_power(cls, e: int, d: int) -> "XiElement":
        """xi^e for any integer e, using xi^d = -1 (so xi^(2d) = 1)."""
        e %= 2 * d
        sign = 1
        if e >= d:
            e -= d
            sign = -1
        cs = [0] * d
        cs[e] = sign
        return cls(cs)

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def d(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def _coerce(self, other) -> "XiElement":
        if isinstance(other, XiElement):
            if other.d != self.d:
                raise ValueError(f"xi-ring mismatch: d={self.d} vs d={other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return XiElement.scalar(other, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return XiElement(a + b for a, b in zip(self._coeffs, o._coeffs))

    __radd__ = __add__

    def __neg__(self):
        return XiElement(-a for a in self._coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return XiElement(a - b for a, b in zip(self._coeffs, o._coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return XiElement(a * other for a in self._coeffs)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return xi_mul(self, o, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("XiElement division by zero")
            return XiElement(a / other for a in self._coeffs)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers only exist for monomials; use xi_power")
        result = XiElement.one(self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = XiElement.scalar(other, self.d)
        if not isinstance(other, XiElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(("xi", self._coeffs))

    def evaluate(self, root: complex) -> complex:
        """Image under xi -> root, where root is a numeric d-th root of -1."""
        total = 0j
        p = 1 + 0j
        for c in self._coeffs:
            total += float(c) * p
            p *= root
        return total

    def to_json(self) -> list:
        return [fraction_to_str(c) for c in self._coeffs]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self._coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*xi^{i}")
        return f"XiElement(d={self.d}: {' + '.join(terms) or '0'})"


def xi_mul(a: XiElement, b: XiElement, d: int) -> XiElement:
    """Product in Q[xi]/(xi^d + 1)."""
    if a.d != d or b.d != d:
        raise ValueError(f"operands must have length d={d}, got {a.d} and {b.d}")
    out = [Fraction(0)] * d
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs):
            if not y:
                continue
            e = i + j
            if e >= d:
                out[e - d] -= x * y
            else:
                out[e] += x * y
    return XiElement(out)


def roots_of_minus_one(d: int) -> list[complex]:
    """All numeric d-th roots of -1, exp(i pi (2j+1)/d)."""
    return [cmath.exp(1j * math.pi * (2 * j + 1) / d) for j in range(d)]


class UniPoly:
    """Dense polynomial over Q; ``coeffs[i]`` is the coefficient of degree i."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if type(c) is Fraction else as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1):
        return cls([0] * degree + [c])

    @classmethod
    def variable(cls):
        return cls([0, 1])

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1  # -1 for the zero polynomial

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return type(self)([other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = max(len(self._coeffs), len(o._coeffs))
        return type(self)(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return type(self)(-c for c in self._coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self)(c * other for c in self._coeffs)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return type(self)()
        out = [Fraction(0)] * (len(self._coeffs) + len(o._coeffs) - 1)
        for i, x in enumerate(self._coeffs):
            if x:
                for j, y in enumerate(o._coeffs):
                    if y:
                        out[i + j] += x * y
        return type(self)(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self)(c / other for c in self._coeffs)
        return NotImplemented

    def __pow__(self, e: int):
        result = type(self).constant(1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(("poly", self._coeffs))

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return type(self)(i * c for i, c in enumerate(self._coeffs) if i)

    def shift(self, y) -> "UniPoly":
        """The polynomial X -> p(X + y)."""
        y = as_fraction(y)
        out = type(self)()
        lin = type(self)([y, 1])
        for c in reversed(self._coeffs):
            out = out * lin + c
        return out

    def __repr__(self):
        return f"{type(self).__name__}({[str(c) for c in self._coeffs]})"


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, XiElement))


def scalar_to_json(x):
    """Serialise a scalar: rationals as "num/den", xi-elements as lists, complex as {re, im}."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return fraction_to_str(Fraction(x))
    if isinstance(x, XiElement):
        return x.to_json()
    if isinstance(x, (complex, float)):
        z = complex(x)
        return {"re": z.real, "im": z.imag}
    raise TypeError(f"cannot serialise {type(x).__name__}")


def scalar_from_json(obj, d: int | None = None):
    if isinstance(obj, str):
        return parse_fraction(obj)
    if isinstance(obj, list):
        return XiElement(parse_fraction(s) for s in obj)
    if isinstance(obj, dict):
        return complex(obj["re"], obj["im"])
    raise TypeError(f"unrecognised scalar encoding {obj!r}")


def to_complex(x) -> complex:
    if isinstance(x, XiElement):
        raise TypeError("evaluate XiElements at a numeric root explicitly")
    return complex(x)


def fractions_of(values: Sequence) -> tuple:
    return tuple(as_fraction(v) for v in values)

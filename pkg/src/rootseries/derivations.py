"""Commutative rings with a derivation, and identities for iterated derivatives.

Rings here need not contain 1.  Elements support ``+``, unary ``-``, ``*``
and multiplication by an integer (``n * f`` is f added to itself n times);
the derivation is any additive map satisfying the Leibniz rule, by default
``f.derivative()``.
"""

from __future__ import annotations

import abc
import math
from fractions import Fraction
from typing import Callable, Sequence

from .combinatorics import increasing_tuples, set_partitions, subsets
from .scalars import UniPoly, as_fraction, falling_factorial


class RingElement(abc.ABC):
    """Element of a commutative ring without a required unit."""

    @abc.abstractmethod
    def __add__(self, other): ...

    @abc.abstractmethod
    def __neg__(self): ...

    @abc.abstractmethod
    def __mul__(self, other): ...

    def __sub__(self, other):
        return self + (-other)

    def times(self, n: int):
        """n * self as repeated addition, for rings with no scalar action."""
        if n < 0:
            return (-self).times(-n)
        acc = self + (-self)
        base = self
        while n:
            if n & 1:
                acc = acc + base
            base = base + base
            n >>= 1
        return acc

    def zero(self):
        return self + (-self)


class Derivation:
    """An additive map satisfying the Leibniz rule on some ring."""

    def __init__(self, fn: Callable | None = None, name: str = "d/dt"):
        self._fn = fn or (lambda f: f.derivative())
        self.name = name

    def __call__(self, f):
        return self._fn(f)

    def power(self, f, n: int):
        if n < 0:
            raise ValueError("negative powers of a derivation are undefined")
        for _ in range(n):
            f = self._fn(f)
        return f

    def satisfies_leibniz(self, f, g) -> bool:
        return self(f * g) == self(f) * g + f * self(g)

    def is_additive(self, f, g) -> bool:
        return self(f + g) == self(f) + self(g)


D = Derivation()


class PolyT(UniPoly, RingElement):
    """Polynomials in t over Q with the formal derivative d/dt."""

    __slots__ = ()

    def times(self, n: int):
        return self * int(n)

    @classmethod
    def t_power(cls, n: int, c=1) -> "PolyT":
        return cls.monomial(n, c)


class TruncSeriesT(RingElement):
    """Power series in t over Q known modulo t^prec.

    Sums and products are known to the smaller precision of their operands;
    differentiation loses one order.  Equality compares the common known
    coefficients.
    """

    __slots__ = ("_coeffs", "prec")

    def __init__(self, coeffs, prec: int):
        if prec < 0:
            raise ValueError("precision must be non-negative")
        cs = [as_fraction(c) for c in list(coeffs)[:prec]]
        cs += [Fraction(0)] * (prec - len(cs))
        self._coeffs = tuple(cs)
        self.prec = prec

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @classmethod
    def from_poly(cls, p: UniPoly, prec: int) -> "TruncSeriesT":
        return cls(p.coeffs, prec)

    @classmethod
    def neg_log_one_minus_t(cls, prec: int) -> "TruncSeriesT":
        """-ln(1 - t) = sum_{k>=1} t^k / k."""
        return cls([0] + [Fraction(1, k) for k in range(1, prec)], prec)

    @classmethod
    def geometric(cls, prec: int) -> "TruncSeriesT":
        """1 / (1 - t)."""
        return cls([1] * prec, prec)

    @classmethod
    def one(cls, prec: int) -> "TruncSeriesT":
        return cls([1], prec)

    def coeff(self, i: int) -> Fraction:
        if i >= self.prec:
            raise IndexError(f"coefficient {i} not known at precision {self.prec}")
        return self._coeffs[i]

    def __add__(self, other):
        if not isinstance(other, TruncSeriesT):
            return NotImplemented
        p = min(self.prec, other.prec)
        return TruncSeriesT((a + b for a, b in zip(self._coeffs[:p], other._coeffs[:p])), p)

    def __neg__(self):
        return TruncSeriesT((-a for a in self._coeffs), self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeriesT((a * other for a in self._coeffs), self.prec)
        if not isinstance(other, TruncSeriesT):
            return NotImplemented
        p = min(self.prec, other.prec)
        out = [Fraction(0)] * p
        for i in range(p):
            a = self._coeffs[i]
            if a:
                for j in range(p - i):
                    out[i + j] += a * other._coeffs[j]
        return TruncSeriesT(out, p)

    __rmul__ = __mul__

    def times(self, n: int):
        return self * int(n)

    def __pow__(self, n: int):
        result = TruncSeriesT.one(self.prec)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self):
        if self.prec == 0:
            return self
        return TruncSeriesT((i * c for i, c in enumerate(self._coeffs) if i), self.prec - 1)

    def __eq__(self, other):
        if not isinstance(other, TruncSeriesT):
            return NotImplemented
        p = min(self.prec, other.prec)
        return self._coeffs[:p] == other._coeffs[:p]

    __hash__ = None

    def __repr__(self):
        return f"TruncSeriesT({[str(c) for c in self._coeffs]}, prec={self.prec})"


def _prod(elems):
    it = iter(elems)
    acc = next(it)
    for f in it:
        acc = acc * f
    return acc


def deriv_set_lhs(fA, fB, fs: Sequence, delta: Derivation = D):
    """Subset sum of products of iterated derivatives.

    Sums, over subsets w of [1, M], delta^{|w^c|-1}(delta(fA) prod_{w^c} f_i)
    times delta^{|w|}(fB prod_w f_i).  When w^c is empty the first factor
    is fA itself; this is the only place a "delta^{-1}" appears.
    """
    M = len(fs)
    dA = delta(fA)
    total = None
    for w in subsets(M):
        wc = [i for i in range(1, M + 1) if i not in w]
        right = delta.power(_prod([fB] + [fs[i - 1] for i in w]), len(w))
        if wc:
            left = delta.power(_prod([dA] + [fs[i - 1] for i in wc]), len(wc) - 1)
        else:
            left = fA
        term = left * right
        total = term if total is None else total + term
    return total


def deriv_set_rhs(fA, fB, fs: Sequence, delta: Derivation = D):
    """delta^M(fA fB prod f_i)."""
    return delta.power(_prod([fA, fB, *fs]), len(fs))


def big_F(j: int, fs: Sequence, u: Sequence[int], delta: Derivation = D):
    """Weighted sum over set partitions of [1, N] into N-j blocks and marked blocks tau.

    For each tau in T(N-j, k) and s in S(N, N-j) the term is

        prod_{i<=k} C(|s_tau(i)|-1, u_i) delta^{|s_tau(i)|-1-u_i}(prod_{h in s_tau(i)} f_h)
        * prod_{blocks i not in tau} delta^{|s_i|-1}(prod_{h in s_i} f_h)

    and terms with a negative derivative order are dropped.  The unmarked
    blocks range over [1, N-j] minus the image of tau.
    """
    N, k = len(fs), len(u)
    if not 0 <= j < N:
        raise ValueError(f"need 0 <= j < N, got j={j}, N={N}")
    if k > N - j:
        raise ValueError(f"need k <= N - j, got k={k}")
    if any(x < 0 for x in u):
        raise ValueError("u entries must be non-negative")
    zero = fs[0].zero() if hasattr(fs[0], "zero") else fs[0] * 0
    total = zero
    block_products = {}
    derived = {}

    def block_derivative(block, order):
        key = (block, order)
        if key not in derived:
            derived[key] = delta.power(block_products[block], order)
        return derived[key]

    for s in set_partitions(N, N - j):
        for block in s:
            if block not in block_products:
                block_products[block] = _prod([fs[h - 1] for h in block])
        for tau in increasing_tuples(N - j, k):
            weight = 1
            factors = []
            skip = False
            for i, t in enumerate(tau):
                block = s[t - 1]
                order = len(block) - 1 - u[i]
                if order < 0:
                    skip = True
                    break
                weight *= math.comb(len(block) - 1, u[i])
                factors.append(block_derivative(block, order))
            if skip:
                continue
            marked = set(tau)
            for b, block in enumerate(s, start=1):
                if b not in marked:
                    factors.append(block_derivative(block, len(block) - 1))
            total = total + _times(_prod(factors), weight)
    return total


def _times(f, n: int):
    if hasattr(f, "times"):
        return f.times(n)
    return f * n


def big_C(j: int, N: int, u: Sequence[int]) -> Fraction:
    """The rational constant relating big_F to delta^{j - sum u}(prod f_i)."""
    k = len(u)
    su = sum(u)
    if j - su < 0 or N - j - k < 0:
        raise ValueError(f"constant undefined for j={j}, N={N}, u={tuple(u)}")
    num = math.factorial(N - 1) * (N - j + su)
    den = math.factorial(N - j - k) * math.factorial(j - su)
    for x in u:
        den *= math.factorial(x)
    for i in range(1, k + 1):
        den *= k - i + 1 + sum(u[i - 1:])
    return Fraction(num, den)


def check_s_tau(j: int, u: Sequence[int], fs: Sequence, delta: Derivation = D) -> bool:
    """Whether big_F(j, fs, u) equals big_C * delta^{j - sum u}(prod fs)."""
    C = big_C(j, len(fs), u)
    lhs = big_F(j, fs, u, delta)
    rhs = delta.power(_prod(fs), j - sum(u))
    # compare den * lhs with num * rhs so only integer multiples are needed
    return _times(lhs, C.denominator) == _times(rhs, C.numerator)


def deriv_identity_as_falling(nA, nB, ns: Sequence) -> tuple:
    """Both sides of the falling-factorial identity obtained at t = 1 with f = t^n.

    Returns (sum over v of nA (nA-1+sum_{v^c})_{|v^c|-1} (nB+sum_v)_{|v|},
    (nA+nB+sum n)_l), where an empty v^c contributes 1 in place of the first
    two factors.
    """
    l = len(ns)
    lhs = Fraction(0)
    for v in subsets(l):
        vc = [i for i in range(1, l + 1) if i not in v]
        sv = sum(ns[i - 1] for i in v)
        svc = sum(ns[i - 1] for i in vc)
        if vc:
            left = nA * falling_factorial(as_fraction(nA - 1 + svc), len(vc) - 1)
        else:
            left = Fraction(1)
        lhs += left * falling_factorial(as_fraction(nB + sv), len(v))
    rhs = falling_factorial(as_fraction(nA + nB + sum(ns)), l)
    return lhs, rhs


def _U(n: int, u: Sequence, X):
    acc = Fraction(1)
    for i in range(1, n + 1):
        acc *= X - i + 1 - sum(u[: i - 1])
    return acc


def _Y(sigma, tau1, ns, u):
    acc = Fraction(1)
    marked = {t: i for i, t in enumerate(tau1)}
    for b, block in enumerate(sigma, start=1):
        deg = sum(ns[x - 1] for x in block)
        if b in marked:
            acc *= falling_factorial(u[marked[b]] + deg, len(block) - 1)
        else:
            acc *= falling_factorial(as_fraction(deg), len(block) - 1)
    return acc


def u_expression_with_u(l: int, a: int, ns: Sequence, u: Sequence, X) -> Fraction:
    """The u-dependent block-sum polynomial, evaluated at rational n, u, X.

    sum_{v=l-a}^{l} U(v-l+a, u) sum_{sigma in S(l,v)} sum_{tau1 in T(v, v-l+a)} Y(sigma, tau1, n, u)
    """
    if not 0 <= a <= l:
        raise ValueError("need 0 <= a <= l")
    if len(u) < a:
        raise ValueError(f"need at least a={a} entries of u")
    ns = [as_fraction(x) for x in ns]
    u = [as_fraction(x) for x in u]
    X = as_fraction(X)
    total = Fraction(0)
    for v in range(max(l - a, 1), l + 1):
        m = v - l + a
        weight = _U(m, u, X)
        if weight == 0:
            continue
        inner = Fraction(0)
        for sigma in set_partitions(l, v):
            for tau1 in increasing_tuples(v, m):
                inner += _Y(sigma, tau1, ns, u)
        total += weight * inner
    return total


def u_expression_without_u(l: int, a: int, ns: Sequence, X) -> Fraction:
    """Closed form the u-dependent block sum reduces to; no u appears."""
    if not 0 <= a <= l:
        raise ValueError("need 0 <= a <= l")
    X = as_fraction(X)
    S = sum(as_fraction(x) for x in ns)
    f = math.factorial
    total = Fraction(0)
    for v in range(l - a, l + 1):
        coef = Fraction(f(l - 1) * v, f(l - a) * f(l - v) * f(v - l + a))
        total += coef * falling_factorial(X, v - l + a) * falling_factorial(S, l - v)
    return total


def leibniz_holds(f, g, delta: Derivation = D) -> bool:
    return delta.satisfies_leibniz(f, g)


"""Sturmfels bracket series for a root of a0 + a1 x + ... + an x^n.

Fix 0 <= i1 < i2 <= n and d = i2 - i1.  The root series X_{i1,i2,xi} is
a sum of d + 1 bracket series; each is a sum over the lattice
L = ker(A) ∩ Z^{n+1}, where A has rows (0, 1, ..., n) and (1, ..., 1).
Only the coefficient of one monomial in the free variables
a_i (i != i1, i2) is ever needed, so no bracket is enumerated: the
lattice vector that produces the monomial is solved for directly.

Fractional powers of a_{i1} and a_{i2} stay formal, and xi is a
generator of Q[xi]/(xi^d + 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .combinatorics import multi_indices
from .roots import closed_form_parts
from .scalars import XiElement, falling_factorial, fraction_to_str

NON_INTEGRAL = "non-integral"


@dataclass(frozen=True)
class GkzConfig:
    n: int
    i1: int
    i2: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("polynomial degree n must be >= 2")
        if not 0 <= self.i1 < self.i2 <= self.n:
            raise ValueError(f"need 0 <= i1 < i2 <= n, got i1={self.i1}, i2={self.i2}, n={self.n}")

    @property
    def d(self) -> int:
        return self.i2 - self.i1

    @property
    def xi(self) -> XiElement:
        return XiElement.xi(self.d)

    @property
    def free(self) -> tuple:
        """Indices i in [0, n] other than i1, i2, in increasing order."""
        return tuple(i for i in range(self.n + 1) if i not in (self.i1, self.i2))

    def gammas(self) -> tuple:
        """Exponents i - i1 of the free variables in the dehomogenised polynomial."""
        return tuple(Fraction(i - self.i1) for i in self.free)

    def to_json(self) -> dict:
        return {"n": self.n, "i1": self.i1, "i2": self.i2, "d": self.d}


def in_kernel(v: Sequence, n: int) -> bool:
    return sum(i * x for i, x in enumerate(v)) == 0 and sum(v) == 0 and len(v) == n + 1


def lattice_complete(free: Mapping[int, int], cfg: GkzConfig):
    """Extend free entries v_i (i != i1, i2) to a vector of ker(A).

    Returns the integer vector, or ``NON_INTEGRAL`` when v_{i1} or v_{i2}
    is not an integer.
    """
    d = cfg.d
    v2 = Fraction(-sum((i - cfg.i1) * free.get(i, 0) for i in cfg.free), d)
    v1 = Fraction(-sum((cfg.i2 - i) * free.get(i, 0) for i in cfg.free), d)
    if v1.denominator != 1 or v2.denominator != 1:
        return NON_INTEGRAL
    v = [0] * (cfg.n + 1)
    for i in cfg.free:
        v[i] = int(free.get(i, 0))
    v[cfg.i1] = int(v1)
    v[cfg.i2] = int(v2)
    return tuple(v)


def gamma_uv(u, v: int) -> Fraction:
    u = Fraction(u)
    if v == 0:
        return Fraction(1)
    if v < 0:
        return falling_factorial(u, -v)
    if u.denominator == 1 and 0 > u >= -v:
        return Fraction(0)
    return 1 / math.prod(u + i for i in range(1, v + 1))


@dataclass(frozen=True)
class XCoefficient:
    """``coeff * a_{i1}^p * a_{i2}^q`` times the free monomial prod a_i^{n_i}."""

    n_free: tuple
    coeff: XiElement
    p: Fraction
    q: Fraction

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, XCoefficient):
            return NotImplemented
        if self.n_free != other.n_free or self.coeff != other.coeff:
            return False
        return self.is_zero() or (self.p == other.p and self.q == other.q)

    def __hash__(self):
        return hash((self.n_free, self.coeff))

    def evaluate(self, a_i1: complex, a_i2: complex, xi_root: complex) -> complex:
        """Numeric value with principal-branch fractional powers."""
        return (self.coeff.evaluate(xi_root)
                * cmath.exp(float(self.p) * cmath.log(a_i1))
                * cmath.exp(float(self.q) * cmath.log(a_i2)))

    def to_json(self) -> dict:
        return {
            "n_free": list(self.n_free),
            "coeff": self.coeff.to_json(),
            "p": fraction_to_str(self.p),
            "q": fraction_to_str(self.q),
        }


@dataclass(frozen=True)
class BracketTerm:
    """One bracket series of X: its index j, exponent vector u and prefactor."""

    j: int
    u: tuple
    prefactor: XiElement


def brackets(cfg: GkzConfig) -> list:
    """The bracket series making up X_{i1,i2,xi}, skipping the j = 0 one when i1 = 0."""
    d, i1, i2 = cfg.d, cfg.i1, cfg.i2
    out = []
    u = [Fraction(0)] * (cfg.n + 1)
    u[i1], u[i2] = Fraction(1, d), Fraction(-1, d)
    out.append(BracketTerm(1, tuple(u), cfg.xi))
    for j in range(2, d + 1):
        u = [Fraction(0)] * (cfg.n + 1)
        u[i1] = Fraction(j - d, d)
        u[i1 + j - 1] = Fraction(1)
        u[i2] = Fraction(-j, d)
        out.append(BracketTerm(j, tuple(u), XiElement.xi_power(j, d) / d))
    if i1 >= 1:
        u = [Fraction(0)] * (cfg.n + 1)
        u[i1 - 1] = Fraction(1)
        u[i1] = Fraction(-1)
        out.append(BracketTerm(0, tuple(u), XiElement.one(d) / d))
    return out


def _check_free(n_free: Sequence[int], cfg: GkzConfig) -> tuple:
    n_free = tuple(int(x) for x in n_free)
    if len(n_free) != len(cfg.free):
        raise ValueError(f"expected {len(cfg.free)} free exponents, got {len(n_free)}")
    if any(x < 0 for x in n_free):
        raise ValueError("free exponents must be non-negative")
    return n_free


def _C(n_free: tuple, cfg: GkzConfig) -> int:
    return sum((i - cfg.i1) * ni for i, ni in zip(cfg.free, n_free))


def bracket_contribution(term: BracketTerm, n_free: tuple, cfg: GkzConfig):
    """Coefficient of the free monomial inside one bracket series, or None if it cannot occur."""
    free_v = {i: ni - term.u[i] for i, ni in zip(cfg.free, n_free)}
    if any(x.denominator != 1 for x in free_v.values()):
        return None
    v = lattice_complete({i: int(x) for i, x in free_v.items()}, cfg)
    if v == NON_INTEGRAL:
        return None
    assert in_kernel(v, cfg.n)
    c = math.prod((gamma_uv(ui, vi) for ui, vi in zip(term.u, v)), start=Fraction(1))
    p = term.u[cfg.i1] + v[cfg.i1]
    q = term.u[cfg.i2] + v[cfg.i2]
    for i, ni in zip(cfg.free, n_free):
        assert term.u[i] + v[i] == ni
    return XCoefficient(n_free, term.prefactor * c, p, q)


def expected_bracket_count(n_free: Sequence[int], cfg: GkzConfig) -> int:
    """1, or 2 when C = -1 mod d and the j = 0 bracket exists."""
    C = _C(tuple(n_free), cfg)
    return 2 if (C + 1) % cfg.d == 0 and cfg.i1 >= 1 else 1


def x_series_coeff(n_free: Sequence[int], cfg: GkzConfig) -> XCoefficient:
    """Coefficient of prod a_i^{n_i} in X_{i1,i2,xi}, summed over the brackets that can hold it."""
    n_free = _check_free(n_free, cfg)
    parts = [c for t in brackets(cfg) if (c := bracket_contribution(t, n_free, cfg)) is not None]
    expected = expected_bracket_count(n_free, cfg)
    if len(parts) != expected:
        raise AssertionError(f"{len(parts)} brackets hold {n_free}, expected {expected}")
    live = [c for c in parts if not c.is_zero()]
    if len(live) > 1:
        raise AssertionError(f"brackets overlap at {n_free}: both contributions are non-zero")
    if len({(c.p, c.q) for c in parts}) != 1:
        raise AssertionError(f"candidate brackets disagree on the a_i1, a_i2 exponents at {n_free}")
    return live[0] if live else parts[0]


def recovery_formula_coeff(n_free: Sequence[int], cfg: GkzConfig) -> XCoefficient:
    """Closed coefficient of prod a_i^{n_i} in X_{i1,i2,xi}.

    With C = sum (i - i1) n_i = k - 1 + M d and 0 <= k < d the coefficient is
    (xi^k / d) (-1)^M (a_{i1}/a_{i2})^{(C+1)/d} ((C+1)/d - 1)_{|n|-1} / (a_{i1}^{|n|} prod n_i!).
    """
    n_free = _check_free(n_free, cfg)
    S = sum(n_free)
    if S == 0:
        raise ValueError("the closed coefficient needs a non-zero multi-index")
    d = cfg.d
    C = _C(n_free, cfg)
    k = (C + 1) % d
    M = (C + 1 - k) // d
    r = Fraction(C + 1, d)
    scalar = (-1 if M % 2 else 1) * falling_factorial(r - 1, S - 1) / math.prod(math.factorial(x) for x in n_free) / d
    return XCoefficient(n_free, XiElement.xi_power(k, d) * scalar, r - S, -r)


def main_formula_coeff(n_free: Sequence[int], cfg: GkzConfig) -> XCoefficient:
    """Root-series Taylor coefficient with beta = d, gamma_i = i - i1, rewritten in the a's.

    b = a_{i2}/a_{i1} only enters as b^{-|n|}, the perturbations are c_i / a_{i1},
    and alpha = xi a_{i1}^{1/d} a_{i2}^{-1/d}.
    """
    n_free = _check_free(n_free, cfg)
    S = sum(n_free)
    d = cfg.d
    scalar, E, b_power = closed_form_parts(n_free, Fraction(d), cfg.gammas())
    assert E.denominator == 1 and b_power == -S
    E = int(E)
    scalar /= math.prod(math.factorial(x) for x in n_free)
    # alpha^E -> xi^E a1^{E/d} a2^{-E/d}; b^{-S} -> a1^S a2^{-S}; the rescaling cancels a1^S
    p = Fraction(E, d)
    q = -Fraction(E, d) - S
    return XCoefficient(n_free, XiElement.xi_power(E, d) * scalar, p, q)


def recovery_vs_main(n_free: Sequence[int], cfg: GkzConfig) -> bool:
    return recovery_formula_coeff(n_free, cfg) == main_formula_coeff(n_free, cfg)


def x_series_truncation(cfg: GkzConfig, D: int) -> list:
    """Every coefficient of X with total free degree <= D; degree 0 included."""
    return [x_series_coeff(nf, cfg) for order in range(D + 1) for nf in multi_indices(len(cfg.free), order)]


def x_series_value(cfg: GkzConfig, D: int, a: Sequence[complex], xi_root: complex) -> complex:
    """Numeric value of the degree-D truncation of X at coefficients a = (a_0, ..., a_n)."""
    a = [complex(x) for x in a]
    total = 0j
    for c in x_series_truncation(cfg, D):
        mono = math.prod(a[i] ** ni for i, ni in zip(cfg.free, c.n_free))
        total += c.evaluate(a[cfg.i1], a[cfg.i2], xi_root) * mono
    return total


def all_configs(n_max: int) -> list:
    return [GkzConfig(n, i1, i2) for n in range(2, n_max + 1)
            for i1 in range(n + 1) for i2 in range(i1 + 1, n + 1)]

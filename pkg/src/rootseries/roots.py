"""Taylor coefficients of a zero of g(z) + sum_i a_i z^{gamma_i}, with g(z) = 1 + b z^beta.

Every coefficient is a single monomial ``c * alpha^e`` in the unperturbed
zero alpha.  In exact mode alpha is a formal symbol: neither the closed
form nor the recursion oracle uses g(alpha) = 0, so the two can be
compared with ``==``.  Numeric mode substitutes a concrete branch of alpha
on the logarithmic Riemann surface.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .combinatorics import (
    MultiIndex,
    OrderedMultiset,
    multi_indices,
    remove_index,
    set_partitions,
)
from .scalars import as_fraction, falling_factorial, scalar_to_json

NOISE_FLOOR = 1e-13
SLOPE_TOL = 0.2


class BranchError(ArithmeticError):
    """The zero of the base function could not be located or refined."""


def _scalar(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction, str)):
        return as_fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite scalar")
        return complex(x)
    if isinstance(x, complex):
        if not (math.isfinite(x.real) and math.isfinite(x.imag)):
            raise ValueError("non-finite scalar")
        return x
    raise TypeError(f"unsupported scalar {x!r}")


@dataclass(frozen=True)
class ProblemSpec:
    """Base function 1 + b z^beta perturbed by sum_i a_i z^{gamma_i}."""

    b: object
    beta: object
    gammas: tuple
    branch_m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "b", _scalar(self.b))
        object.__setattr__(self, "beta", _scalar(self.beta))
        object.__setattr__(self, "gammas", tuple(_scalar(g) for g in self.gammas))
        object.__setattr__(self, "branch_m", int(self.branch_m))
        if self.b == 0:
            raise ValueError("b must be non-zero")
        if self.beta == 0:
            raise ValueError("beta must be non-zero")
        if not self.gammas:
            raise ValueError("need at least one perturbation exponent (d >= 1)")

    @property
    def d(self) -> int:
        return len(self.gammas)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in (self.b, self.beta, *self.gammas))

    def to_json(self) -> dict:
        return {
            "b": scalar_to_json(self.b),
            "beta": scalar_to_json(self.beta),
            "gammas": [scalar_to_json(g) for g in self.gammas],
            "branch_m": self.branch_m,
        }


@dataclass(frozen=True)
class AlphaMonomial:
    """``coeff * alpha ** alpha_exp`` with alpha a formal symbol."""

    coeff: object
    alpha_exp: object

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other):
        if isinstance(other, AlphaMonomial):
            return AlphaMonomial(self.coeff * other.coeff, self.alpha_exp + other.alpha_exp)
        return AlphaMonomial(self.coeff * other, self.alpha_exp)

    __rmul__ = __mul__

    def __neg__(self):
        return AlphaMonomial(-self.coeff, self.alpha_exp)

    def __truediv__(self, other):
        if isinstance(other, AlphaMonomial):
            return AlphaMonomial(self.coeff / other.coeff, self.alpha_exp - other.alpha_exp)
        return AlphaMonomial(self.coeff / other, self.alpha_exp)

    def __add__(self, other):
        if not isinstance(other, AlphaMonomial):
            return NotImplemented
        if self.alpha_exp != other.alpha_exp:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ArithmeticError(
                f"cannot add alpha^{self.alpha_exp} and alpha^{other.alpha_exp} into one monomial"
            )
        return AlphaMonomial(self.coeff + other.coeff, self.alpha_exp)

    def evaluate(self, branch: "AlphaBranch") -> complex:
        return complex(self.coeff) * branch.power(self.alpha_exp)

    def to_json(self) -> dict:
        return {"coeff": scalar_to_json(self.coeff), "alpha_exp": scalar_to_json(self.alpha_exp)}


def alpha_power(e) -> AlphaMonomial:
    return AlphaMonomial(Fraction(1), e)


def _one_like(x):
    return Fraction(1) if isinstance(x, Fraction) else 1


def closed_form_parts(n: Sequence[int], beta, gammas: Sequence) -> tuple:
    """Split the closed-form coefficient into (scalar, alpha exponent, power of b).

    The raw partial derivative of the zero at a = 0 equals
    ``scalar * b**b_power * alpha**alpha_exp``; b enters only through
    g'(alpha)^{-|n|} = (b beta)^{-|n|} alpha^{-|n|(beta-1)}.
    """
    n = MultiIndex(n)
    if len(n) != len(gammas):
        raise ValueError(f"multi-index has d={len(n)}, spec has d={len(gammas)}")
    S = n.order
    if S < 1:
        raise ValueError("the closed form needs a multi-index of order >= 1; the order-0 term is alpha")
    G = sum((ni * g for ni, g in zip(n, gammas)), 0 * beta)
    prod = _one_like(beta)
    for i in range(1, S):
        prod *= -1 + i * beta - G
    scalar = -prod / beta ** S
    alpha_exp = 1 + sum((ni * (g - 1) for ni, g in zip(n, gammas)), 0 * beta) - S * (beta - 1)
    return scalar, alpha_exp, -S


def coeff_closed(n: Sequence[int], spec: ProblemSpec) -> AlphaMonomial:
    """Raw partial derivative of the zero with respect to a, multi-index n, at a = 0."""
    scalar, alpha_exp, b_power = closed_form_parts(n, spec.beta, spec.gammas)
    return AlphaMonomial(scalar * spec.b ** b_power, alpha_exp)


def expected_alpha_exp(n: Sequence[int], spec: ProblemSpec):
    S = sum(n)
    return 1 + sum(ni * (g - 1) for ni, g in zip(n, spec.gammas)) - S * (spec.beta - 1)


def product_form(n: Sequence[int], beta, gammas: Sequence):
    """prod_{i=1}^{|n|-1} (-1 + i beta - sum_j n_j gamma_j)."""
    G = sum(ni * g for ni, g in zip(n, gammas))
    out = _one_like(beta)
    for i in range(1, sum(n)):
        out *= -1 + i * beta - G
    return out


def multiset_form(n: Sequence[int], beta, gammas: Sequence):
    """(-beta)^{|n|-1} (1/beta - 1 + (1/beta) sum_j n_j gamma_j)_{|n|-1}."""
    if beta == 0:
        raise ZeroDivisionError("beta must be non-zero")
    G = sum(ni * g for ni, g in zip(n, gammas))
    S = sum(n)
    inv = 1 / beta
    return (-beta) ** (S - 1) * falling_factorial(inv - 1 + inv * G, S - 1)


def formula_forms_agree(n: Sequence[int], spec: ProblemSpec) -> bool:
    """Whether the product and falling-factorial forms of the coefficient agree exactly."""
    if sum(n) < 1:
        raise ValueError("need a multi-index of order >= 1")
    return product_form(n, spec.beta, spec.gammas) == multiset_form(n, spec.beta, spec.gammas)


def coeff_closed_multiset(I: Sequence[int], spec: ProblemSpec) -> AlphaMonomial:
    """The closed form written over an ordered multiset I of [1, d]."""
    I = OrderedMultiset(I)
    gam = [spec.gammas[i - 1] for i in I]
    N = len(I)
    beta, b = spec.beta, spec.b
    inv = 1 / beta
    scalar = -(-beta) ** (N - 1) * falling_factorial(inv - 1 + inv * sum(gam), N - 1) / (b * beta) ** N
    exp = 1 + sum(g - 1 for g in gam) - N * (beta - 1)
    return AlphaMonomial(scalar, exp)


class RecursionOracle:
    """Partial derivatives of the zero from the chain-rule recursion.

    Differentiating f(phi(a)) = 0 along an ordered multiset I and isolating
    the g'(alpha) d(phi, I) term gives

        g'(alpha) d(phi, I) = - sum_h sum_{k=1}^{|I|-1} (gamma_{I(h)})_k alpha^{gamma_{I(h)}-k}
                                  sum_{J in Parts(I minus h, k)} prod_i d(phi, J_i)
                              - sum_{k=2}^{|I|} b (beta)_k alpha^{beta-k}
                                  sum_{J in Parts(I, k)} prod_i d(phi, J_i)

    with g'(alpha) = b beta alpha^{beta-1}.  Values are memoised by
    multi-index, which is sound because mixed partials commute.
    """

    def __init__(self, spec: ProblemSpec):
        if not spec.exact:
            raise TypeError("the recursion oracle runs in exact rational arithmetic only")
        self.spec = spec
        self.memo: dict = {}
        self._part_sums: dict = {}

    def partial(self, I: Sequence[int]) -> AlphaMonomial:
        I = OrderedMultiset(I)
        mi = I.multi_index(self.spec.d)
        if mi in self.memo:
            return self.memo[mi]
        value = self._solve(I)
        self.memo[mi] = value
        return value

    def _partition_sum(self, I: OrderedMultiset, k: int) -> dict:
        # sum over multiset partitions of I into k parts of prod d(phi, J_i), as {alpha_exp: coeff}
        key = (I.multi_index(self.spec.d), k)
        if key in self._part_sums:
            return self._part_sums[key]
        acc: dict = defaultdict(Fraction)
        for s in set_partitions(len(I), k):
            term = None
            for block in s:
                val = self.partial(OrderedMultiset(I[p - 1] for p in block))
                term = val if term is None else term * val
            acc[term.alpha_exp] += term.coeff
        result = dict(acc)
        self._part_sums[key] = result
        return result

    def _solve(self, I: OrderedMultiset) -> AlphaMonomial:
        spec = self.spec
        b, beta, gammas = spec.b, spec.beta, spec.gammas
        gprime = AlphaMonomial(b * beta, beta - 1)
        if len(I) == 1:
            return -alpha_power(gammas[I[0] - 1]) / gprime
        acc: dict = defaultdict(Fraction)
        N = len(I)
        for h in range(1, N + 1):
            gam = gammas[I[h - 1] - 1]
            rest = remove_index(I, h)
            for k in range(1, N):
                ff = falling_factorial(gam, k)
                for exp, c in self._partition_sum(rest, k).items():
                    acc[exp + gam - k] += ff * c
        for k in range(2, N + 1):
            gk = b * falling_factorial(beta, k)
            for exp, c in self._partition_sum(I, k).items():
                acc[exp + beta - k] += gk * c
        total = _collapse(acc)
        return -total / gprime


def _collapse(acc: dict) -> AlphaMonomial:
    if len(acc) == 1:
        (exp, c), = acc.items()
        return AlphaMonomial(c, exp)
    live = {e: c for e, c in acc.items() if c != 0}
    if len(live) > 1:
        raise ArithmeticError(f"recursion produced several alpha powers: {sorted(live)}")
    if live:
        (exp, c), = live.items()
        return AlphaMonomial(c, exp)
    raise ArithmeticError(f"terms with exponents {sorted(acc)} cancelled without a common power")


def coeff_recursive(I: Sequence[int], spec: ProblemSpec, memo: RecursionOracle | None = None) -> AlphaMonomial:
    """Raw partial derivative along the ordered multiset I, by the recursion oracle."""
    oracle = memo if memo is not None else RecursionOracle(spec)
    if oracle.spec != spec:
        raise ValueError("memo belongs to a different problem")
    return oracle.partial(I)


@dataclass(frozen=True)
class AlphaBranch:
    """A zero of 1 + b z^beta as a point (r, theta, n) of the log surface."""

    r: float
    theta: float
    n: int
    log: complex = field(repr=False)

    @property
    def value(self) -> complex:
        return cmath.exp(self.log)

    def power(self, e) -> complex:
        """z^e = exp(e (ln r + i theta + 2 pi i n))."""
        return cmath.exp(complex(e) * self.log)

    def to_json(self) -> dict:
        z = self.value
        return {"r": self.r, "theta": self.theta, "n": self.n, "value": {"re": z.real, "im": z.imag}}


def _split_log(w: complex) -> tuple:
    # theta in (-pi, pi], Im w = theta + 2 pi n
    n = math.ceil((w.imag - math.pi) / (2 * math.pi))
    theta = w.imag - 2 * math.pi * n
    if theta <= -math.pi:
        n -= 1
        theta += 2 * math.pi
    return theta, n


def alpha_branch(spec: ProblemSpec, tol: float = 1e-14, max_iter: int = 50) -> AlphaBranch:
    """The zero of the base function selected by ``spec.branch_m``, polished by Newton's method."""
    b = complex(spec.b)
    beta = complex(spec.beta)
    r0, theta0 = abs(b), cmath.phase(b)
    if theta0 == -math.pi:
        theta0 = math.pi
    b1, b2 = beta.real, beta.imag
    nb2 = b1 * b1 + b2 * b2
    arg = (2 * spec.branch_m + 1) * math.pi - theta0
    ln_r = (b2 * arg - b1 * math.log(r0)) / nb2
    theta_raw = (b1 * arg + b2 * math.log(r0)) / nb2
    w = complex(ln_r, theta_raw)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise BranchError(f"non-finite zero location for b={b}, beta={beta}")

    for _ in range(max_iter):
        e = cmath.exp(beta * w)
        step = (1 + b * e) / (b * beta * e)
        w -= step
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise BranchError("Newton refinement diverged")
        if abs(step) <= 1e-17 * max(1.0, abs(w)):
            break
    residual = abs(1 + b * cmath.exp(beta * w))
    if residual > tol:
        raise BranchError(f"zero not converged: |g(alpha)| = {residual:.3e}")
    theta, n = _split_log(w)
    return AlphaBranch(r=math.exp(w.real), theta=theta, n=n, log=w)


class SeriesTable:
    """Coefficients of the zero for all multi-indices of order <= K."""

    def __init__(self, spec: ProblemSpec, K: int, entries: dict, normalized: bool):
        self.spec = spec
        self.K = K
        self.entries = entries
        self.normalized = normalized

    def __getitem__(self, n) -> AlphaMonomial:
        return self.entries[MultiIndex(n)]

    def __iter__(self):
        return iter(self.entries.items())

    def __len__(self):
        return len(self.entries)

    def taylor_coefficient(self, n) -> AlphaMonomial:
        c = self[n]
        if self.normalized:
            return c
        return c / math.prod(math.factorial(x) for x in n)

    def evaluate(self, a_point: Sequence[complex], branch: AlphaBranch) -> complex:
        """Truncated Taylor polynomial of the zero at the perturbation ``a_point``."""
        a = [complex(x) for x in a_point]
        if len(a) != self.spec.d:
            raise ValueError(f"expected {self.spec.d} perturbation values, got {len(a)}")
        total = 0j
        for n, _ in self:
            mono = math.prod(ai ** ni for ai, ni in zip(a, n))
            if mono == 0 and sum(n):
                continue
            total += self.taylor_coefficient(n).evaluate(branch) * mono
        return total

    def to_json(self) -> list:
        return [
            {"multi_index": list(n), **c.to_json()}
            for n, c in self
        ]


def taylor_table(spec: ProblemSpec, K: int, normalized: bool = False, n_jobs: int = 1) -> SeriesTable:
    """Populate every multi-index of order <= K from the closed form; order 0 is alpha."""
    if K < 0:
        raise ValueError("K must be non-negative")
    d = spec.d
    indices = [n for order in range(1, K + 1) for n in multi_indices(d, order)]

    def one(n):
        c = coeff_closed(n, spec)
        if normalized:
            c = c / math.prod(math.factorial(x) for x in n)
        return c

    if n_jobs > 1 and indices:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            values = list(pool.map(one, indices))
    else:
        values = [one(n) for n in indices]
    one_ = Fraction(1) if spec.exact else 1.0 + 0j
    entries = {MultiIndex((0,) * d): AlphaMonomial(one_, one_)}
    entries.update(zip(indices, values))
    return SeriesTable(spec, K, entries, normalized)


def f_value(spec: ProblemSpec, z: complex, a_point: Sequence[complex], branch: AlphaBranch) -> complex:
    """f(z) = 1 + b z^beta + sum a_i z^{gamma_i}, with z lifted to the sheet of ``branch``."""
    w = branch.log + cmath.log(z / branch.value)
    out = 1 + complex(spec.b) * cmath.exp(complex(spec.beta) * w)
    for ai, g in zip(a_point, spec.gammas):
        out += complex(ai) * cmath.exp(complex(g) * w)
    return out


def track_root(spec: ProblemSpec, a_point: Sequence[complex], branch: AlphaBranch | None = None,
               tol: float = 1e-15, max_iter: int = 100) -> complex:
    """Zero of the perturbed function near alpha, by Newton's method in log coordinates."""
    branch = branch or alpha_branch(spec)
    b, beta = complex(spec.b), complex(spec.beta)
    gam = [complex(g) for g in spec.gammas]
    a = [complex(x) for x in a_point]
    w = branch.log
    for _ in range(max_iter):
        val = 1 + b * cmath.exp(beta * w) + sum(ai * cmath.exp(g * w) for ai, g in zip(a, gam))
        der = b * beta * cmath.exp(beta * w) + sum(ai * g * cmath.exp(g * w) for ai, g in zip(a, gam))
        step = val / der
        w -= step
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise BranchError("root tracking diverged")
        if abs(step) <= tol * max(1.0, abs(w)):
            break
    return cmath.exp(w)


@dataclass
class ResidualReport:
    K: int
    scales: list
    residuals: list
    slope: float | None
    fitted: int
    passed: bool
    noise_floor: float = NOISE_FLOOR

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "scales": self.scales,
            "residuals": self.residuals,
            "slope": self.slope,
            "points_above_noise": self.fitted,
            "required_slope": self.K + 1 - SLOPE_TOL,
            "pass": self.passed,
        }


def residual_check(spec: ProblemSpec, K: int, a_point: Sequence[complex],
                   scales: Sequence[float] = (1.0, 0.5, 0.25, 0.125),
                   noise_floor: float = NOISE_FLOOR, slope_tol: float = SLOPE_TOL,
                   branch: AlphaBranch | None = None) -> ResidualReport:
    """Residual |f(phi_K(s a))| at each scale s and its log-log slope against s.

    A truncation of order K leaves a residual of order s^{K+1}.  Only
    residuals above ``noise_floor`` enter the fit; with fewer than two
    such points the slope is undefined and the check passes vacuously.
    """
    branch = branch or alpha_branch(spec)
    table = taylor_table(spec, K, normalized=True)
    residuals = []
    for s in scales:
        pt = [s * complex(x) for x in a_point]
        z = table.evaluate(pt, branch)
        residuals.append(abs(f_value(spec, z, pt, branch)))
    keep = [(s, r) for s, r in zip(scales, residuals) if r > noise_floor]
    slope = None
    passed = True
    if len(keep) >= 2:
        xs = np.log([s for s, _ in keep])
        ys = np.log([r for _, r in keep])
        slope = float(np.polyfit(xs, ys, 1)[0])
        passed = slope >= K + 1 - slope_tol
    return ResidualReport(K, list(scales), residuals, slope, len(keep), passed, noise_floor)

"""Executable Stirling-number, set-partition and falling-factorial identities.

Every identity is checked by evaluating both sides independently in exact
rational arithmetic.  Polynomial identities are certified at random
rational points; both sides have bounded degree, so agreement at more
points than the degree bound is a proof for that instance.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Sequence

from .combinatorics import (
    newton_reconstruct,
    set_partitions,
    stirling1,
    stirling2,
    stirling_shifted,
    stirling_shifted_at,
    subsets,
)
from .derivations import (
    PolyT,
    TruncSeriesT,
    big_F,
    check_s_tau,
    deriv_identity_as_falling,
    deriv_set_lhs,
    deriv_set_rhs,
)
from .report import Check, random_rational, random_rationals
from .scalars import UniPoly, as_fraction, binomial, falling_factorial


def _block_product_sum(N: int, k: int, weight) -> Fraction:
    """Sum over set partitions of [1, N] into k blocks of prod weight(block), caching per block."""
    cache = {}
    total = Fraction(0)
    for s in set_partitions(N, k):
        term = Fraction(1)
        for block in s:
            if block not in cache:
                cache[block] = weight(block)
            term *= cache[block]
        total += term
    return total


def nu_sides(k: int, nu, xs: Sequence) -> tuple:
    """Both sides of the alternating-sum / block-product identity in nu and x_1..x_N."""
    N = len(xs)
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    nu = as_fraction(nu)
    xs = [as_fraction(x) for x in xs]
    S = sum(xs)
    lhs = Fraction(0)
    for r in range(k):
        lhs += (-1) ** (k - 1 - r) * math.comb(k - 1, r) * falling_factorial((r + 1) * nu - 1 + S, N - 1)
    lhs /= math.factorial(k - 1)
    rhs = _block_product_sum(N, k, lambda block: falling_factorial(nu - 1 + sum(xs[m - 1] for m in block), len(block) - 1))
    rhs *= nu ** (k - 1)
    return lhs, rhs


def identity_check_nu(N: int, k: int, nu, xs: Sequence) -> bool:
    if len(xs) != N:
        raise ValueError(f"expected {N} values, got {len(xs)}")
    lhs, rhs = nu_sides(k, nu, xs)
    return lhs == rhs


def nu_one_sides(j: int, xs: Sequence) -> tuple:
    """C(N-1, j) (sum x)_j against the sum over S(N, N-j) of block falling factorials.

    This is the nu = 1 case of :func:`nu_sides` with k = N - j.  The falling
    factorial on the left has length j; with length N - 1 the two sides
    already differ at N = 2, j = 0 (see :func:`nu_one_sides_long`).
    """
    N = len(xs)
    if not 0 <= j <= N - 1:
        raise ValueError(f"need 0 <= j <= N-1, got j={j}, N={N}")
    xs = [as_fraction(x) for x in xs]
    lhs = math.comb(N - 1, j) * falling_factorial(sum(xs), j)
    rhs = _block_product_sum(N, N - j, lambda block: falling_factorial(sum(xs[m - 1] for m in block), len(block) - 1))
    return lhs, rhs


def nu_one_sides_long(j: int, xs: Sequence) -> tuple:
    """Variant with (sum x)_{N-1} on the left; agrees with :func:`nu_one_sides` only when j = N - 1."""
    N = len(xs)
    lhs, rhs = nu_one_sides(j, xs)
    xs = [as_fraction(x) for x in xs]
    return math.comb(N - 1, j) * falling_factorial(sum(xs), N - 1), rhs


def identity_check_nu_one(j: int, xs: Sequence) -> bool:
    lhs, rhs = nu_one_sides(j, xs)
    return lhs == rhs


def nu_one_via_derivations(j: int, ns: Sequence[int]) -> Fraction:
    """Right side of the nu = 1 identity from the derivation ring: F(j, t^n, ()) at t = 1."""
    fs = [PolyT.t_power(n) for n in ns]
    return big_F(j, fs, ())(Fraction(1))


def stirling_set_sides(M: int, a: int, b: int, xs: Sequence) -> tuple:
    """Both sides of the subset-sum identity for shifted Stirling numbers."""
    if M < 0 or a < 1 or b < 0:
        raise ValueError("need M >= 0, a >= 1, b >= 0")
    if len(xs) != M:
        raise ValueError(f"expected {M} values, got {len(xs)}")
    xs = [as_fraction(x) for x in xs]
    lhs = Fraction(0)
    for w in subsets(M):
        wc = [i for i in range(1, M + 1) if i not in w]
        lhs += stirling_shifted_at(len(wc) - 1, a - 1, sum(xs[i - 1] for i in wc)) * stirling_shifted_at(
            len(w), b, sum(xs[i - 1] for i in w)
        )
    rhs = math.comb(a + b, a) * stirling_shifted_at(M, a + b, sum(xs))
    return lhs, rhs


def identity_check_stirling_set(M: int, a: int, b: int, xs: Sequence) -> bool:
    lhs, rhs = stirling_set_sides(M, a, b, xs)
    return lhs == rhs


def stirling_2_a_n_sides(a: int, n: int) -> tuple:
    lhs = Fraction(
        sum((-1) ** (a - r) * math.comb(a, r) * (r + 1) ** n for r in range(a + 1)),
        math.factorial(a),
    )
    return lhs, Fraction(stirling2(n + 1, a + 1))


def stirling_xy_sides(N: int, r: int, y) -> tuple:
    """[N r]_{X+y} and sum_i X^i C(r+i, i) [N r+i]_y, both as polynomials in X."""
    y = as_fraction(y)
    lhs = stirling_shifted(N, r).shift(y)
    rhs = UniPoly(
        math.comb(r + i, i) * stirling_shifted_at(N, r + i, y) for i in range(N - r + 1)
    )
    return lhs, rhs


def stirling_gf_sides(n: int, order: int) -> tuple:
    """Coefficient lists of (-ln(1-t))^n / n! and sum_k [k n] t^k / k! below t^order."""
    L = TruncSeriesT.neg_log_one_minus_t(order)
    lhs = (L ** n) * Fraction(1, math.factorial(n))
    rhs = [Fraction(stirling1(k, n), math.factorial(k)) for k in range(order)]
    return list(lhs.coeffs), rhs


def stirling_2_sum_sides(k: int, r: int) -> tuple:
    """sum_{i=r}^{k} {i r} C(k, i) against {k+1 r+1}, read literally."""
    lhs = sum(stirling2(i, r) * math.comb(k, i) for i in range(r, k + 1))
    return lhs, stirling2(k + 1, r + 1)


def fall_identity_sides(a, b, n: int) -> tuple:
    a, b = as_fraction(a), as_fraction(b)
    lhs = falling_factorial(a + b, n)
    rhs = sum(
        (math.comb(n, i) * falling_factorial(a, i) * falling_factorial(b, n - i) for i in range(n + 1)),
        Fraction(0),
    )
    return lhs, rhs


def binomial_vandermonde_sides(a, b, n: int) -> tuple:
    a, b = as_fraction(a), as_fraction(b)
    return binomial(a + b, n), sum((binomial(a, i) * binomial(b, n - i) for i in range(n + 1)), Fraction(0))


def newton_coeff_sides(i: int, n: int, b) -> tuple:
    b = as_fraction(b)
    lhs = sum(
        ((-1) ** (i - r) * math.comb(i, r) * binomial(b + r, n) for r in range(i + 1)),
        Fraction(0),
    )
    return lhs, binomial(b, n - i)


def _run(name, cases, sides, describe=None) -> Check:
    """Evaluate ``sides(*case)`` for every case; record the first counterexample."""
    count = 0
    for case in cases:
        count += 1
        lhs, rhs = sides(*case)
        if lhs != rhs:
            return Check(name, False, inputs=list(case), expected=rhs, actual=lhs)
    return Check(name, True, inputs=describe or {"instances": count}, expected="lhs == rhs", actual="lhs == rhs")


def identity_suite_stirling(seed: int = 0, points: int = 100) -> list:
    """Exact checks of the Stirling-number lemmas; one record per identity."""
    rng = random.Random(seed)
    checks = []

    checks.append(_run(
        "stirling_2_a_n",
        [(a, n) for a in range(13) for n in range(13)],
        stirling_2_a_n_sides,
        {"a": [0, 12], "n": [0, 12]},
    ))

    xy_cases = []
    for N in range(11):
        ys = random_rationals(rng, 5, nonzero=False)
        for r in range(N + 1):
            for y in ys:
                xy_cases.append((N, r, y))
    checks.append(_run("stirling_x_y", xy_cases, stirling_xy_sides, {"N": [0, 10], "y_points": 5}))

    checks.append(_run(
        "stirling_gf",
        [(n, 13) for n in range(13)],
        stirling_gf_sides,
        {"n": [0, 12], "truncation_order": 12},
    ))

    checks.append(_run(
        "stirling_2_sum",
        [(k, r) for k in range(16) for r in range(k + 1)],
        stirling_2_sum_sides,
        {"k": [0, 15]},
    ))

    fall_cases = [(random_rational(rng), random_rational(rng), rng.randint(0, 8)) for _ in range(points)]
    checks.append(_run("fall_identity", fall_cases, fall_identity_sides, {"points": points}))
    checks.append(_run("fall_identity_binomial", fall_cases, binomial_vandermonde_sides, {"points": points}))

    nc_cases = [(rng.randint(0, 8), rng.randint(0, 8), random_rational(rng)) for _ in range(points)]
    checks.append(_run("newton_coeff", nc_cases, newton_coeff_sides, {"points": points}))

    def shifted_specialisations(N, r):
        p = stirling_shifted(N, r)
        sign = (-1) ** (N - r)
        return (p(0), p(1)), (sign * stirling1(N + 1, r + 1), sign * stirling1(N, r))

    checks.append(_run(
        "shifted_stirling_at_0_and_1",
        [(N, r) for N in range(13) for r in range(N + 1)],
        shifted_specialisations,
        {"N": [0, 12]},
    ))

    newton_cases = []
    for _ in range(50):
        deg = rng.randint(0, 6)
        poly = UniPoly(random_rationals(rng, deg + 1, nonzero=False))
        newton_cases.append((poly, random_rational(rng, nonzero=False)))

    def newton_sides(poly, x):
        m = max(poly.degree, 0)
        samples = [poly(Fraction(i)) for i in range(1, m + 2)]
        return newton_reconstruct(samples, x), poly(x)

    checks.append(_run("newton_series", newton_cases, newton_sides, {"polynomials": 50, "max_degree": 6}))
    return checks


def _random_xs(rng, N):
    return random_rationals(rng, N)


def identity_suite_partitions(seed: int = 0, points: int = 200, nmax: int = 6) -> list:
    """The nu identity and its nu = 1 specialisation at random rational points."""
    rng = random.Random(seed)
    nu_cases = []
    for _ in range(points):
        N = rng.randint(1, nmax)
        k = rng.randint(1, N)
        nu_cases.append((k, random_rational(rng), _random_xs(rng, N)))
    checks = [_run("nu_identity", nu_cases, nu_sides, {"points": points, "N_max": nmax})]

    nu1_cases = []
    for _ in range(points):
        N = rng.randint(1, nmax + 1)
        nu1_cases.append((rng.randint(0, N - 1), _random_xs(rng, N)))
    checks.append(_run("nu_one_identity", nu1_cases, nu_one_sides, {"points": points, "N_max": nmax + 1}))

    set_cases = []
    for _ in range(points // 2):
        M = rng.randint(0, nmax)
        set_cases.append((M, rng.randint(1, M + 1), rng.randint(0, M), _random_xs(rng, M)))
    checks.append(_run("stirling_set", set_cases, stirling_set_sides, {"points": points // 2, "M_max": nmax}))
    return checks


def identity_suite_derivations(seed: int = 0, mmax: int = 6, trials: int = 10, smax: int = 4) -> list:
    """Subset-derivative identity over PolyT and TruncSeriesT, and the tau-marked partition identity."""
    rng = random.Random(seed)

    def rand_poly():
        return PolyT(random_rationals(rng, rng.randint(1, 5), nonzero=False))

    poly_cases = []
    for _ in range(trials):
        M = rng.randint(0, mmax)
        poly_cases.append((rand_poly(), rand_poly(), [rand_poly() for _ in range(M)]))

    def deriv_sides(fA, fB, fs):
        return deriv_set_lhs(fA, fB, fs), deriv_set_rhs(fA, fB, fs)

    checks = [_run("deriv_set_poly", poly_cases, deriv_sides, {"trials": trials, "M_max": mmax})]

    L = TruncSeriesT.neg_log_one_minus_t(12)
    series_cases = []
    for _ in range(max(1, trials // 2)):
        M = rng.randint(0, mmax)
        series_cases.append((L ** rng.randint(0, 3), L ** rng.randint(0, 3), [L ** rng.randint(0, 3) for _ in range(M)]))
    checks.append(_run("deriv_set_series", series_cases, deriv_sides, {"trials": len(series_cases), "order": 12}))

    falling_cases = []
    for _ in range(trials):
        l = rng.randint(0, mmax)
        falling_cases.append((rng.randint(1, 4), rng.randint(0, 4), [rng.randint(1, 4) for _ in range(l)]))
    checks.append(_run("deriv_set_falling", falling_cases, deriv_identity_as_falling, {"trials": trials}))

    checks.append(s_tau_check(smax, nmax_exp=2))
    checks.append(f_sym_check(smax, nmax_exp=2))
    return checks


def s_tau_grid(N_max: int, nmax_exp: int = 3, umax: int = 3):
    """(j, u, exponents) for N <= N_max, all j, k, u with sum(u) <= j and u_i <= umax.

    Exponent tuples run over non-decreasing sequences with entries <= nmax_exp;
    other orderings are covered by the permutation-invariance check.
    """
    for N in range(1, N_max + 1):
        for ns in combinations_with_replacement(range(nmax_exp + 1), N):
            for j in range(N):
                for k in range(N - j + 1):
                    for u in product(range(umax + 1), repeat=k):
                        if sum(u) <= j:
                            yield j, u, ns


def s_tau_check(N_max: int, nmax_exp: int = 3) -> Check:
    for j, u, ns in s_tau_grid(N_max, nmax_exp):
        if not check_s_tau(j, u, [PolyT.t_power(n) for n in ns]):
            return Check("s_tau", False, inputs={"j": j, "u": list(u), "exponents": list(ns)})
    return Check("s_tau", True, inputs={"N_max": N_max, "exponent_max": nmax_exp, "u_max": 3})


def f_sym_check(N_max: int, nmax_exp: int = 3) -> Check:
    """Invariance of big_F under each adjacent swap f_r <-> f_{r+1} over the s_tau grid.

    Adjacent transpositions generate the symmetric group; swaps of equal
    exponents are skipped since they leave the tuple unchanged.
    """
    count = 0
    for j, u, ns in s_tau_grid(N_max, nmax_exp):
        fs = [PolyT.t_power(n) for n in ns]
        base = big_F(j, fs, u)
        for r in range(len(ns) - 1):
            if ns[r] == ns[r + 1]:
                continue
            swapped = fs[:r] + [fs[r + 1], fs[r]] + fs[r + 2:]
            count += 1
            if big_F(j, swapped, u) != base:
                return Check("f_symmetry", False, inputs={"j": j, "u": list(u), "exponents": list(ns), "swap": r + 1})
    return Check("f_symmetry", True, inputs={"N_max": N_max, "exponent_max": nmax_exp, "swaps": count})


def identity_suite(seed: int = 0, smax: int = 4) -> list:
    """All identity suites the ``identities`` CLI command runs."""
    return (
        identity_suite_stirling(seed)
        + identity_suite_partitions(seed)
        + identity_suite_derivations(seed, smax=smax)
    )

import random
from fractions import Fraction

import pytest

from rootseries.derivations import (
    D,
    Derivation,
    PolyT,
    TruncSeriesT,
    big_C,
    big_F,
    check_s_tau,
    deriv_identity_as_falling,
    deriv_set_lhs,
    deriv_set_rhs,
    u_expression_with_u,
    u_expression_without_u,
)
from rootseries.report import random_rationals

t = PolyT.t_power(1)


def rand_poly(rng, max_deg=4):
    return PolyT(random_rationals(rng, rng.randint(1, max_deg + 1), nonzero=False))


def test_leibniz_on_random_polynomials():
    rng = random.Random(1)
    for _ in range(100):
        f, g = rand_poly(rng), rand_poly(rng)
        assert D.satisfies_leibniz(f, g)
        assert D.is_additive(f, g)


def test_leibniz_on_truncated_series():
    rng = random.Random(2)
    for _ in range(100):
        f = TruncSeriesT(random_rationals(rng, 12, nonzero=False), 12)
        g = TruncSeriesT(random_rationals(rng, 12, nonzero=False), 12)
        assert D.satisfies_leibniz(f, g)


def test_times_is_repeated_addition():
    f = PolyT([1, 2, 3])
    assert f.times(3) == f + f + f
    assert f.times(0) == PolyT()
    s = TruncSeriesT.geometric(5)
    assert s.times(2) == s + s


def test_truncated_series_precision():
    L = TruncSeriesT.neg_log_one_minus_t(6)
    assert L.derivative().prec == 5
    # d/dt(-ln(1-t)) = 1/(1-t)
    assert L.derivative() == TruncSeriesT.geometric(5)
    with pytest.raises(IndexError):
        L.derivative().coeff(5)


def test_deriv_set_zero_perturbations_is_plain_product():
    f, g = PolyT([1, 2]), PolyT([0, 3, 1])
    assert deriv_set_lhs(f, g, []) == f * g
    assert deriv_set_rhs(f, g, []) == f * g


def test_deriv_set_single_factor_all_t():
    three_t2 = PolyT.t_power(2, 3)
    assert deriv_set_lhs(t, t, [t]) == three_t2
    assert deriv_set_rhs(t, t, [t]) == three_t2


def test_deriv_set_rhs_on_monomials():
    # d^3(t^(1+2+1+1+2)) = 7*6*5 t^4
    fs = [PolyT.t_power(n) for n in (1, 1, 2)]
    assert deriv_set_rhs(t, PolyT.t_power(2), fs) == PolyT.t_power(4, 210)


@pytest.mark.parametrize("M", range(5))
def test_deriv_set_random_polynomials(M):
    rng = random.Random(M)
    for _ in range(5):
        fA, fB = rand_poly(rng, 3), rand_poly(rng, 3)
        fs = [rand_poly(rng, 3) for _ in range(M)]
        assert deriv_set_lhs(fA, fB, fs) == deriv_set_rhs(fA, fB, fs)


def test_deriv_set_with_a_custom_derivation():
    # t d/dt is a derivation too
    euler = Derivation(lambda f: t * f.derivative(), name="t d/dt")
    rng = random.Random(3)
    fA, fB = rand_poly(rng), rand_poly(rng)
    fs = [rand_poly(rng) for _ in range(3)]
    assert deriv_set_lhs(fA, fB, fs, euler) == deriv_set_rhs(fA, fB, fs, euler)


def test_deriv_set_falling_form():
    lhs, rhs = deriv_identity_as_falling(2, 3, [1, 4, 2])
    assert lhs == rhs


def test_big_F_trivial_cases():
    fs = [PolyT([1, 1]), PolyT([0, 2]), PolyT([3])]
    assert big_F(0, fs, ()) == fs[0] * fs[1] * fs[2]
    assert big_F(0, [PolyT.t_power(2)], ()) == PolyT.t_power(2)


def test_big_F_hand_count():
    # three partitions into a pair and a singleton, two marking choices: 6 * t * 2t
    assert big_F(1, [t, t, t], (0,)) == PolyT.t_power(2, 12)
    assert big_C(1, 3, (0,)) == 4


def test_big_C_values():
    assert big_C(0, 2, ()) == 1
    assert big_C(0, 1, ()) == 1
    with pytest.raises(ValueError):
        big_C(0, 3, (1,))
    with pytest.raises(ValueError):
        big_C(1, 2, (0, 0))


def test_big_F_rejects_bad_sizes():
    with pytest.raises(ValueError):
        big_F(2, [t, t], ())
    with pytest.raises(ValueError):
        big_F(1, [t, t], (0, 0))


@pytest.mark.parametrize("N", range(1, 4))
def test_s_tau_small_grid(N):
    from itertools import product
    for ns in product(range(3), repeat=N):
        fs = [PolyT.t_power(n) for n in ns]
        for j in range(N):
            for k in range(N - j + 1):
                for u in product(range(j + 1), repeat=k):
                    if sum(u) <= j:
                        assert check_s_tau(j, u, fs)


def test_s_tau_on_non_monomials():
    rng = random.Random(5)
    fs = [rand_poly(rng, 3) for _ in range(4)]
    assert check_s_tau(2, (1,), fs)
    assert check_s_tau(1, (0, 1), fs)


def test_u_expressions_agree():
    rng = random.Random(11)
    for _ in range(20):
        l = rng.randint(1, 4)
        a = rng.randint(0, l)
        ns = [rng.randint(0, 3) for _ in range(l)]
        u = [rng.randint(0, 2) for _ in range(a)]
        X = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        assert u_expression_with_u(l, a, ns, u, X) == u_expression_without_u(l, a, ns, X)

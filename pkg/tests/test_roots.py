import cmath
import math
import random
import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rootseries.combinatorics import MultiIndex, multi_indices
from rootseries.report import random_rational
from rootseries.roots import (
    AlphaMonomial,
    ProblemSpec,
    RecursionOracle,
    alpha_branch,
    closed_form_parts,
    coeff_closed,
    coeff_closed_multiset,
    coeff_recursive,
    expected_alpha_exp,
    formula_forms_agree,
    residual_check,
    taylor_table,
    track_root,
)

QUAD = ProblemSpec(1, 2, (1,))


def quadratic_root(a):
    # zero of 1 + a z + z^2 near i
    return (-a + 1j * cmath.sqrt(4 - a * a)) / 2


def random_spec(rng, d):
    return ProblemSpec(random_rational(rng), random_rational(rng), tuple(random_rational(rng) for _ in range(d)))


def test_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec(0, 2, (1,))
    with pytest.raises(ValueError):
        ProblemSpec(1, 0, (1,))
    with pytest.raises(ValueError):
        ProblemSpec(1, 2, ())
    assert ProblemSpec("3/4", 2, ("1/2",)).exact
    assert not ProblemSpec(1.5, 2, (1,)).exact


def test_first_order_is_minus_alpha_power_over_gprime():
    spec = ProblemSpec(Fraction(3, 2), Fraction(5, 3), (Fraction(1, 2),))
    c = coeff_closed((1,), spec)
    assert c == AlphaMonomial(Fraction(-1) / (spec.b * spec.beta), spec.gammas[0] - (spec.beta - 1))


def test_quadratic_exact_coefficients():
    assert coeff_closed((1,), QUAD) == AlphaMonomial(Fraction(-1, 2), Fraction(0))
    assert coeff_closed((2,), QUAD) == AlphaMonomial(Fraction(1, 4), Fraction(-1))


def test_quadratic_coefficients_at_alpha_i():
    br = alpha_branch(QUAD)
    assert abs(coeff_closed((1,), QUAD).evaluate(br) - (-0.5)) < 1e-15
    assert abs(coeff_closed((2,), QUAD).evaluate(br) - (-0.25j)) < 1e-15


def test_order_zero_is_rejected():
    with pytest.raises(ValueError):
        coeff_closed((0, 0), ProblemSpec(1, 2, (1, 3)))


def test_closed_form_parts_split_b():
    spec = ProblemSpec(Fraction(-7, 3), 3, (1, Fraction(1, 2)))
    for n in [(1, 0), (2, 1), (0, 3)]:
        scalar, exp, bp = closed_form_parts(n, spec.beta, spec.gammas)
        assert coeff_closed(n, spec) == AlphaMonomial(scalar * spec.b ** bp, exp)
        assert bp == -sum(n)


def test_multiset_form_matches_product_form():
    rng = random.Random(0)
    for _ in range(20):
        spec = random_spec(rng, 2)
        for n in multi_indices(2, 3):
            assert coeff_closed_multiset(n.to_multiset(), spec) == coeff_closed(n, spec)


def test_degenerate_factor_gives_zero():
    # -1 + beta - 2 gamma = 0 at n = (2)
    spec = ProblemSpec(1, 3, (1,))
    c = coeff_closed((2,), spec)
    assert c.is_zero()
    assert c.alpha_exp == expected_alpha_exp((2,), spec)


def test_formula_forms_examples():
    assert formula_forms_agree((1,), QUAD)
    spec = ProblemSpec(1, 2, (Fraction(1, 2), Fraction(1, 2)))
    assert formula_forms_agree((1, 1), spec)


@given(st.integers(1, 3), st.integers(0, 10**6), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_formula_forms_agree_randomly(d, seed, order):
    rng = random.Random(seed)
    spec = random_spec(rng, d)
    n = list(multi_indices(d, order))[seed % math.comb(order + d - 1, d - 1)]
    assert formula_forms_agree(n, spec)


def test_recursion_base_case():
    spec = ProblemSpec(Fraction(2, 3), Fraction(-1, 2), (Fraction(4), Fraction(1, 5)))
    assert coeff_recursive((2,), spec) == coeff_closed((0, 1), spec)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_recursion_matches_closed_form(d):
    rng = random.Random(100 + d)
    for _ in range(3):
        spec = random_spec(rng, d)
        oracle = RecursionOracle(spec)
        for order in range(1, 5):
            for n in multi_indices(d, order):
                assert coeff_recursive(n.to_multiset(), spec, oracle) == coeff_closed(n, spec)


def test_recursion_depends_only_on_multiplicities():
    spec = ProblemSpec(Fraction(5, 4), Fraction(7, 3), (Fraction(1, 2), Fraction(-2)))
    assert coeff_recursive((1, 2), spec) == coeff_recursive((2, 1), spec)
    a = coeff_recursive((2, 1, 1, 2, 1), spec)
    b = coeff_recursive((1, 1, 1, 2, 2), spec)
    assert a == b


def test_recursion_memo_checks_spec():
    oracle = RecursionOracle(QUAD)
    with pytest.raises(ValueError):
        coeff_recursive((1,), ProblemSpec(2, 2, (1,)), oracle)


def test_recursion_needs_exact_input():
    with pytest.raises(TypeError):
        RecursionOracle(ProblemSpec(1.5, 2, (1,)))


def test_homogeneity():
    rng = random.Random(9)
    spec = random_spec(rng, 3)
    for order in range(1, 5):
        for n in multi_indices(3, order):
            assert coeff_closed(n, spec).alpha_exp == expected_alpha_exp(n, spec)


@pytest.mark.parametrize("b,beta,m,expected", [
    (1, 2, 0, 1j),
    (1, 2, 1, -1j),
    (-1, 1, 0, 1),
    (1, 3, 0, cmath.exp(1j * math.pi / 3)),
])
def test_alpha_branch_values(b, beta, m, expected):
    br = alpha_branch(ProblemSpec(b, beta, (1,), m))
    assert abs(br.value - expected) < 1e-14
    assert -math.pi < br.theta <= math.pi


def test_alpha_branch_sheet_index():
    br = alpha_branch(ProblemSpec(1, 2, (1,), 1))
    assert br.n == 1
    assert abs(br.theta + math.pi / 2) < 1e-14


def test_alpha_branch_complex_exponent():
    spec = ProblemSpec(complex(0.5, 1), complex(2, 0.5), (1,), 2)
    br = alpha_branch(spec)
    g = 1 + complex(spec.b) * br.power(spec.beta)
    assert abs(g) < 1e-14


def test_taylor_table_shapes():
    t0 = taylor_table(QUAD, 0)
    assert len(t0) == 1 and t0[(0,)] == AlphaMonomial(Fraction(1), Fraction(1))
    t2 = taylor_table(QUAD, 2)
    assert t2[(1,)] == coeff_closed((1,), QUAD) and t2[(2,)] == coeff_closed((2,), QUAD)
    t3 = taylor_table(ProblemSpec(1, 2, (1, 2)), 3)
    assert sum(1 for n, _ in t3 if sum(n)) == 9


def test_normalized_table_divides_by_factorials():
    spec = ProblemSpec(2, 3, (1, Fraction(1, 2)))
    raw = taylor_table(spec, 3)
    norm = taylor_table(spec, 3, normalized=True)
    assert norm[(2, 1)].coeff == raw[(2, 1)].coeff / 2
    assert norm.taylor_coefficient((2, 1)) == raw.taylor_coefficient((2, 1))


def test_threaded_table_is_identical():
    spec = ProblemSpec(Fraction(3, 2), 3, (1, Fraction(1, 2), -2))
    assert taylor_table(spec, 4, n_jobs=4).to_json() == taylor_table(spec, 4).to_json()


def test_shared_oracle_across_threads():
    spec = ProblemSpec(Fraction(3, 2), Fraction(5, 2), (1, Fraction(-1, 3)))
    oracle = RecursionOracle(spec)
    indices = [n for k in range(1, 5) for n in multi_indices(2, k)]
    results = {}

    def work(chunk):
        for n in chunk:
            results[n] = coeff_recursive(n.to_multiset(), spec, oracle)

    threads = [threading.Thread(target=work, args=(indices[i::3],)) for i in range(3)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(results[n] == coeff_closed(n, spec) for n in indices)


def test_quadratic_series_matches_explicit_root():
    br = alpha_branch(QUAD)
    table = taylor_table(QUAD, 4, normalized=True)
    a = 1e-3
    z = table.evaluate([a], br)
    assert abs(z - quadratic_root(a)) <= 1e-12 * abs(quadratic_root(a))


def test_residual_at_zero_is_noise():
    rep = residual_check(QUAD, 3, [0j], scales=(1.0,))
    assert rep.residuals[0] <= 1e-13


def test_residual_slope_quadratic():
    rep = residual_check(QUAD, 4, [1e-3], scales=(1, 0.5, 0.25))
    # residuals sit near the noise floor at this size; whatever survives must scale
    assert rep.passed


def test_residual_slope_two_perturbations():
    spec = ProblemSpec(Fraction(-2, 3), 3, (Fraction(1, 2), 2))
    rep = residual_check(spec, 3, [1e-2, 5e-3j])
    assert rep.slope is not None and rep.slope >= 3.8


def test_closed_form_matches_finite_differences():
    spec = ProblemSpec(Fraction(3, 2), Fraction(5, 2), (Fraction(1, 2), Fraction(-1)))
    br = alpha_branch(spec)
    h = 1e-5

    def phi(a1, a2):
        return track_root(spec, [a1, a2], br)

    approx = {
        (1, 0): (phi(h, 0) - phi(-h, 0)) / (2 * h),
        (0, 1): (phi(0, h) - phi(0, -h)) / (2 * h),
        (2, 0): (phi(h, 0) - 2 * phi(0, 0) + phi(-h, 0)) / h ** 2,
        (1, 1): (phi(h, h) - phi(h, -h) - phi(-h, h) + phi(-h, -h)) / (4 * h * h),
    }
    for n, value in approx.items():
        exact = coeff_closed(n, spec).evaluate(br)
        assert abs(value - exact) <= 1e-4 * abs(exact), n


def test_series_table_json():
    out = taylor_table(QUAD, 1).to_json()
    assert out[1] == {"multi_index": [1], "coeff": "-1/2", "alpha_exp": "0/1"}


def test_multi_index_keys():
    t = taylor_table(QUAD, 2)
    assert t[MultiIndex((2,))] == t[(2,)]

import json
from math import factorial

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from starconv.errors import DivisionByZeroSeries, NonunitConstantTerm, NonzeroConstantTerm, NotNormalized
from starconv.series import (
    PowerSeries,
    cauchy_product,
    derivative,
    evaluate,
    evaluate_circle,
    exp_series,
    geometric,
    hadamard,
    integrate_zlog,
    log_series,
    max_abs_diff,
    power,
    quotient,
    z_derivative,
)

from conftest import random_normalized


def S(*c, **kw):
    return PowerSeries(c, **kw)


def koebe(order):
    return PowerSeries([k for k in range(order + 1)])


def assert_coeffs(f, expected, tol=1e-14):
    assert f.order == len(expected) - 1
    np.testing.assert_allclose(f.coeffs, np.asarray(expected, dtype=complex), rtol=0, atol=tol)


def sympy_coeffs(expr, order):
    z = sp.Symbol("z")
    ser = sp.series(expr(z), z, 0, order + 1).removeO()
    return [complex(ser.coeff(z, k)) for k in range(order + 1)]


# -- construction -------------------------------------------------------------


def test_series_is_immutable():
    f = S(0, 1, 2)
    with pytest.raises(ValueError):
        f.coeffs[0] = 5


def test_valuation_defaults_to_first_nonzero():
    assert S(0, 0, 3, 1).valuation == 2
    assert S(0, 0).valuation == 2
    assert S(0, 1, 1, valuation=0).valuation == 0
    with pytest.raises(ValueError):
        S(1, 2, valuation=1)


def test_normalization_is_exact():
    assert S(0, 1, 5).is_normalized()
    assert not S(0, 1 + 1e-16j * 1e3, 5).is_normalized()
    assert not S(1e-300, 1, 5).is_normalized()


# -- derivative / z_derivative ----------------------------------------------


def test_derivative_of_identity():
    assert_coeffs(derivative(PowerSeries.identity(1)), [1])


def test_derivative_power_rule():
    assert_coeffs(derivative(S(0, 1, 1)), [1, 2])


def test_derivative_of_koebe_is_squares():
    # d/dz sum k z^k = sum k^2 z^(k-1)
    assert_coeffs(derivative(koebe(5)), [1, 4, 9, 16, 25])


def test_z_derivative_examples():
    assert_coeffs(z_derivative(PowerSeries.identity(1)), [0, 1])
    assert_coeffs(z_derivative(S(0, 1, 0.3 - 2j)), [0, 1, 0.6 - 4j])
    assert_coeffs(z_derivative(geometric(4) - 1), [0, 1, 2, 3, 4])


def test_z_derivative_equals_z_times_derivative(rng):
    f = random_normalized(rng, 20)
    lhs = z_derivative(f)
    rhs = derivative(f).shift(1)
    assert max_abs_diff(lhs, rhs) == 0


# -- products and quotients -------------------------------------------------


def test_cauchy_product_examples(rng):
    f = random_normalized(rng, 10)
    assert max_abs_diff(cauchy_product(f, PowerSeries.constant(1, 10)), f) == 0
    assert_coeffs(cauchy_product(S(1, 1, 0), S(1, -1, 0)), [1, 0, -1])
    assert_coeffs(cauchy_product(geometric(3), geometric(3)), [1, 2, 3, 4])


def test_binary_ops_truncate_to_shorter():
    assert (geometric(3) * geometric(7)).order == 3
    assert (geometric(3) + geometric(7)).order == 3


def test_self_quotient_is_one(rng):
    f = random_normalized(rng, 12)
    q = quotient(f, f)
    assert q.order == 11
    assert_coeffs(q, [1] + [0] * 11, tol=1e-12)


def test_koebe_starlike_ratio():
    # z k'/k = (1+z)/(1-z); five known coefficients of k give order 4 after cancelling z
    q = quotient(z_derivative(koebe(5)), koebe(5))
    assert_coeffs(q, [1, 2, 2, 2, 2])


def test_monomial_cancellation():
    assert_coeffs(quotient(S(0, 1, 1), S(0, 1, 0)), [1, 1])


def test_quotient_rejects_zero_denominator():
    with pytest.raises(DivisionByZeroSeries):
        quotient(S(1, 2, 3), S(1e-14, 1, 0, valuation=0))
    with pytest.raises(DivisionByZeroSeries):
        quotient(S(1, 2, 3), S(0, 1, 0))
    with pytest.raises(DivisionByZeroSeries):
        quotient(S(1, 2), S(0, 0))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), order=st.integers(4, 64), shift=st.integers(0, 3))
def test_quotient_inverts_product(seed, order, shift):
    rng = np.random.default_rng(seed)
    f = PowerSeries(rng.uniform(-1, 1, order + 1) + 1j * rng.uniform(-1, 1, order + 1))
    gc = rng.uniform(-1, 1, order + 1) + 1j * rng.uniform(-1, 1, order + 1)
    gc[0] = 2.0 + rng.uniform(0, 1)  # keep the denominator well conditioned
    g = PowerSeries(gc).shift(shift).truncate(order)
    back = quotient(cauchy_product(f, g), g)
    assert back.order == order - shift
    assert max_abs_diff(back, f) <= 1e-12


# -- exp / log / integration ------------------------------------------------


def test_exp_examples():
    assert_coeffs(exp_series(PowerSeries.constant(0, 3)), [1, 0, 0, 0])
    assert_coeffs(exp_series(PowerSeries.identity(3)), [1, 1, 1 / 2, 1 / 6])


def test_exp_of_minus_log_is_geometric():
    assert_coeffs(exp_series(-log_series(1 - PowerSeries.identity(4))), [1, 1, 1, 1, 1], tol=1e-15)


def test_log_examples():
    assert_coeffs(log_series(PowerSeries.constant(1, 3)), [0, 0, 0, 0])
    assert_coeffs(log_series(1 - PowerSeries.identity(3)), [0, -1, -1 / 2, -1 / 3])
    u = S(0, 1, 1, 0, 0, 0)
    assert_coeffs(log_series(exp_series(u)), u.coeffs, tol=1e-15)


def test_exp_log_match_sympy():
    ref = sympy_coeffs(lambda z: sp.exp(z + z**2 / 3 - 2 * z**3), 12)
    z = PowerSeries.identity(12)
    got = exp_series(z + z * z * (1 / 3) - 2 * z * z * z)
    np.testing.assert_allclose(got.coeffs, ref, atol=1e-14)
    ref = sympy_coeffs(lambda z: sp.log(1 + z / 2 + z**2), 12)
    got = log_series(1 + z * 0.5 + z * z)
    np.testing.assert_allclose(got.coeffs, ref, atol=1e-14)


def test_exp_log_constant_term_errors():
    with pytest.raises(NonzeroConstantTerm):
        exp_series(S(0.5, 1))
    with pytest.raises(NonunitConstantTerm):
        log_series(S(2, 1))
    with pytest.raises(NonzeroConstantTerm):
        integrate_zlog(S(1, 1))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), order=st.integers(1, 64))
def test_exp_log_round_trip(seed, order):
    rng = np.random.default_rng(seed)
    c = rng.uniform(0, 1, order + 1) * np.exp(2j * np.pi * rng.uniform(0, 1, order + 1))
    c[0] = 0
    u = PowerSeries(c)
    assert max_abs_diff(log_series(exp_series(u)), u) <= 1e-12
    # w must not vanish in the closed disk, else log w is exponentially large
    w = PowerSeries(np.concatenate([[1], c[1:] * 0.5 ** np.arange(1, order + 1)]))
    assert max_abs_diff(exp_series(log_series(w)), w) <= 1e-12


def test_integrate_zlog_examples():
    assert_coeffs(integrate_zlog(PowerSeries.constant(0, 2)), [0, 0, 0])
    assert_coeffs(integrate_zlog(S(0, 2)), [0, 2])
    # p - 1 for p = (1+z)/(1-z) is 2z + 2z^2 + ...
    assert_coeffs(integrate_zlog(2 * geometric(4) - 2), [0, 2, 1, 2 / 3, 1 / 2])


def test_z_derivative_undoes_integrate_zlog(rng):
    c = rng.normal(size=30) + 1j * rng.normal(size=30)
    c[0] = 0
    u = PowerSeries(c)
    assert max_abs_diff(z_derivative(integrate_zlog(u)), u) <= 1e-14


def test_power_matches_sympy():
    z = PowerSeries.identity(10)
    got = power(4 + z + 3 * z * z, 0.5)
    ref = sympy_coeffs(lambda t: sp.sqrt(4 + t + 3 * t**2), 10)
    np.testing.assert_allclose(got.coeffs, ref, atol=1e-14)


# -- evaluation ----------------------------------------------------------------


def test_evaluate_examples():
    assert evaluate(PowerSeries.identity(3), 0.5) == 0.5
    assert evaluate(S(1, 1, 1), 0) == 1
    assert abs(evaluate(koebe(64), 0.5) - 2.0) < 1e-9


def test_horner_matches_monomial_sum(rng):
    f = PowerSeries(rng.normal(size=41) + 1j * rng.normal(size=41))
    for z in [0.3 + 0.4j, -0.9, 0.99j]:
        direct = sum(c * z**k for k, c in enumerate(f.coeffs))
        assert abs(evaluate(f, z) - direct) <= 1e-13 * max(1, abs(direct))


def test_evaluate_circle_matches_horner(rng):
    f = PowerSeries(rng.normal(size=3001) * 0.5 ** np.arange(3001) ** 0.1)
    m = 64
    z = 0.8 * np.exp(2j * np.pi * np.arange(m) / m)
    np.testing.assert_allclose(evaluate_circle(f, 0.8, m), evaluate(f, z), atol=1e-11)


def test_evaluate_circle_folds_high_orders():
    # koebe at order far above the number of angles
    k = koebe(4000)
    m = 16
    z = 0.5 * np.exp(2j * np.pi * np.arange(m) / m)
    np.testing.assert_allclose(evaluate_circle(k, 0.5, m), z / (1 - z) ** 2, atol=1e-13)


# -- hadamard -------------------------------------------------------------------


def test_hadamard_identity_and_commutativity(rng):
    f, g = random_normalized(rng, 16), random_normalized(rng, 16)
    ident = geometric(16) - 1
    assert np.array_equal(hadamard(f, ident).coeffs, f.coeffs)
    assert np.array_equal(hadamard(f, g).coeffs, hadamard(g, f).coeffs)


def test_hadamard_examples(rng):
    g = random_normalized(rng, 5)
    assert_coeffs(hadamard(PowerSeries.identity(5), g), [0, 1, 0, 0, 0, 0])
    assert_coeffs(hadamard(koebe(3), koebe(3)), [0, 1, 4, 9])


def test_hadamard_requires_normalized():
    with pytest.raises(NotNormalized):
        hadamard(S(0, 2, 1), S(0, 1, 1))


# -- serialization --------------------------------------------------------------


def test_json_format_is_frozen():
    f = S(0, 1, 0.5 - 2j)
    assert f.to_json() == '{"order": 2, "coeffs": [[0.0, 0.0], [1.0, 0.0], [0.5, -2.0]]}'
    assert np.array_equal(PowerSeries.from_json(f.to_json()).coeffs, f.coeffs)


def test_csv_format_is_frozen():
    f = S(0, 1, 1 / 3 + 0.25j)
    assert f.to_csv() == "k,re,im\n0,0.0,0.0\n1,1.0,0.0\n2,0.3333333333333333,0.25\n"
    assert np.array_equal(PowerSeries.from_csv(f.to_csv()).coeffs, f.coeffs)


def test_csv_has_no_negative_zero():
    assert "-0.0" not in (-PowerSeries.identity(2)).to_csv().replace("-1.0", "")


@pytest.mark.parametrize("text", ["", "k,re,im\n", "0,1\n", "0,1,0\n2,1,0\n", "0,a,0\n"])
def test_csv_rejects_malformed(text):
    with pytest.raises(ValueError):
        PowerSeries.from_csv(text)


def test_json_rejects_mismatched_order():
    with pytest.raises(ValueError):
        PowerSeries.from_dict({"order": 3, "coeffs": [[0, 0]]})


def test_numpy_scalar_multiplication_stays_a_series():
    f = np.float64(2.0) * geometric(3)
    assert isinstance(f, PowerSeries)
    assert json.loads(f.to_json())["coeffs"][3] == [2.0, 0.0]

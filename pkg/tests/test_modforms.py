from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from twistsig.errors import TruncationError, TwistSigError
from twistsig.modforms import (
    bernoulli_number, delta_epsilon_series, discriminant_series, divisor_sum,
    eisenstein_series, fit_weight12_gamma_lower0_2, fit_weight12_gamma_upper0_2,
    fit_weight12_sl2z, gamma_lower0_2_basis, gamma_upper0_2_basis, named_form,
    theta_null_series, transport_gamma02,
)
from twistsig.qseries import QSeries

H = Fraction(1, 2)


def coeffs(s, n, step=1):
    return [s.coefficient(Fraction(k) * step) for k in range(n)]


# -- oracles -----------------------------------------------------------------------


def theta_sum(j, order):
    """Theta nulls as lattice sums (Jacobi triple product), not as products."""
    terms = {}
    n = -60
    while n <= 60:
        if j == 1:
            e, c = Fraction((2 * n + 1) ** 2, 8), 1
        else:
            e, c = Fraction(n * n, 2), -1 if j == 2 and n % 2 else 1
        if e < order:
            terms[e] = terms.get(e, 0) + c
        n += 1
    return QSeries(terms, order)


def eps1_direct(n):
    return sum((-1) ** d * d ** 3 for d in range(1, n + 1) if n % d == 0)


def eps2_direct(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0 and (n // d) % 2)


def odd_sigma(n):
    return sum(d for d in range(1, n + 1) if n % d == 0 and d % 2)


# -- golden values ------------------------------------------------------------------


def test_eisenstein_golden():
    assert coeffs(eisenstein_series(1, 4).expansion, 4) == [1, -24, -72, -96]
    assert coeffs(eisenstein_series(2, 4).expansion, 4) == [1, 240, 240 * 9, 240 * 28]
    assert coeffs(eisenstein_series(3, 4).expansion, 4) == [1, -504, -504 * 33, -504 * 244]
    assert coeffs(discriminant_series(5).expansion, 5) == [0, 1, -24, 252, -1472]


def test_delta_epsilon_golden():
    assert coeffs(delta_epsilon_series("delta1", 3).expansion, 3) == [Fraction(1, 4), 6, 6]
    assert coeffs(delta_epsilon_series("eps1", 3).expansion, 3) == [Fraction(1, 16), -1, 7]
    d2 = delta_epsilon_series("delta2", 2).expansion
    assert coeffs(d2, 4, H) == [Fraction(-1, 8), -3, -3, -12]
    e2 = delta_epsilon_series("eps2", 2).expansion
    assert coeffs(e2, 4, H) == [0, 1, 8, 28]


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 20, 30])
def test_bernoulli_against_sympy(n):
    assert bernoulli_number(n) == Fraction(str(sympy.bernoulli(n)))


def test_eisenstein_against_bernoulli_oracle():
    for k in (2, 3, 4, 5, 6):
        b = Fraction(str(sympy.bernoulli(2 * k)))
        s = eisenstein_series(k, 8).expansion
        expect = [1] + [-4 * k / b * sympy.divisor_sigma(n, 2 * k - 1) for n in range(1, 8)]
        assert coeffs(s, 8) == expect


def test_e4_e6_discriminant_relation_order_10():
    e4 = eisenstein_series(2, 10).expansion
    e6 = eisenstein_series(3, 10).expansion
    assert e4 ** 3 - e6 ** 2 == discriminant_series(10).expansion * 1728


@pytest.mark.parametrize("j", [1, 2, 3])
def test_theta_products_match_lattice_sums(j):
    assert theta_null_series(j, 10) == theta_sum(j, 10)


def test_delta_epsilon_match_divisor_sums_order_10():
    d1 = delta_epsilon_series("delta1", 10).expansion
    e1 = delta_epsilon_series("eps1", 10).expansion
    d2 = delta_epsilon_series("delta2", 10).expansion
    e2 = delta_epsilon_series("eps2", 10).expansion
    assert coeffs(d1, 10)[1:] == [6 * odd_sigma(n) for n in range(1, 10)]
    assert coeffs(e1, 10)[1:] == [eps1_direct(n) for n in range(1, 10)]
    assert coeffs(d2, 20, H)[1:] == [-3 * odd_sigma(n) for n in range(1, 20)]
    assert coeffs(e2, 20, H)[1:] == [eps2_direct(n) for n in range(1, 20)]
    # the definitions through theta nulls, recomputed from the lattice sums
    t1, t2, t3 = (theta_sum(j, 10) for j in (1, 2, 3))
    assert d1 == (t2 ** 4 + t3 ** 4) / 8
    assert e1 == (t2 ** 4 * t3 ** 4 / 16).truncate(10)
    assert d2 == (-(t1 ** 4 + t3 ** 4) / 8).truncate(10)
    assert e2 == (t1 ** 4 * t3 ** 4 / 16).truncate(10)


def test_divisor_sum():
    assert divisor_sum(12, 1) == 28
    assert divisor_sum(12, 3) == sympy.divisor_sigma(12, 3)


def test_named_forms():
    assert str(named_form("E4", 4)) == "1 + 240q + 2160q^2 + 6720q^3 + O(q^4)"
    with pytest.raises(ValueError):
        named_form("E8")


# -- fits -----------------------------------------------------------------------------

ints = st.integers(min_value=-10 ** 6, max_value=10 ** 6)


@given(ints, ints)
def test_sl2z_fit_roundtrip(m, n):
    s = eisenstein_series(2, 6).expansion ** 3 * m + discriminant_series(6).expansion * n
    fit = fit_weight12_sl2z(s)
    assert fit.coefficients == (m, n) and fit.in_span and fit.residual.is_zero()


@given(st.lists(ints, min_size=4, max_size=4))
def test_gamma_upper_fit_roundtrip(h):
    order = Fraction(3)
    s = sum((b * c for b, c in zip(gamma_upper0_2_basis(order), h)), QSeries.zero(order))
    fit = fit_weight12_gamma_upper0_2(s)
    assert list(fit.coefficients) == h and fit.in_span


@given(st.lists(ints, min_size=4, max_size=4))
def test_gamma_lower_fit_roundtrip(c):
    order = Fraction(5)
    s = sum((b * x for b, x in zip(gamma_lower0_2_basis(order), c)), QSeries.zero(order))
    fit = fit_weight12_gamma_lower0_2(s)
    assert list(fit.coefficients) == c and fit.in_span


def test_basis_leading_terms():
    # (8 delta1)^(6-2r) eps1^r = 2^(6-6r) (1 + (144 - 64 r) q) + O(q^2)
    for r, b in enumerate(gamma_lower0_2_basis(Fraction(2))):
        lead = Fraction(2) ** (6 - 6 * r)
        assert b == QSeries({0: lead, 1: lead * (144 - 64 * r)}, 2)
    for r, b in enumerate(gamma_upper0_2_basis(Fraction(2))):
        assert b.valuation() == Fraction(r, 2) and b.coefficient(Fraction(r, 2)) == 1


def test_transport_is_rescaled_lower_basis():
    h = [3, -5, 7, 11]
    t = transport_gamma02(h, 4)
    fit = fit_weight12_gamma_lower0_2(t)
    assert list(fit.coefficients) == [Fraction(x, 4096) for x in h]


def test_out_of_span_and_errors():
    fit = fit_weight12_sl2z(eisenstein_series(3, 4).expansion ** 2 + QSeries({2: 1}, 4))
    assert not fit.in_span
    with pytest.raises(TruncationError):
        fit_weight12_sl2z(QSeries({0: 1}, 2))
    with pytest.raises(TwistSigError):
        fit_weight12_sl2z(QSeries({0: 1, H: 1}, 4))
    with pytest.raises(TruncationError):
        fit_weight12_gamma_lower0_2(QSeries({0: 1}, 3))
    assert fit.to_json()["basis"] == "tate_w12"

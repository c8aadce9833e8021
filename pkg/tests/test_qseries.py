from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twistsig.errors import DivergentProductError, LatticeError, NonInvertibleError, TruncationError
from twistsig.qseries import (
    QSeries, as_rational, coefficient_at, product_expand, series_inv, series_pow,
)

LAT = 2
ORDER = Fraction(4)
N = int(ORDER * LAT)

small = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def series(draw, unit=False):
    coeffs = draw(st.lists(small, min_size=N, max_size=N))
    if unit:
        coeffs[0] = draw(small.filter(lambda c: c != 0))
    return QSeries({Fraction(k, LAT): c for k, c in enumerate(coeffs)}, ORDER, LAT)


def dense(s):
    return [s.coefficient(Fraction(k, LAT)) for k in range(N)]


def convolve(a, b):
    # schoolbook product, independent of series_mul
    out = [Fraction(0)] * N
    for i in range(N):
        for j in range(N - i):
            out[i + j] += a[i] * b[j]
    return out


@given(series(), series())
def test_product_matches_dense_convolution(a, b):
    assert dense((a * b).truncate(ORDER)) == convolve(dense(a), dense(b))


@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QSeries.zero(ORDER, LAT)
    assert a * 1 == a


@given(series(unit=True))
def test_inverse(a):
    one = QSeries.constant(1, ORDER, LAT)
    assert a * series_inv(a) == one
    assert series_pow(a, -2) * a ** 2 == one


@given(series(), st.integers(min_value=0, max_value=4))
def test_power_is_repeated_product(a, n):
    expect = QSeries.constant(1, ORDER, LAT)
    for _ in range(n):
        expect = expect * a
    assert a ** n == expect


def test_inverse_golden():
    s = QSeries({0: 1, Fraction(1, 2): 24, 1: 276}, 2)
    assert str(series_inv(s).truncate(Fraction(3, 2))) == "1 - 24q^{1/2} + 300q + O(q^{3/2})"


def test_pessimistic_truncation_order():
    a = QSeries({1: 1}, 3)
    b = QSeries({0: 1}, 2)
    # q * (1 + O(q^2)) is only known to O(q^3); (1+O(q^2)) * q to O(q^3) too
    assert (a * b).order == 3
    assert (QSeries({0: 1}, 5) * QSeries({0: 1}, 2)).order == 2


def test_errors():
    s = QSeries({0: 1, 1: 2}, 3)
    with pytest.raises(TruncationError):
        s.coefficient(3)
    with pytest.raises(LatticeError):
        s.coefficient(Fraction(1, 48))
    with pytest.raises(LatticeError):
        QSeries({Fraction(1, 5): 1}, 2, 24)
    with pytest.raises(NonInvertibleError):
        series_inv(QSeries({1: 1}, 3))
    with pytest.raises(TruncationError):
        s.truncate(4)
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(DivergentProductError):
        product_expand([(0, 0, -1, 1)], 3)


def test_rendering():
    s = QSeries({0: 1, 1: -24, 2: -72}, 10)
    assert str(s) == "1 - 24q - 72q^2 + O(q^10)"
    assert str(QSeries({Fraction(1, 2): Fraction(1, 16)}, 1)) == "(1/16)q^{1/2} + O(q)"
    assert str(QSeries.zero(3)) == "O(q^3)"


def test_json_roundtrip():
    s = QSeries({0: 1, Fraction(3, 8): Fraction(-7, 3)}, Fraction(5, 2))
    assert QSeries.from_json(s.to_json()) == s


def test_product_expand_euler_function():
    # prod (1 - q^n): pentagonal number theorem
    s = product_expand([(0, 1, -1, 1)], 16)
    expect = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1}
    assert s == QSeries(expect, 16)


def test_product_expand_generalized_binomial():
    # prod (1 - q^n)^-1 counts partitions
    s = product_expand([(0, 1, -1, -1)], 10)
    assert [s.coefficient(n) for n in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    assert coefficient_at(s, 9) == 30

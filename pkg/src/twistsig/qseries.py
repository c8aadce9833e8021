"""Truncated q-series with exact rational coefficients.

A :class:`QSeries` is a finite sum ``sum c_e q^e`` together with a truncation
order ``N``: every coefficient with ``e < N`` is known exactly and nothing is
claimed at or above ``N``.  Exponents live on the lattice ``(1/L) Z`` with
``L`` the lattice denominator (24 unless stated otherwise), which holds the
``q^{1/2}`` of the level-2 forms and the ``q^{1/8}`` of the theta prefactors.

Only nonnegative exponents occur.  Values are immutable.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Tuple, Union

from .errors import (
    DivergentProductError,
    LatticeError,
    NonInvertibleError,
    TruncationError,
)

__all__ = [
    "DEFAULT_LATTICE",
    "DEFAULT_ORDER",
    "QSeries",
    "as_rational",
    "format_rational",
    "series_add",
    "series_mul",
    "series_inv",
    "series_pow",
    "coefficient_at",
    "product_expand",
]

DEFAULT_LATTICE = 24
DEFAULT_ORDER = 10

RationalLike = Union[int, Fraction, str]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: every quantity in this package is exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _lattice_of(x: Fraction) -> int:
    return x.denominator


class QSeries:
    """Exact truncated series in ``q`` on a fractional exponent lattice."""

    __slots__ = ("_terms", "_order", "_lattice")

    def __init__(
        self,
        terms: Mapping[RationalLike, RationalLike] | None = None,
        order: RationalLike = DEFAULT_ORDER,
        lattice: int = DEFAULT_LATTICE,
    ):
        order = as_rational(order)
        if lattice < 1:
            raise ValueError("lattice denominator must be a positive integer")
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        clean = {}
        for e, c in (terms or {}).items():
            e = as_rational(e)
            c = as_rational(c)
            if e < 0:
                raise ValueError(f"negative exponent {e} (Laurent tails are unsupported)")
            if (e * lattice).denominator != 1:
                raise LatticeError(f"exponent {e} is not on the lattice (1/{lattice})Z")
            if c and e < order:
                clean[e] = clean.get(e, 0) + c
        self._terms = {e: c for e, c in sorted(clean.items()) if c}
        self._order = order
        self._lattice = lattice

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, c: RationalLike, order: RationalLike = DEFAULT_ORDER,
                 lattice: int = DEFAULT_LATTICE) -> "QSeries":
        return cls({0: c}, order, lattice)

    @classmethod
    def monomial(cls, c: RationalLike, exponent: RationalLike,
                 order: RationalLike = DEFAULT_ORDER,
                 lattice: int | None = None) -> "QSeries":
        exponent = as_rational(exponent)
        if lattice is None:
            lattice = lcm(DEFAULT_LATTICE, exponent.denominator)
        return cls({exponent: c}, order, lattice)

    @classmethod
    def zero(cls, order: RationalLike = DEFAULT_ORDER,
             lattice: int = DEFAULT_LATTICE) -> "QSeries":
        return cls({}, order, lattice)

    # -- accessors --------------------------------------------------------------

    @property
    def order(self) -> Fraction:
        return self._order

    @property
    def lattice(self) -> int:
        return self._lattice

    @property
    def terms(self) -> dict:
        """Copy of the nonzero coefficients, keyed by exponent, ascending."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list:
        return list(self._terms)

    def valuation(self) -> Fraction:
        """Lowest exponent with a nonzero coefficient (the order if none is known)."""
        return next(iter(self._terms), self._order)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, e: RationalLike) -> Fraction:
        e = as_rational(e)
        if e >= self._order:
            raise TruncationError(
                f"coefficient of q^{format_rational(e)} requested but series is only "
                f"known below q^{format_rational(self._order)}")
        if (e * self._lattice).denominator != 1:
            raise LatticeError(f"exponent {e} is not on the lattice (1/{self._lattice})Z")
        return self._terms.get(e, Fraction(0))

    def truncate(self, order: RationalLike) -> "QSeries":
        order = as_rational(order)
        if order > self._order:
            raise TruncationError("cannot raise the truncation order of a series")
        return QSeries(self._terms, order, self._lattice)

    def with_lattice(self, lattice: int) -> "QSeries":
        return QSeries(self._terms, self._order, lattice)

    def lattice_points(self) -> Iterable[Fraction]:
        """All lattice exponents strictly below the truncation order."""
        k = 0
        while True:
            e = Fraction(k, self._lattice)
            if e >= self._order:
                return
            yield e
            k += 1

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        return QSeries.constant(as_rational(other), self._order, self._lattice)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return QSeries({e: -c for e, c in self._terms.items()}, self._order, self._lattice)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return series_add(self, other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return series_mul(self, other)
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return QSeries({e: c * v for e, v in self._terms.items()}, self._order, self._lattice)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return series_mul(self, series_inv(other))
        c = as_rational(other)
        if c == 0:
            raise NonInvertibleError("division by zero scalar")
        return self * (1 / c)

    def __pow__(self, e: int):
        return series_pow(self, e)

    # -- comparison / rendering ---------------------------------------------------

    def __eq__(self, other):
        # The lattice is a container property; two series are equal when they
        # certify the same coefficients to the same order.
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._terms == other._terms

    def __hash__(self):
        return hash((self._order, tuple(self._terms.items())))

    def agrees_with(self, other: "QSeries", order: RationalLike | None = None) -> bool:
        """True if both series have identical coefficients below ``order``.

        ``order`` defaults to the smaller of the two truncation orders.
        """
        bound = min(self._order, other._order)
        if order is not None:
            order = as_rational(order)
            if order > bound:
                raise TruncationError(
                    f"cannot compare below q^{format_rational(order)}: "
                    f"only known below q^{format_rational(bound)}")
            bound = order
        return self.truncate(bound) == other.truncate(bound)

    def __repr__(self):
        return f"QSeries({self})"

    def __str__(self):
        return render_text(self)

    def to_json(self) -> dict:
        return {
            "lattice": self._lattice,
            "order": format_rational(self._order),
            "terms": [[format_rational(e), format_rational(c)] for e, c in self._terms.items()],
        }

    @classmethod
    def from_json(cls, doc: Mapping | str) -> "QSeries":
        if isinstance(doc, str):
            doc = json.loads(doc)
        terms = {as_rational(e): as_rational(c) for e, c in doc["terms"]}
        return cls(terms, as_rational(doc["order"]), int(doc.get("lattice", DEFAULT_LATTICE)))


def _render_power(e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "q"
    if e.denominator == 1:
        return f"q^{e.numerator}"
    return f"q^{{{e.numerator}/{e.denominator}}}"


def render_text(s: QSeries) -> str:
    """Human rendering, e.g. ``1 - 24q - 72q^2 + O(q^10)``."""
    parts = []
    for e, c in s.items():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        power = _render_power(e)
        if not power:
            body = format_rational(mag)
        elif mag == 1:
            body = power
        elif mag.denominator == 1:
            body = f"{mag.numerator}{power}"
        else:
            body = f"({format_rational(mag)}){power}"
        parts.append((sign, body))
    tail = f"O({_render_power(s.order) or '1'})"
    if not parts:
        return tail
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return f"{out} + {tail}"


# -- operations ---------------------------------------------------------------


def series_add(a: QSeries, b: QSeries, scalar: RationalLike = 1) -> QSeries:
    """``a + scalar*b`` with truncation at the smaller order."""
    scalar = as_rational(scalar)
    lattice = lcm(a.lattice, b.lattice)
    order = min(a.order, b.order)
    out = dict(a._terms)
    if scalar:
        for e, c in b._terms.items():
            out[e] = out.get(e, 0) + scalar * c
    return QSeries(out, order, lattice)


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product.

    The result is certified below ``min(order(a) + val(b), order(b) + val(a))``:
    an unknown coefficient of one factor first contributes at that exponent.
    """
    lattice = lcm(a.lattice, b.lattice)
    order = min(a.order + b.valuation(), b.order + a.valuation())
    out: dict = {}
    for ea, ca in a._terms.items():
        if ea >= order:
            break
        for eb, cb in b._terms.items():
            e = ea + eb
            if e >= order:
                break
            out[e] = out.get(e, 0) + ca * cb
    return QSeries(out, order, lattice)


def series_inv(a: QSeries) -> QSeries:
    """Multiplicative inverse; needs a nonzero constant term."""
    if a.order <= 0:
        raise TruncationError("series carries no certified coefficients")
    a0 = a._terms.get(Fraction(0), Fraction(0))
    if a0 == 0:
        raise NonInvertibleError("series with vanishing constant term is not invertible")
    inv0 = 1 / a0
    tail = [(e, c) for e, c in a._terms.items() if e > 0]
    out = {Fraction(0): inv0}
    for e in a.lattice_points():
        if e == 0:
            continue
        acc = Fraction(0)
        for f, c in tail:
            if f > e:
                break
            prev = out.get(e - f)
            if prev:
                acc += c * prev
        if acc:
            out[e] = -inv0 * acc
    return QSeries(out, a.order, a.lattice)


def series_pow(a: QSeries, e: int) -> QSeries:
    """Integer power by repeated squaring (inverting first when ``e < 0``)."""
    if not isinstance(e, int) or isinstance(e, bool):
        raise TypeError("exponent must be an integer")
    if e < 0:
        return series_pow(series_inv(a), -e)
    result = QSeries.constant(1, a.order, a.lattice)
    base = a
    while e:
        if e & 1:
            result = series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


def coefficient_at(a: QSeries, e: RationalLike) -> Fraction:
    return a.coefficient(e)


def _binomial_series(exponent: int, n_terms: int) -> list:
    """Coefficients of ``(1 + x)^exponent`` up to ``x^(n_terms-1)``."""
    coeffs = [Fraction(1)]
    for k in range(1, n_terms):
        coeffs.append(coeffs[-1] * (exponent - k + 1) / k)
    return coeffs


ProductTerm = Tuple[RationalLike, RationalLike, int, int]


def product_expand(terms: Sequence[ProductTerm], order: RationalLike,
                   lattice: int | None = None) -> QSeries:
    """Expand ``prod_t prod_{j>=1} (1 + sign_t q^(shift_t + step_t j))^(exponent_t)``.

    Each entry of ``terms`` is ``(shift, step, sign, exponent)``.  Factors whose
    exponent ``shift + step*j`` reaches ``order`` contribute nothing below it
    and are skipped.
    """
    order = as_rational(order)
    parsed = []
    lat = DEFAULT_LATTICE if lattice is None else lattice
    for shift, step, sign, exponent in terms:
        shift, step = as_rational(shift), as_rational(step)
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if step <= 0 or shift + step <= 0:
            raise DivergentProductError(
                f"factor 1 {'+' if sign > 0 else '-'} q^({shift} + {step} j) is not 1 + O(q^>0)")
        if lattice is None:
            lat = lcm(lat, shift.denominator, step.denominator)
        parsed.append((shift, step, sign, int(exponent)))

    result = QSeries.constant(1, order, lat)
    for shift, step, sign, exponent in parsed:
        j = 1
        while shift + step * j < order:
            d = shift + step * j
            n_terms = int(order / d) + 2
            coeffs = _binomial_series(exponent, n_terms)
            factor = QSeries(
                {d * k: c * sign ** k for k, c in enumerate(coeffs) if d * k < order},
                order, lat)
            result = series_mul(result, factor)
            j += 1
    return result

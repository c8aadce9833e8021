"""Named modular forms as q-series, and exact fits against weight-12 bases.

Theta-null numbering follows the convention used throughout this package:
``theta1`` carries the ``2 q^{1/8}`` prefactor, ``theta2`` and ``theta3`` are
the half-integer-exponent products differing by the sign of ``q^{j-1/2}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .errors import InconsistencyError, TruncationError, TwistSigError
from .qseries import (
    DEFAULT_ORDER,
    QSeries,
    RationalLike,
    as_rational,
    format_rational,
    product_expand,
    series_add,
)

__all__ = [
    "SL2Z", "GAMMA_0_2", "GAMMA_UPPER_0_2", "QUASI_SL2Z",
    "TATE_W12", "GAMMA02_W12", "GAMMA_0_2_W12",
    "ModularForm", "BasisFit",
    "bernoulli_number", "divisor_sum",
    "eisenstein_series", "discriminant_series", "theta_null_series",
    "delta_epsilon_series", "named_form", "FORM_NAMES",
    "fit_weight12_sl2z", "fit_weight12_gamma_upper0_2", "fit_weight12_gamma_lower0_2",
    "gamma_upper0_2_basis", "gamma_lower0_2_basis", "transport_gamma02",
]

SL2Z = "SL2Z"
GAMMA_0_2 = "Gamma_0(2)"
GAMMA_UPPER_0_2 = "Gamma^0(2)"
QUASI_SL2Z = "quasi-SL2Z"

TATE_W12 = "tate_w12"
GAMMA02_W12 = "gamma02_w12"          # Gamma^0(2): (8 delta2)^(6-2r) eps2^r
GAMMA_0_2_W12 = "gamma_0_2_w12"      # Gamma_0(2): (8 delta1)^(6-2r) eps1^r


@dataclass(frozen=True)
class ModularForm:
    """A q-expansion tagged with weight and group.

    The tags are metadata supplied by the constructor; nothing here proves
    modularity.
    """

    weight: int
    group: str
    expansion: QSeries

    def __str__(self):
        return str(self.expansion)


@dataclass(frozen=True)
class BasisFit:
    basis_tag: str
    coefficients: tuple
    verified_order: Fraction
    in_span: bool
    residual: QSeries = field(compare=False, repr=False)

    @property
    def first_residual_exponent(self) -> Fraction | None:
        """Lowest exponent at which the residual is nonzero, if any."""
        return None if self.residual.is_zero() else self.residual.valuation()

    def to_json(self) -> dict:
        return {
            "basis": self.basis_tag,
            "coefficients": [format_rational(c) for c in self.coefficients],
            "in_span": self.in_span,
            "verified_order": format_rational(self.verified_order),
        }


# -- arithmetic helpers ---------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0, with B_1 = -1/2.
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli_number(n: int) -> Fraction:
    """Even Bernoulli number ``B_n`` (``B_2 = 1/6``, ``B_4 = -1/30``)."""
    if not isinstance(n, int) or n < 2 or n % 2:
        raise ValueError(f"bernoulli_number expects an even integer >= 2, got {n!r}")
    return _bernoulli_table(n)[n]


def divisor_sum(n: int, power: int, predicate=None) -> int:
    """``sum d^power`` over divisors ``d`` of ``n`` with ``predicate(d)`` true."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0 and (predicate is None or predicate(d)):
            total += d ** power
    return total


def _integer_range(order: Fraction):
    n = 1
    while n < order:
        yield n
        n += 1


# -- named forms -------------------------------------------------------------------


def eisenstein_series(k: int, order: RationalLike = DEFAULT_ORDER) -> ModularForm:
    """``E_{2k} = 1 - (4k / B_{2k}) sum sigma_{2k-1}(n) q^n``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    order = as_rational(order)
    factor = -Fraction(4 * k) / bernoulli_number(2 * k)
    terms = {0: 1}
    for n in _integer_range(order):
        terms[n] = factor * divisor_sum(n, 2 * k - 1)
    group = QUASI_SL2Z if k == 1 else SL2Z
    return ModularForm(2 * k, group, QSeries(terms, order))


def _discriminant_product(order: Fraction) -> QSeries:
    eta24 = product_expand([(0, 1, -1, 24)], order)
    return QSeries.monomial(1, 1, order) * eta24


def discriminant_series(order: RationalLike = DEFAULT_ORDER) -> ModularForm:
    """``Delta``, built as ``(E4^3 - E6^2)/1728`` and cross-checked against ``q prod (1-q^n)^24``."""
    order = as_rational(order)
    e4 = eisenstein_series(2, order).expansion
    e6 = eisenstein_series(3, order).expansion
    tate = series_add(e4 ** 3, e6 ** 2, -1) / 1728
    prod = _discriminant_product(order)
    if tate != prod:
        raise InconsistencyError("Delta: Eisenstein and product constructions disagree")
    return ModularForm(12, SL2Z, tate)


def theta_null_series(j: int, order: RationalLike = DEFAULT_ORDER) -> QSeries:
    """``theta_j(0, tau)`` for ``j`` in 1, 2, 3."""
    order = as_rational(order)
    if j == 1:
        prod = product_expand([(0, 1, -1, 1), (0, 1, 1, 2)], order)
        return QSeries.monomial(2, Fraction(1, 8), order) * prod
    if j == 2:
        return product_expand([(0, 1, -1, 1), (Fraction(-1, 2), 1, -1, 2)], order)
    if j == 3:
        return product_expand([(0, 1, -1, 1), (Fraction(-1, 2), 1, 1, 2)], order)
    raise ValueError(f"theta index must be 1, 2 or 3 (theta(0, tau) vanishes); got {j!r}")


def _odd(d: int) -> bool:
    return d % 2 == 1


def _divisor_sum_closed_form(which: str, order: Fraction) -> QSeries:
    terms = {}
    if which == "delta1":
        terms[0] = Fraction(1, 4)
        for n in _integer_range(order):
            terms[n] = 6 * divisor_sum(n, 1, _odd)
    elif which == "eps1":
        terms[0] = Fraction(1, 16)
        for n in _integer_range(order):
            terms[n] = sum((-1) ** d * d ** 3 for d in range(1, n + 1) if n % d == 0)
    elif which == "delta2":
        terms[0] = Fraction(-1, 8)
        n = 1
        while Fraction(n, 2) < order:
            terms[Fraction(n, 2)] = -3 * divisor_sum(n, 1, _odd)
            n += 1
    elif which == "eps2":
        n = 1
        while Fraction(n, 2) < order:
            terms[Fraction(n, 2)] = divisor_sum(n, 3, lambda d, n=n: (n // d) % 2 == 1)
            n += 1
    return QSeries(terms, order)


_DELTA_EPS = {"delta1": (2, GAMMA_0_2), "eps1": (4, GAMMA_0_2),
              "delta2": (2, GAMMA_UPPER_0_2), "eps2": (4, GAMMA_UPPER_0_2)}


@lru_cache(maxsize=64)
def _delta_epsilon_cached(which: str, order: Fraction) -> ModularForm:
    t1, t2, t3 = (theta_null_series(j, order) for j in (1, 2, 3))
    if which == "delta1":
        s = (t2 ** 4 + t3 ** 4) / 8
    elif which == "eps1":
        s = t2 ** 4 * t3 ** 4 / 16
    elif which == "delta2":
        s = -(t1 ** 4 + t3 ** 4) / 8
    else:
        s = t1 ** 4 * t3 ** 4 / 16
    s = s.truncate(order)
    closed = _divisor_sum_closed_form(which, order)
    if s != closed:
        raise InconsistencyError(f"{which}: theta-product and divisor-sum expansions disagree")
    weight, group = _DELTA_EPS[which]
    return ModularForm(weight, group, s)


def delta_epsilon_series(which: str, order: RationalLike = DEFAULT_ORDER) -> ModularForm:
    """One of ``delta1``, ``eps1``, ``delta2``, ``eps2`` from theta-null products."""
    if which not in _DELTA_EPS:
        raise ValueError(f"unknown form {which!r}; expected one of {sorted(_DELTA_EPS)}")
    return _delta_epsilon_cached(which, as_rational(order))


FORM_NAMES = ("E2", "E4", "E6", "delta_disc", "theta1", "theta2", "theta3",
              "delta1", "eps1", "delta2", "eps2")


def named_form(name: str, order: RationalLike = DEFAULT_ORDER) -> QSeries:
    """Expansion of a form by its command-line name."""
    order = as_rational(order)
    if name in ("E2", "E4", "E6"):
        return eisenstein_series(int(name[1]) // 2, order).expansion
    if name == "delta_disc":
        return discriminant_series(order).expansion
    if name in ("theta1", "theta2", "theta3"):
        return theta_null_series(int(name[-1]), order)
    if name in _DELTA_EPS:
        return delta_epsilon_series(name, order).expansion
    raise ValueError(f"unknown form {name!r}; expected one of {', '.join(FORM_NAMES)}")


# -- basis fits ---------------------------------------------------------------------


def _require_integer_support(s: QSeries):
    for e in s.exponents():
        if e.denominator != 1:
            raise TwistSigError(f"series has a fractional exponent q^{e}; expected SL2(Z) support")


def fit_weight12_sl2z(s: QSeries) -> BasisFit:
    """Write ``s = m E4^3 + n Delta`` and certify the residual to ``s.order``."""
    if s.order < 3:
        raise TruncationError("SL2(Z) weight-12 fit needs truncation order >= 3")
    _require_integer_support(s)
    order = s.order
    m = s.coefficient(0)
    n = s.coefficient(1) - 720 * m
    e4 = eisenstein_series(2, order).expansion
    fitted = e4 ** 3 * m + discriminant_series(order).expansion * n
    residual = s - fitted
    return BasisFit(TATE_W12, (m, n), order, residual.is_zero(), residual)


@lru_cache(maxsize=16)
def gamma_upper0_2_basis(order: Fraction) -> tuple:
    """``(8 delta2)^(6-2r) eps2^r`` for ``r = 0..3``."""
    d = delta_epsilon_series("delta2", order).expansion * 8
    e = delta_epsilon_series("eps2", order).expansion
    return tuple((d ** (6 - 2 * r) * e ** r).truncate(order) for r in range(4))


@lru_cache(maxsize=16)
def gamma_lower0_2_basis(order: Fraction) -> tuple:
    """``(8 delta1)^(6-2r) eps1^r`` for ``r = 0..3``."""
    d = delta_epsilon_series("delta1", order).expansion * 8
    e = delta_epsilon_series("eps1", order).expansion
    return tuple((d ** (6 - 2 * r) * e ** r).truncate(order) for r in range(4))


def fit_weight12_gamma_upper0_2(s: QSeries) -> BasisFit:
    """Fit ``s = sum_r h_r (8 delta2)^(6-2r) eps2^r``.

    Basis element ``r`` starts at ``q^{r/2}`` with leading coefficient 1, so the
    system is solved by forward substitution on the first four half-integer
    coefficients.
    """
    if s.order < 2:
        raise TruncationError("Gamma^0(2) weight-12 fit needs truncation order >= 2")
    order = s.order
    basis = gamma_upper0_2_basis(order)
    h = []
    for r in range(4):
        e = Fraction(r, 2)
        target = s.coefficient(e) - sum(h[j] * basis[j].coefficient(e) for j in range(r))
        h.append(target / basis[r].coefficient(e))
    residual = s
    for hr, b in zip(h, basis):
        residual = series_add(residual, b, -hr)
    return BasisFit(GAMMA02_W12, tuple(h), order, residual.is_zero(), residual)


def _solve_exact(matrix: list, rhs: list) -> list:
    """Gauss-Jordan elimination over the rationals."""
    n = len(rhs)
    a = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise InconsistencyError("singular basis matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def fit_weight12_gamma_lower0_2(s: QSeries) -> BasisFit:
    """Fit ``s = sum_r c_r (8 delta1)^(6-2r) eps1^r`` from the ``q^0..q^3`` coefficients.

    Four integer-exponent coefficients determine a weight-12 form on
    Gamma_0(2), so the 4x4 system is nonsingular.
    """
    if s.order < 4:
        raise TruncationError("Gamma_0(2) weight-12 fit needs truncation order >= 4")
    _require_integer_support(s)
    order = s.order
    basis = gamma_lower0_2_basis(order)
    matrix = [[basis[r].coefficient(i) for r in range(4)] for i in range(4)]
    c = _solve_exact(matrix, [s.coefficient(i) for i in range(4)])
    residual = s
    for cr, b in zip(c, basis):
        residual = series_add(residual, b, -cr)
    return BasisFit(GAMMA_0_2_W12, tuple(c), order, residual.is_zero(), residual)


def transport_gamma02(h: Sequence[RationalLike], order: RationalLike = DEFAULT_ORDER) -> QSeries:
    """``2^-12 sum_r h_r (8 delta1)^(6-2r) eps1^r``: the Gamma_0(2) partner of a Gamma^0(2) fit."""
    if len(h) != 4:
        raise ValueError("transport expects exactly four coefficients")
    order = as_rational(order)
    basis = gamma_lower0_2_basis(order)
    out = QSeries.zero(order)
    for hr, b in zip(h, basis):
        out = series_add(out, b, as_rational(hr))
    return out / 4096

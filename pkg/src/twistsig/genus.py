"""q-series of virtual bundles and the genera built from them.

A :class:`BundleStream` is a truncated power series in ``q^{1/2}`` whose
coefficients are virtual bundles (Chern characters).  The Witten bundle
``Theta = (x)_{n>=1} S_{q^n}(T~)`` and the level-two bundles ``Theta_1``,
``Theta_2`` (for ``V = TM`` and ``(a, b)`` in ``{(0, 1), (1, 0)}``) are
expanded factor by factor, using ``S_t = 1 / Lambda_{-t}`` and
``Lambda_t(E - C^r) = Lambda_t(E) (1 + t)^{-r}``.

Pairing a stream with A-hat or L-hat and integrating gives the Witten genus,
``R_1``, ``R_2`` and their ``(1, 0)`` siblings as exact q-series.  For string
manifolds the ``E_2``-exponential corrections are 1, which is the only case
modelled here.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Union

from .charring import (
    BundleChar,
    FactorShape,
    PClass,
    _normalize_tables,
    _ring,
    _weighted_degree,
    ahat_class,
    exterior_powers,
    lhat_class,
    pclass_inv,
    power_operation,
    tangent_char,
    trivial_bundle,
)
from .errors import SchemaError, ShapeMismatchError, TruncationError, TwistSigError
from .manifolds import ManifoldSpec
from .qseries import QSeries, RationalLike, as_rational, format_rational

__all__ = [
    "THETA1", "THETA2", "BundleStream", "theta_stream", "liu_wang_stream", "genus_pairing",
    "witten_genus", "r1_series", "r2_series", "lw10_series",
    "twisted_signature", "dirac_index", "parse_twist", "integrate_class",
]

THETA1 = "Theta1"
THETA2 = "Theta2"


class BundleStream:
    """Truncated series ``sum_e B_e q^e`` with virtual-bundle coefficients."""

    __slots__ = ("shape", "lattice", "_terms", "order")

    def __init__(self, shape, terms, order: RationalLike, lattice: int = 2):
        self.shape = FactorShape.of(shape)
        self.order = as_rational(order)
        self.lattice = lattice
        clean = {}
        for e, c in terms.items():
            e = as_rational(e)
            if isinstance(c, BundleChar):
                c = c.ch
            if c.shape != self.shape:
                raise ShapeMismatchError(f"coefficient shape {c.shape} vs stream shape {self.shape}")
            if (e * lattice).denominator != 1:
                raise ValueError(f"exponent {e} off the lattice (1/{lattice})Z")
            if e < self.order and not c.is_zero():
                clean[e] = clean[e] + c if e in clean else c
        self._terms = {e: c for e, c in sorted(clean.items()) if not c.is_zero()}

    @classmethod
    def one(cls, shape, order, lattice: int = 2) -> "BundleStream":
        shape = FactorShape.of(shape)
        return cls(shape, {0: PClass.constant(shape, 1)}, order, lattice)

    def exponents(self) -> list:
        return list(self._terms)

    def items(self):
        return self._terms.items()

    def valuation(self) -> Fraction:
        return next(iter(self._terms), self.order)

    def ch(self, e: RationalLike) -> PClass:
        e = as_rational(e)
        if e >= self.order:
            raise TruncationError(f"stream only known below q^{format_rational(self.order)}")
        return self._terms.get(e, PClass.zero(self.shape))

    def coefficient(self, e: RationalLike) -> BundleChar:
        return BundleChar.from_ch(self.ch(e))

    def __mul__(self, other: "BundleStream") -> "BundleStream":
        if self.shape != other.shape:
            raise ShapeMismatchError(f"shape {self.shape} vs {other.shape}")
        order = min(self.order + other.valuation(), other.order + self.valuation())
        out: dict = {}
        for ea, ca in self._terms.items():
            if ea >= order:
                break
            for eb, cb in other._terms.items():
                e = ea + eb
                if e >= order:
                    break
                out[e] = out[e] + ca * cb if e in out else ca * cb
        return BundleStream(self.shape, out, order, lcm(self.lattice, other.lattice))

    def inverse(self) -> "BundleStream":
        c0 = self._terms.get(Fraction(0))
        if c0 is None:
            raise TwistSigError("stream with vanishing constant term is not invertible")
        inv0 = pclass_inv(c0)
        tail = [(e, c) for e, c in self._terms.items() if e > 0]
        out = {Fraction(0): inv0}
        k = 1
        while Fraction(k, self.lattice) < self.order:
            e = Fraction(k, self.lattice)
            acc = None
            for f, c in tail:
                if f > e:
                    break
                prev = out.get(e - f)
                if prev is not None:
                    acc = c * prev if acc is None else acc + c * prev
            if acc is not None and not acc.is_zero():
                out[e] = -(inv0 * acc)
            k += 1
        return BundleStream(self.shape, out, self.order, self.lattice)

    def __eq__(self, other):
        if not isinstance(other, BundleStream):
            return NotImplemented
        return (self.shape == other.shape and self.order == other.order
                and self._terms == other._terms)

    def __repr__(self):
        parts = [f"q^{format_rational(e)}: {c}" for e, c in self._terms.items()]
        return f"BundleStream({self.shape}, order={format_rational(self.order)}, {{{'; '.join(parts)}}})"


# -- building blocks -------------------------------------------------------------------


def _from_t_polynomial(shape, coeffs, sign: int, step: Fraction, order: Fraction) -> BundleStream:
    """``sum_k coeffs[k] (sign q^step)^k`` as a stream."""
    terms = {}
    for k, c in enumerate(coeffs):
        e = step * k
        if e >= order:
            break
        terms[e] = c * (sign ** k)
    return BundleStream(shape, terms, order, lcm(2, step.denominator))


def _binomial_stream(shape, exponent: int, sign: int, step: Fraction, order: Fraction) -> BundleStream:
    """``(1 + sign q^step)^exponent`` with constant coefficients."""
    coeffs = [Fraction(1)]
    k = 1
    while step * k < order:
        coeffs.append(coeffs[-1] * (exponent - k + 1) / k)
        k += 1
    return _from_t_polynomial(shape, [PClass.constant(shape, c) for c in coeffs], sign, step, order)


@lru_cache(maxsize=None)
def _lambda_chars(shape: FactorShape, n: int) -> tuple:
    return tuple(b.ch for b in exterior_powers(tangent_char(shape), n))


def _lambda_t(shape: FactorShape, sign: int, step: Fraction, order: Fraction) -> BundleStream:
    """``Lambda_t(T_C M)`` at ``t = sign q^step``."""
    n = int(order / step) + 1
    return _from_t_polynomial(shape, _lambda_chars(shape, n), sign, step, order)


def _lambda_reduced(shape: FactorShape, sign: int, step: Fraction, order: Fraction) -> BundleStream:
    """``Lambda_t(T~) = Lambda_t(T) (1 + t)^{-rank}`` at ``t = sign q^step``."""
    rank = shape.dimension
    return _lambda_t(shape, sign, step, order) * _binomial_stream(shape, -rank, sign, step, order)


def _symmetric_reduced(shape: FactorShape, step: Fraction, order: Fraction) -> BundleStream:
    """``S_t(T~) = (1 - t)^rank / Lambda_{-t}(T)`` at ``t = q^step``."""
    rank = shape.dimension
    return _lambda_t(shape, -1, step, order).inverse() * _binomial_stream(shape, rank, -1, step, order)


def _tensor_over(shape, order, builder, shift: Fraction) -> BundleStream:
    """``(x)_{j>=1} builder(shift + j)`` truncated at ``order``."""
    out = BundleStream.one(shape, order)
    j = 1
    while shift + j < order:
        out = out * builder(shift + j)
        j += 1
    return out


@lru_cache(maxsize=None)
def _theta(shape: FactorShape, order: Fraction) -> BundleStream:
    return _tensor_over(shape, order, lambda d: _symmetric_reduced(shape, d, order), Fraction(0))


def theta_stream(shape, order: RationalLike) -> BundleStream:
    """``Theta(T_C M) = (x)_{n>=1} S_{q^n}(T~)``."""
    return _theta(FactorShape.of(shape), as_rational(order))


@lru_cache(maxsize=None)
def _lw(which: str, a: int, b: int, shape: FactorShape, order: Fraction) -> BundleStream:
    half = Fraction(-1, 2)
    integral = lambda: _tensor_over(shape, order, lambda d: _lambda_reduced(shape, 1, d, order), Fraction(0))
    plus_half = lambda: _tensor_over(shape, order, lambda d: _lambda_reduced(shape, 1, d, order), half)
    minus_half = lambda: _tensor_over(shape, order, lambda d: _lambda_reduced(shape, -1, d, order), half)
    out = _theta(shape, order)
    if (which, a, b) == (THETA1, 0, 1):
        return out * plus_half() * minus_half()
    if (which, a, b) == (THETA2, 0, 1):
        return out * integral() * plus_half()
    if (which, a, b) == (THETA1, 1, 0):
        return out * integral()
    if (which, a, b) == (THETA2, 1, 0):
        return out * minus_half()
    raise AssertionError("unreachable")


def liu_wang_stream(which: str, a: int, b: int, shape, order: RationalLike) -> BundleStream:
    """``Theta_1`` or ``Theta_2`` with ``V = TM`` for ``(a, b)`` in ``{(0, 1), (1, 0)}``."""
    if which not in (THETA1, THETA2):
        raise ValueError(f"which must be {THETA1!r} or {THETA2!r}")
    if (a, b) not in ((0, 1), (1, 0)):
        raise TwistSigError(f"(a, b) = ({a}, {b}) is not supported; only (0, 1) and (1, 0)")
    return _lw(which, a, b, FactorShape.of(shape), as_rational(order))


# -- pairing ---------------------------------------------------------------------------------


def _klass(kind: str, shape: FactorShape) -> PClass:
    if kind == "ahat":
        return ahat_class(shape)
    if kind == "lhat":
        return lhat_class(shape)
    raise ValueError(f"weight class must be 'ahat' or 'lhat', got {kind!r}")


def _table_key(m: ManifoldSpec) -> tuple:
    return tuple((f.dim, tuple(sorted(f.numbers.items()))) for f in m.factors)


@lru_cache(maxsize=256)
def _weights(kind: str, key: tuple) -> dict:
    """``mu -> integral(class * mu)`` for every monomial ``mu`` of the ring."""
    shape = FactorShape(tuple(d for d, _ in key))
    tables = _normalize_tables(shape, [dict(items) for _, items in key])
    bounds = [d // 4 for d in shape.dims]
    ring = _ring(shape)
    klass = _klass(kind, shape)
    weights: dict = {}
    for nu, c in klass.items():
        row = ring.table[nu]
        for mu, prod_mono in row.items():
            if any(_weighted_degree(f) != k for f, k in zip(prod_mono, bounds)):
                continue
            value = c
            for i, (f, table) in enumerate(zip(prod_mono, tables)):
                if f not in table:
                    raise SchemaError(f"factor {i + 1} lacks a Pontryagin number")
                value *= table[f]
            weights[mu] = weights.get(mu, 0) + value
    return weights


def integrate_class(kind: str, x: Union[PClass, BundleChar], m: ManifoldSpec) -> Fraction:
    """``integral_M class * x`` for ``class`` in ``{"ahat", "lhat"}``."""
    ch = x.ch if isinstance(x, BundleChar) else x
    if ch.shape != m.shape:
        raise ShapeMismatchError(f"class over {ch.shape} paired with manifold of shape {m.shape}")
    weights = _weights(kind, _table_key(m))
    return sum((c * weights.get(mu, 0) for mu, c in ch.items()), Fraction(0))


def genus_pairing(weight_class: str, stream: BundleStream, m: ManifoldSpec,
                  order: RationalLike | None = None) -> QSeries:
    """``sum_e q^e integral_M class * ch(stream[e])``."""
    if stream.shape != m.shape:
        raise ShapeMismatchError(f"stream over {stream.shape} vs manifold {m.shape}")
    order = stream.order if order is None else as_rational(order)
    if order > stream.order:
        raise TruncationError("pairing order exceeds the stream's truncation")
    terms = {e: integrate_class(weight_class, c, m) for e, c in stream.items() if e < order}
    return QSeries(terms, order, lcm(24, stream.lattice))


def witten_genus(m: ManifoldSpec, order: RationalLike = 6) -> QSeries:
    """``integral Ahat ch(Theta)``; a modular form only when ``m`` is string."""
    return genus_pairing("ahat", theta_stream(m.shape, order), m)


def r1_series(m: ManifoldSpec, order: RationalLike = 6) -> QSeries:
    """``R_1 = integral Ahat ch(Theta_1(T, T, 0, 1))`` (string case)."""
    return genus_pairing("ahat", liu_wang_stream(THETA1, 0, 1, m.shape, order), m)


def r2_series(m: ManifoldSpec, order: RationalLike = 6) -> QSeries:
    """``R_2 = integral Lhat ch(Theta_2(T, T, 0, 1))`` (string case)."""
    return genus_pairing("lhat", liu_wang_stream(THETA2, 0, 1, m.shape, order), m)


def lw10_series(which: str, m: ManifoldSpec, order: RationalLike = 6) -> QSeries:
    """The ``(a, b) = (1, 0)`` pair: ``Theta1`` paired with L-hat, ``Theta2`` with A-hat."""
    kind = "lhat" if which == THETA1 else "ahat"
    return genus_pairing(kind, liu_wang_stream(which, 1, 0, m.shape, order), m)


# -- twists ---------------------------------------------------------------------------------

_ATOMS = ("L2T", "S2T", "TxT", "TT", "T", "one", "1")
_TERM_RE = re.compile(r"^(\d*)\s*\*?\s*(L2T|S2T|TxT|TT|T|one)?$")


def _atom(name: str, shape: FactorShape) -> BundleChar:
    t = tangent_char(shape)
    if name in ("one", "1"):
        return trivial_bundle(shape, 1)
    if name == "T":
        return t
    if name == "L2T":
        return power_operation("exterior", 2, t)
    if name == "S2T":
        return power_operation("symmetric", 2, t)
    if name in ("TxT", "TT"):
        return t * t
    raise SchemaError(f"unknown twist atom {name!r}")


def parse_twist(expr: Union[str, BundleChar], shape) -> BundleChar:
    """Evaluate a twist such as ``"L2T-47T+900"`` to a virtual bundle over ``shape``.

    Atoms: ``1``/``one``, ``T``, ``L2T``, ``S2T``, ``TxT``/``TT``; integer
    multipliers; ``+`` and ``-``.
    """
    shape = FactorShape.of(shape)
    if isinstance(expr, BundleChar):
        if expr.shape != shape:
            raise ShapeMismatchError("twist lives over a different shape")
        return expr
    text = expr.replace(" ", "")
    if not text:
        raise SchemaError("empty twist expression")
    pieces = re.findall(r"[+-]?[^+-]+", text)
    if "".join(pieces) != text:
        raise SchemaError(f"cannot parse twist {expr!r}")
    total = trivial_bundle(shape, 0)
    for piece in pieces:
        sign = -1 if piece[0] == "-" else 1
        body = piece.lstrip("+-")
        m = _TERM_RE.match(body)
        if not m or not body:
            raise SchemaError(f"cannot parse twist term {piece!r} in {expr!r}")
        digits, atom = m.groups()
        n = int(digits) if digits else 1
        term = _atom(atom, shape) if atom else trivial_bundle(shape, 1)
        total = total + term * (sign * n)
    return total


def twisted_signature(m: ManifoldSpec, twist: Union[str, BundleChar] = "1") -> Fraction:
    """``Sig(M, V) = integral Lhat ch(V)``."""
    return integrate_class("lhat", parse_twist(twist, m.shape), m)


def dirac_index(m: ManifoldSpec, twist: Union[str, BundleChar] = "1") -> Fraction:
    """``Ind(D (x) V) = integral Ahat ch(V)``; integral only for spin inputs."""
    return integrate_class("ahat", parse_twist(twist, m.shape), m)

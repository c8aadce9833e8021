"""Pontryagin-class polynomials over a product of manifolds, and the lambda-ring
operations on virtual bundles needed to build genera.

Each factor ``N_i`` of dimension ``d_i`` carries its own Pontryagin variables
``p_1, ..., p_{d_i/4}``.  A monomial is kept only if its degree in every
factor's variables is at most ``d_i``: integration over the product kills the
rest, so the ring is truncated factor by factor.

Virtual bundles are pairs ``(rank, ch)``.  Only Chern characters of
complexified real bundles (and their lambda-ring combinations) occur, so
every component sits in degree ``4j``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Mapping, Sequence, Union

from .errors import NonInvertibleError, SchemaError, ShapeMismatchError, TwistSigError
from .qseries import RationalLike, as_rational, format_rational

__all__ = [
    "FactorShape", "PClass", "BundleChar",
    "pclass_mul", "pclass_exp", "pclass_inv",
    "pontryagin", "power_sum",
    "multiplicative_sequence", "ahat_class", "lhat_class", "tangent_char",
    "trivial_bundle", "adams_operation", "power_operation",
    "exterior_powers", "symmetric_powers", "bundle_combine",
    "integrate_top", "format_monomial", "parse_monomial", "top_monomials",
]


# -- shapes and monomials -------------------------------------------------------


@dataclass(frozen=True)
class FactorShape:
    """Dimensions of the factors of a product manifold (each divisible by 4)."""

    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a shape needs at least one factor")
        for d in dims:
            if d < 4 or d % 4:
                raise ValueError(f"factor dimension {d} is not a positive multiple of 4")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def of(cls, shape: Union["FactorShape", Sequence[int]]) -> "FactorShape":
        return shape if isinstance(shape, FactorShape) else cls(tuple(shape))

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    def __len__(self):
        return len(self.dims)

    def __str__(self):
        return "[" + ",".join(map(str, self.dims)) + "]"


def _weighted_degree(exps: tuple) -> int:
    return sum((j + 1) * e for j, e in enumerate(exps))


def _factor_monomials(dim: int) -> list:
    """Exponent vectors ``(e_1, .., e_k)`` with ``sum j e_j <= dim/4``."""
    k = dim // 4
    out = []

    def rec(j, budget, acc):
        if j > k:
            out.append(tuple(acc))
            return
        for e in range(budget // j + 1):
            rec(j + 1, budget - e * j, acc + [e])

    rec(1, k, [])
    out.sort(key=lambda m: (_weighted_degree(m), tuple(reversed(m))))
    return out


def top_monomials(dim: int) -> list:
    """Exponent vectors of the top-degree Pontryagin monomials of a ``dim``-manifold."""
    return [m for m in _factor_monomials(dim) if _weighted_degree(m) == dim // 4]


def format_monomial(exps: tuple) -> str:
    """``(2, 0)`` -> ``"p1^2"``, ``(1, 1)`` -> ``"p1*p2"``, ``(0, 0)`` -> ``"1"``."""
    parts = []
    for j, e in enumerate(exps, start=1):
        if e == 1:
            parts.append(f"p{j}")
        elif e > 1:
            parts.append(f"p{j}^{e}")
    return "*".join(parts) or "1"


_FACTOR_RE = re.compile(r"^p(\d+)(?:\^(\d+))?$")


def parse_monomial(key: str, dim: int) -> tuple:
    """Inverse of :func:`format_monomial` for a factor of dimension ``dim``."""
    k = dim // 4
    exps = [0] * k
    key = key.replace(" ", "")
    if key != "1":
        for piece in key.split("*"):
            m = _FACTOR_RE.match(piece)
            if not m:
                raise SchemaError(f"cannot parse monomial {key!r}")
            j, e = int(m.group(1)), int(m.group(2) or 1)
            if not 1 <= j <= k:
                raise SchemaError(f"p{j} does not exist in dimension {dim}")
            exps[j - 1] += e
    if _weighted_degree(tuple(exps)) * 4 > dim:
        raise SchemaError(f"monomial {key!r} exceeds dimension {dim}")
    return tuple(exps)


class _RingData:
    """Monomial basis and multiplication table for one shape."""

    def __init__(self, shape: FactorShape):
        self.shape = shape
        per_factor = [_factor_monomials(d) for d in shape.dims]
        self.monomials = [tuple(m) for m in product(*per_factor)]
        self.one = tuple(tuple(0 for _ in range(d // 4)) for d in shape.dims)
        bounds = [d // 4 for d in shape.dims]
        table = {}
        for a in self.monomials:
            row = {}
            for b in self.monomials:
                c = tuple(tuple(x + y for x, y in zip(fa, fb)) for fa, fb in zip(a, b))
                if all(_weighted_degree(fc) <= k for fc, k in zip(c, bounds)):
                    row[b] = c
            table[a] = row
        self.table = table

    @staticmethod
    def degree(mono: tuple) -> int:
        return 4 * sum(_weighted_degree(f) for f in mono)


@lru_cache(maxsize=None)
def _ring(shape: FactorShape) -> _RingData:
    return _RingData(shape)


# -- PClass ------------------------------------------------------------------------


class PClass:
    """Element of the truncated Pontryagin ring of a shape, with exact coefficients."""

    __slots__ = ("shape", "_terms")

    def __init__(self, shape, terms: Mapping[tuple, RationalLike] | None = None):
        self.shape = FactorShape.of(shape)
        ring = _ring(self.shape)
        clean = {}
        for mono, c in (terms or {}).items():
            c = as_rational(c)
            if not c:
                continue
            if mono not in ring.table:
                # above the truncation in some factor: identically zero
                if self._valid_shape(mono):
                    continue
                raise ValueError(f"monomial {mono!r} does not fit shape {self.shape}")
            clean[mono] = clean.get(mono, 0) + c
        self._terms = {m: c for m, c in clean.items() if c}

    def _valid_shape(self, mono) -> bool:
        return (isinstance(mono, tuple) and len(mono) == len(self.shape.dims)
                and all(len(f) == d // 4 for f, d in zip(mono, self.shape.dims)))

    # constructors
    @classmethod
    def constant(cls, shape, c: RationalLike) -> "PClass":
        shape = FactorShape.of(shape)
        return cls(shape, {_ring(shape).one: c})

    @classmethod
    def zero(cls, shape) -> "PClass":
        return cls(shape)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def constant_term(self) -> Fraction:
        return self._terms.get(_ring(self.shape).one, Fraction(0))

    def degree_part(self, degree: int) -> "PClass":
        return PClass(self.shape, {m: c for m, c in self._terms.items()
                                   if _RingData.degree(m) == degree})

    def coefficient(self, mono: tuple) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "PClass"):
        if self.shape != other.shape:
            raise ShapeMismatchError(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, PClass):
            try:
                other = PClass.constant(self.shape, as_rational(other))
            except TypeError:
                return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return PClass(self.shape, out)

    __radd__ = __add__

    def __neg__(self):
        return PClass(self.shape, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PClass):
            return pclass_mul(self, other)
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return PClass(self.shape, {m: c * v for m, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / as_rational(other))

    def __pow__(self, n: int):
        out = PClass.constant(self.shape, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, PClass):
            return self.shape == other.shape and self._terms == other._terms
        try:
            return self == PClass.constant(self.shape, as_rational(other))
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.shape, frozenset(self._terms.items())))

    def __repr__(self):
        return f"PClass({self.shape}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        multi = len(self.shape) > 1
        pieces = []
        for mono in sorted(self._terms, key=lambda m: (_RingData.degree(m), m)):
            c = self._terms[mono]
            names = []
            for i, f in enumerate(mono, start=1):
                name = format_monomial(f)
                if name != "1":
                    names.append(f"{name}[{i}]" if multi else name)
            body = "*".join(names)
            mag = abs(c)
            if not body:
                text = format_rational(mag)
            elif mag == 1:
                text = body
            elif mag.denominator == 1:
                text = f"{mag.numerator}{body}"
            else:
                text = f"({format_rational(mag)}){body}"
            pieces.append(("-" if c < 0 else "+", text))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out


def pclass_mul(a: PClass, b: PClass) -> PClass:
    """Cup product with per-factor truncation."""
    a._check(b)
    table = _ring(a.shape).table
    out: dict = {}
    for ma, ca in a._terms.items():
        row = table[ma]
        for mb, cb in b._terms.items():
            mc = row.get(mb)
            if mc is not None:
                out[mc] = out.get(mc, 0) + ca * cb
    return PClass(a.shape, out)


def pclass_exp(n: PClass) -> PClass:
    """``exp`` of a class with vanishing constant term (a finite sum)."""
    if n.constant_term():
        raise TwistSigError("exp is only defined here for classes without constant term")
    out = PClass.constant(n.shape, 1)
    power = PClass.constant(n.shape, 1)
    k = 1
    while True:
        power = power * n / k
        if power.is_zero():
            return out
        out = out + power
        k += 1


def pclass_inv(a: PClass) -> PClass:
    """Inverse of a class with nonzero constant term."""
    c0 = a.constant_term()
    if not c0:
        raise NonInvertibleError("class with vanishing constant term is not invertible")
    nil = 1 - a / c0
    out = PClass.constant(a.shape, 1)
    power = PClass.constant(a.shape, 1)
    while True:
        power = power * nil
        if power.is_zero():
            return out / c0
        out = out + power


# -- characteristic classes ---------------------------------------------------------


def pontryagin(shape, factor: int, j: int) -> PClass:
    """``p_j`` of factor ``factor`` (both 1-based)."""
    shape = FactorShape.of(shape)
    dim = shape.dims[factor - 1]
    if not 1 <= j <= dim // 4:
        return PClass.zero(shape)
    mono = list(_ring(shape).one)
    exps = [0] * (dim // 4)
    exps[j - 1] = 1
    mono[factor - 1] = tuple(exps)
    return PClass(shape, {tuple(mono): 1})


@lru_cache(maxsize=None)
def _power_sums(shape: FactorShape, factor: int) -> tuple:
    """Power sums ``s_k`` of the squared Chern roots of one factor, via Newton."""
    k_max = shape.dims[factor - 1] // 4
    p = [None] + [pontryagin(shape, factor, j) for j in range(1, k_max + 1)]
    s = [None]
    for k in range(1, k_max + 1):
        acc = PClass.zero(shape)
        for i in range(1, k):
            acc = acc + p[i] * s[k - i] * (-1) ** (i - 1)
        acc = acc + p[k] * ((-1) ** (k - 1) * k)
        s.append(acc)
    return tuple(s)


def power_sum(shape, factor: int, k: int) -> PClass:
    """``sum_i x_i^{2k}`` over the Chern roots ``+-x_i`` of factor ``factor``."""
    shape = FactorShape.of(shape)
    s = _power_sums(shape, factor)
    return s[k] if k < len(s) else PClass.zero(shape)


def _series_log(g: Sequence[Fraction], n: int) -> list:
    """Coefficients ``c_1..c_n`` of ``log g(z)`` for ``g_0 = 1``."""
    c = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        gk = g[k] if k < len(g) else Fraction(0)
        acc = sum((j * c[j] * (g[k - j] if k - j < len(g) else 0) for j in range(1, k)), Fraction(0))
        c[k] = gk - acc / k
    return c


def _series_div(num: Sequence[Fraction], den: Sequence[Fraction], n: int) -> list:
    out = []
    for k in range(n + 1):
        acc = num[k] - sum((out[j] * den[k - j] for j in range(k)), Fraction(0))
        out.append(acc / den[0])
    return out


def multiplicative_sequence(shape, factor: int, series: Sequence[RationalLike]) -> PClass:
    """``prod_i g(x_i^2)`` over the Chern-root pairs of one factor.

    ``series`` holds the coefficients of ``g(z)`` with ``g(0) = 1``.  The
    product is ``exp(sum_k c_k s_k)`` with ``c_k`` the coefficients of
    ``log g`` and ``s_k`` the power sums of the squared roots.
    """
    shape = FactorShape.of(shape)
    g = [as_rational(x) for x in series]
    if g[0] != 1:
        raise ValueError("multiplicative sequence needs g(0) = 1")
    k_max = shape.dims[factor - 1] // 4
    c = _series_log(g, k_max)
    log = PClass.zero(shape)
    for k in range(1, k_max + 1):
        log = log + power_sum(shape, factor, k) * c[k]
    return pclass_exp(log)


def _sinh_over_y(n: int) -> list:
    # sinh(y)/y with y^2 = z/4
    return [Fraction(1, factorial(2 * k + 1) * 4 ** k) for k in range(n + 1)]


def _cosh(n: int) -> list:
    return [Fraction(1, factorial(2 * k) * 4 ** k) for k in range(n + 1)]


def ahat_series(n: int) -> list:
    """``(x/2) / sinh(x/2)`` as a series in ``z = x^2``."""
    one = [Fraction(1)] + [Fraction(0)] * n
    return _series_div(one, _sinh_over_y(n), n)


def lhat_series(n: int) -> list:
    """``(x/2) / tanh(x/2)`` as a series in ``z = x^2``."""
    return _series_div(_cosh(n), _sinh_over_y(n), n)


def ahat_class(shape) -> PClass:
    """Total A-hat class of the product: ``prod_roots (x/2)/sinh(x/2)``."""
    return _ahat_class(FactorShape.of(shape))


@lru_cache(maxsize=None)
def _ahat_class(shape: FactorShape) -> PClass:
    out = PClass.constant(shape, 1)
    for i, d in enumerate(shape.dims, start=1):
        out = out * multiplicative_sequence(shape, i, ahat_series(d // 4))
    return out


def lhat_class(shape) -> PClass:
    """Total L-hat class: ``prod_roots x / tanh(x/2)``, i.e. ``2^(d/2)`` times the
    normalized ``(x/2)/tanh(x/2)`` sequence on a ``d``-dimensional factor."""
    return _lhat_class(FactorShape.of(shape))


@lru_cache(maxsize=None)
def _lhat_class(shape: FactorShape) -> PClass:
    out = PClass.constant(shape, 1)
    for i, d in enumerate(shape.dims, start=1):
        out = out * multiplicative_sequence(shape, i, lhat_series(d // 4)) * 2 ** (d // 2)
    return out


# -- virtual bundles -----------------------------------------------------------------


@dataclass(frozen=True)
class BundleChar:
    """A virtual bundle, remembered only through its rank and Chern character."""

    rank: int
    ch: PClass

    def __post_init__(self):
        if self.ch.constant_term() != self.rank:
            raise ValueError(f"degree-0 part of ch ({self.ch.constant_term()}) "
                             f"differs from rank {self.rank}")

    @classmethod
    def from_ch(cls, ch: PClass) -> "BundleChar":
        r = ch.constant_term()
        if r.denominator != 1:
            raise TwistSigError(f"non-integral rank {r}")
        return cls(int(r), ch)

    @property
    def shape(self) -> FactorShape:
        return self.ch.shape

    def __add__(self, other):
        return bundle_combine("add", self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return bundle_combine("subtract", self, other)

    def __rsub__(self, other):
        return bundle_combine("subtract", trivial_bundle(self.shape, other), self)

    def __mul__(self, other):
        if isinstance(other, BundleChar):
            return bundle_combine("tensor", self, other)
        return bundle_combine("scale", self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return bundle_combine("scale", self, -1)

    def __str__(self):
        return f"rank {self.rank}: {self.ch}"


def trivial_bundle(shape, n: int = 1) -> BundleChar:
    """``C^n`` (``n`` may be negative)."""
    shape = FactorShape.of(shape)
    return BundleChar(int(n), PClass.constant(shape, n))


@lru_cache(maxsize=None)
def _tangent_char(shape: FactorShape) -> BundleChar:
    ch = PClass.constant(shape, shape.dimension)
    for i, d in enumerate(shape.dims, start=1):
        for k in range(1, d // 4 + 1):
            # e^x + e^-x summed over root pairs: 2 s_k / (2k)! in degree 4k
            ch = ch + power_sum(shape, i, k) * Fraction(2, factorial(2 * k))
    return BundleChar(shape.dimension, ch)


def tangent_char(shape) -> BundleChar:
    """``ch(T_C M) = sum_i ch(T_C N_i)`` with rank ``sum dims``."""
    return _tangent_char(FactorShape.of(shape))


def adams_operation(k: int, v: BundleChar) -> BundleChar:
    """``psi^k``: multiplies the degree-``4j`` part of ``ch`` by ``k^(2j)``."""
    if k < 1:
        raise ValueError("Adams operations are indexed by positive integers")
    terms = {m: c * k ** (_RingData.degree(m) // 2) for m, c in v.ch.items()}
    return BundleChar(v.rank, PClass(v.shape, terms))


def _powers(v: BundleChar, n: int, sign: int) -> list:
    """Newton recursion; ``sign = -1`` for exterior powers, ``+1`` for symmetric."""
    psi = [None] + [adams_operation(i, v).ch for i in range(1, n + 1)]
    out = [PClass.constant(v.shape, 1)]
    for m in range(1, n + 1):
        acc = PClass.zero(v.shape)
        for i in range(1, m + 1):
            term = out[m - i] * psi[i]
            acc = acc + (term if sign > 0 or i % 2 else -term)
        out.append(acc / m)
    return [BundleChar.from_ch(c) for c in out]


def exterior_powers(v: BundleChar, n: int) -> list:
    """``[Lambda^0 v, ..., Lambda^n v]``."""
    return _powers(v, n, -1)


def symmetric_powers(v: BundleChar, n: int) -> list:
    """``[S^0 v, ..., S^n v]``."""
    return _powers(v, n, 1)


def power_operation(kind: str, n: int, v: BundleChar) -> BundleChar:
    """``Lambda^n v`` (``kind="exterior"``) or ``S^n v`` (``kind="symmetric"``)."""
    if n < 0:
        raise ValueError("power operations need n >= 0")
    if kind == "exterior":
        return exterior_powers(v, n)[n]
    if kind == "symmetric":
        return symmetric_powers(v, n)[n]
    raise ValueError(f"unknown power operation {kind!r}")


def bundle_combine(op: str, a: BundleChar, b) -> BundleChar:
    """``add``/``subtract``/``tensor`` two bundles, or ``scale`` by an integer.

    Integers given as ``b`` to add/subtract/tensor stand for trivial bundles.
    """
    if op == "scale":
        if isinstance(b, BundleChar):
            raise TypeError("scale takes an integer")
        n = int(b)
        return BundleChar(a.rank * n, a.ch * n)
    if not isinstance(b, BundleChar):
        b = trivial_bundle(a.shape, int(b))
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape {a.shape} vs {b.shape}")
    if op == "add":
        return BundleChar(a.rank + b.rank, a.ch + b.ch)
    if op == "subtract":
        return BundleChar(a.rank - b.rank, a.ch - b.ch)
    if op == "tensor":
        return BundleChar(a.rank * b.rank, a.ch * b.ch)
    raise ValueError(f"unknown bundle operation {op!r}")


# -- integration -------------------------------------------------------------------------


def _normalize_tables(shape: FactorShape, numbers: Sequence[Mapping]) -> list:
    if len(numbers) != len(shape.dims):
        raise ShapeMismatchError(f"{len(numbers)} tables for {len(shape.dims)} factors")
    out = []
    for d, table in zip(shape.dims, numbers):
        norm = {}
        for key, value in table.items():
            mono = parse_monomial(key, d) if isinstance(key, str) else tuple(key)
            norm[mono] = as_rational(value)
        out.append(norm)
    return out


def integrate_top(c: PClass, numbers: Sequence[Mapping]) -> Fraction:
    """Evaluate ``c`` on the fundamental class of the product.

    ``numbers[i]`` maps top-degree monomials of factor ``i`` (as strings like
    ``"p1^2"`` or exponent tuples) to Pontryagin numbers.
    """
    tables = _normalize_tables(c.shape, numbers)
    bounds = [d // 4 for d in c.shape.dims]
    total = Fraction(0)
    for mono, coeff in c.items():
        if any(_weighted_degree(f) != k for f, k in zip(mono, bounds)):
            continue
        value = coeff
        for i, (f, table) in enumerate(zip(mono, tables)):
            if f not in table:
                raise SchemaError(f"factor {i + 1} has no Pontryagin number for {format_monomial(f)}")
            value *= table[f]
        total += value
    return total

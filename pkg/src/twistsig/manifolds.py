"""Manifolds as Pontryagin-number tables: catalog, products, 8-dimensional
closed forms, and JSON (de)serialization.

A manifold here is nothing more than its factor-wise Pontryagin numbers;
whether the data is realized by a smooth manifold is not checked.  The string
condition is invisible to rational data, so it is carried as a flag that must
be consistent with vanishing ``p1`` data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Mapping, Sequence

from .charring import FactorShape, format_monomial, parse_monomial, top_monomials
from .errors import SchemaError
from .modforms import ModularForm, bernoulli_number, eisenstein_series
from .qseries import DEFAULT_ORDER, RationalLike, as_rational

__all__ = [
    "Factor", "ManifoldSpec", "CATALOG_NAMES",
    "catalog_manifold", "derive_b8_table", "product_manifold",
    "oracle_8d", "product_sig_lambda2", "almost_parallelizable",
    "manifold_to_json", "manifold_from_json", "save_manifold", "load_manifold",
    "manifold_io", "string_product",
]


def _canonical_numbers(dim: int, numbers: Mapping) -> dict:
    out = {}
    for key, value in numbers.items():
        mono = parse_monomial(key, dim) if isinstance(key, str) else tuple(key)
        v = as_rational(value)
        if v.denominator != 1:
            raise SchemaError(f"Pontryagin number {key}={v} is not an integer")
        out[format_monomial(mono)] = int(v)
    return out


@dataclass(frozen=True)
class Factor:
    dim: int
    numbers: dict = field(hash=False)
    p1_vanishes: bool = False

    def __post_init__(self):
        if self.dim < 4 or self.dim % 4:
            raise SchemaError(f"factor dimension {self.dim} is not a positive multiple of 4")
        numbers = _canonical_numbers(self.dim, self.numbers)
        for mono in top_monomials(self.dim):
            key = format_monomial(mono)
            if key not in numbers:
                raise SchemaError(f"dimension-{self.dim} factor is missing Pontryagin number {key}")
        for key in numbers:
            if parse_monomial(key, self.dim) not in top_monomials(self.dim):
                raise SchemaError(f"{key} is not a top-degree monomial in dimension {self.dim}")
        if self.p1_vanishes:
            bad = [k for k, v in numbers.items() if v and parse_monomial(k, self.dim)[0]]
            if bad:
                raise SchemaError(f"factor claims p1 = 0 but has nonzero {', '.join(bad)}")
        object.__setattr__(self, "numbers", numbers)

    def number(self, key: str) -> int:
        return self.numbers[format_monomial(parse_monomial(key, self.dim))]


@dataclass(frozen=True)
class ManifoldSpec:
    name: str
    factors: tuple
    string: bool = False

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise SchemaError("a manifold needs at least one factor")
        if self.string and not all(f.p1_vanishes for f in factors):
            raise SchemaError(f"{self.name}: string flag set but some factor has p1 data")
        object.__setattr__(self, "factors", factors)

    @property
    def shape(self) -> FactorShape:
        return FactorShape(tuple(f.dim for f in self.factors))

    @property
    def dimension(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def numbers(self) -> list:
        """Per-factor Pontryagin tables in the form :func:`integrate_top` expects."""
        return [f.numbers for f in self.factors]

    def __str__(self):
        return self.name


# -- catalog -----------------------------------------------------------------------

CATALOG_NAMES = ("B8", "HP2", "M08")


def catalog_manifold(name: str) -> ManifoldSpec:
    """The Bott manifold ``B8``, quaternionic projective plane ``HP2``, and the
    Milnor-Kervaire plumbing ``M08``."""
    if name == "B8":
        return ManifoldSpec("B8", (Factor(8, {"p1^2": 896, "p2": 128}),), False)
    if name == "HP2":
        # p(HP2) = (1+u)^6 / (1+4u): p1 = 2u, p2 = 7u^2, u^2[HP2] = 1
        return ManifoldSpec("HP2", (Factor(8, {"p1^2": 4, "p2": 7}),), False)
    if name == "M08":
        return ManifoldSpec("M08", (Factor(8, {"p1^2": 0, "p2": 1440}, True),), True)
    raise SchemaError(f"unknown catalog manifold {name!r}; known: {', '.join(CATALOG_NAMES)}")


def derive_b8_table() -> tuple:
    """Solve ``Ahat = 1`` and ``Sig = 0`` for the Bott manifold's ``(p1^2, p2)``.

    ``Sig = 0`` forces ``p1^2 = 7 p2``; then ``(49 - 4) p2 = 5760``.
    """
    p2 = Fraction(5760, 7 * 7 - 4)
    p1sq = 7 * p2
    if (oracle_8d("ahat", (p1sq, p2)), oracle_8d("sig", (p1sq, p2))) != (1, 0):
        raise AssertionError("B8 table does not reproduce Ahat = 1, Sig = 0")
    return p1sq, p2


def product_manifold(specs: Sequence[ManifoldSpec]) -> ManifoldSpec:
    specs = list(specs)
    if not specs:
        raise SchemaError("product of an empty list of manifolds")
    if len(specs) == 1:
        return specs[0]
    factors = tuple(f for s in specs for f in s.factors)
    string = all(f.p1_vanishes for f in factors)
    return ManifoldSpec("x".join(s.name for s in specs), factors, string)


def string_product(ks: Sequence[int]) -> ManifoldSpec:
    """Product of 8-dimensional factors ``k M08`` (``p1 = 0``, ``p2 = 1440 k``)."""
    factors = []
    for k in ks:
        factors.append(ManifoldSpec(f"{k}M08", (Factor(8, {"p1^2": 0, "p2": 1440 * k}, True),), True))
    return product_manifold(factors)


# -- closed forms ------------------------------------------------------------------


def oracle_8d(which: str, table) -> Fraction:
    """Closed-form 8-dimensional characteristic numbers from ``(p1^2, p2)``.

    ``table`` is a pair or a mapping with keys ``"p1^2"`` and ``"p2"``.
    """
    if isinstance(table, Mapping):
        p1sq, p2 = as_rational(table["p1^2"]), as_rational(table["p2"])
    else:
        p1sq, p2 = (as_rational(x) for x in table)
    if which == "sig":
        return (7 * p2 - p1sq) / 45
    if which == "sig_T":
        return (112 * p1sq - 64 * p2) / 45
    if which == "sig_L2T":
        return (692 * p1sq + 196 * p2) / 45
    if which == "ahat":
        return (7 * p1sq - 4 * p2) / 5760
    raise ValueError(f"unknown 8-dimensional oracle {which!r}")


def product_sig_lambda2(factor_data: Sequence[Sequence[RationalLike]]) -> Fraction:
    """``Sig(prod N_i, Lambda^2 T)`` from per-factor ``(Sig, Sig_T, Sig_L2T)``.

    Uses ``Lambda^2(sum V_i) = sum Lambda^2 V_i + sum_{i<j} V_i (x) V_j`` and
    multiplicativity of L-hat.
    """
    data = [tuple(as_rational(x) for x in row) for row in factor_data]
    if not data:
        raise ValueError("need at least one factor")
    sig = [d[0] for d in data]
    total = Fraction(0)
    for i, d in enumerate(data):
        total += d[2] * prod(sig[:i] + sig[i + 1:])
    for i in range(len(data)):
        for j in range(i + 1, len(data)):
            rest = [s for p, s in enumerate(sig) if p not in (i, j)]
            total += data[i][1] * data[j][1] * prod(rest)
    return total


def almost_parallelizable(k: int, order: RationalLike = DEFAULT_ORDER):
    """Signature, A-hat genus and Witten genus of the plumbing ``M_0^{4k}``.

    Returns ``(sig, ahat, witten)``.  The numerator of ``B_{2k}/4k`` is taken
    in absolute value so that ``Sig(M_0^8) = 224``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    a_k = 1 if k % 2 == 0 else 2
    c = 2 ** (2 * k + 1) * (2 ** (2 * k - 1) - 1)
    numer = abs((bernoulli_number(2 * k) / (4 * k)).numerator)
    sig = Fraction(a_k * c * numer)
    ahat = -sig / c
    e = eisenstein_series(k, order)
    witten = ModularForm(e.weight, e.group, e.expansion * ahat)
    return sig, ahat, witten


# -- I/O ---------------------------------------------------------------------------------


def manifold_to_json(m: ManifoldSpec) -> dict:
    return {
        "name": m.name,
        "string": m.string,
        "factors": [
            {"dim": f.dim, "p1_vanishes": f.p1_vanishes,
             "numbers": {k: str(v) for k, v in f.numbers.items()}}
            for f in m.factors
        ],
    }


def manifold_from_json(doc) -> ManifoldSpec:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        name = doc["name"]
        string = doc["string"]
        raw = doc["factors"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"manifold document is missing field {exc}") from None
    if not isinstance(string, bool):
        raise SchemaError("'string' must be a boolean")
    factors = []
    for i, f in enumerate(raw):
        try:
            dim = int(f["dim"])
            numbers = {k: int(str(v)) for k, v in f["numbers"].items()}
            p1v = f.get("p1_vanishes", False)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"factor {i}: malformed entry ({exc})") from None
        if not isinstance(p1v, bool):
            raise SchemaError(f"factor {i}: 'p1_vanishes' must be a boolean")
        factors.append(Factor(dim, numbers, p1v))
    return ManifoldSpec(name, tuple(factors), string)


def save_manifold(m: ManifoldSpec, path) -> None:
    Path(path).write_text(json.dumps(manifold_to_json(m), indent=2) + "\n")


def load_manifold(path) -> ManifoldSpec:
    return manifold_from_json(Path(path).read_text())


def manifold_io(direction: str, payload):
    """``manifold_io("save", spec)`` -> document; ``manifold_io("load", doc)`` -> spec."""
    if direction == "save":
        return manifold_to_json(payload)
    if direction == "load":
        return manifold_from_json(payload)
    raise ValueError("direction must be 'load' or 'save'")

"""Exact rational inner products on the weight space and the lattice period D."""
from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from lieflow import exact

FUNDAMENTAL = "fundamental_weight_basis"
SIMPLE_ROOT = "simple_root_basis"

STANDARD = "standard_long_root_2"
KILLING = "killing_dual"
CUSTOM = "custom_scale"
UNIT_WEIGHT = "unit_weight"  # resolved to CUSTOM once the root system is known

Matrix = tuple[tuple[Fraction, ...], ...]


class NotRationalMetric(ValueError):
    pass


class BasisMismatch(ValueError):
    pass


def to_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction, refusing anything that is not certifiably rational."""
    if isinstance(x, bool):
        raise NotRationalMetric(f"not a rational metric: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise NotRationalMetric(f"not a rational metric: scale {x!r}") from None
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    # floats included: a float cannot certify that the intended scale is rational
    raise NotRationalMetric(f"not a rational metric: scale {x!r} must be an exact rational")


@dataclass(frozen=True)
class Normalization:
    tag: str = STANDARD
    scale: Fraction | None = None

    def __post_init__(self):
        if self.tag not in (STANDARD, KILLING, CUSTOM, UNIT_WEIGHT):
            raise ValueError(f"unknown normalization {self.tag!r}")
        if self.tag == CUSTOM:
            s = to_rational(self.scale)
            if s <= 0:
                raise ValueError("custom scale must be positive")
            object.__setattr__(self, "scale", s)

    @classmethod
    def parse(cls, text) -> "Normalization":
        if isinstance(text, Normalization):
            return text
        if text is None:
            return cls()
        t = str(text).strip()
        if t in ("standard", STANDARD):
            return cls(STANDARD)
        if t in ("killing", KILLING):
            return cls(KILLING)
        if t == "unit_weight":
            return cls(UNIT_WEIGHT)
        for prefix in ("scale:", "custom_scale:", "custom_scale("):
            if t.startswith(prefix):
                return cls(CUSTOM, to_rational(t[len(prefix):].rstrip(")")))
        raise ValueError(f"unknown normalization {text!r}")

    def label(self) -> str:
        if self.tag == CUSTOM:
            return f"{CUSTOM}({self.scale})"
        return self.tag


@dataclass(frozen=True)
class Weight:
    """Integer coordinates in a declared lattice basis."""

    coords: tuple[int, ...]
    basis: str = FUNDAMENTAL
    system: tuple[str, int] | None = None

    def __post_init__(self):
        c = tuple(int(v) for v in self.coords)
        if any(int(v) != v for v in self.coords):
            raise ValueError("weight coordinates must be integers")
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class GramForm:
    """Inner product in the simple-root basis; ``fundamental`` rows are w_i in that basis."""

    cartan_type: tuple[str, int]
    gram_simple: Matrix
    normalization: Normalization
    fundamental: Matrix
    _weight_gram: Matrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = self.gram_simple
        r = len(g)
        if any(len(row) != r for row in g):
            raise ValueError("gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(r) for j in range(r)):
            raise ValueError("gram matrix must be symmetric")
        if not all(m > 0 for m in exact.leading_minors(g)):
            raise ValueError("gram matrix must be positive definite")
        w = self.fundamental
        wg = tuple(
            tuple(sum(w[i][a] * g[a][b] * w[j][b] for a in range(r) for b in range(r)) for j in range(r))
            for i in range(r)
        )
        object.__setattr__(self, "_weight_gram", wg)

    @property
    def rank(self) -> int:
        return len(self.gram_simple)

    @property
    def weight_gram(self) -> Matrix:
        return self._weight_gram

    def root_coords(self, v: Weight) -> tuple[Fraction, ...]:
        if v.system is not None and v.system != self.cartan_type:
            raise BasisMismatch(f"weight of {v.system} paired with form of {self.cartan_type}")
        if len(v.coords) != self.rank:
            raise BasisMismatch(f"weight has {len(v.coords)} coordinates, form has rank {self.rank}")
        if v.basis == SIMPLE_ROOT:
            return tuple(Fraction(c) for c in v.coords)
        if v.basis == FUNDAMENTAL:
            r = self.rank
            return tuple(sum(v.coords[i] * self.fundamental[i][j] for i in range(r)) for j in range(r))
        raise BasisMismatch(f"basis {v.basis!r} is not convertible by the form; convert it first")

    def pair_root_coords(self, a: Sequence, b: Sequence) -> Fraction:
        g = self.gram_simple
        r = self.rank
        return sum((Fraction(a[i]) * g[i][j] * b[j] for i in range(r) for j in range(r)), Fraction(0))

    def pair_fundamental(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        g = self._weight_gram
        r = self.rank
        return sum((g[i][j] * a[i] * b[j] for i in range(r) for j in range(r)), Fraction(0))


def pairing(form: GramForm, a: Weight, b: Weight) -> Fraction:
    return form.pair_root_coords(form.root_coords(a), form.root_coords(b))


def lattice_period(form: GramForm, fundamental_weights: Iterable | None = None) -> int:
    """Least D with D<w_i,w_j> integral for all fundamental weights."""
    if fundamental_weights is None:
        entries = [x for row in form.weight_gram for x in row]
    else:
        ws = [tuple(Fraction(c) for c in w) for w in fundamental_weights]
        entries = [form.pair_root_coords(a, b) for a in ws for b in ws]
    for x in entries:
        if not isinstance(x, Fraction):
            raise NotRationalMetric("not a rational metric: non-rational pairing")
    return lcm(*(x.denominator for x in entries)) if entries else 1


def killing_scale(base: Matrix, roots: Sequence[Sequence[int]]) -> Fraction:
    """Scalar c with sum over roots of <l,a><m,a> = <l,m> for the form c*base."""
    r = len(base)
    lin = [[sum(base[i][k] * a[k] for k in range(r)) for i in range(r)] for a in roots]
    s = [[sum(v[i] * v[j] for v in lin) for j in range(r)] for i in range(r)]
    ratio = None
    for i in range(r):
        for j in range(r):
            if s[i][j] == 0:
                if base[i][j] != 0:
                    raise ValueError("root sum is not proportional to the base form")
                continue
            c = base[i][j] / s[i][j]
            if ratio is None:
                ratio = c
            elif c != ratio:
                raise ValueError("root sum is not proportional to the base form")
    return ratio


def scaled(base: Matrix, c: Fraction) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in base)

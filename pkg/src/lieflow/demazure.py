"""Exact polynomials on i b* with Weyl actions and BGG-Demazure divided differences.

Polynomials are functions of H = sum_j y_j alpha_j, i.e. the first ``rank``
variables are simple-root coordinates of the argument.  Optional trailing
variables carry a formal weight parameter lambda = sum_k l_k w_k; the Weyl
group and the Demazure operators never touch them.
"""
from __future__ import annotations

import threading
from math import comb
from collections import OrderedDict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from lieflow.rootsys import RootSystem, WeylElement

Monomial = tuple[int, ...]


class DivisibilityError(ArithmeticError):
    """f - s_alpha f was not divisible by <alpha, .>; this indicates an arithmetic bug."""


class NotAntiInvariant(ValueError):
    pass


class MultiPolynomial:
    """Sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None, nvars: int = 1):
        self.nvars = nvars
        self.terms: dict[Monomial, Fraction] = {}
        for mon, c in (terms or {}).items():
            if len(mon) != nvars:
                raise ValueError("monomial arity does not match nvars")
            if c:
                self.terms[tuple(mon)] = Fraction(c)

    # -- constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPolynomial":
        return cls({(0,) * nvars: Fraction(c)}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiPolynomial":
        return cls({tuple(int(k == i) for k in range(nvars)): Fraction(1)}, nvars)

    @classmethod
    def linear(cls, coeffs: Sequence, nvars: int | None = None) -> "MultiPolynomial":
        n = len(coeffs) if nvars is None else nvars
        return cls({tuple(int(k == i) for k in range(n)): Fraction(c) for i, c in enumerate(coeffs) if c}, n)

    # -- basic algebra --------------------------------------------------------
    def _check(self, other: "MultiPolynomial"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    def _lift(self, other) -> "MultiPolynomial":
        if isinstance(other, MultiPolynomial):
            self._check(other)
            return other
        return MultiPolynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return _raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return _raw({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPolynomial):
            c = Fraction(other)
            if not c:
                return MultiPolynomial(nvars=self.nvars)
            return _raw({m: c * v for m, v in self.terms.items()}, self.nvars)
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPolynomial(out, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return _raw({m: v / c for m, v in self.terms.items()}, self.nvars)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = MultiPolynomial.constant(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPolynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return self == MultiPolynomial.constant(other, self.nvars)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(m) if e)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    # -- inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, variables: Iterable[int] | None = None) -> int:
        """Total degree, optionally counted only in ``variables``; -1 for zero."""
        if not self.terms:
            return -1
        idx = range(self.nvars) if variables is None else list(variables)
        return max(sum(m[i] for i in idx) for m in self.terms)

    def min_degree(self, variables: Iterable[int] | None = None) -> int:
        if not self.terms:
            return -1
        idx = range(self.nvars) if variables is None else list(variables)
        return min(sum(m[i] for i in idx) for m in self.terms)

    def __call__(self, *point):
        """Evaluate; Fractions give an exact result, floats/complex a numeric one."""
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError("wrong number of arguments")
        pw = [dict() for _ in point]
        total = 0
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    p = pw[i].get(e)
                    if p is None:
                        p = pw[i][e] = point[i] ** e
                    v = v * p
            total = total + v
        return total

    # -- substitution ---------------------------------------------------------
    def substitute(self, images: Mapping[int, "MultiPolynomial"]) -> "MultiPolynomial":
        """Replace variable i by images[i] (same ring); other variables untouched."""
        if not images:
            return self
        powers: dict[int, list[MultiPolynomial]] = {i: [MultiPolynomial.constant(1, self.nvars)] for i in images}
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            rest = tuple(0 if i in images else e for i, e in enumerate(m))
            piece = {rest: c}
            for i in images:
                e = m[i]
                if not e:
                    continue
                pl = powers[i]
                while len(pl) <= e:
                    pl.append(pl[-1] * images[i])
                nxt: dict[Monomial, Fraction] = {}
                for m1, c1 in piece.items():
                    for m2, c2 in pl[e].terms.items():
                        k = tuple(a + b for a, b in zip(m1, m2))
                        nxt[k] = nxt.get(k, 0) + c1 * c2
                piece = nxt
            for k, v in piece.items():
                out[k] = out.get(k, 0) + v
        return MultiPolynomial(out, self.nvars)


def _raw(terms: dict, nvars: int) -> MultiPolynomial:
    p = MultiPolynomial.__new__(MultiPolynomial)
    p.nvars = nvars
    p.terms = terms
    return p


def divide_linear(g: MultiPolynomial, coeffs: Sequence[Fraction]) -> MultiPolynomial:
    """Exact quotient g / l for the linear form l = sum_k coeffs[k] x_k.

    Long division in one variable x_j with coeffs[j] != 0; every step lowers the
    x_j-degree, so a leftover term with zero x_j-degree means l does not divide g.
    """
    coeffs = [Fraction(c) for c in coeffs]
    j = next((k for k, c in enumerate(coeffs) if c), None)
    if j is None:
        raise ZeroDivisionError("division by the zero linear form")
    lj = coeffs[j]
    others = [(k, c) for k, c in enumerate(coeffs) if c and k != j]
    rem = dict(g.terms)
    quot: dict[Monomial, Fraction] = {}
    top = max((m[j] for m in rem), default=0)
    for level in range(top, 0, -1):
        for m in [m for m in rem if m[j] == level]:
            c = rem.pop(m)
            if not c:
                continue
            qm = m[:j] + (level - 1,) + m[j + 1:]
            qc = c / lj
            quot[qm] = quot.get(qm, 0) + qc
            for k, lk in others:
                nm = qm[:k] + (qm[k] + 1,) + qm[k + 1:]
                v = rem.get(nm, 0) - lk * qc
                if v:
                    rem[nm] = v
                else:
                    rem.pop(nm, None)
    if any(rem.values()):
        raise DivisibilityError("linear form does not divide the polynomial")
    return MultiPolynomial(quot, g.nvars)


# -- linear forms on i b* ------------------------------------------------------

def root_form_coeffs(rs: RootSystem, a: Sequence[int]) -> list[Fraction]:
    """Coefficients of <alpha, H> in the y variables for a root in simple-root coordinates."""
    g = rs.form.gram_simple
    r = rs.rank
    return [sum((a[i] * g[i][j] for i in range(r)), Fraction(0)) for j in range(r)]


def root_form(rs: RootSystem, a: Sequence[int], nparams: int = 0) -> MultiPolynomial:
    return MultiPolynomial.linear(root_form_coeffs(rs, a), rs.rank + nparams)


def weight_form(rs: RootSystem, c: Sequence[int], nparams: int = 0) -> MultiPolynomial:
    """<lambda, H> for lambda with fundamental coordinates c: sum_j c_j y_j |alpha_j|^2/2."""
    return MultiPolynomial.linear([Fraction(c[j]) * rs.simple_norms[j] / 2 for j in range(rs.rank)], rs.rank + nparams)


def formal_weight_form(rs: RootSystem) -> MultiPolynomial:
    """<lambda, H> with lambda = sum_k l_k w_k formal; variables (y_1..y_r, l_1..l_r)."""
    r = rs.rank
    n = 2 * r
    terms = {}
    for j in range(r):
        m = [0] * n
        m[j] = 1
        m[r + j] = 1
        terms[tuple(m)] = rs.simple_norms[j] / 2
    return MultiPolynomial(terms, n)


def d_det(rs: RootSystem, nparams: int = 0) -> MultiPolynomial:
    """Product of <alpha, .> over positive roots."""
    out = MultiPolynomial.constant(1, rs.rank + nparams)
    for a in rs.positive_roots:
        out = out * root_form(rs, a, nparams)
    return out


# -- Weyl action ----------------------------------------------------------------

def _matrix_images(rs: RootSystem, m, nvars: int) -> dict[int, MultiPolynomial]:
    """Images y_k -> sum_j m[k][j] y_j, skipping unchanged variables."""
    r = rs.rank
    images = {}
    for k in range(r):
        row = [int(m[k][j]) for j in range(r)]
        if row != [int(j == k) for j in range(r)]:
            images[k] = MultiPolynomial.linear(row, nvars)
    return images


def reflect_poly(rs: RootSystem, f: MultiPolynomial, s: WeylElement) -> MultiPolynomial:
    """(s f)(y) = f(s^-1 y)."""
    inv = rs.weyl_group()[rs.weyl_index(_inverse_matrix(s))]
    return f.substitute(_matrix_images(rs, rs.root_matrix(inv), f.nvars))


def _inverse_matrix(s: WeylElement):
    return np.rint(np.linalg.inv(s.array.astype(float))).astype(np.int64)


def _root_reflection_images(rs: RootSystem, a: Sequence[int], nvars: int) -> dict[int, MultiPolynomial]:
    """s_alpha y = y - (2<alpha,y>/<alpha,alpha>) alpha, an involution."""
    coeffs = root_form_coeffs(rs, a)
    scale = 2 / rs.form.pair_root_coords(a, a)
    images = {}
    for k in range(rs.rank):
        if a[k]:
            row = [Fraction(int(j == k)) - scale * a[k] * coeffs[j] for j in range(rs.rank)]
            images[k] = MultiPolynomial.linear(row, nvars)
    return images


def reflect_root(rs: RootSystem, f: MultiPolynomial, a: Sequence[int]) -> MultiPolynomial:
    return f.substitute(_root_reflection_images(rs, a, f.nvars))


def demazure(rs: RootSystem, f: MultiPolynomial, a: Sequence[int]) -> MultiPolynomial:
    """Delta_alpha f = (f - s_alpha f) / <alpha, .>."""
    g = f - reflect_root(rs, f, a)
    if g.is_zero():
        return MultiPolynomial(nvars=f.nvars)
    coeffs = root_form_coeffs(rs, a) + [Fraction(0)] * (f.nvars - rs.rank)
    return divide_linear(g, coeffs)


def delta_longest(rs: RootSystem, f: MultiPolynomial, word: Sequence[int] | None = None) -> MultiPolynomial:
    """Compose Delta_{alpha_i} along a reduced word of the longest element (rightmost first)."""
    if word is None:
        word = rs.longest_word()
    for i in reversed(word):
        if f.is_zero():
            break
        f = demazure(rs, f, rs.simple_roots[i])
    return f


def antisymmetrize(rs: RootSystem, h: MultiPolynomial) -> MultiPolynomial:
    out = MultiPolynomial(nvars=h.nvars)
    for s in rs.weyl_group():
        term = reflect_poly(rs, h, s)
        out = out + term if s.det == 1 else out - term
    return out


def is_anti_invariant(rs: RootSystem, f: MultiPolynomial) -> bool:
    return all(reflect_root(rs, f, a) == -f for a in rs.simple_roots)


def invariant_part(rs: RootSystem, f: MultiPolynomial) -> MultiPolynomial:
    """g = delta f / |W| with f = d_det * g, for anti-invariant f."""
    if not is_anti_invariant(rs, f):
        raise NotAntiInvariant("polynomial is not anti-invariant under the simple reflections")
    g = delta_longest(rs, f) / len(rs.weyl_group())
    if d_det(rs, f.nvars - rs.rank) * g != f:
        raise DivisibilityError("d_det * (delta f / |W|) does not reproduce f")
    return g


def power_sum(rs: RootSystem, c: Sequence[int], m: int) -> MultiPolynomial:
    """f_m = sum_s det(s) <s lambda, .>^m, an anti-invariant polynomial."""
    out = MultiPolynomial(nvars=rs.rank)
    for s in rs.weyl_group():
        term = weight_form(rs, s.apply(c)) ** m
        out = out + term if s.det == 1 else out - term
    return out


# delta(<lambda,.>^m) for fixed integral lambda, built incrementally in m
_CACHE_LOCK = threading.Lock()
_POWER_CACHE: "OrderedDict[tuple, MultiPolynomial]" = OrderedDict()
_POWER_CACHE_SIZE = 65536


def delta_power(rs: RootSystem, c: Sequence[int], m: int) -> MultiPolynomial:
    """delta(<lambda, .>^m); zero for m < |P|, homogeneous of degree m - |P| otherwise."""
    key = (rs.series, rs.rank, rs.normalization, tuple(int(x) for x in c), m)
    with _CACHE_LOCK:
        hit = _POWER_CACHE.get(key)
        if hit is not None:
            _POWER_CACHE.move_to_end(key)
            return hit
    if m < len(rs.positive_roots):
        val = MultiPolynomial(nvars=rs.rank)
    else:
        val = delta_longest(rs, weight_form(rs, c) ** m)
    with _CACHE_LOCK:
        _POWER_CACHE[key] = val
        while len(_POWER_CACHE) > _POWER_CACHE_SIZE:
            _POWER_CACHE.popitem(last=False)
    return val


def bgg_monomial(rs: RootSystem, lam: MultiPolynomial, c: Fraction, a: Sequence[int], m: int) -> MultiPolynomial:
    """Closed form of Delta_alpha(L^m) when s_alpha L = L - c <alpha, .>.

    Delta_alpha(L^m) = sum_{i>=1} (-1)^(i-1) binom(m,i) c^i A^(i-1) L^(m-i) with A = <alpha, .>.
    """
    A = root_form(rs, a, lam.nvars - rs.rank)
    out = MultiPolynomial(nvars=lam.nvars)
    for i in range(1, m + 1):
        out = out + (A ** (i - 1)) * (lam ** (m - i)) * ((-1) ** (i - 1) * comb(m, i) * Fraction(c) ** i)
    return out

"""Thin exact linear-algebra helpers over sympy, returning Fractions."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp


def to_sympy(m: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in m])


def from_sympy(m: sympy.Matrix) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(m.cols)) for i in range(m.rows))


def inverse(m):
    return from_sympy(to_sympy(m).inv())


def det(m) -> Fraction:
    d = to_sympy(m).det()
    return Fraction(int(d.p), int(d.q))


def leading_minors(m) -> list[Fraction]:
    s = to_sympy(m)
    out = []
    for k in range(1, s.rows + 1):
        d = s[:k, :k].det()
        out.append(Fraction(int(d.p), int(d.q)))
    return out


def smith(m: Sequence[Sequence[int]]):
    """Return (S, U, V) integer lists with S = U*m*V, U and V unimodular."""
    a = sympy.Matrix([[int(x) for x in row] for row in m])
    s, u, v = smith_normal_decomp(a, domain=sympy.ZZ)
    conv = lambda x: [[int(x[i, j]) for j in range(x.cols)] for i in range(x.rows)]
    return conv(s), conv(u), conv(v)


def int_inverse(m: Sequence[Sequence[int]]) -> list[list[int]]:
    inv = sympy.Matrix([[int(x) for x in row] for row in m]).inv()
    out = [[inv[i, j] for j in range(inv.cols)] for i in range(inv.rows)]
    if any(not x.is_integer for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def solve_integer(basis: Sequence[Sequence[int]], v: Sequence[int]):
    """Integer x with x @ basis == v (rows of ``basis`` independent), else None."""
    if not basis:
        return [] if all(c == 0 for c in v) else None
    b = sympy.Matrix([[int(x) for x in row] for row in basis])
    target = sympy.Matrix([[int(c) for c in v]])
    try:
        sol, params = b.T.gauss_jordan_solve(target.T)
    except ValueError:
        return None
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    xs = [sol[i, 0] for i in range(sol.rows)]
    if any(not x.is_integer for x in xs):
        return None
    return [int(x) for x in xs]

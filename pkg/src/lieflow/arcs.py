"""Major arcs: Dirichlet approximation of time, the dispersive envelope, the counting
estimate and Weyl-type exponential sums over rational lattices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import gcd, isqrt
from typing import Callable, Sequence

import numpy as np

from lieflow.exact import inverse
from lieflow.forms import to_rational
from lieflow.kernel import Cutoff

TWO_PI = 2 * math.pi


class DifferenceBoundError(ValueError):
    """The coefficient function failed the declared finite-difference bounds."""


def circle_distance(x) -> float | np.ndarray:
    """||x||: distance to the nearest integer."""
    v = np.abs(np.asarray(x, dtype=float) - np.round(x))
    return float(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True)
class RationalApproximation:
    a: int
    q: int
    distance: float
    N: int

    def __post_init__(self):
        if not (0 <= self.a < self.q) or gcd(self.a, self.q) != 1 or self.q > self.N:
            raise ValueError(f"invalid major-arc data a={self.a}, q={self.q}, N={self.N}")


def _convergents(x: Fraction):
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = x.numerator // x.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield h1, k1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def dirichlet_approx(t_unit: float, N: int) -> RationalApproximation:
    """Reduced a/q with q <= N and ||t - a/q|| < 1/(qN), from continued-fraction convergents.

    The first convergent meeting the arc condition is returned, so ties go to the smaller q.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    x = Fraction(t_unit) if not isinstance(t_unit, Fraction) else t_unit
    x = x - math.floor(x)
    best = None
    for p, q in _convergents(x):
        if q > N:
            break
        dist = abs(x - Fraction(p, q))
        dist = min(dist, 1 - dist)
        best = (p, q, dist)
        if dist * q * N < 1:
            break
    p, q, dist = best
    if dist * q * N >= 1:
        raise AssertionError("continued fractions failed to produce a major arc")
    p %= q
    return RationalApproximation(p, q, float(dist), N)


@dataclass(frozen=True)
class Envelope:
    """t -> N^d / (sqrt(q) (1 + N ||t/(2 pi D) - a/q||^(1/2)))^r."""

    N: int
    d: float
    r: int
    D: Fraction = Fraction(1)

    def unit_time(self, t: float) -> float:
        return (t / (TWO_PI * float(self.D))) % 1.0

    def approx(self, t: float) -> RationalApproximation:
        return dirichlet_approx(self.unit_time(t), self.N)

    def value(self, t: float, approx: RationalApproximation | None = None) -> float:
        ap = approx or self.approx(t)
        off = circle_distance(self.unit_time(t) - ap.a / ap.q)
        return self.N ** self.d / (math.sqrt(ap.q) * (1 + self.N * math.sqrt(off))) ** self.r


def envelope_value(env: Envelope, t: float, approx: RationalApproximation | None = None) -> float:
    return env.value(t, approx)


# -- counting estimate ---------------------------------------------------------------

@dataclass(frozen=True)
class CountingReport:
    N: int
    t: float
    a: int
    q: int
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs


def counting_lhs(N: int, ts: np.ndarray) -> np.ndarray:
    """sum_{|n| <= N} 1 / max(||n t||, 1/N)^2 for each t."""
    ts = np.asarray(ts, dtype=float).reshape(-1)
    n = np.arange(-N, N + 1)
    out = np.empty(len(ts))
    for i in range(0, len(ts), 256):
        block = ts[i:i + 256]
        d = np.maximum(circle_distance(np.multiply.outer(block, n)), 1.0 / N)
        out[i:i + 256] = np.sum(1.0 / d**2, axis=1)
    return out


def counting_sum_check(N: int, t_unit: float) -> CountingReport:
    if N < 2:
        raise ValueError("N must be >= 2")
    ap = dirichlet_approx(t_unit, N)
    lhs = float(counting_lhs(N, [t_unit])[0])
    off = circle_distance(t_unit - ap.a / ap.q)
    rhs = N**3 / (math.sqrt(ap.q) * (1 + N * math.sqrt(off))) ** 2
    return CountingReport(N, float(t_unit), ap.a, ap.q, lhs, rhs)


# -- Weyl sums -------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalLattice:
    """Z^r with a rational Gram matrix; D is the least positive integer making D*Gram integral."""

    gram: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_matrix(cls, m) -> "RationalLattice":
        return cls(tuple(tuple(to_rational(x) for x in row) for row in m))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def period(self) -> int:
        return math.lcm(*(x.denominator for row in self.gram for x in row))

    @property
    def gram_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])


def _ellipsoid_points(lat: RationalLattice, bound: float, center: np.ndarray) -> np.ndarray:
    """All n in Z^r with |n + center|^2 < bound (bounding box from the inverse Gram)."""
    ginv = inverse(lat.gram)
    r = lat.rank
    ranges = []
    for i in range(r):
        half = math.sqrt(bound * float(ginv[i][i])) + 1
        lo, hi = math.floor(-center[i] - half), math.ceil(-center[i] + half)
        ranges.append(np.arange(lo, hi + 1))
    grids = np.meshgrid(*ranges, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    y = pts + center
    n2 = np.einsum("ni,ij,nj->n", y, lat.gram_float, y)
    keep = n2 < bound
    pts, n2 = pts[keep], n2[keep]
    order = np.lexsort(tuple(pts[:, k] for k in reversed(range(r))) + (n2,))
    return pts[order]


def check_difference_bounds(
    f: Callable[[np.ndarray], np.ndarray],
    rank: int,
    N: int,
    A: float,
    c: float,
    box: int = 4,
    max_order: int = 3,
    samples: int = 64,
    seed: int = 0,
) -> float:
    """Spot-check |D_{i1}...D_{in} f| <= c N^(A-n) for n <= max_order on |n_i| <= box*N.

    Returns the largest observed |D...f| / N^(A-n); raises DifferenceBoundError above c.
    """
    rng = np.random.default_rng(seed)
    pts = rng.integers(-box * N, box * N + 1, size=(samples, rank))
    corners = np.array(list(iproduct((-box * N, box * N), repeat=rank)))
    pts = np.vstack([pts, corners, np.zeros((1, rank), dtype=np.int64)])
    worst = 0.0
    for order in range(max_order + 1):
        for idx in iproduct(range(rank), repeat=order):
            # D_{i1}...D_{in} f(x) = sum over subsets S of (-1)^(n-|S|) f(x + sum_{k in S} e_{ik})
            val = np.zeros(len(pts))
            for mask in iproduct((0, 1), repeat=order):
                shift = np.zeros(rank, dtype=np.int64)
                for on, i in zip(mask, idx):
                    shift[i] += on
                val += (-1) ** (order - sum(mask)) * np.asarray(f(pts + shift), dtype=float)
            ratio = float(np.max(np.abs(val))) / N ** (A - order)
            worst = max(worst, ratio)
            if ratio > c:
                raise DifferenceBoundError(
                    f"|D^{order} f| reaches {ratio:.3g} N^(A-{order}) > declared c = {c:g} (indices {idx})"
                )
    return worst


@dataclass(frozen=True)
class WeylSumResult:
    value: complex
    envelope: float
    a: int
    q: int
    offset: float
    terms: int

    @property
    def ratio(self) -> float:
        return abs(self.value) / self.envelope


class WeylSum:
    """F(t,H) = sum_lambda e^{-it|lambda+lambda0|^2 + i<lambda,H>} phi((|lambda+lambda0|^2 + C)/N^2) f(lambda).

    H is given in turns, <lambda, H> = 2 pi n.x for lambda with coordinates n.
    """

    def __init__(
        self,
        lattice: RationalLattice,
        f: Callable[[np.ndarray], np.ndarray],
        A: float,
        N: int,
        c: float,
        lam0: Sequence[float] | None = None,
        C: float = 0.0,
        cutoff: Cutoff = Cutoff(),
        box: int = 4,
    ):
        self.lattice = lattice
        self.A = A
        self.N = N
        self.C = float(C)
        self.cutoff = cutoff
        r = lattice.rank
        self.lam0 = np.zeros(r) if lam0 is None else np.asarray(lam0, dtype=float).reshape(r)
        self.measured_c = check_difference_bounds(f, r, N, A, c, box=box)
        bound = float(cutoff.radius) * N * N - self.C
        self.points = _ellipsoid_points(lattice, max(bound, 0.0), self.lam0)
        y = self.points + self.lam0
        self.norm2 = np.einsum("ni,ij,nj->n", y, lattice.gram_float, y)
        self.amplitude = cutoff((self.norm2 + self.C) / N**2) * np.asarray(f(self.points), dtype=float)
        self.envelope = Envelope(N, r + A, r, Fraction(lattice.period))

    def __call__(self, t: float, H: Sequence[float]) -> WeylSumResult:
        x = np.asarray(H, dtype=float).reshape(self.lattice.rank)
        terms = self.amplitude * np.exp(-1j * t * self.norm2 + 2j * math.pi * (self.points @ x))
        val = complex(np.sum(terms))
        ap = self.envelope.approx(t)
        off = circle_distance(self.envelope.unit_time(t) - ap.a / ap.q)
        return WeylSumResult(val, self.envelope.value(t, ap), ap.a, ap.q, off, len(terms))


def weyl_sum(lattice, f, A, N, t, H, c, lam0=None, C=0.0, cutoff: Cutoff = Cutoff()) -> WeylSumResult:
    lat = lattice if isinstance(lattice, RationalLattice) else RationalLattice.from_matrix(lattice)
    return WeylSum(lat, f, A, N, c, lam0, C, cutoff)(t, H)


# -- arc sampling ------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcSample:
    t: float
    a: int
    q: int
    offset: float  # signed offset of t/(2 pi D) from a/q
    kind: str  # center | edge


def arc_samples(N: int, D=1, qmax: int = 8, edges: bool = True) -> list[ArcSample]:
    """Arc centers a/q (q <= min(qmax, N)) and edge points a/q +- 1/(2qN), as times t = 2 pi D u."""
    D = float(D)
    out = []
    for q in range(1, min(qmax, N) + 1):
        for a in range(q):
            if gcd(a, q) != 1:
                continue
            u = a / q
            out.append(ArcSample(TWO_PI * D * u, a, q, 0.0, "center"))
            if edges:
                h = 1.0 / (2 * q * N)
                for s in (+1, -1):
                    out.append(ArcSample(TWO_PI * D * ((u + s * h) % 1.0), a, q, s * h, "edge"))
    return out

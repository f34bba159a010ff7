"""Weyl characters chi_lambda(exp H) by the quotient formula, by weight multiplicities,
and by the Demazure power series near the walls.

lambda is strictly dominant and indexes the representation of highest weight
lambda - rho, so rho gives the trivial character.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from lieflow import demazure
from lieflow.rootsys import RootSystem, TorusPoint, _coords, coset_key, lattice_cosets, weyl_dimension

__all__ = [
    "TorusPoint",
    "WallTooClose",
    "SeriesPreconditionError",
    "SeriesTruncationError",
    "WeightMultiplicityTable",
    "SeriesValue",
    "WALL_TOLERANCE",
    "character_quotient",
    "weight_multiplicities",
    "character_stable",
    "character_series_near_wall",
    "split_near_wall",
    "character",
]

WALL_TOLERANCE = 1e-6  # turns
DEFAULT_TRUNCATION = 40
DEFAULT_MAX_WALL_DISTANCE = 0.125
SNAP_TURNS = 1e-13
EARLY_STOP_MIN_TERMS = 4
TWO_PI = 2 * math.pi


class WallTooClose(ValueError):
    def __init__(self, distance: float, tolerance: float):
        super().__init__(
            f"H is {distance:.3g} turns from a wall (tolerance {tolerance:g}); "
            "use method 'stable' or 'series' there"
        )
        self.distance = distance
        self.tolerance = tolerance


class SeriesPreconditionError(ValueError):
    pass


class SeriesTruncationError(ArithmeticError):
    def __init__(self, required_M: int, tail: float, tolerance: float):
        super().__init__(f"truncation too small: tail bound {tail:.3g} exceeds {tolerance:.3g}; need M >= {required_M}")
        self.required_M = required_M
        self.tail = tail


def _turns(rs: RootSystem, H) -> np.ndarray:
    if isinstance(H, TorusPoint):
        return np.asarray(H.turns, dtype=float)
    return np.asarray(H, dtype=float).reshape(rs.rank)


_SPLIT = float(2**26)


def integer_phases(weights: np.ndarray, turns: np.ndarray) -> np.ndarray:
    """weights @ turns reduced to [-1/2, 1/2) with absolute error near eps, not |weights @ turns| * eps.

    Valid for integer weights below 2**26 in magnitude.
    """
    x = np.asarray(turns, dtype=float)
    hi = np.rint(x * _SPLIT) / _SPLIT
    lo = x - hi
    w = np.asarray(weights, dtype=float)
    # hi has 26 fractional bits, so each product and the integer part removal are exact
    prod = w * hi
    exact = (prod - np.rint(prod)).sum(axis=-1)
    p = (exact - np.rint(exact)) + w @ lo
    return p - np.rint(p)


def _unit(weights: np.ndarray, turns: np.ndarray) -> np.ndarray:
    return np.exp(2j * math.pi * integer_phases(weights, turns))


@lru_cache(maxsize=256)
def _orbit(rs: RootSystem, c: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    w = rs.weyl_group()
    pts = np.array([s.apply(c) for s in w], dtype=np.int64).reshape(len(w), rs.rank)
    signs = np.array([s.det for s in w], dtype=float)
    return pts, signs


def weyl_denominator(rs: RootSystem, turns: np.ndarray) -> complex:
    """sum_s det(s) e^{i<s rho, H>} in product form e^{-i<rho,H>} prod (e^{i<alpha,H>} - 1)."""
    x = np.asarray(turns, dtype=float)
    phases = integer_phases(rs.positive_roots_fundamental, x)
    rho_phase = integer_phases(np.ones(rs.rank), x)
    # e^{2 pi i p} - 1 = 2i sin(pi p) e^{i pi p}
    return complex(np.exp(-2j * math.pi * rho_phase) * np.prod(2j * np.sin(math.pi * phases) * np.exp(1j * math.pi * phases)))


def character_quotient(rs: RootSystem, lam, H, wall_tolerance: float = WALL_TOLERANCE) -> complex:
    x = _turns(rs, H)
    dists = rs.wall_distances(x)
    if dists.size and dists.min() < wall_tolerance:
        raise WallTooClose(float(dists.min()), wall_tolerance)
    pts, signs = _orbit(rs, _coords(rs, lam))
    num = np.sum(signs * _unit(pts, x))
    return complex(num / weyl_denominator(rs, x))


# -- weight multiplicities -------------------------------------------------------

@dataclass(frozen=True)
class WeightMultiplicityTable:
    weights: np.ndarray  # (n, r) fundamental coordinates
    counts: np.ndarray  # (n,) positive multiplicities

    @property
    def dimension(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(v) for v in w): int(m) for w, m in zip(self.weights, self.counts)}

    def __getitem__(self, w) -> int:
        return self.as_dict().get(tuple(int(v) for v in w), 0)

    def __len__(self) -> int:
        return len(self.counts)


def weight_multiplicities(rs: RootSystem, lam) -> WeightMultiplicityTable:
    return _freudenthal(rs, _coords(rs, lam))


@lru_cache(maxsize=512)
def _freudenthal(rs: RootSystem, c: tuple[int, ...]) -> WeightMultiplicityTable:
    r = rs.rank
    top = np.array(c, dtype=np.int64) - 1
    if np.any(top < 0):
        raise ValueError(f"{c} is not strictly dominant")
    cartan = np.array(rs.cartan, dtype=np.int64)
    gram = rs.weight_gram_scaled  # D * <w_i, w_j>, integral
    pos = rs.positive_roots_fundamental
    wg = rs.weyl_group()
    mats = np.stack([s.array for s in wg])

    # dominant weights below top: top - n.C with 0 <= n <= root coords of top - w0(top)
    longest = max(wg, key=lambda s: s.length)
    spread = top - longest.array @ top
    n_max = [int(round(float(v))) for v in rs.fundamental_to_root(spread)]
    grids = np.meshgrid(*(np.arange(k + 1) for k in n_max), indexing="ij")
    ns = np.stack([g.ravel() for g in grids], axis=1)
    cand = top[None, :] - ns @ cartan
    keep = np.all(cand >= 0, axis=1)
    cand, depth = cand[keep], ns[keep].sum(axis=1)
    order = np.lexsort((tuple(-cand[:, k] for k in reversed(range(r)))) + (depth,))
    cand = cand[order]

    rho = np.ones(r, dtype=np.int64)
    top_rho = top + rho
    target = int(top_rho @ gram @ top_rho)
    mult: dict[tuple[int, ...], int] = {}
    dominant: list[tuple[np.ndarray, int]] = []
    pos_gram = pos @ gram  # rows: D <alpha, w_j>
    for mu in cand:
        key = tuple(int(v) for v in mu)
        if key == tuple(int(v) for v in top):
            m = 1
        else:
            total = 0
            for a, ag in zip(pos, pos_gram):
                nu = mu + a
                while True:
                    got = mult.get(tuple(int(v) for v in nu))
                    if got is None:
                        break
                    total += got * int(nu @ ag)
                    nu = nu + a
            mr = mu + rho
            den = target - int(mr @ gram @ mr)
            m, rem = divmod(2 * total, den)
            if rem:
                raise AssertionError("Freudenthal recursion produced a non-integer multiplicity")
        if m == 0:
            continue
        dominant.append((mu, m))
        for img in {tuple(int(v) for v in row) for row in mats @ mu}:
            mult[img] = m
    weights = np.array(sorted(mult), dtype=np.int64).reshape(-1, r)
    counts = np.array([mult[tuple(int(v) for v in w)] for w in weights], dtype=np.int64)
    return WeightMultiplicityTable(weights, counts)


def character_stable(rs: RootSystem, lam, H) -> complex:
    x = _turns(rs, H)
    table = weight_multiplicities(rs, lam)
    return complex(np.sum(table.counts * _unit(table.weights, x)))


# -- near-wall series ----------------------------------------------------------------

def signed_frac(v):
    """Representative of v mod 1 in (-1/2, 1/2]."""
    f = v - np.floor(v)
    return np.where(f > 0.5, f - 1.0, f)


def split_near_wall(rs: RootSystem, turns) -> tuple[tuple[Fraction, ...], np.ndarray]:
    """H = H1 + H2 with <alpha_i, H1>/2pi = signed_frac(<alpha_i, H>/2pi) and <alpha_i,H2> in 2pi Z.

    Returns the exact turns of H1 (rationals from the float input) and the float turns of H2.
    """
    x = np.asarray(turns, dtype=float)
    cartan = np.array(rs.cartan, dtype=float)
    u1 = signed_frac(cartan @ x)
    # float residue of an exactly integral <alpha_i, H>/2pi; keeps the H1 = 0 shortcut reachable
    u1 = np.where(np.abs(u1) < SNAP_TURNS, 0.0, u1)
    u1_exact = [Fraction(float(v)) for v in u1]
    cinv = rs.fundamental_weights  # rows of C^-1
    r = rs.rank
    x1 = tuple(sum((cinv[i][j] * u1_exact[j] for j in range(r)), Fraction(0)) for i in range(r))
    x2 = x - np.array([float(v) for v in x1])
    return x1, x2


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail_bound: float
    radius: float  # R = max_s |<s lambda, H1>|
    prefactor: float  # measured K with |term_m| <= K R^(m-|P|)/(m-|P|)!
    truncation: int  # largest m actually summed
    terms: tuple[complex, ...]

    def __complex__(self):
        return self.value


def _tail(mags: Sequence[float], R: float, start: int) -> float:
    """Bound on sum_{j >= start} K R^j / j!, K = max_k mags[k] k! / R^k, computed in logs.

    Uses sum_{j >= s} R^j / j! <= e^R R^s / s!, so tiny radii cannot underflow K.
    """
    if R == 0.0:
        return 0.0
    logR = math.log(R)
    best = -math.inf
    for k, mag in enumerate(mags):
        if mag > 0:
            best = max(best, math.log(mag) + math.lgamma(k + 1) + (start - k) * logR)
    if best == -math.inf:
        return 0.0
    return math.exp(min(best - math.lgamma(start + 1) + R, 700.0))


def _prefactor(mags: Sequence[float], R: float) -> float:
    if R == 0.0:
        return mags[0] if mags else 0.0
    logs = [math.log(m) + math.lgamma(k + 1) - k * math.log(R) for k, m in enumerate(mags) if m > 0]
    return math.exp(min(max(logs), 700.0)) if logs else 0.0


def character_series_near_wall(
    rs: RootSystem,
    lam,
    H,
    truncation: int = DEFAULT_TRUNCATION,
    tolerance: float = 1e-12,
    max_wall_distance: float = DEFAULT_MAX_WALL_DISTANCE,
) -> SeriesValue:
    """chi = e^{i<lambda-rho,H2>} e^{i<rho,H1>} [sum_m i^m/m! delta(f_m)(H1)/|W|] / prod_alpha (e^{i<alpha,H1>}-1)/<alpha,H1>."""
    c = _coords(rs, lam)
    x = _turns(rs, H)
    dists = rs.wall_distances(x)
    if dists.size and dists.max() > max_wall_distance:
        raise SeriesPreconditionError(
            f"wall distance {dists.max():.3g} exceeds {max_wall_distance:g}; H does not split near the walls"
        )
    n_pos = len(rs.positive_roots)
    if truncation < n_pos:
        raise SeriesTruncationError(n_pos, math.inf, tolerance)
    x1, x2 = split_near_wall(rs, x)
    norms = rs.simple_norms
    # H1 in simple-root coordinates is pi * y with y rational
    y = tuple(4 * x1[i] / norms[i] for i in range(rs.rank))
    x1f = np.array([float(v) for v in x1])

    # the lambda phase over H2 depends only on the coset of lambda mod Gamma
    mu = _coset_rep(rs, c)
    pts, _ = _orbit(rs, c)
    radius = float(np.max(np.abs(TWO_PI * (pts @ x1f)))) if len(pts) else 0.0

    terms = []
    mags = []
    # at H1 = 0 only the degree-0 term delta(f_|P|) survives
    top = truncation if any(y) else n_pos
    used = top
    for m in range(n_pos, top + 1):
        poly = demazure.delta_power(rs, c, m)
        if poly.is_zero():
            terms.append(0j)
        else:
            val = float(poly(y)) * math.pi ** (m - n_pos)
            terms.append((1j) ** m * val / math.factorial(m))
        mags.append(abs(terms[-1]))
        # stop early once the bound is met; a few terms first so parity zeros do not fool K
        if m - n_pos >= EARLY_STOP_MIN_TERMS and _tail(mags, radius, m - n_pos + 1) <= tolerance * max(sum(mags), 1e-300):
            used = m
            break
    bracket = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))

    K = _prefactor(mags, radius)
    scale = max(sum(mags), 1e-300)
    start = used - n_pos + 1
    tail = _tail(mags, radius, start)
    if tail > tolerance * scale:
        need = truncation
        while _tail(mags, radius, need - n_pos + 1) > tolerance * scale and need < 100000:
            need += 1
        raise SeriesTruncationError(need, tail, tolerance * scale)

    alpha_phase = TWO_PI * (rs.positive_roots_fundamental @ x1f)
    # (e^{ia} - 1)/a = i e^{ia/2} sinc(a/2), equal to i at a = 0
    factors = 1j * np.exp(0.5j * alpha_phase) * np.sinc(alpha_phase / (2 * math.pi))
    phase = np.exp(1j * TWO_PI * ((np.array(mu) - 1) @ x2 + np.sum(x1f)))
    value = complex(phase * bracket / np.prod(factors))
    return SeriesValue(value, tail, radius, K, used, tuple(terms))


@lru_cache(maxsize=64)
def _coset_table(rs: RootSystem) -> dict:
    return {coset_key(rs, w.coords): w.coords for w in lattice_cosets(rs)}


def _coset_rep(rs: RootSystem, c: Sequence[int]) -> tuple[int, ...]:
    return _coset_table(rs)[coset_key(rs, c)]


def character(rs: RootSystem, lam, H, method: str = "auto", **kw) -> complex:
    """Dispatch: quotient off the walls, series when every wall is near, stable otherwise."""
    if method == "quotient":
        return character_quotient(rs, lam, H, **kw)
    if method == "stable":
        return character_stable(rs, lam, H)
    if method == "series":
        return character_series_near_wall(rs, lam, H, **kw).value
    if method != "auto":
        raise ValueError(f"unknown character method {method!r}")
    x = _turns(rs, H)
    dists = rs.wall_distances(x)
    if dists.min() >= WALL_TOLERANCE:
        return character_quotient(rs, lam, x)
    if dists.max() <= DEFAULT_MAX_WALL_DISTANCE:
        try:
            return character_series_near_wall(rs, lam, x).value
        except SeriesTruncationError:
            pass
    return character_stable(rs, lam, x)


def dimension(rs: RootSystem, lam) -> int:
    return weyl_dimension(rs, lam)

"""Integral root systems, Weyl groups, lattice cosets and near-wall root subsystems.

Coordinates used throughout:

* weights: integer coordinates in the fundamental-weight basis (Lambda = Z^r);
* roots: integer coordinates in the simple-root basis;
* torus points H: ``turns`` x_i = <w_i, H>/2pi, so e^{i<lambda,H>} = e^{2 pi i c.x}
  for lambda with fundamental coordinates c, and the period lattice 2pi Gamma^vee
  becomes Z^r.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from lieflow import exact
from lieflow.forms import (
    FUNDAMENTAL,
    KILLING,
    STANDARD,
    CUSTOM,
    UNIT_WEIGHT,
    SIMPLE_ROOT,
    GramForm,
    Matrix,
    Normalization,
    Weight,
    killing_scale,
    lattice_period,
    scaled,
)

SCHEMA_VERSION = "1.0"
DEFAULT_RANK_CEILING = 4
SERIES = ("A", "B", "C", "D", "E", "F", "G")

Root = tuple[int, ...]


class InvalidCartanType(ValueError):
    pass


def _chain(n: int) -> list[list[Fraction]]:
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = Fraction(2)
        if i + 1 < n:
            g[i][i + 1] = g[i + 1][i] = Fraction(-1)
    return g


def base_gram(series: str, rank: int) -> Matrix:
    """Gram matrix of the simple roots with long roots of squared length 2 (Bourbaki numbering)."""
    s, n = series, rank
    if s == "A" and n >= 1:
        g = _chain(n)
    elif s == "B" and n >= 2:
        g = _chain(n)
        g[n - 1][n - 1] = Fraction(1)
    elif s == "C" and n >= 2:
        g = _chain(n)
        for i in range(n - 1):
            g[i][i] = Fraction(1)
            if i + 1 < n - 1:
                g[i][i + 1] = g[i + 1][i] = Fraction(-1, 2)
    elif s == "D" and n >= 4:
        g = _chain(n)
        g[n - 2][n - 1] = g[n - 1][n - 2] = Fraction(0)
        g[n - 3][n - 1] = g[n - 1][n - 3] = Fraction(-1)
    elif s == "E" and n in (6, 7, 8):
        g = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = Fraction(2)
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for a, b in edges:
            g[a][b] = g[b][a] = Fraction(-1)
    elif s == "F" and n == 4:
        g = _chain(4)
        g[2][2] = g[3][3] = Fraction(1)
        g[2][3] = g[3][2] = Fraction(-1, 2)
    elif s == "G" and n == 2:
        g = [[Fraction(2, 3), Fraction(-1)], [Fraction(-1), Fraction(2)]]
    else:
        raise InvalidCartanType(f"invalid Dynkin type {series}{rank}")
    return tuple(tuple(row) for row in g)


@dataclass(frozen=True)
class WeylElement:
    """Integer matrix acting on fundamental-weight coordinates (column vectors)."""

    matrix: tuple[tuple[int, ...], ...]
    det: int
    word: tuple[int, ...]

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    def apply(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) for v in self.array @ np.asarray(coords, dtype=np.int64))

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class TorusPoint:
    """H in i b*; ``coords`` in the simple-root basis, ``turns`` x_i = <w_i,H>/2pi."""

    coords: tuple[float, ...]
    turns: tuple[float, ...]
    wall_distances: tuple[float, ...]

    @property
    def min_wall_distance(self) -> float:
        return min(self.wall_distances) if self.wall_distances else math.inf


def _frac_dist(v: np.ndarray) -> np.ndarray:
    return np.abs(v - np.round(v))


class RootSystem:
    """Combinatorial and metric data of an integral root system.

    Treat instances as immutable; the Weyl group is built lazily behind a lock.
    """

    def __init__(self, series: str, rank: int, normalization: Normalization):
        self.series = series
        self.rank = rank
        base = base_gram(series, rank)
        r = rank
        self.cartan: tuple[tuple[int, ...], ...] = tuple(
            tuple(int(2 * base[i][j] / base[j][j]) for j in range(r)) for i in range(r)
        )
        self.positive_roots: tuple[Root, ...] = self._close_roots()
        self.roots: tuple[Root, ...] = self.positive_roots + tuple(tuple(-x for x in a) for a in self.positive_roots)
        self.simple_roots: tuple[Root, ...] = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        cinv = exact.inverse(self.cartan)

        if normalization.tag == STANDARD:
            gram = base
        elif normalization.tag == KILLING:
            gram = scaled(base, killing_scale(base, self.roots))
        elif normalization.tag == CUSTOM:
            gram = scaled(base, normalization.scale)
        else:  # UNIT_WEIGHT: scale so that <w_1,w_1> = 1
            w11 = sum(cinv[0][a] * base[a][b] * cinv[0][b] for a in range(r) for b in range(r))
            normalization = Normalization(CUSTOM, 1 / w11)
            gram = scaled(base, normalization.scale)
        self.normalization = normalization
        self.form = GramForm((series, rank), gram, normalization, cinv)
        self.fundamental_weights = cinv
        self.rho = Weight((1,) * r, FUNDAMENTAL, (series, rank))
        self.dimension = 2 * len(self.positive_roots) + r
        self.lattice_period = lattice_period(self.form)
        self._lock = threading.Lock()
        self._weyl: list[WeylElement] | None = None
        self._index: dict[bytes, int] | None = None

    # -- construction helpers -------------------------------------------------
    def _close_roots(self) -> tuple[Root, ...]:
        r = self.rank
        c = self.cartan
        seen = {tuple(int(i == j) for j in range(r)) for i in range(r)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for b in frontier:
                for i in range(r):
                    k = sum(b[j] * c[j][i] for j in range(r))
                    nb = tuple(b[j] - (k if j == i else 0) for j in range(r))
                    if nb not in seen:
                        seen.add(nb)
                        nxt.append(nb)
            frontier = nxt
        pos = [a for a in seen if all(x >= 0 for x in a)]
        if len(pos) * 2 != len(seen):
            raise AssertionError("root closure is not symmetric")
        return tuple(sorted(pos, key=lambda a: (sum(a), tuple(-x for x in a))))

    def __repr__(self) -> str:
        return f"RootSystem({self.series}{self.rank}, {self.normalization.label()})"

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}"

    # -- metric data ----------------------------------------------------------
    @cached_property
    def simple_norms(self) -> tuple[Fraction, ...]:
        return tuple(self.form.gram_simple[i][i] for i in range(self.rank))

    def root_to_fundamental(self, a: Sequence[int]) -> tuple[int, ...]:
        r = self.rank
        return tuple(sum(a[i] * self.cartan[i][j] for i in range(r)) for j in range(r))

    def fundamental_to_root(self, c: Sequence[int]) -> tuple[Fraction, ...]:
        r = self.rank
        w = self.fundamental_weights
        return tuple(sum((c[i] * w[i][j] for i in range(r)), Fraction(0)) for j in range(r))

    def norm2(self, c: Sequence[int]) -> Fraction:
        return self.form.pair_fundamental(c, c)

    def pair(self, c1: Sequence[int], c2: Sequence[int]) -> Fraction:
        return self.form.pair_fundamental(c1, c2)

    def root_pairing(self, a: Root, c: Sequence[int]) -> Fraction:
        """<alpha, lambda> for a root in simple-root coords and a weight in fundamental coords."""
        return sum((Fraction(a[i] * c[i]) * self.simple_norms[i] / 2 for i in range(self.rank)), Fraction(0))

    def coroot_pairing(self, a: Root, c: Sequence[int]) -> int:
        num = self.root_pairing(a, c) * 2 / self.form.pair_root_coords(a, a)
        if num.denominator != 1:
            raise AssertionError("coroot pairing is not integral")
        return int(num)

    @cached_property
    def weight_gram_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.form.weight_gram])

    @cached_property
    def weight_gram_scaled(self) -> np.ndarray:
        """D times the weight Gram matrix, an integer array."""
        return np.array([[int(x * self.lattice_period) for x in row] for row in self.form.weight_gram], dtype=np.int64)

    @cached_property
    def positive_roots_fundamental(self) -> np.ndarray:
        return np.array([self.root_to_fundamental(a) for a in self.positive_roots], dtype=np.int64).reshape(-1, self.rank)

    @cached_property
    def root_functionals(self) -> np.ndarray:
        """Rows give <alpha, lambda> as a linear function of fundamental coordinates."""
        half = np.array([float(x) / 2 for x in self.simple_norms])
        return np.array(self.positive_roots, dtype=float).reshape(-1, self.rank) * half

    @cached_property
    def rho_products(self) -> Fraction:
        out = Fraction(1)
        for a in self.positive_roots:
            out *= self.root_pairing(a, self.rho.coords)
        return out

    @cached_property
    def rho_norm2(self) -> Fraction:
        return self.norm2(self.rho.coords)

    @cached_property
    def cartan_det(self) -> int:
        return int(exact.det(self.cartan))

    # -- Weyl group -----------------------------------------------------------
    def simple_reflection_matrix(self, i: int) -> np.ndarray:
        r = self.rank
        m = np.eye(r, dtype=np.int64)
        for k in range(r):
            m[k, i] -= self.cartan[i][k]
        return m

    def weyl_group(self) -> list[WeylElement]:
        with self._lock:
            if self._weyl is None:
                self._weyl, self._index = self._build_weyl()
        return self._weyl

    def _build_weyl(self):
        r = self.rank
        gens = [self.simple_reflection_matrix(i) for i in range(r)]
        ident = np.eye(r, dtype=np.int64)
        elems = [(ident, ())]
        index = {ident.tobytes(): 0}
        frontier = [0]
        while frontier:
            nxt = []
            for k in frontier:
                g, word = elems[k]
                for i, s in enumerate(gens):
                    h = s @ g
                    key = h.tobytes()
                    if key not in index:
                        index[key] = len(elems)
                        elems.append((h, (i,) + word))
                        nxt.append(index[key])
            frontier = nxt
        out = [
            WeylElement(tuple(tuple(int(v) for v in row) for row in g), (-1) ** len(w), w) for g, w in elems
        ]
        return out, index

    def weyl_index(self, matrix: np.ndarray) -> int:
        self.weyl_group()
        return self._index[np.asarray(matrix, dtype=np.int64).tobytes()]

    def longest_word(self, order: str = "lex_min") -> tuple[int, ...]:
        """Reduced word of the longest element, lexicographically smallest (or largest)."""
        w = self.weyl_group()
        length = {e.array.tobytes(): e.length for e in w}
        cur = max(w, key=lambda e: e.length).array
        gens = [self.simple_reflection_matrix(i) for i in range(self.rank)]
        idx = range(self.rank) if order == "lex_min" else range(self.rank - 1, -1, -1)
        word = []
        while length[cur.tobytes()] > 0:
            for i in idx:
                h = gens[i] @ cur
                if length[h.tobytes()] < length[cur.tobytes()]:
                    word.append(i)
                    cur = h
                    break
        return tuple(word)

    def reflection(self, a: Root) -> WeylElement:
        """s_alpha for a root given in simple-root coordinates."""
        r = self.rank
        af = self.root_to_fundamental(a)
        m = np.zeros((r, r), dtype=np.int64)
        for j in range(r):
            e = [int(j == k) for k in range(r)]
            k = self.coroot_pairing(a, e)
            m[:, j] = np.array(e) - k * np.array(af)
        return self.weyl_group()[self.weyl_index(m)]

    def root_matrix(self, s: WeylElement) -> np.ndarray:
        """Matrix of s on simple-root coordinates (column vectors); integral."""
        c = np.array(self.cartan, dtype=np.int64)
        cinv = np.array([[float(x) for x in row] for row in self.fundamental_weights])
        m = cinv.T @ s.array @ c.T
        out = np.rint(m).astype(np.int64)
        if not np.allclose(m, out):
            raise AssertionError("Weyl element is not integral on the root lattice")
        return out

    # -- dominance ------------------------------------------------------------
    def dominant_representative(self, c: Sequence[int]) -> tuple[tuple[int, ...], int]:
        """Dominant element of the W-orbit and the sign det(s) of the reflections used."""
        v = list(int(x) for x in c)
        sign = 1
        r = self.rank
        while True:
            for i in range(r):
                if v[i] < 0:
                    k = v[i]
                    for j in range(r):
                        v[j] -= k * self.cartan[i][j]
                    sign = -sign
                    break
            else:
                return tuple(v), sign

    # -- torus points ---------------------------------------------------------
    def torus_point(self, turns=None, *, angles=None, root_coords=None, canonical: bool = True) -> TorusPoint:
        if sum(x is not None for x in (turns, angles, root_coords)) != 1:
            raise ValueError("give exactly one of turns, angles, root_coords")
        norms = np.array([float(x) for x in self.simple_norms])
        if root_coords is not None:
            x = np.asarray(root_coords, dtype=float) * norms / (4 * math.pi)
        elif angles is not None:
            x = np.asarray(angles, dtype=float) / (2 * math.pi)
        else:
            x = np.asarray(turns, dtype=float)
        x = x.reshape(self.rank)
        if canonical:
            x = x - np.floor(x)
        h = x * 4 * math.pi / norms
        walls = self.wall_distances(x)
        return TorusPoint(tuple(float(v) for v in h), tuple(float(v) for v in x), tuple(float(v) for v in walls))

    def wall_distances(self, turns: np.ndarray) -> np.ndarray:
        """||<alpha,H>/2pi|| per positive root; accepts (..., r) arrays of turns."""
        t = np.asarray(turns, dtype=float)
        return _frac_dist(t @ self.positive_roots_fundamental.T.astype(float))

    def weyl_act_turns(self, s: WeylElement, turns: np.ndarray) -> np.ndarray:
        """Turns of s(H): <lambda, sH> = <s^-1 lambda, H>."""
        inv = np.rint(np.linalg.inv(s.array.astype(float))).astype(np.int64)
        return np.asarray(turns, dtype=float) @ inv


def build_root_system(series: str, rank: int, form_config=None, rank_ceiling: int = DEFAULT_RANK_CEILING) -> RootSystem:
    series = str(series).upper()
    try:
        rank = int(rank)
    except (TypeError, ValueError):
        raise InvalidCartanType(f"invalid rank {rank!r}") from None
    if series not in SERIES:
        raise InvalidCartanType(f"invalid Dynkin series {series!r}")
    base_gram(series, rank)  # validates the type
    if rank > rank_ceiling:
        raise InvalidCartanType(f"{series}{rank} exceeds the rank ceiling {rank_ceiling}; raise rank_ceiling to build it")
    return _cached_build(series, rank, Normalization.parse(form_config))


_BUILD_CACHE: dict = {}
_BUILD_LOCK = threading.Lock()


def _cached_build(series: str, rank: int, norm: Normalization) -> RootSystem:
    key = (series, rank, norm)
    with _BUILD_LOCK:
        rs = _BUILD_CACHE.get(key)
        if rs is None:
            rs = _BUILD_CACHE[key] = RootSystem(series, rank, norm)
    return rs


def weyl_group(rs: RootSystem) -> list[WeylElement]:
    return rs.weyl_group()


def _coords(rs: RootSystem, lam) -> tuple[int, ...]:
    if isinstance(lam, Weight):
        if lam.basis != FUNDAMENTAL:
            if lam.basis == SIMPLE_ROOT:
                return rs.root_to_fundamental(lam.coords)
            raise ValueError(f"cannot use weight in basis {lam.basis!r} here")
        return lam.coords
    return tuple(int(v) for v in lam)


def on_wall(rs: RootSystem, lam) -> bool:
    c = _coords(rs, lam)
    return any(rs.root_pairing(a, c) == 0 for a in rs.positive_roots)


def signed_dimension(rs: RootSystem, lam) -> Fraction:
    """prod <alpha,lambda> / prod <alpha,rho>; equals det(s) d for lambda in s(C+)."""
    c = _coords(rs, lam)
    num = Fraction(1)
    for a in rs.positive_roots:
        num *= rs.root_pairing(a, c)
    return num / rs.rho_products


def weyl_dimension(rs: RootSystem, lam) -> int:
    """Dimension of the representation indexed by strictly dominant lambda (rho is trivial).

    Returns 0 on a chamber wall; check ``on_wall`` for the flag.
    """
    c = _coords(rs, lam)
    d = signed_dimension(rs, c)
    if d.denominator != 1:
        raise AssertionError("Weyl dimension is not an integer")
    if d < 0:
        raise ValueError(f"{c} is not in the dominant chamber")
    return int(d)


def casimir_eigenvalue(rs: RootSystem, lam) -> Fraction:
    c = _coords(rs, lam)
    return rs.norm2(c) - rs.rho_norm2


def coset_key(rs: RootSystem, c: Sequence[int]) -> tuple[Fraction, ...]:
    """Class of a weight in Lambda/Gamma: fractional parts of its simple-root coordinates."""
    return tuple(x - math.floor(x) for x in rs.fundamental_to_root(c))


def _coset_rank(rs: RootSystem, c):
    return (rs.norm2(c), sum(1 for v in c if v < 0), tuple(-v for v in c))


def lattice_cosets(rs: RootSystem) -> list[Weight]:
    """Representatives of Lambda/Gamma of minimal norm; ties prefer fewer negative
    coordinates, then the lexicographically largest."""
    n = abs(rs.cartan_det)
    best: dict = {}
    bound = 1
    while True:
        for c in iproduct(range(-bound, bound + 1), repeat=rs.rank):
            k = coset_key(rs, c)
            cand = _coset_rank(rs, c)
            if k not in best or cand < best[k][0]:
                best[k] = (cand, c)
        if len(best) == n:
            break
        bound += 1
    reps = sorted((v[1] for v in best.values()), key=lambda c: _coset_rank(rs, c))
    return [Weight(c, FUNDAMENTAL, (rs.series, rs.rank)) for c in reps]


@dataclass(frozen=True)
class RootSubsystemDecomposition:
    near_roots: tuple[Root, ...]  # Q_H
    roots: tuple[Root, ...]  # Phi_H
    positive_roots: tuple[Root, ...]
    simple_roots: tuple[Root, ...]
    rank: int
    weyl: tuple[WeylElement, ...]
    adapted_basis: tuple[tuple[int, ...], ...]  # rows: u_i in fundamental coordinates
    gamma_prime: tuple[tuple[int, ...], ...]  # rows: alpha'_i in fundamental coordinates
    coset_reps: tuple[Weight, ...]

    @property
    def id(self) -> str:
        return "{" + ";".join(",".join(map(str, a)) for a in self.simple_roots) + "}"

    def to_fundamental(self, w: Weight) -> tuple[int, ...]:
        if w.basis != f"adapted_basis({self.id})":
            raise ValueError("weight is not in this adapted basis")
        r = len(self.adapted_basis)
        return tuple(sum(w.coords[i] * self.adapted_basis[i][j] for i in range(r)) for j in range(r))


def _lattice_basis(rows: list[Root]) -> list[list[int]]:
    if not rows:
        return []
    s, u, v = exact.smith(rows)
    vinv = exact.int_inverse(v)
    k = sum(1 for i in range(min(len(s), len(s[0]))) if s[i][i] != 0)
    su = np.array(s, dtype=object)[:k] @ np.array(vinv, dtype=object)
    return [[int(x) for x in row] for row in su]


def root_subsystem(rs: RootSystem, H, N: int) -> RootSubsystemDecomposition:
    if N < 1:
        raise ValueError("N must be >= 1")
    turns = np.asarray(H.turns if isinstance(H, TorusPoint) else H, dtype=float)
    r = rs.rank
    dists = rs.wall_distances(turns)
    near = [a for a, d in zip(rs.positive_roots, dists) if d <= 1.0 / N + 1e-15]
    q_h = tuple(near + [tuple(-x for x in a) for a in near])
    basis = _lattice_basis(near)
    phi_pos = [a for a in rs.positive_roots if exact.solve_integer(basis, a) is not None]
    phi = tuple(phi_pos + [tuple(-x for x in a) for a in phi_pos])
    pos_set = set(phi_pos)
    simple = [
        a
        for a in phi_pos
        if not any(tuple(x - y for x, y in zip(a, b)) in pos_set for b in phi_pos if b != a)
    ]
    r_h = len(simple)
    weyl = rs.weyl_group()
    if r_h:
        gens = [rs.reflection(b).array for b in simple]
        seen = {np.eye(r, dtype=np.int64).tobytes()}
        frontier = [np.eye(r, dtype=np.int64)]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = s @ g
                    if h.tobytes() not in seen:
                        seen.add(h.tobytes())
                        nxt.append(h)
            frontier = nxt
        w_h = tuple(e for e in weyl if e.array.tobytes() in seen)
    else:
        w_h = (weyl[0],)

    if r_h == 0:
        adapted = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        return RootSubsystemDecomposition(q_h, phi, tuple(phi_pos), (), 0, w_h, adapted, (), (Weight((0,) * r),))

    # A[i][k] = L <w_i, beta_k>: the projection onto V_H in coordinates dual to the beta_k
    pairs = [[rs.root_pairing(b, [int(i == j) for j in range(r)]) for b in simple] for i in range(r)]
    den = math.lcm(*(x.denominator for row in pairs for x in row))
    a_mat = [[int(x * den) for x in row] for row in pairs]
    _, u, _ = exact.smith(a_mat)
    ua = (np.array(u, dtype=object) @ np.array(a_mat, dtype=object)).tolist()
    if any(any(x != 0 for x in ua[i]) for i in range(r_h, r)) or any(all(x == 0 for x in ua[i]) for i in range(r_h)):
        raise AssertionError("Smith transform did not separate image and kernel")
    kernel = [list(map(int, u[i])) for i in range(r_h, r)]
    if kernel:
        kernel = _lattice_basis(kernel)
    adapted = tuple(tuple(int(x) for x in u[i]) for i in range(r_h)) + tuple(tuple(row) for row in kernel)

    images = [list(map(int, ua[i])) for i in range(r_h)]
    simple_images = [
        [int(rs.form.pair_root_coords(b, bk) * den) for bk in simple] for b in simple
    ]
    x_mat = []
    for target in simple_images:
        x = exact.solve_integer(images, target)
        if x is None:
            raise AssertionError("Gamma_H is not contained in Upsilon_H")
        x_mat.append(x)
    gamma_prime = tuple(
        tuple(sum(x[j] * adapted[j][k] for j in range(r_h)) for k in range(r)) for x in x_mat
    )
    s, _, v = exact.smith(x_mat)
    vinv = exact.int_inverse(v)
    diag = [abs(s[i][i]) for i in range(r_h)]
    reps = []
    for y in iproduct(*(range(d) for d in diag)):
        z = [sum(y[i] * vinv[i][j] for i in range(r_h)) for j in range(r_h)]
        reps.append(Weight(tuple(sum(z[j] * adapted[j][k] for j in range(r_h)) for k in range(r)), FUNDAMENTAL, (rs.series, rs.rank)))
    return RootSubsystemDecomposition(
        q_h, phi, tuple(phi_pos), tuple(simple), r_h, w_h, adapted, gamma_prime, tuple(reps)
    )


def summary(rs: RootSystem) -> dict:
    """JSON-serializable summary (versioned schema ``rootsys_summary``)."""
    fr = lambda x: str(x)
    return {
        "schema": "lieflow/rootsys_summary",
        "schema_version": SCHEMA_VERSION,
        "type": rs.label,
        "series": rs.series,
        "rank": rs.rank,
        "normalization": rs.normalization.label(),
        "dimension": rs.dimension,
        "cartan_matrix": [list(row) for row in rs.cartan],
        "gram_simple": [[fr(x) for x in row] for row in rs.form.gram_simple],
        "weight_gram": [[fr(x) for x in row] for row in rs.form.weight_gram],
        "simple_roots": [list(a) for a in rs.simple_roots],
        "positive_roots": [list(a) for a in rs.positive_roots],
        "fundamental_weights": [[fr(x) for x in row] for row in rs.fundamental_weights],
        "rho": list(rs.rho.coords),
        "rho_norm2": fr(rs.rho_norm2),
        "weyl_order": len(rs.weyl_group()),
        "longest_word": list(rs.longest_word()),
        "lattice_period": rs.lattice_period,
        "center_order": abs(rs.cartan_det),
    }

"""Frequency-localized Schrodinger kernels on compact simple groups, circles and products.

K_N(t, H) = sum over strictly dominant lambda of phi(k/(beta N^2)) e^{-itk/beta} d_lambda chi_lambda(H)
with k = |lambda|^2 - |rho|^2.  Four evaluation routes are provided and must agree:

``weight_chamber``       the defining sum, characters by the quotient formula;
``weight_lattice``       the same sum unfolded to the whole weight lattice;
``root_coset``           the unfolded sum split by cosets of the root lattice, each
                         character evaluated by whichever character method is valid at H;
``stable_multiplicity``  characters as weight-multiplicity sums (valid everywhere).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, isqrt, lcm
from typing import Callable, Iterator, Sequence

import numpy as np

from lieflow import characters
from lieflow.characters import (
    DEFAULT_MAX_WALL_DISTANCE,
    WALL_TOLERANCE,
    WallTooClose,
    character_series_near_wall,
    weight_multiplicities,
    weyl_denominator,
)
from lieflow.exact import inverse
from lieflow.forms import FUNDAMENTAL, Weight, to_rational
from lieflow.rootsys import RootSystem, TorusPoint, coset_key, lattice_cosets

METHODS = ("weight_chamber", "weight_lattice", "root_coset", "stable_multiplicity")
DEFAULT_TERM_BUDGET = 5_000_000
TWO_PI = 2 * math.pi


class TermBudgetExceeded(MemoryError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"kernel needs {count} lattice terms, budget is {budget}")
        self.count = count
        self.budget = budget


def _bump(x: np.ndarray, radius: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    u = (x / radius) ** 2
    out = np.zeros_like(x)
    inside = u < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside]))
    return out


@dataclass(frozen=True)
class Cutoff:
    """Smooth compactly supported phi; the default is exp(1 - 1/(1 - (x/2)^2)) on |x| < 2."""

    family: str = "bump_default"
    radius: Fraction = Fraction(2)
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "radius", to_rational(self.radius))
        if self.family == "custom" and self.func is None:
            raise ValueError("custom cutoff needs an evaluator")
        if self.family not in ("bump_default", "custom"):
            raise ValueError(f"unknown cutoff family {self.family!r}")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.func is not None:
            out = np.asarray(self.func(x), dtype=float)
            return np.where(np.abs(x) < float(self.radius), out, 0.0)
        return _bump(x, float(self.radius))


@dataclass(frozen=True)
class KernelSpec:
    N: int
    cutoff: Cutoff = Cutoff()
    method: str = "weight_lattice"
    beta: Fraction = Fraction(1)
    term_budget: int = DEFAULT_TERM_BUDGET

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError("N must be >= 1")
        object.__setattr__(self, "N", int(self.N))
        b = to_rational(self.beta)
        if b <= 0:
            raise ValueError("metric scale must be positive")
        object.__setattr__(self, "beta", b)
        if self.method not in METHODS:
            raise ValueError(f"unknown kernel method {self.method!r}")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    terms_summed: int
    method_used: str


# -- lattice support ---------------------------------------------------------------

@dataclass(frozen=True)
class LatticeSupport:
    """All lambda in the weight lattice with phi(k_lambda / (beta N^2)) != 0, sorted by |lambda|^2."""

    coords: np.ndarray  # (n, r) fundamental coordinates
    norm2_scaled: np.ndarray  # D |lambda|^2, integers
    eigen: np.ndarray  # k_lambda / beta
    weights: np.ndarray  # phi(k_lambda / (beta N^2))
    products: np.ndarray  # prod_{alpha>0} <alpha, lambda>
    exact_eigen: tuple[Fraction, ...]

    def __len__(self):
        return len(self.weights)


def _support_bound(rs: RootSystem, spec: KernelSpec) -> Fraction:
    return rs.rho_norm2 + spec.cutoff.radius * spec.beta * spec.N**2


@lru_cache(maxsize=64)
def lattice_support(rs: RootSystem, spec: KernelSpec) -> LatticeSupport:
    r = rs.rank
    bound = _support_bound(rs, spec)
    ginv = inverse(rs.form.weight_gram)
    # max c_i on the ellipsoid c G c <= B is sqrt(B (G^-1)_ii)
    box = []
    for i in range(r):
        v = bound * ginv[i][i]
        box.append(isqrt(v.numerator * v.denominator) // v.denominator)
    count = math.prod(2 * b + 1 for b in box)
    if count > 50 * spec.term_budget:
        raise TermBudgetExceeded(count, spec.term_budget)
    grids = np.meshgrid(*(np.arange(-b, b + 1, dtype=np.int64) for b in box), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    D = rs.lattice_period
    n2 = np.einsum("ni,ij,nj->n", pts, rs.weight_gram_scaled, pts)
    rho_d = int(rs.rho_norm2 * D)
    # exact |k / (beta N^2)| < radius, cleared of denominators
    lim = spec.cutoff.radius * spec.beta * spec.N**2 * D
    keep = np.abs((n2 - rho_d) * lim.denominator) < lim.numerator
    pts, n2 = pts[keep], n2[keep]
    if len(pts) > spec.term_budget:
        raise TermBudgetExceeded(len(pts), spec.term_budget)
    order = np.lexsort(tuple(pts[:, k] for k in reversed(range(r))) + (n2,))
    pts, n2 = pts[order], n2[order]
    exact_eigen = tuple(Fraction(int(v) - rho_d, D) / spec.beta for v in n2)
    eigen = np.array([float(e) for e in exact_eigen])
    weights = spec.cutoff(eigen / spec.N**2)
    prods = np.prod(pts @ rs.root_functionals.T, axis=1) if len(pts) else np.zeros(0)
    return LatticeSupport(pts, n2, eigen, weights, prods, exact_eigen)


def enumerate_weights(rs: RootSystem, spec: KernelSpec) -> Iterator[Weight]:
    sup = lattice_support(rs, spec)
    for c in sup.coords:
        yield Weight(tuple(int(v) for v in c), FUNDAMENTAL, (rs.series, rs.rank))


def _dominant_mask(sup: LatticeSupport) -> np.ndarray:
    return np.all(sup.coords > 0, axis=1)


# -- evaluation ----------------------------------------------------------------------

def _turns(rs: RootSystem, H) -> np.ndarray:
    if isinstance(H, TorusPoint):
        return np.asarray(H.turns, dtype=float)
    return np.asarray(H, dtype=float).reshape(rs.rank)


def _pairwise_sum(v: np.ndarray) -> complex:
    # numpy reduces a contiguous axis by pairwise summation
    return complex(np.sum(np.ascontiguousarray(v)))


def _time_phase(sup: LatticeSupport, t: float) -> np.ndarray:
    return np.exp(-1j * t * sup.eigen)


def _chamber(rs: RootSystem, spec: KernelSpec, t: float, x: np.ndarray) -> KernelValue:
    sup = lattice_support(rs, spec)
    dists = rs.wall_distances(x)
    if dists.min() < WALL_TOLERANCE:
        raise WallTooClose(float(dists.min()), WALL_TOLERANCE)
    dom = _dominant_mask(sup)
    pts = sup.coords[dom]
    dims = sup.products[dom] / float(rs.rho_products)
    num = np.zeros(len(pts), dtype=complex)
    for s in rs.weyl_group():
        num += s.det * np.exp(2j * math.pi * ((pts @ s.array.T) @ x))
    chi = num / weyl_denominator(rs, x)
    terms = sup.weights[dom] * _time_phase(sup, t)[dom] * dims * chi
    return KernelValue(_pairwise_sum(terms), int(dom.sum()), "weight_chamber")


def _lattice(rs: RootSystem, spec: KernelSpec, t: float, x: np.ndarray) -> KernelValue:
    sup = lattice_support(rs, spec)
    dists = rs.wall_distances(x)
    if dists.min() < WALL_TOLERANCE:
        raise WallTooClose(float(dists.min()), WALL_TOLERANCE)
    terms = np.exp(-1j * t * _norm2_over_beta(rs, spec, sup)) * np.exp(2j * math.pi * (sup.coords @ x)) * sup.weights * sup.products
    pref = np.exp(1j * t * float(rs.rho_norm2 / spec.beta)) / (float(rs.rho_products) * weyl_denominator(rs, x))
    return KernelValue(complex(pref * _pairwise_sum(terms)), len(sup), "weight_lattice")


def _norm2_over_beta(rs: RootSystem, spec: KernelSpec, sup: LatticeSupport) -> np.ndarray:
    return sup.norm2_scaled / (rs.lattice_period * float(spec.beta))


def _characters_at(rs: RootSystem, pts: np.ndarray, x: np.ndarray, max_wall_distance: float) -> np.ndarray:
    """chi_lambda(H) for each row of pts (any chamber), chi_{s lambda} = det(s) chi_lambda."""
    dists = rs.wall_distances(x)
    if dists.min() >= WALL_TOLERANCE:
        num = np.zeros(len(pts), dtype=complex)
        for s in rs.weyl_group():
            num += s.det * np.exp(2j * math.pi * ((pts @ s.array.T) @ x))
        return num / weyl_denominator(rs, x)
    use_series = dists.max() <= max_wall_distance
    out = np.zeros(len(pts), dtype=complex)
    cache: dict[tuple[int, ...], complex] = {}
    for i, c in enumerate(pts):
        dom, sign = rs.dominant_representative(c)
        if any(v == 0 for v in dom):
            continue
        val = cache.get(dom)
        if val is None:
            if use_series:
                val = character_series_near_wall(rs, dom, x).value
            else:
                val = characters.character_stable(rs, dom, x)
            cache[dom] = val
        out[i] = sign * val
    return out


@lru_cache(maxsize=32)
def _coset_amplitudes(rs: RootSystem, spec: KernelSpec, x: tuple[float, ...]) -> tuple[np.ndarray, tuple[np.ndarray, ...]]:
    """Time-independent part phi (prod <alpha,lambda>/prod <alpha,rho>) chi_lambda and coset masks."""
    sup = lattice_support(rs, spec)
    xa = np.array(x)
    regular = sup.products != 0
    chi = np.zeros(len(sup), dtype=complex)
    chi[regular] = _characters_at(rs, sup.coords[regular], xa, DEFAULT_MAX_WALL_DISTANCE)
    amp = sup.weights * sup.products / float(rs.rho_products) * chi
    reps = [w.coords for w in lattice_cosets(rs)]
    index = {coset_key(rs, mu): k for k, mu in enumerate(reps)}
    labels = np.array([index[coset_key(rs, c)] for c in sup.coords], dtype=np.int64)
    return amp, tuple(labels == k for k in range(len(reps)))


def coset_components(rs: RootSystem, spec: KernelSpec, t: float, H) -> dict[tuple[int, ...], complex]:
    """K^mu = sum over lambda in Gamma + mu of e^{-it|lambda|^2} phi (prod <alpha,lambda>/prod <alpha,rho>) chi_lambda."""
    x = _turns(rs, H)
    sup = lattice_support(rs, spec)
    amp, masks = _coset_amplitudes(rs, spec, tuple(float(v) for v in x))
    terms = np.exp(-1j * t * _norm2_over_beta(rs, spec, sup)) * amp
    reps = [w.coords for w in lattice_cosets(rs)]
    return {mu: (_pairwise_sum(terms[m]) if m.any() else 0j) for mu, m in zip(reps, masks)}


def _coset(rs: RootSystem, spec: KernelSpec, t: float, x: np.ndarray) -> KernelValue:
    parts = coset_components(rs, spec, t, x)
    pref = np.exp(1j * t * float(rs.rho_norm2 / spec.beta)) / len(rs.weyl_group())
    total = math.fsum(v.real for v in parts.values()) + 1j * math.fsum(v.imag for v in parts.values())
    return KernelValue(complex(pref * total), len(lattice_support(rs, spec)), "root_coset")


def _stable(rs: RootSystem, spec: KernelSpec, t: float, x: np.ndarray) -> KernelValue:
    sup = lattice_support(rs, spec)
    dom = np.nonzero(_dominant_mask(sup))[0]
    phase = _time_phase(sup, t)
    terms = np.zeros(len(dom), dtype=complex)
    for j, i in enumerate(dom):
        table = weight_multiplicities(rs, tuple(int(v) for v in sup.coords[i]))
        chi = np.sum(table.counts * np.exp(2j * math.pi * (table.weights @ x)))
        terms[j] = sup.weights[i] * phase[i] * table.dimension * chi
    return KernelValue(_pairwise_sum(terms), len(dom), "stable_multiplicity")


_ROUTES = {
    "weight_chamber": _chamber,
    "weight_lattice": _lattice,
    "root_coset": _coset,
    "stable_multiplicity": _stable,
}


def schrodinger_kernel(rs: RootSystem, spec: KernelSpec, t: float, H, method: str | None = None) -> KernelValue:
    m = method or spec.method
    if m not in _ROUTES:
        raise ValueError(f"unknown kernel method {m!r}")
    return _ROUTES[m](rs, spec, float(t), _turns(rs, H))


def kernel_period(rs: RootSystem, spec: KernelSpec) -> Fraction:
    """Contractual period of t -> K_N(t, H), as a multiple of 2 pi: D * beta."""
    return rs.lattice_period * spec.beta


def minimal_period(rs: RootSystem, spec: KernelSpec) -> Fraction:
    """Least period of the truncated kernel (multiple of 2 pi): 1 / gcd of the support eigenvalues."""
    return _minimal_from_eigen(lattice_support(rs, spec).exact_eigen)


def _minimal_from_eigen(values) -> Fraction:
    vals = [Fraction(v) for v in values if v != 0]
    if not vals:
        return Fraction(0)
    num = reduce(gcd, (abs(v.numerator) for v in vals))
    den = reduce(lcm, (v.denominator for v in vals))
    return Fraction(den, num)


# -- grid evaluation -------------------------------------------------------------------

class KernelGrid:
    """K_N on many (t, H) at once by the weight-lattice route.

    Points closer than the quotient tolerance to a wall are delegated to ``root_coset``
    (central elements, via the near-wall series) or ``stable_multiplicity``.
    """

    def __init__(self, rs: RootSystem, spec: KernelSpec, threads: int | None = None, chunk: int = 128):
        self.rs = rs
        self.spec = spec
        self.support = lattice_support(rs, spec)
        self.threads = max(1, threads or min(4, os.cpu_count() or 1))
        self.chunk = chunk

    def _block(self, ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
        rs, sup = self.rs, self.support
        e = np.exp(2j * math.pi * (xs @ sup.coords.T)) * (sup.weights * sup.products)[None, :]
        n2 = _norm2_over_beta(rs, self.spec, sup)
        out = np.empty((len(ts), len(xs)), dtype=complex)
        for k, t in enumerate(ts):
            out[k] = np.sum(e * np.exp(-1j * t * n2)[None, :], axis=1)
        den = np.array([weyl_denominator(rs, x) for x in xs])
        rho = np.exp(1j * ts * float(rs.rho_norm2 / self.spec.beta))
        return out * rho[:, None] / (float(rs.rho_products) * den[None, :])

    def evaluate(self, ts: Sequence[float], points: np.ndarray) -> tuple[np.ndarray, list[str]]:
        ts = np.asarray(ts, dtype=float).reshape(-1)
        xs = np.asarray(points, dtype=float).reshape(-1, self.rs.rank)
        dists = self.rs.wall_distances(xs)
        mind = dists.min(axis=1) if dists.size else np.full(len(xs), np.inf)
        regular = np.nonzero(mind >= WALL_TOLERANCE)[0]
        out = np.empty((len(ts), len(xs)), dtype=complex)
        methods = ["weight_lattice"] * len(xs)
        blocks = [regular[i:i + self.chunk] for i in range(0, len(regular), self.chunk)]
        if blocks:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(lambda b: self._block(ts, xs[b]), blocks))
            for b, res in zip(blocks, results):
                out[:, b] = res
        for j in np.nonzero(mind < WALL_TOLERANCE)[0]:
            near_all = dists[j].max() <= DEFAULT_MAX_WALL_DISTANCE
            m = "root_coset" if near_all else "stable_multiplicity"
            methods[j] = m
            for k, t in enumerate(ts):
                out[k, j] = schrodinger_kernel(self.rs, self.spec, t, xs[j], m).value
        return out, methods


# -- circles and products ----------------------------------------------------------------

def torus_kernel(alpha, N: int, cutoff: Cutoff, t: float, theta) -> complex | np.ndarray:
    """sum_n phi(n^2/(alpha N^2)) e^{-i t n^2/alpha + i n theta}."""
    a = to_rational(alpha)
    bound = cutoff.radius * a * N * N
    nmax = isqrt(bound.numerator // bound.denominator + 1) + 1
    n = np.arange(-nmax, nmax + 1)
    w = cutoff(n * n / (float(a) * N * N))
    keep = w != 0
    n, w = n[keep], w[keep]
    th = np.asarray(theta, dtype=float)
    vals = np.sum(w * np.exp(-1j * t * n * n / float(a)) * np.exp(1j * np.multiply.outer(th, n)), axis=-1)
    return complex(vals) if th.ndim == 0 else vals


@dataclass(frozen=True)
class ProductMetric:
    """alpha_1 dt_1^2 + ... (circles) times beta_j g_j (simple factors), all scales rational."""

    circle_scales: tuple[Fraction, ...] = ()
    group_scales: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = tuple(to_rational(a) for a in self.circle_scales)
        gs = tuple(to_rational(b) for b in self.group_scales)
        if any(v <= 0 for v in cs + gs):
            raise ValueError("metric scales must be positive")
        object.__setattr__(self, "circle_scales", cs)
        object.__setattr__(self, "group_scales", gs)

    @property
    def D0(self) -> Fraction:
        """Least positive rational with D0/alpha_i and D0/beta_j all natural numbers."""
        scales = self.circle_scales + self.group_scales
        if not scales:
            return Fraction(1)
        return Fraction(reduce(lcm, (s.numerator for s in scales)), reduce(gcd, (s.denominator for s in scales)))


def flow_period(metric: ProductMetric, systems: Sequence[RootSystem]) -> Fraction:
    """T / 2 pi = D0 * prod D_j; the kernel of the product flow is T-periodic."""
    if len(systems) != len(metric.group_scales):
        raise ValueError("one root system per simple factor is required")
    return metric.D0 * math.prod(rs.lattice_period for rs in systems)


def product_kernel(
    metric: ProductMetric,
    systems: Sequence[RootSystem],
    N: int,
    t: float,
    point: Sequence,
    cutoff: Cutoff = Cutoff(),
    method: str = "auto",
) -> complex:
    """Product of the circle kernels and the simple-factor kernels at one point.

    ``point`` lists the circle angles first, then one torus point (turns) per simple factor.
    """
    nc, ng = len(metric.circle_scales), len(metric.group_scales)
    if len(systems) != ng or len(point) != nc + ng:
        raise ValueError(f"expected {nc} circle angles and {ng} group points")
    val = complex(1.0)
    for a, theta in zip(metric.circle_scales, point[:nc]):
        val *= torus_kernel(a, N, cutoff, t, float(theta))
    for rs, b, h in zip(systems, metric.group_scales, point[nc:]):
        spec = KernelSpec(N, cutoff, "weight_lattice", b)
        val *= group_kernel(rs, spec, t, h, method)
    return val


def group_kernel(rs: RootSystem, spec: KernelSpec, t: float, H, method: str = "auto") -> complex:
    """One kernel value, choosing a valid route when ``method`` is auto."""
    if method != "auto":
        return schrodinger_kernel(rs, spec, t, H, method).value
    x = _turns(rs, H)
    d = rs.wall_distances(x)
    if d.min() >= WALL_TOLERANCE:
        m = "weight_lattice"
    elif d.max() <= DEFAULT_MAX_WALL_DISTANCE:
        m = "root_coset"
    else:
        m = "stable_multiplicity"
    return schrodinger_kernel(rs, spec, t, x, m).value

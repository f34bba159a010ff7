import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lieflow.kernel import (
    METHODS,
    Cutoff,
    KernelGrid,
    KernelSpec,
    ProductMetric,
    TermBudgetExceeded,
    coset_components,
    flow_period,
    group_kernel,
    kernel_period,
    lattice_support,
    minimal_period,
    product_kernel,
    schrodinger_kernel,
    torus_kernel,
)
from lieflow.characters import WallTooClose
from lieflow.rootsys import build_root_system

import oracles


@pytest.fixture(scope="module")
def su2():
    return build_root_system("A", 1, "unit_weight")


@pytest.fixture(scope="module")
def a2():
    return build_root_system("A", 2)


def test_cutoff_shape():
    phi = Cutoff()
    assert phi(np.array([0.0]))[0] == pytest.approx(1.0)
    assert phi(np.array([2.0, -2.0, 3.0])).tolist() == [0.0, 0.0, 0.0]
    assert 0 < phi(np.array([1.9]))[0] < 1e-3
    with pytest.raises(ValueError):
        Cutoff("gaussian")
    custom = Cutoff("custom", 1, func=lambda x: 1 - x * x)
    assert custom(np.array([0.5, 1.5])).tolist() == [0.75, 0.0]


def test_su2_support_count(su2):
    sup = lattice_support(su2, KernelSpec(4))
    assert sorted(int(c[0]) for c in sup.coords) == list(range(-5, 6))
    assert set(sup.exact_eigen) == {Fraction(m * m - 1) for m in range(6)}


@pytest.mark.parametrize("N", [4, 8])
def test_a2_support_matches_box_count(a2, N):
    sup = lattice_support(a2, KernelSpec(N))
    gram = [[Fraction(2, 3), Fraction(1, 3)], [Fraction(1, 3), Fraction(2, 3)]]
    # |k| < 2N^2 with k = |c|^2 - |rho|^2 and |rho|^2 = 2
    assert len(sup) == oracles.box_count(gram, Fraction(2 + 2 * N * N), 3 * N)
    assert np.all(np.diff(sup.norm2_scaled) >= 0)


def test_term_budget(a2):
    with pytest.raises(TermBudgetExceeded) as info:
        lattice_support(a2, KernelSpec(64, term_budget=1000))
    assert info.value.count > 1000


@pytest.mark.parametrize("N", [3, 8])
@pytest.mark.parametrize("t,theta", [(0.0, 0.4), (0.37, 1.3), (2.1, -2.6)])
def test_su2_kernel_oracle(su2, N, t, theta):
    phi = Cutoff()
    ref = oracles.su2_kernel(N, t, theta, phi)
    x = [theta / (2 * math.pi)]
    for m in METHODS:
        got = schrodinger_kernel(su2, KernelSpec(N), t, x, m).value
        assert abs(got - ref) < 1e-9 * max(1.0, abs(ref)), m


@pytest.mark.parametrize("N", [2, 4])
def test_a2_kernel_brute_force(a2, N):
    rng = np.random.default_rng(N)
    phi = Cutoff()
    for _ in range(2):
        x = rng.random(2)
        t = float(rng.random())
        ref = oracles.a2_kernel_brute(N, t, x, phi)
        got = schrodinger_kernel(a2, KernelSpec(N), t, x, "weight_lattice").value
        assert abs(got - ref) < 1e-9 * max(1.0, abs(ref))


@pytest.mark.parametrize("key", [("A", 1), ("A", 2), ("B", 2), ("G", 2)])
def test_routes_agree_off_walls(key):
    rs = build_root_system(*key)
    spec = KernelSpec(6)
    rng = np.random.default_rng(1)
    for _ in range(3):
        x = rng.random(rs.rank)
        t = float(rng.random() * 5)
        vals = {m: schrodinger_kernel(rs, spec, t, x, m).value for m in METHODS}
        scale = max(1.0, max(abs(v) for v in vals.values()))
        for m, v in vals.items():
            assert abs(v - vals["stable_multiplicity"]) < 1e-8 * scale, m


@pytest.mark.parametrize("key", [("A", 2), ("B", 2)])
def test_routes_agree_near_walls(key):
    rs = build_root_system(*key)
    spec = KernelSpec(4)
    # identity, every wall near, and a single wall <alpha_1, H> ~ 0
    one_wall = np.array([0.15, 0.3 + 1e-9]) if key == ("A", 2) else np.array([1e-9, 0.3])
    for x in [np.zeros(rs.rank), np.full(rs.rank, 1e-8), one_wall]:
        t = 0.71
        ref = schrodinger_kernel(rs, spec, t, x, "stable_multiplicity").value
        got = group_kernel(rs, spec, t, x)
        assert abs(got - ref) < 1e-8 * max(1.0, abs(ref))
        with pytest.raises(WallTooClose):
            schrodinger_kernel(rs, spec, t, x, "weight_lattice")


def test_kernel_at_identity_is_dimension_sum(su2):
    N = 8
    spec = KernelSpec(N)
    phi = Cutoff()
    ref = sum(float(phi(np.array([(m * m - 1) / N**2]))[0]) * m * m for m in range(1, 3 * N))
    assert abs(schrodinger_kernel(su2, spec, 0.0, [0.0], "root_coset").value - ref) < 1e-9 * ref


def test_coset_components_sum(a2):
    spec = KernelSpec(5)
    x = np.array([0.13, 0.29])
    parts = coset_components(a2, spec, 0.4, x)
    assert len(parts) == 3
    total = sum(parts.values()) * np.exp(1j * 0.4 * 2) / 6
    assert abs(total - schrodinger_kernel(a2, spec, 0.4, x, "stable_multiplicity").value) < 1e-8 * abs(total)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([("A", 1), ("A", 2), ("B", 2)]), st.integers(0, 10**6))
def test_kernel_symmetries(key, seed):
    rs = build_root_system(*key)
    spec = KernelSpec(4)
    rng = np.random.default_rng(seed)
    x = rng.random(rs.rank)
    if rs.wall_distances(x).min() < 1e-3:
        return
    t = float(rng.random() * 3)
    k = schrodinger_kernel(rs, spec, t, x).value
    scale = max(1.0, abs(k))
    T = 2 * math.pi * float(kernel_period(rs, spec))
    assert abs(schrodinger_kernel(rs, spec, t + T, x).value - k) < 1e-8 * scale
    assert abs(schrodinger_kernel(rs, spec, -t, -x).value - np.conj(k)) < 1e-9 * scale
    for s in rs.weyl_group():
        assert abs(schrodinger_kernel(rs, spec, t, s.array.T @ x).value - k) < 1e-9 * scale


def test_period_values(su2, a2):
    assert kernel_period(su2, KernelSpec(4)) == 1
    assert kernel_period(a2, KernelSpec(4)) == 3
    assert kernel_period(a2, KernelSpec(4, beta=Fraction(1, 2))) == Fraction(3, 2)
    assert minimal_period(su2, KernelSpec(8)) == 1
    m = minimal_period(a2, KernelSpec(8))
    assert (kernel_period(a2, KernelSpec(8)) / m).denominator == 1


def test_flow_period_circle_times_su2():
    std = build_root_system("A", 1)
    unit = build_root_system("A", 1, "unit_weight")
    metric = ProductMetric((Fraction(1, 2),), (Fraction(1, 3),))
    assert metric.D0 == 1
    assert flow_period(metric, [unit]) == 1
    assert flow_period(metric, [std]) == std.lattice_period == 2
    assert ProductMetric((Fraction(2),), (Fraction(3),)).D0 == 6
    with pytest.raises(ValueError):
        flow_period(metric, [])
    with pytest.raises(ValueError):
        ProductMetric((Fraction(-1),), ())


def test_torus_kernel_direct_sum():
    N, alpha = 6, Fraction(1, 2)
    phi = Cutoff()
    for t, theta in [(0.0, 0.0), (0.3, 1.2), (1.7, -0.4)]:
        ref = sum(
            float(phi(np.array([n * n / (float(alpha) * N * N)]))[0]) * np.exp(-1j * t * n * n / float(alpha) + 1j * n * theta)
            for n in range(-5 * N, 5 * N + 1)
        )
        assert abs(torus_kernel(alpha, N, phi, t, theta) - ref) < 1e-9 * max(1, abs(ref))


def test_product_kernel_factorizes(su2):
    metric = ProductMetric((Fraction(1, 2),), (Fraction(1, 3),))
    N, t = 5, 0.61
    point = [0.8, np.array([0.17])]
    circle = torus_kernel(Fraction(1, 2), N, Cutoff(), t, 0.8)
    group = schrodinger_kernel(su2, KernelSpec(N, beta=Fraction(1, 3)), t, point[1]).value
    assert abs(product_kernel(metric, [su2], N, t, point) - circle * group) < 1e-9 * abs(circle * group)
    T = 2 * math.pi * float(flow_period(metric, [su2]))
    val = product_kernel(metric, [su2], N, t, point)
    assert abs(product_kernel(metric, [su2], N, t + T, point) - val) < 1e-8 * abs(val)


def test_kernel_grid_matches_pointwise(a2):
    spec = KernelSpec(5)
    grid = KernelGrid(a2, spec, threads=2, chunk=3)
    pts = np.array([[0.13, 0.29], [0.15, 0.3 + 1e-9], [0.0, 0.0], [0.41, 0.07]])
    ts = [0.0, 0.9]
    vals, methods = grid.evaluate(ts, pts)
    assert methods == ["weight_lattice", "stable_multiplicity", "root_coset", "weight_lattice"]
    for k, t in enumerate(ts):
        for j, x in enumerate(pts):
            ref = schrodinger_kernel(a2, spec, t, x, "stable_multiplicity").value
            assert abs(vals[k, j] - ref) < 1e-8 * max(1.0, abs(ref))

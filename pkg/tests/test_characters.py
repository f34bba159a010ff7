import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lieflow.characters import (
    SeriesPreconditionError,
    SeriesTruncationError,
    WallTooClose,
    character,
    character_quotient,
    character_series_near_wall,
    character_stable,
    integer_phases,
    split_near_wall,
    weight_multiplicities,
)
from lieflow.rootsys import build_root_system, weyl_dimension

import oracles

RANK2 = [("A", 2), ("B", 2), ("G", 2)]


@pytest.fixture(scope="module")
def su2():
    return build_root_system("A", 1, "unit_weight")


@pytest.mark.parametrize("m", [1, 2, 3, 7, 20])
@pytest.mark.parametrize("theta", [0.3, 1.1, 2.9, -0.8])
def test_su2_closed_form(su2, m, theta):
    x = [theta / (2 * math.pi)]
    expected = oracles.su2_character(m, theta)
    assert abs(character_quotient(su2, (m,), x) - expected) < 1e-12 * max(1, m)
    assert abs(character_stable(su2, (m,), x) - expected) < 1e-12 * max(1, m)


def test_su2_identity_and_minus_identity(su2):
    for m in range(1, 12):
        assert abs(character_stable(su2, (m,), [0.0]) - m) < 1e-12
        # -1 = exp(pi i diag(1,-1)) sits at half a turn of w
        assert abs(character_stable(su2, (m,), [0.5]) - (-1) ** (m - 1) * m) < 1e-9


def test_freudenthal_su2_string(su2):
    table = weight_multiplicities(su2, (4,))
    assert table.as_dict() == {(3,): 1, (1,): 1, (-1,): 1, (-3,): 1}
    assert table.dimension == 4


def test_freudenthal_a2_adjoint():
    rs = build_root_system("A", 2)
    table = weight_multiplicities(rs, (2, 2))
    assert table.dimension == 8
    assert table[(0, 0)] == 2
    assert len(table) == 7
    for w in [(1, 1), (-1, 2), (2, -1), (-1, -1), (1, -2), (-2, 1)]:
        assert table[w] == 1


@pytest.mark.parametrize("lam", [(1, 1), (2, 1), (1, 3), (3, 2), (4, 4)])
def test_su3_tableau_oracle(lam):
    rs = build_root_system("A", 2)
    rng = np.random.default_rng(sum(lam))
    for _ in range(4):
        x = rng.random(2)
        ref = oracles.su3_character(lam, x)
        assert abs(character_stable(rs, lam, x) - ref) < 1e-10 * oracles.su3_dimension(lam)
        if rs.wall_distances(x).min() > 1e-3:
            assert abs(character_quotient(rs, lam, x) - ref) < 1e-8 * oracles.su3_dimension(lam)
    table = weight_multiplicities(rs, lam)
    counts = {}
    a, b = lam[0] - 1, lam[1] - 1
    for k in oracles.semistandard_tableaux((a + b, b), 3):
        w = (k[0] - k[1], k[1] - k[2])
        counts[w] = counts.get(w, 0) + 1
    assert table.as_dict() == counts


@pytest.mark.parametrize("key", RANK2 + [("A", 3), ("B", 3)])
def test_dimension_from_multiplicities(key):
    rs = build_root_system(*key)
    for lam in [(1,) * rs.rank, (2,) + (1,) * (rs.rank - 1), (1,) * (rs.rank - 1) + (3,)]:
        assert weight_multiplicities(rs, lam).dimension == weyl_dimension(rs, lam)


@pytest.mark.parametrize("key", RANK2)
def test_quotient_matches_stable_off_walls(key):
    rs = build_root_system(*key)
    rng = np.random.default_rng(7)
    for lam in [(1, 1), (2, 3), (5, 1)]:
        d = weyl_dimension(rs, lam)
        for _ in range(6):
            x = rng.random(2)
            if rs.wall_distances(x).min() < 1e-2:
                continue
            assert abs(character_quotient(rs, lam, x) - character_stable(rs, lam, x)) < 1e-9 * d


@pytest.mark.parametrize("key", RANK2)
def test_series_matches_stable_near_walls(key):
    rs = build_root_system(*key)
    rng = np.random.default_rng(3)
    for lam in [(1, 2), (3, 2)]:
        d = weyl_dimension(rs, lam)
        x = 1e-4 * rng.standard_normal(2)
        sv = character_series_near_wall(rs, lam, x)
        assert abs(sv.value - character_stable(rs, lam, x)) < 1e-10 * d
        assert sv.tail_bound <= 1e-12 * max(1.0, sum(abs(t) for t in sv.terms))


def test_series_at_central_point_has_full_modulus():
    rs = build_root_system("A", 2)
    center = np.array([1 / 3, 2 / 3])  # exp of a central element of SU(3)
    x1, _ = split_near_wall(rs, center)
    assert all(v == 0 for v in x1)
    for lam in [(2, 1), (2, 2), (4, 3)]:
        sv = character_series_near_wall(rs, lam, center)
        assert abs(abs(sv.value) - weyl_dimension(rs, lam)) < 1e-9
        assert abs(sv.value - character_stable(rs, lam, center)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(RANK2), st.integers(1, 5), st.integers(1, 5), st.integers(0, 10**6))
def test_character_symmetries(key, a, b, seed):
    rs = build_root_system(*key)
    lam = (a, b)
    rng = np.random.default_rng(seed)
    x = rng.random(2)
    d = weyl_dimension(rs, lam)
    chi = character_stable(rs, lam, x)
    assert abs(chi) <= d + 1e-9
    shift = rng.integers(-3, 4, 2)
    assert abs(character_stable(rs, lam, x + shift) - chi) < 1e-9 * d
    assert abs(character_stable(rs, lam, -x) - np.conj(chi)) < 1e-9 * d
    for s in rs.weyl_group():
        # W acts on turns through the transpose of its action on weights
        assert abs(character_stable(rs, lam, s.array.T @ x) - chi) < 1e-9 * d


def test_auto_dispatch_agrees_everywhere():
    rs = build_root_system("B", 2)
    lam = (3, 2)
    ref = lambda x: character_stable(rs, lam, x)
    for x in [np.array([0.21, 0.37]), np.array([1e-8, 2e-8]), np.array([0.25, 1e-9]), np.zeros(2)]:
        assert abs(character(rs, lam, x) - ref(x)) < 1e-9 * weyl_dimension(rs, lam)


def test_quotient_refuses_walls():
    rs = build_root_system("A", 2)
    with pytest.raises(WallTooClose) as info:
        character_quotient(rs, (2, 1), [0.15, 0.3 + 1e-9])
    assert info.value.distance < 1e-6


def test_series_precondition():
    rs = build_root_system("A", 2)
    with pytest.raises(SeriesPreconditionError):
        character_series_near_wall(rs, (2, 1), [0.3, 0.1])


def test_series_truncation_reports_required_order():
    rs = build_root_system("A", 2)
    x = np.array([0.02, -0.01])
    with pytest.raises(SeriesTruncationError) as info:
        character_series_near_wall(rs, (9, 9), x, truncation=4)
    need = info.value.required_M
    assert need > 4
    sv = character_series_near_wall(rs, (9, 9), x, truncation=need)
    assert abs(sv.value - character_stable(rs, (9, 9), x)) < 1e-8 * weyl_dimension(rs, (9, 9))


@pytest.mark.parametrize("key", [("A", 1)] + RANK2)
def test_dimension_difference_decay(key):
    # the k-th difference of the degree-|P| dimension polynomial along rho scales like N^(|P|-k)
    rs = build_root_system(*key)
    n_pos = len(rs.positive_roots)
    direction = (1,) * rs.rank

    def diff(k, N):
        return sum(
            (-1) ** (k - j) * math.comb(k, j) * weyl_dimension(rs, tuple(N + j * v for v in direction))
            for j in range(k + 1)
        )

    for k in range(n_pos):
        ratio = diff(k, 256) / diff(k, 128)
        assert abs(ratio / 2 ** (n_pos - k) - 1) < 0.1
    assert diff(n_pos + 1, 50) == 0


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(-5000, 5000), min_size=2, max_size=2),
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=2, max_size=2),
)
def test_integer_phases_match_exact_reduction(weight, turns):
    exact = sum(Fraction(w) * Fraction(x) for w, x in zip(weight, turns))
    exact -= math.floor(exact + Fraction(1, 2))
    got = integer_phases(np.array([weight]), np.array(turns))[0]
    assert abs(got - float(exact)) < 4e-16 or abs(abs(got - float(exact)) - 1) < 4e-16

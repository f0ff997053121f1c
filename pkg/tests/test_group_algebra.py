import math

import numpy as np
import pytest

from interchange.chain import LiftedWeight, lift_lazy
from interchange.errors import CapError, DegenerateWeightError, DisconnectedError, ParameterError
from interchange.graphs import WeightFunction, complete, path
from interchange.group_algebra import (
    GroupAlgebraElement,
    InterchangeExact,
    all_perms,
    compose,
    cycle_counts,
    cycle_type,
    delta_complete,
    delta_of_weights,
    identity_perm,
    interchange_exact,
    interchange_tv_mix_exact,
    invert,
    is_psd,
    nabla,
    octopus_check,
    octopus_gap,
    doubling_gap,
    doubling_inequality_check,
    regular_rep_matrix,
    transposition_perm,
)


def random_element(rng: np.random.Generator, n: int, support: int = 4) -> GroupAlgebraElement:
    perms = all_perms(n)
    coeffs = {}
    for _ in range(support):
        coeffs[perms[rng.integers(len(perms))]] = float(rng.normal())
    return GroupAlgebraElement(n, coeffs)


def random_connected(rng: np.random.Generator, n: int) -> WeightFunction:
    while True:
        entries = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.7:
                    entries[(i, j)] = float(rng.uniform(0.2, 2.0))
        w = WeightFunction(n, entries)
        if entries and w.is_connected() and (w.vertex_weights > 0).all():
            return w


def test_compose_and_invert_laws():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        p = tuple(rng.permutation(n))
        q = tuple(rng.permutation(n))
        assert compose(p, identity_perm(n)) == p
        assert compose(identity_perm(n), p) == p
        assert compose(p, invert(p)) == identity_perm(n)
        assert invert(compose(p, q)) == compose(invert(q), invert(p))


def test_compose_applies_right_factor_first():
    # q sends 0 -> 1, p sends 1 -> 2, so p q sends 0 -> 2
    p = (0, 2, 1)
    q = (1, 0, 2)
    assert compose(p, q)[0] == 2


def test_cycle_structure():
    assert cycle_type((1, 2, 0, 3)) == (3, 1)
    assert cycle_type(identity_perm(4)) == (1, 1, 1, 1)
    counts = cycle_counts((1, 0, 3, 2))
    assert counts[2] == 2 and counts[1] == 0
    assert sum(k * counts[k] for k in range(1, 5)) == 4


def test_all_perms_lexicographic():
    perms = all_perms(3)
    assert perms[0] == (0, 1, 2)
    assert perms == sorted(perms)
    assert len(perms) == 6


def test_element_arithmetic_and_adjoint():
    n = 3
    a = nabla(n, 0, 1)
    assert a.coefficient(identity_perm(n)) == 1.0
    assert a.coefficient(transposition_perm(n, 0, 1)) == -1.0
    assert a.is_self_adjoint()
    three_cycle = GroupAlgebraElement(n, {(1, 2, 0): 1.0})
    assert not three_cycle.is_self_adjoint()
    assert three_cycle.adjoint().coefficient(invert((1, 2, 0))) == 1.0
    zero = a - 1.0 * a
    assert zero.coeffs == {}


def test_delta_of_weights_coefficients():
    d = delta_of_weights(complete(3))
    assert d.coefficient(identity_perm(3)) == 3.0
    for i in range(3):
        for j in range(i + 1, 3):
            assert d.coefficient(transposition_perm(3, i, j)) == -1.0
    assert d.is_self_adjoint()


def test_delta_complete_matches_unit_weights():
    for n in (3, 4, 5):
        a = delta_complete(n) - delta_of_weights(complete(n))
        assert a.coeffs == {}


def test_regular_rep_identity_and_symmetry():
    ident = regular_rep_matrix(GroupAlgebraElement.identity(3))
    assert np.array_equal(ident, np.eye(6))
    m = regular_rep_matrix(delta_of_weights(complete(3)))
    assert np.allclose(m, m.T)
    assert np.allclose(np.diag(m), 3.0)


def test_regular_rep_complete3_spectrum():
    # blocks: trivial 0 (dim 1), standard 3 (dim 2, repeated twice), sign 6
    m = regular_rep_matrix(delta_of_weights(complete(3)))
    eigs = np.sort(np.linalg.eigvalsh(m))
    assert np.allclose(eigs, [0.0, 3.0, 3.0, 3.0, 3.0, 6.0], atol=1e-10)


def test_regular_rep_respects_convolution():
    rng = np.random.default_rng(1)
    for _ in range(10):
        a = random_element(rng, 4)
        b = random_element(rng, 4)
        lhs = regular_rep_matrix(a @ b)
        rhs = regular_rep_matrix(a) @ regular_rep_matrix(b)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_regular_rep_cap():
    with pytest.raises(CapError):
        regular_rep_matrix(GroupAlgebraElement.identity(8))


def test_complete_graph_generator_is_central():
    rng = np.random.default_rng(2)
    for _ in range(5):
        w = random_connected(rng, 4)
        commutator = delta_complete(4) @ delta_of_weights(w) - delta_of_weights(
            w
        ) @ delta_complete(4)
        assert commutator.max_abs_coefficient() <= 1e-10


def test_is_psd_basics():
    verdict = is_psd(delta_of_weights(complete(4)))
    assert verdict.psd
    assert verdict.min_eigenvalue == pytest.approx(0.0, abs=1e-9)
    lopsided = GroupAlgebraElement(
        3, {identity_perm(3): 1.0, transposition_perm(3, 0, 1): -2.0}
    )
    verdict = is_psd(lopsided)
    assert not verdict.psd
    assert verdict.min_eigenvalue == pytest.approx(-1.0, abs=1e-9)


def test_is_psd_requires_self_adjoint():
    with pytest.raises(ParameterError):
        is_psd(GroupAlgebraElement(3, {(1, 2, 0): 1.0}))


def test_is_psd_routes_agree():
    rng = np.random.default_rng(3)
    for _ in range(5):
        w = random_connected(rng, 4)
        gap = doubling_gap(lift_lazy(w))
        regular = is_psd(gap, method="regular")
        irrep = is_psd(gap, method="irrep")
        assert regular.psd == irrep.psd
        assert regular.min_eigenvalue == pytest.approx(irrep.min_eigenvalue, abs=1e-9)


def test_octopus_star3_full_spectrum():
    gap = octopus_gap(3, 0, [1.0, 1.0])
    eigs = np.sort(np.linalg.eigvalsh(regular_rep_matrix(gap)))
    assert np.allclose(eigs, [0.0, 0.0, 0.0, 3.0, 3.0, 3.0], atol=1e-9)


def test_octopus_unit_arms_n4():
    verdict = octopus_check(4, 0, [1.0, 1.0, 1.0])
    assert verdict.psd


def test_octopus_gap_scales_linearly():
    base = octopus_gap(4, 1, [0.5, 1.5, 2.0])
    scaled = octopus_gap(4, 1, [1.5, 4.5, 6.0])
    diff = scaled - 3.0 * base
    assert diff.max_abs_coefficient() <= 1e-12


def test_octopus_random_nonnegative_arms():
    rng = np.random.default_rng(4)
    for n in (3, 4, 5):
        for _ in range(20):
            arms = rng.uniform(0.0, 2.0, size=n - 1)
            if arms.sum() <= 0:
                continue
            hub = int(rng.integers(n))
            verdict = octopus_check(n, hub, arms)
            assert verdict.psd, (n, hub, arms)


def test_octopus_degenerate_and_invalid():
    with pytest.raises(DegenerateWeightError):
        octopus_check(3, 0, [0.0, 0.0])
    with pytest.raises(ParameterError):
        octopus_check(3, 0, [1.0, -1.0])
    with pytest.raises(ParameterError):
        octopus_check(3, 0, [1.0])
    with pytest.raises(ParameterError):
        octopus_check(3, 5, [1.0, 1.0])


def test_doubling_gap_complete3_value():
    # lifted complete(3) has eps = 1/2 and u^(2) = (5/4) on off-diagonals, so
    # the gap is (7/4) Delta and its top eigenvalue is (7/4) * 6
    gap = doubling_gap(lift_lazy(complete(3)))
    eigs = np.sort(np.linalg.eigvalsh(regular_rep_matrix(gap)))
    assert eigs[0] == pytest.approx(0.0, abs=1e-9)
    assert eigs[-1] == pytest.approx(10.5, abs=1e-9)


def test_doubling_check_random_lifted():
    rng = np.random.default_rng(5)
    for n in (3, 4):
        for _ in range(25):
            matrix = rng.uniform(0.0, 2.0, size=(n, n))
            matrix = 0.5 * (matrix + matrix.T)
            matrix[rng.random(size=(n, n)) < 0.2] = 0.0
            matrix = 0.5 * (matrix + matrix.T)
            u = LiftedWeight(matrix)
            if (u.vertex_weights <= 0).any():
                continue
            assert doubling_inequality_check(u).psd


def test_doubling_zero_diagonal():
    rng = np.random.default_rng(6)
    for _ in range(10):
        w = random_connected(rng, 4)
        u = LiftedWeight(w.dense())
        assert u.epsilon == 0.0
        assert doubling_inequality_check(u).psd


def test_doubling_single_edge_with_spectator():
    # mass on one edge plus a self-looped spectator vertex: the doubled
    # weight vanishes off the edge and the inequality still holds
    matrix = np.array([[0.7, 1.3, 0.0], [1.3, 0.4, 0.0], [0.0, 0.0, 2.0]])
    u = LiftedWeight(matrix)
    from interchange.chain import double_weight

    doubled = double_weight(u)
    assert doubled.matrix[0, 2] == pytest.approx(0.0, abs=1e-15)
    assert doubled.matrix[1, 2] == pytest.approx(0.0, abs=1e-15)
    assert doubled.matrix[0, 1] > 0
    assert doubling_inequality_check(u).psd


def test_interchange_exact_basics():
    w = complete(3)
    dist0 = interchange_exact(w, 0.0)
    assert dist0[0] == pytest.approx(1.0, abs=1e-12)
    assert np.abs(dist0[1:]).max() <= 1e-12
    dist = interchange_exact(w, 0.7)
    assert dist.sum() == pytest.approx(1.0, abs=1e-10)
    assert dist.min() >= -1e-12
    far = interchange_exact(w, 60.0)
    assert np.allclose(far, 1.0 / 6.0, atol=1e-10)


def test_interchange_exact_single_edge_law():
    w = WeightFunction(2, {(0, 1): 1.0})
    for t in (0.1, 0.5, 2.0):
        dist = interchange_exact(w, t)
        assert dist[1] == pytest.approx(0.5 * (1.0 - math.exp(-2.0 * t)), abs=1e-12)


def test_interchange_exact_cap():
    with pytest.raises(CapError):
        InterchangeExact(complete(6))


def test_interchange_tv_mix_single_edge():
    # TV(t) = exp(-2t) / 2 crosses 1/4 at t = ln(2) / 2
    w = WeightFunction(2, {(0, 1): 1.0})
    assert interchange_tv_mix_exact(w) == pytest.approx(math.log(2.0) / 2.0, abs=1e-5)


def test_interchange_tv_mix_monotone_in_connectivity():
    with pytest.raises(DisconnectedError):
        interchange_tv_mix_exact(WeightFunction(4, {(0, 1): 1.0, (2, 3): 1.0}))


def test_interchange_tv_mix_path_vs_complete():
    assert interchange_tv_mix_exact(path(4)) >= interchange_tv_mix_exact(complete(4))

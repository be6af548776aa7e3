import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subspacekit import (
    ConditioningWarning,
    Subspace,
    gap,
    halmos_decompose,
    join,
    orthonormalize,
    principal_angles,
    restricted_sum_operator,
    same_subspace,
    sum_operator_matrix,
)
from conftest import random_subspace


def line(*entries):
    return orthonormalize([list(entries)])


def pair_at_angles(angles, ambient=None):
    """E1 spanned by the first g axes, E2 by cos t_i e_i + sin t_i e_{g+i}."""
    g = len(angles)
    n = ambient or 2 * g
    first = Subspace(np.eye(n, dtype=np.complex128)[:, :g])
    cols = np.zeros((n, g), dtype=np.complex128)
    for i, t in enumerate(angles):
        cols[i, i] = np.cos(t)
        cols[g + i, i] = np.sin(t)
    return first, Subspace(cols)


class TestFiveParts:
    def test_fully_split_pair(self):
        # planes sharing one axis in C^4: every part one-dimensional
        a = orthonormalize([[1, 0, 0, 0], [0, 1, 0, 0]])
        b = orthonormalize([[0, 1, 0, 0], [0, 0, 1, 0]])
        dec = halmos_decompose(a, b)
        assert same_subspace(dec.in_both, line(0, 1, 0, 0))
        assert same_subspace(dec.only_first, line(1, 0, 0, 0))
        assert same_subspace(dec.only_second, line(0, 0, 1, 0))
        assert same_subspace(dec.in_neither, line(0, 0, 0, 1))
        assert dec.generic_dim == 0
        assert dec.generic_frame.shape == (4, 0)

    def test_generic_pair_angles(self):
        first, second = pair_at_angles([0.3, 0.7])
        dec = halmos_decompose(first, second)
        assert dec.in_both.dim == 0
        assert dec.only_first.dim == 0
        assert dec.only_second.dim == 0
        assert dec.in_neither.dim == 0
        assert np.allclose(dec.angles, [0.3, 0.7], atol=1e-12)

    def test_generic_frame_is_isometry(self):
        first, second = pair_at_angles([0.2, 0.5, 1.1])
        dec = halmos_decompose(first, second)
        f = dec.generic_frame
        assert f.shape == (6, 6)
        assert np.allclose(f.conj().T @ f, np.eye(6), atol=1e-12)

    def test_frame_reproduces_second_subspace(self):
        # in frame coordinates the second projection is the 2x2 angle block
        first, second = pair_at_angles([0.4, 0.9])
        dec = halmos_decompose(first, second)
        g = dec.generic_dim
        p2 = second.projection()
        for i, t in enumerate(dec.angles):
            pair = dec.generic_frame[:, [i, g + i]]
            block = pair.conj().T @ p2 @ pair
            c, s = np.cos(t), np.sin(t)
            expected = np.array([[c * c, c * s], [c * s, s * s]])
            assert np.allclose(block, expected, atol=1e-10)

    def test_generic_is_inside_first(self):
        first, second = pair_at_angles([0.3])
        dec = halmos_decompose(first, second)
        assert same_subspace(dec.generic, first)

    def test_mixed_structure(self):
        c, s = np.cos(0.5), np.sin(0.5)
        a = orthonormalize([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]])
        b = orthonormalize([[1, 0, 0, 0, 0], [0, c, s, 0, 0]])
        dec = halmos_decompose(a, b)
        assert dec.in_both.dim == 1
        assert dec.in_neither.dim == 2
        assert np.allclose(dec.angles, [0.5], atol=1e-12)

    def test_angle_multiset_matches_principal_angles(self):
        rng = np.random.default_rng(5)
        a = random_subspace(rng, 7, 3)
        b = random_subspace(rng, 7, 4)
        dec = halmos_decompose(a, b)
        oracle = principal_angles(a, b)
        # generic angles are the interior part of the principal angles
        interior = oracle[(oracle > 1e-8) & (oracle < np.pi / 2 - 1e-8)]
        assert np.allclose(np.sort(dec.angles), np.sort(interior), atol=1e-9)


class TestEndpointAbsorption:
    def test_near_zero_angle_goes_to_in_both(self):
        t = 1e-9
        a = line(1.0, 0.0)
        b = line(np.cos(t), np.sin(t))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditioningWarning)
            dec = halmos_decompose(a, b)
        assert dec.in_both.dim == 1
        assert dec.generic_dim == 0
        # the partner direction belongs to neither subspace
        assert dec.in_neither.dim == 1

    def test_near_right_angle_splits_to_only_parts(self):
        t = np.pi / 2 - 1e-9
        a = line(1.0, 0.0)
        b = line(np.cos(t), np.sin(t))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditioningWarning)
            dec = halmos_decompose(a, b)
        assert dec.only_first.dim == 1
        assert dec.only_second.dim == 1
        assert dec.generic_dim == 0


class TestSumOperator:
    def test_line_pair_oracle(self):
        t = 0.3
        a = line(1.0, 0.0)
        b = line(np.cos(t), np.sin(t))
        rep = restricted_sum_operator(a, b)
        assert abs(rep.sigma_min - (1 - np.cos(t))) < 1e-12
        assert abs(rep.sigma_max - (1 + np.cos(t))) < 1e-12
        assert abs(rep.per_angle_determinants[0] - np.sin(t) ** 2) < 1e-12

    def test_eigenvalues_by_part(self):
        # one shared axis (eigenvalue 2), one only-first axis (eigenvalue 1)
        a = orthonormalize([[1, 0, 0], [0, 1, 0]])
        b = line(1, 0, 0)
        _, matrix = sum_operator_matrix(a, b)
        eigs = np.sort(np.linalg.eigvalsh(matrix))
        assert np.allclose(eigs, [1.0, 2.0], atol=1e-12)

    def test_rejects_two_zero_subspaces(self):
        with pytest.raises(ValueError):
            restricted_sum_operator(Subspace.zero(3), Subspace.zero(3))

    def test_spectrum_tracks_angles(self):
        # no intersection: sigma_min is 1 - cos of the largest angle,
        # a shared direction contributes the top eigenvalue 2
        rng = np.random.default_rng(11)
        a = random_subspace(rng, 6, 2)
        b = random_subspace(rng, 6, 3)
        rep = restricted_sum_operator(a, b)
        assert abs(rep.sigma_min - (1 - np.cos(rep.angles.min()))) < 1e-10
        shared = random_subspace(rng, 6, 1)
        a2 = Subspace(np.linalg.qr(np.hstack([shared.basis, a.basis[:, :1]]))[0])
        b2 = Subspace(np.linalg.qr(np.hstack([shared.basis, b.basis[:, :1]]))[0])
        rep2 = restricted_sum_operator(a2, b2)
        assert abs(rep2.sigma_max - 2.0) < 1e-9


@given(
    n=st.integers(2, 7),
    da=st.integers(1, 6),
    db=st.integers(1, 6),
    seed=st.integers(0, 10**6),
)
def test_completeness_and_consistency(n, da, db, seed):
    rng = np.random.default_rng(seed)
    a = random_subspace(rng, n, min(da, n))
    b = random_subspace(rng, n, min(db, n))
    dec = halmos_decompose(a, b)
    total = (
        dec.in_both.dim + dec.only_first.dim + dec.only_second.dim
        + dec.in_neither.dim + 2 * dec.generic_dim
    )
    assert total == n
    assert dec.in_both.dim + dec.only_first.dim + dec.generic_dim == a.dim
    assert dec.in_both.dim + dec.only_second.dim + dec.generic_dim == b.dim
    if dec.angles.size:
        assert dec.angles.min() > 1e-8
        assert dec.angles.max() < np.pi / 2 - 1e-8


@given(n=st.integers(2, 6), seed=st.integers(0, 10**6))
def test_determinants_equal_sine_squares(n, seed):
    rng = np.random.default_rng(seed)
    a = random_subspace(rng, n, rng.integers(1, n))
    b = random_subspace(rng, n, rng.integers(1, n))
    rep = restricted_sum_operator(a, b)
    assert np.allclose(rep.per_angle_determinants, np.sin(rep.angles) ** 2, atol=1e-10)

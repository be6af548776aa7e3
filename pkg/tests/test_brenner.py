import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subspacekit import (
    InvariantVector,
    SLOT_ATOMS,
    SLOT_NAMES,
    Subspace,
    SubspaceSystem,
    atom,
    brenner_decompose,
    brenner_invariants,
    compose_from_multiplicities,
    direct_sum,
    gap,
    haar_unitary,
    is_isomorphic_three,
    isomorphism_between,
    map_system,
    normalize_double_triangle,
    orthonormalize,
    remark_example,
    restrict_system,
    same_subspace,
    verify_brenner,
    verify_isomorphism,
)


def line(*entries):
    return orthonormalize([list(entries)])


REMARK_INVARIANTS = InvariantVector(0, 0, 0, 1, 0, 0, 0, 1, 0)


class TestInvariantVector:
    def test_slot_count_and_names(self):
        assert len(SLOT_NAMES) == 9
        assert len(SLOT_ATOMS) == 9

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            InvariantVector(-1, 0, 0, 0, 0, 0, 0, 0, 0)

    def test_round_trip(self):
        v = InvariantVector.from_iterable(range(9))
        assert v.as_tuple() == tuple(range(9))

    def test_totals(self):
        v = InvariantVector(1, 1, 1, 1, 1, 1, 1, 2, 1)
        assert v.total_atoms == 8 + 2
        # the triangle slot occupies twice its multiplicity
        assert v.total_dim == 8 + 2 * 2

    def test_addition(self):
        a = InvariantVector.from_iterable([1] * 9)
        assert (a + a).as_tuple() == (2,) * 9


class TestAtomInvariants:
    @pytest.mark.parametrize("slot, index", list(enumerate(SLOT_ATOMS)))
    def test_each_atom_hits_one_slot(self, slot, index):
        v = brenner_invariants(atom(index))
        expected = [0] * 9
        expected[slot] = 1
        assert v.as_tuple() == tuple(expected)

    def test_additive_under_direct_sum(self):
        a = brenner_invariants(atom(5))
        b = brenner_invariants(atom(9))
        combined = brenner_invariants(direct_sum(atom(5), atom(9)))
        assert combined == a + b


class TestRemarkExample:
    """Two planes and a line in C^3 with a one-dimensional triangle part."""

    def test_invariants(self):
        assert brenner_invariants(remark_example()) == REMARK_INVARIANTS

    def test_triangle_family_directions(self):
        d = brenner_decompose(remark_example())
        assert same_subspace(d.pair_12, line(0, 0, 1))
        assert same_subspace(d.triangle_1, line(1, 0, 0.5))
        assert same_subspace(d.triangle_2, line(0, 1, 0.5))
        assert same_subspace(d.triangle_3, line(1, 1, 1))
        assert d.residual < 1e-12
        assert d.trusted

    def test_verifier_accepts_construction(self):
        system = remark_example()
        d = brenner_decompose(system)
        check = verify_brenner(system, d)
        assert check.passed
        assert check.max_gap < 1e-10
        assert check.spanning_deficit == 0

    def test_verifier_accepts_alternative_triangle_family(self):
        # triangle families are not unique; any transversal pair works
        system = remark_example()
        d = brenner_decompose(system)
        alt = dataclasses.replace(
            d,
            triangle_1=line(1, 0, 1 / 3),
            triangle_2=line(0, 1, 2 / 3),
        )
        check = verify_brenner(system, alt)
        assert check.passed

    def test_verifier_rejects_wrong_triangle_family(self):
        system = remark_example()
        d = brenner_decompose(system)
        # first triangle family not inside the first subspace
        bad = dataclasses.replace(d, triangle_1=line(1, 1, 0))
        assert not verify_brenner(system, bad).passed


class TestDecompose:
    def test_scramble_invariance(self):
        rng = np.random.default_rng(23)
        base = direct_sum(direct_sum(atom(9), atom(5)), atom(2))
        t = haar_unitary(base.ambient_dim, rng) * 1.7
        scrambled = map_system(t, base)
        assert brenner_invariants(scrambled) == brenner_invariants(base)

    def test_composed_system_recovers_multiplicities(self):
        v = InvariantVector(1, 0, 2, 0, 1, 0, 0, 2, 1)
        system, _ = compose_from_multiplicities(v, seed=11, cond_bound=10.0)
        d = brenner_decompose(system)
        assert d.invariants == v
        check = verify_brenner(system, d)
        assert check.passed

    def test_change_of_basis_reaches_normal_form(self):
        v = InvariantVector(0, 1, 0, 1, 0, 0, 1, 1, 0)
        system, _ = compose_from_multiplicities(v, seed=3, cond_bound=5.0)
        d = brenner_decompose(system)
        assert d.residual < 1e-8
        # the two composed copies of the same multiplicities are isomorphic
        other, _ = compose_from_multiplicities(v, seed=4, cond_bound=5.0)
        witness = isomorphism_between(system, other)
        report = verify_isomorphism(witness, system, other)
        assert report.passed

    def test_zero_system(self):
        z = Subspace.zero(3)
        d = brenner_decompose(SubspaceSystem.of(z, z, z))
        assert d.invariants == InvariantVector(0, 0, 0, 0, 0, 0, 0, 0, 3)
        assert d.residual == 0.0

    def test_full_system(self):
        f = Subspace.full(2)
        d = brenner_decompose(SubspaceSystem.of(f, f, f))
        assert d.invariants == InvariantVector(2, 0, 0, 0, 0, 0, 0, 0, 0)

    def test_requires_three_subspaces(self):
        with pytest.raises(ValueError):
            brenner_decompose(SubspaceSystem.of(line(1, 0), line(0, 1)))

    def test_verifier_flags_dropped_block(self):
        system, _ = compose_from_multiplicities(
            InvariantVector(0, 0, 0, 0, 0, 0, 0, 0, 2), seed=2
        )
        d = brenner_decompose(system)
        dropped = dataclasses.replace(d, outside=Subspace.zero(system.ambient_dim))
        check = verify_brenner(system, dropped)
        assert check.spanning_deficit == 2
        assert not check.passed


class TestNormalizeDoubleTriangle:
    def test_remark_carrier(self):
        # restrict the remark example's triangle families to their span
        system = remark_example()
        d = brenner_decompose(system)
        carrier = orthonormalize(
            np.hstack([d.triangle_1.basis, d.triangle_2.basis]).T
        )
        triple = restrict_system(
            SubspaceSystem.of(d.triangle_1, d.triangle_2, d.triangle_3), carrier
        )
        k, t = normalize_double_triangle(triple)
        assert k == 1
        mapped = map_system(t, triple)
        assert same_subspace(mapped.subspaces[0], line(1, 0))
        assert same_subspace(mapped.subspaces[1], line(0, 1))
        assert same_subspace(mapped.subspaces[2], line(1, 1))

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_scrambled_multiples(self, m):
        v = InvariantVector(0, 0, 0, 0, 0, 0, 0, m, 0)
        system, _ = compose_from_multiplicities(v, seed=40 + m, cond_bound=8.0)
        k, t = normalize_double_triangle(system)
        assert k == m
        mapped = map_system(t, system)
        n = system.ambient_dim
        top = orthonormalize(np.eye(n)[:k])
        bottom = orthonormalize(np.eye(n)[k:])
        diag = orthonormalize(np.hstack([np.eye(k), np.eye(k)]) / np.sqrt(2.0))
        assert gap(mapped.subspaces[0], top) < 1e-8
        assert gap(mapped.subspaces[1], bottom) < 1e-8
        assert gap(mapped.subspaces[2], diag) < 1e-8

    def test_rejects_non_triangle(self):
        with pytest.raises(ValueError):
            normalize_double_triangle(
                SubspaceSystem.of(line(1, 0), line(0, 1), line(0, 1))
            )


class TestIsomorphism:
    def test_same_invariants_gives_witness(self):
        v = InvariantVector(1, 1, 0, 0, 0, 2, 0, 1, 0)
        a, _ = compose_from_multiplicities(v, seed=6, cond_bound=12.0)
        b, _ = compose_from_multiplicities(v, seed=7, cond_bound=3.0)
        assert is_isomorphic_three(a, b)
        t = isomorphism_between(a, b)
        assert verify_isomorphism(t, a, b).passed

    def test_different_invariants(self):
        a, _ = compose_from_multiplicities(
            InvariantVector(1, 0, 0, 0, 0, 0, 0, 0, 0), seed=1
        )
        b, _ = compose_from_multiplicities(
            InvariantVector(0, 0, 0, 0, 0, 0, 0, 0, 1), seed=1
        )
        assert not is_isomorphic_three(a, b)
        assert isomorphism_between(a, b) is None

    def test_ambient_mismatch_is_not_isomorphic(self):
        assert not is_isomorphic_three(atom(9), direct_sum(atom(9), atom(1)))


@given(seed=st.integers(0, 10**5))
def test_invariants_are_scramble_invariant(seed):
    rng = np.random.default_rng(seed)
    counts = rng.integers(0, 2, 9)
    if counts.sum() == 0:
        counts[rng.integers(0, 9)] = 1
    v = InvariantVector.from_iterable(int(c) for c in counts)
    system, scramble = compose_from_multiplicities(v, seed=seed, cond_bound=6.0)
    assert brenner_invariants(system) == v
    back = map_system(np.linalg.inv(scramble), system)
    assert brenner_invariants(back) == v

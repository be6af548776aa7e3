import numpy as np
import pytest
from hypothesis import given, strategies as st

from subspacekit import (
    ConditioningError,
    IdempotentWitness,
    Subspace,
    SubspaceSystem,
    are_linearly_independent,
    atom,
    detect_double_triangle,
    detect_pentagon,
    direct_sum,
    find_nontrivial_idempotent,
    gap,
    haar_unitary,
    hom_basis,
    is_commutative,
    is_transitive,
    map_system,
    orthonormalize,
    restrict_system,
    same_subspace,
    split_by_idempotent,
    verify_isomorphism,
)
from conftest import random_subspace


def line(*entries):
    return orthonormalize([list(entries)])


def angled_pair(theta):
    """(C^2; first axis, line at angle theta)."""
    return SubspaceSystem.of(line(1.0, 0.0), line(np.cos(theta), np.sin(theta)))


class TestSubspaceSystem:
    def test_validates_ambient(self):
        with pytest.raises(ValueError):
            SubspaceSystem(3, (line(1, 0),))

    def test_labels_must_match_arity(self):
        with pytest.raises(ValueError):
            SubspaceSystem.of(line(1, 0), labels=("a", "b"))

    def test_direct_sum_dims(self):
        s = direct_sum(atom(2), atom(9))
        assert s.ambient_dim == 3
        assert s.dims() == (2, 1, 1)

    def test_direct_sum_arity_mismatch(self):
        pair = SubspaceSystem.of(line(1, 0), line(0, 1))
        with pytest.raises(ValueError):
            direct_sum(pair, atom(1))

    def test_map_system_preserves_dims(self):
        rng = np.random.default_rng(3)
        t = haar_unitary(3, rng) * 2.0
        mapped = map_system(t, direct_sum(atom(2), atom(9)))
        assert mapped.dims() == (2, 1, 1)

    def test_restrict_system_round_trip(self):
        plane = orthonormalize([[1, 0, 0], [0, 1, 0]])
        system = SubspaceSystem.of(line(1, 0, 0), line(1, 1, 0))
        restricted = restrict_system(system, plane)
        assert restricted.ambient_dim == 2
        assert restricted.dims() == (1, 1)

    def test_restrict_requires_containment(self):
        plane = orthonormalize([[1, 0, 0], [0, 1, 0]])
        with pytest.raises(ValueError):
            restrict_system(SubspaceSystem.of(line(0, 0, 1)), plane)


class TestHom:
    def test_no_morphisms_between_opposite_atoms(self):
        assert hom_basis(atom(2), atom(3)).dim == 0

    def test_one_morphism_into_larger_atom(self):
        assert hom_basis(atom(1), atom(2)).dim == 1

    def test_endomorphisms_of_double_triangle_are_scalars(self):
        assert hom_basis(atom(9), atom(9)).dim == 1

    def test_unconstrained_hom_is_full_matrix_space(self):
        empty = SubspaceSystem.of(Subspace.zero(2))
        full = SubspaceSystem.of(Subspace.full(3))
        basis = hom_basis(empty, SubspaceSystem.of(Subspace.zero(3)))
        assert basis.dim == 6  # all 3x2 matrices
        assert hom_basis(SubspaceSystem.of(Subspace.full(2)), full).dim == 6

    def test_hom_members_are_morphisms(self):
        rng = np.random.default_rng(8)
        source = SubspaceSystem.of(random_subspace(rng, 4, 2), random_subspace(rng, 4, 1))
        target = SubspaceSystem.of(random_subspace(rng, 5, 3), random_subspace(rng, 5, 2))
        basis = hom_basis(source, target)
        for x in basis.maps:
            for e, f in zip(source.subspaces, target.subspaces):
                image = x @ e.basis
                residual = image - f.projection() @ image
                assert np.linalg.norm(residual) < 1e-8

    def test_hom_composition_lands_in_hom(self):
        # functoriality spot check on atoms with known hom spaces
        ab = hom_basis(atom(1), atom(2))
        bc = hom_basis(atom(2), atom(8))
        assert ab.dim == 1 and bc.dim == 1
        composed = bc.maps[0] @ ab.maps[0]
        # composition must satisfy the Hom(atom(1), atom(8)) constraints
        for e, f in zip(atom(1).subspaces, atom(8).subspaces):
            image = composed @ e.basis
            assert np.linalg.norm(image - f.projection() @ image) < 1e-12

    def test_transitive_examples(self):
        assert is_transitive(atom(9))
        assert is_transitive(atom(5))
        assert not is_transitive(direct_sum(atom(9), atom(9)))
        assert not is_transitive(direct_sum(atom(2), atom(3)))


class TestCommutativity:
    def test_coordinate_pair_commutes(self):
        system = SubspaceSystem.of(line(1, 0), line(0, 1))
        assert is_commutative(system)

    def test_angled_pair_does_not(self):
        assert not is_commutative(angled_pair(0.4))

    def test_not_invariant_under_isomorphism(self):
        # the angled pair is isomorphic to the coordinate pair, yet one
        # commutes and the other does not
        theta = 0.4
        angled = angled_pair(theta)
        coords = SubspaceSystem.of(line(1.0, 0.0), line(0.0, 1.0))
        t = np.array([[1.0, np.cos(theta)], [0.0, np.sin(theta)]])
        report = verify_isomorphism(t, coords, angled)
        assert report.passed
        assert is_commutative(coords) and not is_commutative(angled)


class TestIdempotent:
    def test_indecomposables_return_none(self):
        for k in (2, 8, 9):
            assert find_nontrivial_idempotent(atom(k)) is None

    def test_decomposable_yields_verified_split(self):
        system = direct_sum(atom(2), atom(9))
        witness = find_nontrivial_idempotent(system)
        assert witness is not None
        first, second = split_by_idempotent(system, witness)
        assert {first.ambient_dim, second.ambient_dim} == {1, 2}
        assert first.arity == second.arity == 3

    def test_deterministic_in_seed(self):
        system = direct_sum(atom(2), atom(3))
        w1 = find_nontrivial_idempotent(system, seed=5)
        w2 = find_nontrivial_idempotent(system, seed=5)
        assert np.array_equal(w1.map, w2.map)

    def test_scrambled_decomposable_found(self):
        rng = np.random.default_rng(17)
        base = direct_sum(direct_sum(atom(5), atom(9)), atom(1))
        t = haar_unitary(base.ambient_dim, rng)
        system = map_system(t, base)
        witness = find_nontrivial_idempotent(system)
        assert witness is not None
        p = witness.map
        assert np.linalg.norm(p @ p - p, 2) < 1e-8

    def test_split_rejects_trivial_witness(self):
        system = direct_sum(atom(2), atom(3))
        n = system.ambient_dim
        bogus = IdempotentWitness(
            map=np.eye(n), split=(Subspace.full(n), Subspace.zero(n))
        )
        with pytest.raises(ValueError, match="trivial"):
            split_by_idempotent(system, bogus)

    def test_split_rejects_non_endomorphism(self):
        system = direct_sum(atom(2), atom(3))
        # projection onto a line that is not a subsystem direction
        v = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
        p = v @ v.conj().T
        bogus = IdempotentWitness(
            map=p, split=(Subspace(v), Subspace(orthonormalize([[1.0, -1.0]]).basis))
        )
        with pytest.raises(ValueError, match="endomorphism"):
            split_by_idempotent(system, bogus)

    def test_split_reassembles_the_system(self):
        # dimensions of the parts add back up per subspace
        system = direct_sum(direct_sum(atom(2), atom(9)), atom(7))
        witness = find_nontrivial_idempotent(system)
        first, second = split_by_idempotent(system, witness)
        for i in range(3):
            total = first.subspaces[i].dim + second.subspaces[i].dim
            assert total == system.subspaces[i].dim


class TestPredicates:
    def test_are_linearly_independent(self):
        assert are_linearly_independent([line(1, 0, 0), line(0, 1, 0)])
        assert not are_linearly_independent([line(1, 0, 0), line(1, 1e-14, 0)])
        assert are_linearly_independent([])
        assert are_linearly_independent([Subspace.zero(2), line(1, 0)])

    def test_double_triangle_on_axes_and_diagonal(self):
        assert detect_double_triangle(atom(9))

    def test_double_triangle_rejects_shared_line(self):
        system = SubspaceSystem.of(line(1, 0), line(1, 0), line(0, 1))
        assert not detect_double_triangle(system)

    def test_double_triangle_needs_arity_three(self):
        with pytest.raises(ValueError):
            detect_double_triangle(SubspaceSystem.of(line(1, 0), line(0, 1)))

    def test_pentagon_always_false_in_finite_dimension(self):
        # even a triple engineered to satisfy two of the three conditions
        e1 = orthonormalize([[1, 0, 0], [0, 1, 0]])
        e2 = line(0, 0, 1)
        e3 = orthonormalize([[0, 0, 1], [1, 0, 0]])
        assert not detect_pentagon(SubspaceSystem.of(e1, e2, e3))


@given(seed=st.integers(0, 10**6))
def test_random_triples_never_form_a_pentagon(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    system = SubspaceSystem.of(
        random_subspace(rng, n, int(rng.integers(0, n + 1))),
        random_subspace(rng, n, int(rng.integers(0, n + 1))),
        random_subspace(rng, n, int(rng.integers(0, n + 1))),
    )
    assert not detect_pentagon(system)


@given(seed=st.integers(0, 10**5))
def test_transitivity_is_isomorphism_invariant(seed):
    rng = np.random.default_rng(seed)
    base = atom(int(rng.integers(1, 10)))
    t = haar_unitary(base.ambient_dim, rng)
    mapped = map_system(t, base)
    assert is_transitive(base) == is_transitive(mapped)

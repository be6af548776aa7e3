"""Canonical decomposition of a system of three subspaces.

Every system of three subspaces (E1, E2, E3) of C^n splits, after an
invertible change of basis, into a direct sum of indecomposable blocks of
nine kinds: the eight "distributive" kinds, determined by which of the
three subspaces contain the block

    common   - contained in all three
    pair_jk  - contained in subspaces j and k only
    single_i - contained in subspace i only
    outside  - contained in none

and one genuinely two-dimensional kind, the double triangle: three lines
in a plane, pairwise spanning it.  The multiplicity of each kind is an
isomorphism invariant, and the full vector of nine multiplicities is a
complete invariant: two systems of three subspaces are isomorphic exactly
when their vectors agree.

The constructive split works inside the sum E1 + E2.  Writing T for the
restriction of P1 + P2 to that sum (invertible there), the maps
A_i = P_i T^{-1} give a pair of complementary oblique projections; applied
to the residual part of E3 inside E1 + E2 they produce the two partner
line-families of the double-triangle blocks.  The change of basis is then
read off one block at a time.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ConditioningError,
    ConditioningWarning,
    Subspace,
    ToleranceConfig,
    _column_span,
    _numerical_rank,
    complement,
    complement_within,
    gap,
    join,
    meet,
)
from .systems import SubspaceSystem, _require_arity_three, detect_double_triangle
from .two_subspaces import ANGLE_EPS, polish_near_orthonormal, sum_operator_matrix

__all__ = [
    "BrennerCheck",
    "BrennerDecomposition",
    "InvariantVector",
    "brenner_decompose",
    "brenner_invariants",
    "is_isomorphic_three",
    "isomorphism_between",
    "normalize_double_triangle",
    "verify_brenner",
]

# Names of the nine block kinds, in the fixed slot order used everywhere.
SLOT_NAMES = (
    "common",
    "pair_23",
    "pair_13",
    "pair_12",
    "single_1",
    "single_2",
    "single_3",
    "triangle",
    "outside",
)


@dataclass(frozen=True)
class InvariantVector:
    """Multiplicities of the nine block kinds, a complete isomorphism
    invariant of a three-subspace system.

    Each field counts blocks; the triangle blocks are two-dimensional, so
    they contribute twice their count to the ambient dimension.
    """

    common: int
    pair_23: int
    pair_13: int
    pair_12: int
    single_1: int
    single_2: int
    single_3: int
    triangle: int
    outside: int

    def __post_init__(self):
        for name in SLOT_NAMES:
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @classmethod
    def from_iterable(cls, values) -> "InvariantVector":
        values = tuple(values)
        if len(values) != 9:
            raise ValueError(f"expected 9 multiplicities, got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, name) for name in SLOT_NAMES)

    @property
    def total_atoms(self) -> int:
        return sum(self.as_tuple())

    @property
    def total_dim(self) -> int:
        """Ambient dimension of any system with these multiplicities."""
        return self.total_atoms + self.triangle

    def __add__(self, other: "InvariantVector") -> "InvariantVector":
        return InvariantVector(*(x + y for x, y in zip(self.as_tuple(), other.as_tuple())))


@dataclass(frozen=True)
class BrennerDecomposition:
    """Concrete block decomposition of a three-subspace system.

    The eleven subspaces are linearly independent and fill the ambient
    space; ``change_of_basis`` maps the system onto the coordinate normal
    form, and ``residual`` is the worst gap between a mapped subspace and
    its normal-form target.  ``sum_operator_sigma_min`` certifies the
    conditioning of the oblique split used for the triangle part (None when
    there is no triangle part).  Any :class:`ConditioningWarning` raised
    during construction is captured in ``warnings`` and marks the result
    as not trusted.
    """

    common: Subspace
    pair_23: Subspace
    pair_13: Subspace
    pair_12: Subspace
    single_1: Subspace
    single_2: Subspace
    single_3: Subspace
    triangle_1: Subspace
    triangle_2: Subspace
    triangle_3: Subspace
    outside: Subspace
    change_of_basis: np.ndarray
    residual: float
    sum_operator_sigma_min: Optional[float]
    warnings: tuple

    @property
    def invariants(self) -> InvariantVector:
        return InvariantVector(
            self.common.dim,
            self.pair_23.dim,
            self.pair_13.dim,
            self.pair_12.dim,
            self.single_1.dim,
            self.single_2.dim,
            self.single_3.dim,
            self.triangle_3.dim,
            self.outside.dim,
        )

    @property
    def trusted(self) -> bool:
        return not self.warnings


@dataclass(frozen=True)
class BrennerCheck:
    """Construction-independent verdict on a claimed decomposition."""

    subspace_gaps: tuple
    triangle_dims_equal: bool
    triangle_meet_dims: tuple
    triangle_join_gaps: tuple
    independent: bool
    spanning_deficit: int
    passed: bool

    @property
    def max_gap(self) -> float:
        worst = max(self.subspace_gaps) if self.subspace_gaps else 0.0
        if self.triangle_join_gaps:
            worst = max(worst, max(self.triangle_join_gaps))
        return worst


def _skeleton(system: SubspaceSystem, tol: ToleranceConfig):
    """All intersection-determined pieces of the decomposition.

    Returns a dict with the seven distributive pieces, the third triangle
    family, the outside part, and the intermediate meets needed for the
    consistency checks.
    """
    e1, e2, e3 = system.subspaces
    meet_12 = meet(e1, e2, tol)
    meet_13 = meet(e1, e3, tol)
    meet_23 = meet(e2, e3, tol)
    common = meet(meet_12, e3, tol)

    pair_23 = complement_within(meet_23, common, tol)
    pair_13 = complement_within(meet_13, common, tol)
    pair_12 = complement_within(meet_12, common, tol)

    join_12 = join(e1, e2, tol)
    join_13 = join(e1, e3, tol)
    join_23 = join(e2, e3, tol)

    inside_1 = meet(e1, join_23, tol)
    inside_2 = meet(e2, join_13, tol)
    inside_3 = meet(e3, join_12, tol)

    single_1 = complement_within(e1, inside_1, tol)
    single_2 = complement_within(e2, inside_2, tol)
    single_3 = complement_within(e3, inside_3, tol)

    # The triangle part of E3: what is inside E1 + E2 beyond the parts E3
    # shares with E1 and with E2 individually.
    shared_3 = join(meet_13, meet_23, tol)
    triangle_3 = complement_within(inside_3, shared_3, tol)

    outside = complement(join(join_12, e3, tol))

    # Dimension form of the triangle identities: the excess of E_i inside
    # the span of the others over the pairwise-shared parts is the same k
    # for all three.  Mismatch means an unstable rank decision upstream.
    k = triangle_3.dim
    excess_1 = inside_1.dim - join(meet_12, meet_13, tol).dim
    excess_2 = inside_2.dim - join(meet_12, meet_23, tol).dim
    if excess_1 != k or excess_2 != k:
        raise ConditioningError(
            f"triangle multiplicities disagree across the three subspaces "
            f"({excess_1}, {excess_2}, {k}); rank decisions were inconsistent"
        )

    return {
        "common": common,
        "pair_23": pair_23,
        "pair_13": pair_13,
        "pair_12": pair_12,
        "single_1": single_1,
        "single_2": single_2,
        "single_3": single_3,
        "triangle_3": triangle_3,
        "outside": outside,
    }


def brenner_invariants(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> InvariantVector:
    """Multiplicity vector of a three-subspace system, without building the
    change of basis.  Cheaper than :func:`brenner_decompose` and enough for
    isomorphism testing."""
    _require_arity_three(system)
    pieces = _skeleton(system, tol)
    return InvariantVector(
        pieces["common"].dim,
        pieces["pair_23"].dim,
        pieces["pair_13"].dim,
        pieces["pair_12"].dim,
        pieces["single_1"].dim,
        pieces["single_2"].dim,
        pieces["single_3"].dim,
        pieces["triangle_3"].dim,
        pieces["outside"].dim,
    )


def brenner_decompose(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> BrennerDecomposition:
    """Full canonical decomposition of a three-subspace system.

    Builds the eleven block subspaces, the invertible change of basis onto
    the coordinate normal form, and a residual certifying the result.
    Rank-decision inconsistencies raise :class:`ConditioningError`;
    near-cutoff singular values are captured as warnings on the result.
    """
    _require_arity_three(system)
    e1, e2, e3 = system.subspaces
    n = system.ambient_dim

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pieces = _skeleton(system, tol)
        triangle_3 = pieces["triangle_3"]
        k = triangle_3.dim

        sigma_min = None
        if k:
            frame, t_matrix = sum_operator_matrix(e1, e2, tol)
            spectrum = np.linalg.svd(t_matrix, compute_uv=False)
            sigma_min = float(spectrum[-1])
            if spectrum[0] / sigma_min > tol.cond_warn:
                warnings.warn(
                    f"restricted sum operator has condition {spectrum[0] / sigma_min:.3e}",
                    ConditioningWarning,
                    stacklevel=2,
                )
            # Oblique split q = q1 + q2 with q1 in E1, q2 in E2, through
            # the inverse of the restricted sum operator.
            coeff = np.linalg.solve(t_matrix, frame.conj().T @ triangle_3.basis)
            lifted = frame @ coeff
            q1_vectors = e1.basis @ (e1.basis.conj().T @ lifted)
            q2_vectors = triangle_3.basis - q1_vectors
            triangle_1 = _family(q1_vectors, k, tol, "first triangle family")
            triangle_2 = _family(q2_vectors, k, tol, "second triangle family")
        else:
            q1_vectors = np.zeros((n, 0), dtype=np.complex128)
            q2_vectors = np.zeros((n, 0), dtype=np.complex128)
            triangle_1 = Subspace.zero(n)
            triangle_2 = Subspace.zero(n)

        # Change of basis: blocks in slot order, with the triangle columns
        # kept raw (q1 then q2) so that the third family lands exactly on
        # the diagonal pairs of coordinates.
        columns = [
            pieces["common"].basis,
            pieces["pair_23"].basis,
            pieces["pair_13"].basis,
            pieces["pair_12"].basis,
            pieces["single_1"].basis,
            pieces["single_2"].basis,
            pieces["single_3"].basis,
            q1_vectors,
            q2_vectors,
            pieces["outside"].basis,
        ]
        block_matrix = np.hstack(columns)
        if block_matrix.shape[1] != n:
            raise ConditioningError(
                f"blocks supply {block_matrix.shape[1]} directions for ambient dimension {n}"
            )
        spectrum = np.linalg.svd(block_matrix, compute_uv=False)
        if _numerical_rank(spectrum, tol) != n:
            raise ConditioningError("block directions are numerically dependent")
        condition = float(spectrum[0] / spectrum[-1])
        if condition > tol.cond_warn:
            warnings.warn(
                f"change of basis has condition {condition:.3e}",
                ConditioningWarning,
                stacklevel=2,
            )
        change_of_basis = np.linalg.inv(block_matrix)

        sizes = [c.shape[1] for c in columns]
        residual = _normal_form_residual(block_matrix, sizes, (e1, e2, e3), k, tol)

    notes = tuple(
        str(w.message) for w in caught if issubclass(w.category, ConditioningWarning)
    )
    for w in caught:  # pass anything unrelated through
        if not issubclass(w.category, ConditioningWarning):
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)

    return BrennerDecomposition(
        common=pieces["common"],
        pair_23=pieces["pair_23"],
        pair_13=pieces["pair_13"],
        pair_12=pieces["pair_12"],
        single_1=pieces["single_1"],
        single_2=pieces["single_2"],
        single_3=pieces["single_3"],
        triangle_1=triangle_1,
        triangle_2=triangle_2,
        triangle_3=triangle_3,
        outside=pieces["outside"],
        change_of_basis=change_of_basis,
        residual=residual,
        sum_operator_sigma_min=sigma_min,
        warnings=notes,
    )


def _family(vectors: np.ndarray, expected: int, tol: ToleranceConfig, label: str) -> Subspace:
    span = _column_span(vectors, tol)
    if span.shape[1] != expected:
        raise ConditioningError(
            f"{label} came out {span.shape[1]}-dimensional, expected {expected}"
        )
    return Subspace(span)


def _normal_form_targets(sizes, k, n):
    """Index sets of the three normal-form subspaces in block coordinates.

    sizes is the 10-block column layout (7 distributive pieces, q1, q2,
    outside); the triangle contributes indices for first/second family and
    diagonal vectors for the third.
    """
    starts = np.concatenate([[0], np.cumsum(sizes)])
    blocks = {name: range(starts[i], starts[i + 1]) for i, name in enumerate(
        ["common", "pair_23", "pair_13", "pair_12", "single_1", "single_2", "single_3", "q1", "q2", "outside"]
    )}

    def coordinate_columns(names):
        cols = []
        for name in names:
            for idx in blocks[name]:
                e = np.zeros((n, 1), dtype=np.complex128)
                e[idx, 0] = 1.0
                cols.append(e)
        return cols

    f1 = coordinate_columns(["common", "pair_13", "pair_12", "single_1", "q1"])
    f2 = coordinate_columns(["common", "pair_23", "pair_12", "single_2", "q2"])
    f3 = coordinate_columns(["common", "pair_23", "pair_13", "single_3"])
    q1_start, q2_start = starts[7], starts[8]
    for j in range(k):
        e = np.zeros((n, 1), dtype=np.complex128)
        e[q1_start + j, 0] = 1.0 / np.sqrt(2.0)
        e[q2_start + j, 0] = 1.0 / np.sqrt(2.0)
        f3.append(e)
    make = lambda cols: Subspace(np.hstack(cols)) if cols else Subspace.zero(n)
    return make(f1), make(f2), make(f3)


def _normal_form_residual(block_matrix, sizes, subspaces, k, tol):
    n = block_matrix.shape[0]
    targets = _normal_form_targets(sizes, k, n)
    worst = 0.0
    for e, f in zip(subspaces, targets):
        mapped = _column_span(np.linalg.solve(block_matrix, e.basis), tol)
        image = Subspace(mapped) if mapped.shape[1] else Subspace.zero(n)
        worst = max(worst, gap(image, f))
    return float(worst)


def verify_brenner(
    system: SubspaceSystem,
    decomposition: BrennerDecomposition,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> BrennerCheck:
    """Check a claimed decomposition against the system, independently of
    how it was constructed.

    Verifies that each subspace equals the sum of its assigned blocks, that
    the three triangle families are pairwise skew with equal dimensions and
    a common two-family span, and that all eleven blocks together are
    independent and fill the space.  Accepts any valid choice of triangle
    families, not only the one :func:`brenner_decompose` makes.
    """
    _require_arity_three(system)
    d = decomposition
    e1, e2, e3 = system.subspaces
    n = system.ambient_dim

    assignments = (
        (e1, (d.common, d.pair_13, d.pair_12, d.single_1, d.triangle_1)),
        (e2, (d.common, d.pair_23, d.pair_12, d.single_2, d.triangle_2)),
        (e3, (d.common, d.pair_23, d.pair_13, d.single_3, d.triangle_3)),
    )
    subspace_gaps = []
    for e, parts in assignments:
        stacked = np.hstack([p.basis for p in parts])
        span = _column_span(stacked, tol)
        image = Subspace(span) if span.shape[1] else Subspace.zero(n)
        subspace_gaps.append(float(gap(image, e)))

    q = (d.triangle_1, d.triangle_2, d.triangle_3)
    dims_equal = q[0].dim == q[1].dim == q[2].dim
    meet_dims = tuple(
        meet(q[i], q[j], tol).dim for i, j in ((0, 1), (1, 2), (2, 0))
    )
    joins = [join(q[i], q[j], tol) for i, j in ((0, 1), (1, 2), (2, 0))]
    join_gaps = tuple(
        float(gap(joins[i], joins[j])) for i, j in ((0, 1), (1, 2), (2, 0))
    )
    joins_sized = all(j.dim == 2 * q[2].dim for j in joins)

    all_blocks = [
        d.common, d.pair_23, d.pair_13, d.pair_12,
        d.single_1, d.single_2, d.single_3,
        d.triangle_1, d.triangle_2, d.outside,
    ]
    stacked = np.hstack([b.basis for b in all_blocks])
    total = stacked.shape[1]
    if total == 0:
        rank = 0
    else:
        rank = _numerical_rank(np.linalg.svd(stacked, compute_uv=False), tol)
    independent = rank == total
    deficit = n - rank

    passed = (
        max(subspace_gaps) <= tol.residual_tol
        and dims_equal
        and joins_sized
        and all(m == 0 for m in meet_dims)
        and (not join_gaps or max(join_gaps) <= tol.residual_tol)
        and independent
        and deficit == 0
    )
    return BrennerCheck(
        subspace_gaps=tuple(subspace_gaps),
        triangle_dims_equal=dims_equal,
        triangle_meet_dims=meet_dims,
        triangle_join_gaps=join_gaps,
        independent=independent,
        spanning_deficit=int(deficit),
        passed=bool(passed),
    )


def normalize_double_triangle(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL):
    """Normal form for a double-triangle system (three pairwise-spanning,
    pairwise-skew subspaces of C^(2k)).

    Returns ``(k, map)`` where the invertible map carries the three
    subspaces onto K + 0, 0 + K and the diagonal copy of K, in that order
    (coordinates split as the first k against the last k).

    The map is built in three stages: an invertible map fixing the first
    subspace and moving the second onto its orthogonal complement, then
    principal-vector coordinates between the first subspace and the moved
    third one, then a diagonal stretch making the third family exactly
    diagonal.
    """
    if not detect_double_triangle(system, tol):
        raise ValueError("not a double triangle: need pairwise trivial meets and pairwise full joins")
    q1, q2, q3 = system.subspaces
    n = system.ambient_dim
    k = q1.dim
    if not (q1.dim == q2.dim == q3.dim and n == 2 * k):
        # forced by the meet/join conditions; a mismatch means they were
        # decided inconsistently
        raise ConditioningError(
            f"double-triangle dimensions are inconsistent: {system.dims()} in ambient {n}"
        )

    u1 = q1.basis
    mixed = np.hstack([u1, q2.basis])
    spectrum = np.linalg.svd(mixed, compute_uv=False)
    if _numerical_rank(spectrum, tol) != n:
        raise ConditioningError("first and second subspaces do not span numerically")
    flattened = np.hstack([u1, q2.basis - u1 @ (u1.conj().T @ q2.basis)])
    # straighten: identity on q1, q2 pushed onto the complement of q1
    straighten = flattened @ np.linalg.inv(mixed)

    third = _column_span(straighten @ q3.basis, tol)
    if third.shape[1] != k:
        raise ConditioningError("third subspace lost dimension while straightening")

    u, cosines, vh = np.linalg.svd(u1.conj().T @ third)
    cosines = np.clip(cosines, 0.0, 1.0)
    theta = np.arccos(cosines)
    if theta.min() < ANGLE_EPS or theta.max() > np.pi / 2.0 - ANGLE_EPS:
        raise ConditioningError(
            "straightened third subspace has a degenerate angle with the first; "
            "the triangle conditions were decided inconsistently"
        )
    x = u1 @ u
    y = third @ vh.conj().T
    s = np.sin(theta)
    z = (y - x * cosines) / s
    z = z - x @ (x.conj().T @ z)
    z = polish_near_orthonormal(z)

    frame = np.hstack([x, z])  # unitary: x spans q1, z spans its complement
    stretch = np.concatenate([1.0 / cosines, 1.0 / s])
    normal_map = (stretch[:, None] * frame.conj().T) @ straighten
    return k, normal_map


def is_isomorphic_three(a: SubspaceSystem, b: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Isomorphism test for systems of three subspaces: compare the
    complete multiplicity invariants."""
    _require_arity_three(a)
    _require_arity_three(b)
    if a.ambient_dim != b.ambient_dim:
        return False
    return brenner_invariants(a, tol) == brenner_invariants(b, tol)


def isomorphism_between(a: SubspaceSystem, b: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL):
    """Explicit isomorphism from system a onto system b, or None.

    When the invariants agree, both systems map onto the same coordinate
    normal form; composing a's change of basis with the inverse of b's
    gives the witness.
    """
    if not is_isomorphic_three(a, b, tol):
        return None
    da = brenner_decompose(a, tol)
    db = brenner_decompose(b, tol)
    return np.linalg.solve(db.change_of_basis, da.change_of_basis)

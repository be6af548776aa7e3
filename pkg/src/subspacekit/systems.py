"""Systems of subspaces: direct sums, morphisms, and decomposability.

A :class:`SubspaceSystem` is an ambient dimension together with an ordered
tuple of subspaces of that ambient space.  Morphisms between systems are
the linear maps carrying the i-th subspace of the source into the i-th
subspace of the target; :func:`hom_basis` computes a basis of that space by
nullspace extraction, and everything else here (transitivity, idempotent
search, isomorphism verification) is built on top of it.

Decomposability is handled the honest way round: a system is declared
decomposable only by exhibiting a nontrivial idempotent endomorphism, and
the resulting split is returned together with the witness so it can be
re-verified independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ConditioningError,
    Subspace,
    ToleranceConfig,
    _column_span,
    _numerical_rank,
    contains,
    gap,
    join,
    meet,
)

__all__ = [
    "HomBasis",
    "IdempotentWitness",
    "IsomorphismReport",
    "SubspaceSystem",
    "are_linearly_independent",
    "detect_double_triangle",
    "detect_pentagon",
    "direct_sum",
    "find_nontrivial_idempotent",
    "hom_basis",
    "is_commutative",
    "is_transitive",
    "map_system",
    "restrict_system",
    "split_by_idempotent",
    "verify_isomorphism",
]

# Eigenvalues of a normalized random endomorphism closer than this are
# treated as one spectral cluster during the idempotent search.
_CLUSTER_GAP = 1e-6


@dataclass(frozen=True)
class SubspaceSystem:
    """An ordered system of subspaces of one ambient space C^n."""

    ambient_dim: int
    subspaces: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        subspaces = tuple(self.subspaces)
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be at least 1")
        for s in subspaces:
            if not isinstance(s, Subspace):
                raise TypeError(f"expected Subspace, got {type(s).__name__}")
            if s.ambient_dim != self.ambient_dim:
                raise ValueError(
                    f"subspace ambient {s.ambient_dim} does not match system ambient {self.ambient_dim}"
                )
        labels = self.labels
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(subspaces):
                raise ValueError("labels and subspaces must have equal length")
        object.__setattr__(self, "subspaces", subspaces)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, *subspaces: Subspace, labels=None) -> "SubspaceSystem":
        if not subspaces:
            raise ValueError("a system needs at least one subspace")
        return cls(subspaces[0].ambient_dim, tuple(subspaces), labels)

    @property
    def arity(self) -> int:
        return len(self.subspaces)

    def dims(self) -> tuple:
        return tuple(s.dim for s in self.subspaces)

    def __repr__(self):
        return f"SubspaceSystem(ambient={self.ambient_dim}, dims={list(self.dims())})"


@dataclass(frozen=True)
class HomBasis:
    """Basis of the space of morphisms from ``source`` to ``target``.

    ``maps`` is a tuple of (target_ambient, source_ambient) matrices that
    is orthonormal in the Frobenius inner product.
    """

    source: SubspaceSystem
    target: SubspaceSystem
    maps: tuple

    @property
    def dim(self) -> int:
        return len(self.maps)


@dataclass(frozen=True)
class IdempotentWitness:
    """A nontrivial idempotent endomorphism, with its image/kernel split."""

    map: np.ndarray
    split: tuple  # (image, kernel) as Subspace values


@dataclass(frozen=True)
class IsomorphismReport:
    """Residuals certifying (or refuting) that a map is an isomorphism of
    systems.  ``passed`` requires invertibility and every per-subspace gap
    within residual_tol."""

    per_subspace_gaps: tuple
    sigma_min: float
    sigma_max: float
    passed: bool

    @property
    def max_gap(self) -> float:
        return max(self.per_subspace_gaps) if self.per_subspace_gaps else 0.0

    @property
    def condition(self) -> float:
        return self.sigma_max / self.sigma_min if self.sigma_min > 0.0 else float("inf")


def direct_sum(a: SubspaceSystem, b: SubspaceSystem) -> SubspaceSystem:
    """Block-diagonal sum of two systems with equal arity."""
    if a.arity != b.arity:
        raise ValueError(f"cannot sum systems of arity {a.arity} and {b.arity}")
    na, nb = a.ambient_dim, b.ambient_dim
    pieces = []
    for sa, sb in zip(a.subspaces, b.subspaces):
        basis = np.zeros((na + nb, sa.dim + sb.dim), dtype=np.complex128)
        basis[:na, : sa.dim] = sa.basis
        basis[na:, sa.dim :] = sb.basis
        pieces.append(Subspace(basis))
    labels = a.labels if a.labels == b.labels else None
    return SubspaceSystem(na + nb, tuple(pieces), labels)


def map_system(matrix: np.ndarray, system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> SubspaceSystem:
    """Apply an invertible linear map to every subspace of a system.

    Raises :class:`ConditioningError` if any image drops dimension, which
    for an invertible map can only mean the rank rule broke down.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    n = system.ambient_dim
    if matrix.shape != (n, n):
        raise ValueError(f"map must be {n}x{n}, got {matrix.shape}")
    images = []
    for s in system.subspaces:
        image = _column_span(matrix @ s.basis, tol)
        if image.shape[1] != s.dim:
            raise ConditioningError(
                f"image of a {s.dim}-dimensional subspace came out {image.shape[1]}-dimensional"
            )
        images.append(Subspace(image))
    return SubspaceSystem(n, tuple(images), system.labels)


def restrict_system(system: SubspaceSystem, carrier: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> SubspaceSystem:
    """Re-express a system inside a carrier subspace containing all of it.

    The result lives in C^(dim carrier), with coordinates taken in the
    carrier's basis.
    """
    if carrier.ambient_dim != system.ambient_dim:
        raise ValueError("carrier lives in a different ambient space")
    if carrier.dim == 0:
        raise ValueError("cannot restrict to the zero subspace")
    pieces = []
    for s in system.subspaces:
        if not contains(carrier, s, tol):
            raise ValueError("carrier does not contain every subspace of the system")
        coords = carrier.basis.conj().T @ s.basis
        if coords.shape[1]:
            coords, _ = np.linalg.qr(coords)
        pieces.append(Subspace(coords) if coords.shape[1] else Subspace.zero(carrier.dim))
    return SubspaceSystem(carrier.dim, tuple(pieces), system.labels)


def hom_basis(source: SubspaceSystem, target: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> HomBasis:
    """Orthonormal basis of Hom(source, target).

    A map X qualifies when (I - P_Fi) X restricted to E_i vanishes for
    every index i.  Stacking those conditions on the column-major
    vectorization of X gives one linear system; its nullspace, extracted
    with the shared rank rule, is the morphism space.
    """
    if source.arity != target.arity:
        raise ValueError(f"arity mismatch: {source.arity} vs {target.arity}")
    m, n = target.ambient_dim, source.ambient_dim
    blocks = []
    for e, f in zip(source.subspaces, target.subspaces):
        if e.dim == 0 or f.dim == m:
            continue  # no constraint: the source part is zero or the target part is everything
        # rows of the constraint: vec(C^H X B) = (B^T kron C^H) vec(X)
        c = _orthocomplement_basis(f)
        blocks.append(np.kron(e.basis.T, c.conj().T))
    if not blocks:
        maps = tuple(_unit_matrix(m, n, j) for j in range(m * n))
        return HomBasis(source, target, maps)
    constraint = np.vstack(blocks)
    _, s, vh = np.linalg.svd(constraint, full_matrices=True)
    rank = _numerical_rank(s, tol)
    null_rows = vh[rank:, :]
    maps = tuple(
        np.reshape(row.conj(), (m, n), order="F") for row in null_rows
    )
    return HomBasis(source, target, maps)


def _orthocomplement_basis(s: Subspace) -> np.ndarray:
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return u[:, s.dim :]


def _unit_matrix(m, n, j):
    x = np.zeros((m, n), dtype=np.complex128)
    x[j % m, j // m] = 1.0
    return x


def is_transitive(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when the endomorphism space is exactly the scalars."""
    return hom_basis(system, system, tol).dim == 1


def is_commutative(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when all projections onto the subspaces pairwise commute.

    Note this is a property of the embedding, not of the isomorphism class:
    an invertible map can demote a commuting system to a non-commuting one.
    """
    projections = [s.projection() for s in system.subspaces]
    for i in range(len(projections)):
        for j in range(i + 1, len(projections)):
            commutator = projections[i] @ projections[j] - projections[j] @ projections[i]
            if np.linalg.norm(commutator, 2) > tol.residual_tol:
                return False
    return True


def _eigenvalue_clusters(values: np.ndarray, resolution: float):
    """Connected components of the spectrum at the given absolute gap."""
    k = values.size
    unassigned = set(range(k))
    clusters = []
    while unassigned:
        seed_idx = min(unassigned)
        component = {seed_idx}
        frontier = [seed_idx]
        unassigned.discard(seed_idx)
        while frontier:
            i = frontier.pop()
            nearby = [j for j in list(unassigned) if abs(values[i] - values[j]) < resolution]
            for j in nearby:
                unassigned.discard(j)
                component.add(j)
                frontier.append(j)
        clusters.append(np.array(sorted(component)))
    return clusters


def _is_endomorphism(x: np.ndarray, system: SubspaceSystem, tol: ToleranceConfig) -> bool:
    for s in system.subspaces:
        if s.dim == 0 or s.dim == system.ambient_dim:
            continue
        leakage = _orthocomplement_basis(s).conj().T @ x @ s.basis
        if leakage.size and np.linalg.norm(leakage, 2) > tol.residual_tol:
            return False
    return True


def find_nontrivial_idempotent(
    system: SubspaceSystem,
    tol: ToleranceConfig = DEFAULT_TOL,
    trials: int = 8,
    seed: int = 0,
) -> Optional[IdempotentWitness]:
    """Search for a nontrivial idempotent endomorphism.

    Draws random elements of End(system) in the hom basis, splits each
    spectrum into clusters at absolute resolution 1e-6 (the element is
    normalized to operator norm 1 first), and takes a spectral projection
    onto one cluster.  For a decomposable system a random element separates
    the summands with probability 1; ``trials`` failures in a row is strong
    evidence of indecomposability, reported as None.  Deterministic for a
    fixed ``seed``.
    """
    endos = hom_basis(system, system, tol)
    if endos.dim <= 1:
        return None
    n = system.ambient_dim
    stacked = np.stack(endos.maps)
    rng = np.random.default_rng(seed)
    identity = np.eye(n)
    for _ in range(int(trials)):
        coeff = rng.standard_normal(endos.dim) + 1j * rng.standard_normal(endos.dim)
        x = np.tensordot(coeff, stacked, axes=1)
        norm = np.linalg.norm(x, 2)
        if norm == 0.0:
            continue
        x = x / norm
        eigenvalues, eigenvectors = np.linalg.eig(x)
        clusters = _eigenvalue_clusters(eigenvalues, _CLUSTER_GAP)
        if len(clusters) < 2:
            continue
        # Deterministic cluster pick: the one whose mean eigenvalue is
        # largest in lexicographic (real, imag) order.
        chosen = max(
            clusters,
            key=lambda idx: (eigenvalues[idx].real.mean(), eigenvalues[idx].imag.mean()),
        )
        try:
            inverse = np.linalg.inv(eigenvectors)
        except np.linalg.LinAlgError:
            continue
        candidate = eigenvectors[:, chosen] @ inverse[chosen, :]
        if np.linalg.norm(candidate @ candidate - candidate, 2) > tol.residual_tol:
            continue
        if np.linalg.norm(candidate, 2) <= tol.residual_tol:
            continue
        if np.linalg.norm(candidate - identity, 2) <= tol.residual_tol:
            continue
        if not _is_endomorphism(candidate, system, tol):
            continue
        image = _column_span(candidate, tol)
        kernel_side = _column_span(identity - candidate, tol)
        if image.shape[1] + kernel_side.shape[1] != n:
            continue
        return IdempotentWitness(
            map=candidate,
            split=(Subspace(image), Subspace(kernel_side)),
        )
    return None


def split_by_idempotent(
    system: SubspaceSystem,
    witness: IdempotentWitness,
    tol: ToleranceConfig = DEFAULT_TOL,
):
    """Split a system along a verified idempotent witness.

    Validates the witness from scratch (idempotency, nontriviality,
    endomorphism property, split consistency); a witness that fails gets a
    ValueError, while a valid witness whose restriction to some subspace
    does not split cleanly raises :class:`ConditioningError`.

    Returns the pair of component systems, each expressed in coordinates of
    its carrier.
    """
    p = np.asarray(witness.map, dtype=np.complex128)
    n = system.ambient_dim
    if p.shape != (n, n):
        raise ValueError(f"witness map must be {n}x{n}, got {p.shape}")
    if np.linalg.norm(p @ p - p, 2) > tol.residual_tol:
        raise ValueError("witness map is not idempotent within tolerance")
    identity = np.eye(n)
    if np.linalg.norm(p, 2) <= tol.residual_tol or np.linalg.norm(p - identity, 2) <= tol.residual_tol:
        raise ValueError("witness map is trivial (zero or identity)")
    if not _is_endomorphism(p, system, tol):
        raise ValueError("witness map is not an endomorphism of the system")

    h1, h2 = witness.split
    if h1.ambient_dim != n or h2.ambient_dim != n:
        raise ValueError("witness split lives in the wrong ambient space")
    if h1.dim + h2.dim != n:
        raise ValueError("witness split does not fill the ambient space")
    # split consistency: h1 is fixed by p, h2 is annihilated by it
    if np.linalg.norm(p @ h1.basis - h1.basis, 2) > tol.residual_tol:
        raise ValueError("first split part is not fixed by the witness map")
    if h2.dim and np.linalg.norm(p @ h2.basis, 2) > tol.residual_tol:
        raise ValueError("second split part is not annihilated by the witness map")

    first_parts, second_parts = [], []
    for s in system.subspaces:
        # basis columns are unit vectors, so a vanished component is noise
        # at scale 1; a relative cutoff would promote it to a dimension
        inside_1 = _column_span(p @ s.basis, tol, scale=1.0)
        inside_2 = _column_span(s.basis - p @ s.basis, tol, scale=1.0)
        if inside_1.shape[1] + inside_2.shape[1] != s.dim:
            raise ConditioningError(
                "subspace does not split along the idempotent within tolerance "
                f"({inside_1.shape[1]} + {inside_2.shape[1]} != {s.dim})"
            )
        first_parts.append(_in_carrier_coords(inside_1, h1))
        second_parts.append(_in_carrier_coords(inside_2, h2))
    sys1 = SubspaceSystem(h1.dim, tuple(first_parts), system.labels)
    sys2 = SubspaceSystem(h2.dim, tuple(second_parts), system.labels)
    return sys1, sys2


def _in_carrier_coords(columns: np.ndarray, carrier: Subspace) -> Subspace:
    if carrier.dim == 0:
        raise ConditioningError("a split part landed in a zero carrier")
    coords = carrier.basis.conj().T @ columns
    if coords.shape[1] == 0:
        return Subspace.zero(carrier.dim)
    coords, _ = np.linalg.qr(coords)
    return Subspace(coords)


def verify_isomorphism(
    matrix: np.ndarray,
    source: SubspaceSystem,
    target: SubspaceSystem,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> IsomorphismReport:
    """Certify that ``matrix`` carries the source system onto the target.

    Reports the gap between the image of each source subspace and the
    corresponding target subspace, plus the extreme singular values of the
    map.  ``passed`` demands invertibility (sigma_min above rank_rtol
    relative to sigma_max) and every gap within residual_tol.
    """
    if source.arity != target.arity:
        raise ValueError(f"arity mismatch: {source.arity} vs {target.arity}")
    if source.ambient_dim != target.ambient_dim:
        raise ValueError("isomorphic systems must share their ambient dimension")
    n = source.ambient_dim
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (n, n):
        raise ValueError(f"map must be {n}x{n}, got {matrix.shape}")
    spectrum = np.linalg.svd(matrix, compute_uv=False)
    sigma_max = float(spectrum[0])
    sigma_min = float(spectrum[-1])
    invertible = sigma_min > tol.rank_rtol * sigma_max and sigma_max > 0.0

    gaps = []
    for e, f in zip(source.subspaces, target.subspaces):
        image = _column_span(matrix @ e.basis, tol)
        gaps.append(gap(Subspace(image) if image.shape[1] else Subspace.zero(n), f))
    gaps = tuple(float(g) for g in gaps)
    passed = invertible and (max(gaps) <= tol.residual_tol if gaps else True)
    return IsomorphismReport(gaps, sigma_min, sigma_max, passed)


def are_linearly_independent(subspaces, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when the given subspaces meet pairwise sums trivially, i.e. the
    concatenation of their bases has full column rank."""
    subspaces = list(subspaces)
    if not subspaces:
        return True
    n = subspaces[0].ambient_dim
    for s in subspaces:
        if s.ambient_dim != n:
            raise ValueError("subspaces live in different ambient spaces")
    total = sum(s.dim for s in subspaces)
    if total == 0:
        return True
    if total > n:
        return False
    stacked = np.hstack([s.basis for s in subspaces])
    spectrum = np.linalg.svd(stacked, compute_uv=False)
    return _numerical_rank(spectrum, tol) == total


def _require_arity_three(system: SubspaceSystem):
    if system.arity != 3:
        raise ValueError(f"expected a system of three subspaces, got {system.arity}")


def detect_double_triangle(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True for a system of three subspaces in which every pair meets
    trivially and every pair spans the whole space, with all three parts
    proper and nonzero."""
    _require_arity_three(system)
    n = system.ambient_dim
    for s in system.subspaces:
        if s.dim == 0 or s.dim == n:
            return False
    pairs = [(0, 1), (0, 2), (1, 2)]
    for i, j in pairs:
        if meet(system.subspaces[i], system.subspaces[j], tol).dim != 0:
            return False
        if join(system.subspaces[i], system.subspaces[j], tol).dim != n:
            return False
    return True


def detect_pentagon(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Test for the pentagon configuration: E1 join E2 is everything,
    E1 meet E3 is zero, and E2 is strictly contained in E3, with all parts
    proper and nonzero.

    In finite dimension this always returns False: the join condition gives
    dim E1 + dim E2 >= n, the meet condition gives dim E1 + dim E3 <= n,
    and together they force dim E3 <= dim E2, contradicting the strict
    containment.  The detector exists to certify that concrete truncations
    have not accidentally produced one.
    """
    _require_arity_three(system)
    n = system.ambient_dim
    e1, e2, e3 = system.subspaces
    for s in (e1, e2, e3):
        if s.dim == 0 or s.dim == n:
            return False
    if join(e1, e2, tol).dim != n:
        return False
    if meet(e1, e3, tol).dim != 0:
        return False
    if not contains(e3, e2, tol):
        return False
    if e3.dim <= e2.dim:
        return False
    return True

"""Orthonormal-basis arithmetic for subspaces of complex inner-product spaces.

A :class:`Subspace` of C^n is stored as an (n, k) matrix with orthonormal
columns; the zero subspace is the (n, 0) matrix and is a first-class value.
Projections are derived on demand and never stored.

Every rank decision in the package goes through one rule (count singular
values above ``rank_rtol`` times a reference scale), and meet/join of the
same pair are read off the same singular spectrum.  That is what makes the
dimension identity

    dim meet(A, B) + dim join(A, B) == dim A + dim B

hold exactly rather than merely approximately: the two operations can never
disagree about a borderline singular value.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "ConditioningError",
    "ConditioningWarning",
    "Subspace",
    "ToleranceConfig",
    "complement",
    "complement_within",
    "contains",
    "gap",
    "join",
    "meet",
    "orthonormalize",
    "principal_angles",
    "same_subspace",
]

# Bases are validated against this; it is deliberately looser than rank_rtol
# so that downstream constructions may hand back bases polished only by QR.
ORTHONORMALITY_ATOL = 1e-8


class ConditioningError(RuntimeError):
    """A rank or dimension decision could not be made reliably."""


class ConditioningWarning(UserWarning):
    """Singular values landed near a rank cutoff; the result may be fragile."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by every operation in the package.

    rank_rtol
        Relative cutoff for rank decisions: singular values above
        ``rank_rtol * scale`` count toward the rank.
    gap_tol
        Two subspaces within this projection-norm distance are equal.
    residual_tol
        Acceptance threshold for verification residuals.
    cond_warn
        Condition numbers above this raise :class:`ConditioningWarning`.
    """

    rank_rtol: float = 1e-10
    gap_tol: float = 1e-8
    residual_tol: float = 1e-8
    cond_warn: float = 1e8

    def __post_init__(self):
        for name in ("rank_rtol", "gap_tol", "residual_tol", "cond_warn"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be finite and strictly positive, got {value!r}")
        if self.rank_rtol >= 1.0:
            raise ValueError(f"rank_rtol must be below 1, got {self.rank_rtol!r}")


DEFAULT_TOL = ToleranceConfig()


def _numerical_rank(singular_values: np.ndarray, tol: ToleranceConfig, scale=None) -> int:
    """Shared rank rule.

    ``scale`` defaults to the largest singular value.  Pass ``scale=1.0``
    for matrices whose singular values have an absolute meaning (for
    example sines of principal angles), where a relative cutoff would
    promote pure rounding noise to full rank.
    """
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        return 0
    reference = float(s.max()) if scale is None else float(scale)
    if reference <= 0.0:
        return 0
    cutoff = tol.rank_rtol * reference
    near = int(np.count_nonzero((s > cutoff / 10.0) & (s < cutoff * 10.0)))
    if near:
        warnings.warn(
            f"{near} singular value(s) within a decade of the rank cutoff {cutoff:.3e}; "
            "rank decision is fragile",
            ConditioningWarning,
            stacklevel=3,
        )
    return int(np.count_nonzero(s > cutoff))


def _column_span(matrix: np.ndarray, tol: ToleranceConfig, scale=None) -> np.ndarray:
    """Orthonormal basis (as columns) for the column space of ``matrix``."""
    matrix = np.ascontiguousarray(matrix, dtype=np.complex128)
    n, k = matrix.shape
    if k == 0:
        return np.zeros((n, 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(matrix, full_matrices=False)
    return u[:, : _numerical_rank(s, tol, scale=scale)]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^n, represented by an (n, k) orthonormal-column basis.

    The constructor validates orthonormality (within ``ORTHONORMALITY_ATOL``)
    and freezes the array against writes.  k = 0 encodes the zero subspace.
    Use :func:`orthonormalize` to build a Subspace from arbitrary spanning
    vectors.
    """

    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=np.complex128, copy=True, order="F")
        if basis.ndim != 2:
            raise ValueError(f"basis must be a 2-d array, got shape {basis.shape}")
        n, k = basis.shape
        if n < 1:
            raise ValueError("ambient dimension must be at least 1")
        if k > n:
            raise ValueError(f"{k} columns cannot be independent in ambient dimension {n}")
        if not (np.all(np.isfinite(basis.real)) and np.all(np.isfinite(basis.imag))):
            raise ValueError("basis entries must be finite")
        if k:
            defect = np.abs(basis.conj().T @ basis - np.eye(k))
            worst = float(defect.max())
            if worst > ORTHONORMALITY_ATOL:
                raise ValueError(
                    f"basis columns are not orthonormal (defect {worst:.3e}); "
                    "use orthonormalize() for raw spanning vectors"
                )
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def projection(self) -> np.ndarray:
        """The orthogonal projection onto this subspace, as an (n, n) matrix."""
        return self.basis @ self.basis.conj().T

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim, dtype=np.complex128))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _require_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"subspaces live in different ambient spaces ({a.ambient_dim} vs {b.ambient_dim})"
        )


def orthonormalize(vectors, tol: ToleranceConfig = DEFAULT_TOL, *, ambient_dim=None) -> Subspace:
    """Subspace spanned by the given ambient vectors.

    ``vectors`` is a sequence of length-n vectors; a 2-d array is read as a
    stack of row vectors.  Dependent and zero vectors are allowed, the span
    is extracted with the shared rank rule.  An empty sequence yields the
    zero subspace and needs an explicit ``ambient_dim``.
    """
    array = np.asarray(vectors, dtype=np.complex128)
    if array.ndim == 1:
        if array.size == 0:
            if ambient_dim is None:
                raise ValueError("an empty spanning set needs an explicit ambient_dim")
            return Subspace.zero(int(ambient_dim))
        array = array[None, :]
    if array.ndim != 2:
        raise ValueError(f"expected a sequence of vectors, got an array of shape {array.shape}")
    if array.shape[0] == 0:
        n = array.shape[1] if array.shape[1] else ambient_dim
        if n is None:
            raise ValueError("an empty spanning set needs an explicit ambient_dim")
        return Subspace.zero(int(n))
    if ambient_dim is not None and array.shape[1] != int(ambient_dim):
        raise ValueError(
            f"vectors have length {array.shape[1]} but ambient_dim={ambient_dim} was requested"
        )
    if not (np.all(np.isfinite(array.real)) and np.all(np.isfinite(array.imag))):
        raise ValueError("spanning vectors must be finite")
    return Subspace(_column_span(array.T, tol))


def meet(a: Subspace, b: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Intersection of two subspaces.

    Computed from the nullspace of [B_a | -B_b]: a null vector is a pair of
    coefficient blocks expressing one ambient vector in both bases.  This
    matrix has the same singular values as the concatenation behind
    :func:`join`, so the meet/join dimension identity is exact by
    construction.
    """
    _require_same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    stacked = np.hstack([a.basis, -b.basis])
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    rank = _numerical_rank(s, tol)
    coeff = vh[rank:, :].conj().T  # (dim a + dim b, nullity), orthonormal columns
    if coeff.shape[1] == 0:
        return Subspace.zero(a.ambient_dim)
    # Each null pair (x; y) gives the same ambient vector from either side,
    # of norm exactly 1/sqrt(2); rescale and polish.
    vectors = a.basis @ coeff[: a.dim, :] * np.sqrt(2.0)
    q, _ = np.linalg.qr(vectors)
    return Subspace(q)


def join(a: Subspace, b: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Sum (span of the union) of two subspaces."""
    _require_same_ambient(a, b)
    return Subspace(_column_span(np.hstack([a.basis, b.basis]), tol))


def complement(a: Subspace) -> Subspace:
    """Orthogonal complement.  Needs no tolerance: the basis is orthonormal
    by invariant, so its rank is its column count."""
    n, k = a.basis.shape
    if k == 0:
        return Subspace.full(n)
    if k == n:
        return Subspace.zero(n)
    u, _, _ = np.linalg.svd(a.basis, full_matrices=True)
    return Subspace(u[:, k:])


def complement_within(whole: Subspace, part: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthogonal complement of ``part`` inside ``whole``.

    ``part`` must be contained in ``whole``.  The projected basis
    (I - P_part) B_whole then has singular values that are exactly 0 or 1,
    so the rank rule runs against the absolute scale 1; a dimension-count
    mismatch raises :class:`ConditioningError`.
    """
    _require_same_ambient(whole, part)
    if not contains(whole, part, tol):
        raise ValueError("complement_within needs part to be contained in whole")
    if part.dim == 0:
        return whole
    residual = whole.basis - part.basis @ (part.basis.conj().T @ whole.basis)
    span = _column_span(residual, tol, scale=1.0)
    expected = whole.dim - part.dim
    if span.shape[1] != expected:
        raise ConditioningError(
            f"relative complement came out {span.shape[1]}-dimensional, "
            f"dimension count demands {expected}"
        )
    return Subspace(span)


def gap(a: Subspace, b: Subspace) -> float:
    """Operator-norm distance between the orthogonal projections, in [0, 1]."""
    _require_same_ambient(a, b)
    if a.dim == 0 and b.dim == 0:
        return 0.0
    value = float(np.linalg.norm(a.projection() - b.projection(), 2))
    return min(value, 1.0)


def contains(a: Subspace, b: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when b lies inside a: every basis vector of b stays within
    ``residual_tol`` of its projection onto a."""
    _require_same_ambient(a, b)
    if b.dim == 0:
        return True
    if b.dim > a.dim:
        return False
    residual = b.basis - a.basis @ (a.basis.conj().T @ b.basis)
    worst = float(np.sqrt((np.abs(residual) ** 2).sum(axis=0)).max())
    return worst <= tol.residual_tol


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    """Canonical angles between two nonzero subspaces.

    Returns min(dim a, dim b) values in [0, pi/2], ascending: the arccos of
    the singular values of B_a^H B_b, clipped into [0, 1].  Raises
    ValueError if either subspace is zero (no angle is defined there).
    """
    _require_same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        raise ValueError("principal angles are undefined for the zero subspace")
    cosines = np.linalg.svd(a.basis.conj().T @ b.basis, compute_uv=False)
    return np.arccos(np.clip(cosines, 0.0, 1.0))


def same_subspace(a: Subspace, b: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Equality in the gap metric (dimensions must agree exactly)."""
    return a.dim == b.dim and gap(a, b) <= tol.gap_tol

"""Pentagon configurations and their finite-dimensional degenerations.

A pentagon is a triple (E1, E2, E3) with E1 meeting E2 trivially and E2
strictly inside E3 such that the modular law fails across the triple:
(E1 + E2) meet E3 is strictly larger than E2 + (E1 meet E3).  In finite
dimension a dimension count rules the full configuration out (see
:func:`subspacekit.systems.detect_pentagon`), but a triple satisfying the
two hypotheses still splits into well-understood parts, and
:func:`pentagon_split` performs that split:

  * a bridge part of E1 that closes the gap between E2 and
    E3 meet (E1 + E2), extracted with the same oblique projections used by
    the triangle split;
  * either a fully distributive remainder (when E3 lies inside E1 + E2),
    or a leftover piece of E3 outside E1 + E2 which forces an irreducible
    pentagon-like core, returned as a restricted system.

The module also hosts a concrete family of near-degenerate pairs: the flat
space K + 0 against the graph of diag(1, 1/2, ..., 1/n).  As n grows the
pair stays honestly skew but its smallest principal angle shrinks like
arctan(1/n), which is the finite-dimensional shadow of a famous infinite
configuration whose sum fails to be closed.  :func:`closedness_margin`
measures that shrinking angle.
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
    complement_within,
    contains,
    join,
    meet,
    orthonormalize,
    principal_angles,
)
from .systems import SubspaceSystem, _require_arity_three, restrict_system
from .two_subspaces import ANGLE_EPS, sum_operator_matrix

__all__ = [
    "CASE_DISTRIBUTIVE",
    "CASE_PENTAGON",
    "ClosednessMargin",
    "PentagonSplit",
    "closedness_margin",
    "diagonal_graph_pair",
    "example9_truncated",
    "margin_sample_points",
    "pentagon_split",
]

CASE_DISTRIBUTIVE = "distributive"
CASE_PENTAGON = "pentagon"


@dataclass(frozen=True)
class PentagonSplit:
    """Outcome of splitting a triple with E1 meet E2 = 0 and E2 < E3.

    ``case`` is "distributive" when E3 lies inside E1 + E2 so the triple
    decomposes completely; then ``base`` is E2, ``bridge`` the part of E1
    filling E3 above E2, and ``first_remainder`` the rest of E1.

    ``case`` is "pentagon" when part of E3 sticks out of E1 + E2; then
    ``third_outside`` is that part and ``pentagon_part`` the irreducible
    core (E1', E2, E2 + third_outside) re-expressed inside its own span.

    ``quotient_vectors`` are the witnesses u_k spanning E3's share of
    E1 + E2 above E2, and ``first_components``/``second_components`` their
    oblique components in E1 and E2 (u_k is their sum).
    """

    case: str
    bridge: Subspace
    base: Optional[Subspace]
    first_remainder: Optional[Subspace]
    third_outside: Optional[Subspace]
    pentagon_part: Optional[SubspaceSystem]
    quotient_vectors: np.ndarray
    first_components: np.ndarray
    second_components: np.ndarray

    @property
    def witness_count(self) -> int:
        return self.quotient_vectors.shape[1]


@dataclass(frozen=True)
class ClosednessMargin:
    """Smallest strictly positive principal angle of a pair, together with
    the ambient dimension at which the configuration was truncated."""

    min_positive_angle: float
    truncation_dim: int


def pentagon_split(system: SubspaceSystem, tol: ToleranceConfig = DEFAULT_TOL) -> PentagonSplit:
    """Split a triple satisfying the pentagon hypotheses.

    Preconditions (each failure reported by name): the first and second
    subspaces meet trivially, and the second is strictly contained in the
    third.  Structural certificates that must hold by the theory raise
    :class:`ConditioningError` when violated numerically.
    """
    _require_arity_three(system)
    e1, e2, e3 = system.subspaces
    n = system.ambient_dim

    if meet(e1, e2, tol).dim != 0:
        raise ValueError(
            "hypothesis failure: the first and second subspaces have a nontrivial intersection"
        )
    if not contains(e3, e2, tol):
        raise ValueError("hypothesis failure: the second subspace is not contained in the third")
    if e2.dim >= e3.dim:
        raise ValueError(
            "hypothesis failure: containment of the second subspace in the third must be strict"
        )

    span_12 = join(e1, e2, tol)
    inside = meet(e3, span_12, tol)
    third_outside = complement_within(e3, inside, tol)
    quotient = complement_within(inside, e2, tol)  # e2 sits inside both e3 and span_12
    u = quotient.basis
    m = u.shape[1]

    if m:
        frame, t_matrix = sum_operator_matrix(e1, e2, tol)
        lifted = frame @ np.linalg.solve(t_matrix, frame.conj().T @ u)
        v = e1.basis @ (e1.basis.conj().T @ lifted)
        w = u - v
    else:
        v = np.zeros((n, 0), dtype=np.complex128)
        w = np.zeros((n, 0), dtype=np.complex128)

    bridge_span = _column_span(v, tol)
    if bridge_span.shape[1] != m:
        raise ConditioningError(
            f"bridge lost dimension ({bridge_span.shape[1]} of {m}); the oblique split is unreliable"
        )
    bridge = Subspace(bridge_span) if m else Subspace.zero(n)

    if third_outside.dim == 0:
        # Fully distributive: E3 = E2 + bridge and E1 = bridge + remainder.
        first_remainder = complement_within(e1, bridge, tol)
        _certify_independent((e2, bridge), n, tol, "base and bridge")
        reconstructed = join(e2, bridge, tol)
        if reconstructed.dim != e3.dim:
            raise ConditioningError("base plus bridge does not recover the third subspace")
        _certify_independent((e2, bridge, first_remainder), n, tol, "split parts")
        return PentagonSplit(
            case=CASE_DISTRIBUTIVE,
            bridge=bridge,
            base=e2,
            first_remainder=first_remainder,
            third_outside=None,
            pentagon_part=None,
            quotient_vectors=u,
            first_components=v,
            second_components=w,
        )

    first_core = complement_within(e1, bridge, tol)
    third_core = Subspace(np.hstack([e2.basis, third_outside.basis]))
    _certify_independent((bridge, first_core, e2, third_outside), n, tol, "pentagon parts")
    if meet(first_core, third_core, tol).dim != 0:
        raise ConditioningError(
            "reduced first and third subspaces still intersect; conditioning is insufficient"
        )
    carrier = join(first_core, third_core, tol)
    core = restrict_system(
        SubspaceSystem.of(first_core, e2, third_core), carrier, tol
    )
    return PentagonSplit(
        case=CASE_PENTAGON,
        bridge=bridge,
        base=None,
        first_remainder=None,
        third_outside=third_outside,
        pentagon_part=core,
        quotient_vectors=u,
        first_components=v,
        second_components=w,
    )


def _certify_independent(subspaces, n, tol, label):
    total = sum(s.dim for s in subspaces)
    stacked = np.hstack([s.basis for s in subspaces])
    if total == 0:
        return
    if total > n:
        raise ConditioningError(f"{label} overfill the ambient space")
    rank = _numerical_rank(np.linalg.svd(stacked, compute_uv=False), tol)
    if rank != total:
        raise ConditioningError(f"{label} are numerically dependent (rank {rank} of {total})")


def example9_truncated(n: int) -> SubspaceSystem:
    """Finite truncation, at n coordinates per half, of the classical
    non-closing triple in K + K with K infinite-dimensional.

    The ambient space is C^(2n).  With weights a_i = 1/i:

      * E1 is K + 0 extended by the vector (0, v) with v = (0, a_2, ..., a_n);
      * E2 is the graph of diag(a_1, ..., a_n);
      * E3 is E2 extended by (0, f) and (0, v), with f = (a_1, ..., a_n).

    At every finite n the triple fails the pentagon hypotheses (the graph
    meets E1 since v lies in the image of the diagonal map), which is the
    point: the configuration only becomes a pentagon in the limit.  Use
    :func:`closedness_margin` on (K + 0, graph) to watch the degeneration.
    """
    if n < 2:
        raise ValueError("the truncation needs n >= 2 coordinates per half")
    weights = 1.0 / np.arange(1, n + 1)
    v = weights.copy()
    v[0] = 0.0
    f = weights

    flat_rows = [np.concatenate([row, np.zeros(n)]) for row in np.eye(n)]
    e1 = orthonormalize(flat_rows + [np.concatenate([np.zeros(n), v])])

    graph_rows = [np.concatenate([row, weights[i] * row]) for i, row in enumerate(np.eye(n))]
    e2 = orthonormalize(graph_rows)

    e3 = orthonormalize(
        graph_rows
        + [np.concatenate([np.zeros(n), f]), np.concatenate([np.zeros(n), v])]
    )
    return SubspaceSystem.of(e1, e2, e3)


def diagonal_graph_pair(n: int):
    """The pair (K + 0, graph of diag(1, 1/2, ..., 1/n)) in C^(2n).

    Its smallest principal angle is exactly arctan(1/n): the graph hugs the
    flat subspace ever closer as the diagonal entries shrink.
    """
    if n < 1:
        raise ValueError("need at least one coordinate")
    weights = 1.0 / np.arange(1, n + 1)
    flat = Subspace(np.vstack([np.eye(n), np.zeros((n, n))]))
    graph_rows = [np.concatenate([row, weights[i] * row]) for i, row in enumerate(np.eye(n))]
    graph = orthonormalize(graph_rows)
    return flat, graph


def margin_sample_points(n: int):
    """Roughly logarithmic sample of truncation sizes from 2 up to n,
    always ending at n.  Keeps margin tables small for large n."""
    if n < 2:
        raise ValueError("need n >= 2")
    points = [m for m in (2, 3, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000) if m < n]
    points.append(n)
    return points


def closedness_margin(first: Subspace, second: Subspace) -> ClosednessMargin:
    """Smallest strictly positive principal angle between two subspaces.

    Angles below the degeneracy threshold count as zero (shared
    directions); if no positive angle remains, one subspace contains the
    other and there is no margin to report, which raises ValueError.
    """
    angles = principal_angles(first, second)
    positive = angles[angles > ANGLE_EPS]
    if positive.size == 0:
        raise ValueError(
            "no strictly positive principal angle: one subspace contains the other"
        )
    return ClosednessMargin(float(positive.min()), first.ambient_dim)

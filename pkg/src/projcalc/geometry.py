"""Identities and constructions for pairs of projections.

Covers norms of products of a pair, the join of two projections, the
bijection between idempotents and close pairs of projections, and the
canonical partial isometry between two close projections.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (CommutatorTooLarge, JoinUndefined, NotIdempotent,
                     NotPartialIsometry, PairTooFar)
from .numeric import (adjoint, as_matrix, hermitian_eig, identity,
                      is_idempotent, is_partial_isometry, operator_norm,
                      require_projection, resolve, spectrum_of_pair)
from .support import is_well_supported, left_support, polar, quasi_inverse


@dataclass(frozen=True)
class PairReport:
    """Norm data of a pair of projections.

    ``has_join`` means ``||PQ|| < 1``, ``pq_well_supported`` means
    ``||P'Q|| < 1`` (``P' = 1 - P``) and ``pq_support_is_p`` means
    ``||PQ'|| < 1``, each with a ``tol.cluster`` margin.
    """

    spectrum: list
    norm_pq: float
    norm_p_qperp: float
    norm_pperp_q: float
    norm_diff: float
    has_join: bool
    pq_well_supported: bool
    pq_support_is_p: bool


@dataclass(frozen=True)
class UPQReport:
    """The three equivalent closeness conditions for a partial isometry."""

    norm_p_minus_q: float
    norm_u_minus_ustar: float
    p_q_close: bool
    u_ustar_close: bool
    square_support_is_q: bool

    @property
    def consistent(self):
        return self.p_q_close == self.u_ustar_close == self.square_support_is_q


@dataclass(frozen=True)
class IsometrySplit:
    """``U = U_plus - U_minus + U_zero`` with mutually orthogonal pieces."""

    U_plus: np.ndarray
    U_minus: np.ndarray
    U_zero: np.ndarray
    P_plus: np.ndarray
    P_minus: np.ndarray
    P_zero: np.ndarray


def complement(P):
    return identity(P.shape[0]) - P


def pair_report(P, Q, tol=None):
    tol = resolve(tol)
    P, Q = as_matrix(P), as_matrix(Q)
    require_projection(P, Q, tol=tol)
    Pp, Qp = complement(P), complement(Q)
    npq = operator_norm(P @ Q)
    npqp = operator_norm(P @ Qp)
    nppq = operator_norm(Pp @ Q)
    margin = 1.0 - tol.cluster
    return PairReport(
        spectrum=spectrum_of_pair(P, Q, tol),
        norm_pq=npq,
        norm_p_qperp=npqp,
        norm_pperp_q=nppq,
        norm_diff=operator_norm(P - Q),
        has_join=npq < margin,
        pq_well_supported=nppq < margin,
        pq_support_is_p=npqp < margin,
    )


def sup_join(P, Q, tol=None):
    """P v Q as the support of ``1 - P'Q'P'``; needs ``||PQ|| < 1``."""
    tol = resolve(tol)
    P, Q = as_matrix(P), as_matrix(Q)
    require_projection(P, Q, tol=tol)
    if operator_norm(P @ Q) >= 1.0 - tol.cluster:
        raise JoinUndefined("||PQ|| is 1 within the cluster margin")
    Pp = complement(P)
    return left_support(identity(P.shape[0]) - Pp @ complement(Q) @ Pp, tol)


def product_support(P, Q, tol=None):
    """[PQ], the range projection of ``PQ``."""
    return left_support(as_matrix(P) @ as_matrix(Q), tol)


def idempotent_to_pair(I, tol=None):
    """The unique close pair ``(P, Q)`` with ``(PQ)^-1 = I``.

    ``Q`` is the range projection of ``I`` and ``P`` that of ``I*``.
    """
    tol = resolve(tol)
    I = as_matrix(I)
    if not is_idempotent(I, tol):
        raise NotIdempotent("||I^2 - I|| exceeds tolerance")
    return left_support(adjoint(I), tol), left_support(I, tol)


def pair_to_idempotent(P, Q, tol=None):
    """The idempotent ``(PQ)^-1`` of a pair with ``||P - Q|| < 1``."""
    tol = resolve(tol)
    P, Q = as_matrix(P), as_matrix(Q)
    require_projection(P, Q, tol=tol)
    if operator_norm(P - Q) >= 1.0 - tol.cluster:
        raise PairTooFar("||P - Q|| is 1 within the cluster margin")
    return quasi_inverse(P @ Q, tol)


def mvn_partial_isometry(P, Q, tol=None):
    """Partial isometry from ``P`` onto ``Q`` with ``U*U^2`` positive.

    This is the polar part of ``QP``; it exists and is unique when
    ``||P - Q|| < 1``.
    """
    tol = resolve(tol)
    P, Q = as_matrix(P), as_matrix(Q)
    require_projection(P, Q, tol=tol)
    if operator_norm(P - Q) >= 1.0 - tol.cluster:
        raise PairTooFar("||P - Q|| is 1 within the cluster margin")
    return polar(Q @ P, tol).U


def _require_split_form(U, tol):
    if not is_partial_isometry(U, tol):
        raise NotPartialIsometry("||UU*U - U|| exceeds tolerance")
    X = adjoint(U) @ U @ U
    if operator_norm(X - adjoint(X)) > tol.eq:
        raise CommutatorTooLarge("U*U^2 is not self-adjoint within tolerance")
    return X


def upq_equivalences(U, tol=None):
    """Evaluate the three equivalent closeness conditions for ``U``."""
    tol = resolve(tol)
    U = as_matrix(U)
    _require_split_form(U, tol)
    P = adjoint(U) @ U
    Q = U @ adjoint(U)
    margin = 1.0 - tol.cluster
    npq = operator_norm(P - Q)
    nuu = operator_norm(U - adjoint(U))
    U2 = U @ U
    ok, _ = is_well_supported(U2, tol)
    square = ok and operator_norm(left_support(U2, tol) - Q) <= 10 * tol.eq
    return UPQReport(npq, nuu, npq < margin, nuu < margin, bool(square))


def split_partial_isometry(U, tol=None):
    """Split ``U`` along the sign of the self-adjoint ``U*U^2``.

    ``P_plus`` and ``P_minus`` are the supports of the positive and negative
    parts of ``U*U^2`` and ``P_zero`` is the rest of ``U*U``.  Eigenvalues of
    ``U*U^2`` within ``tol.cluster`` of zero are treated as zero.
    """
    tol = resolve(tol)
    U = as_matrix(U)
    X = _require_split_form(U, tol)
    d = hermitian_eig(X, tol)
    P_plus = d.projection(d.eigenvalues > tol.cluster)
    P_minus = d.projection(d.eigenvalues < -tol.cluster)
    P_zero = adjoint(U) @ U - P_plus - P_minus
    return IsometrySplit(U @ P_plus, -U @ P_minus, U @ P_zero,
                         P_plus, P_minus, P_zero)


def corner_bound(P, Q):
    """Right side of the bound on ``||(P - R)QR||`` for ``R <= P``."""
    return (operator_norm(P @ Q) ** 2
            + operator_norm(P @ complement(Q)) ** 2 - 1.0)


def split_bound(P, Q):
    """Bound on ``||(P - R)(R v [QR])||`` for ``R <= P``.

    Infinite when ``||PQ||`` or ``||PQ'||`` is 1.
    """
    a = operator_norm(P @ Q) ** 2
    b = operator_norm(P @ complement(Q)) ** 2
    denom = (1.0 - a) * (1.0 - b)
    if denom <= 0:
        return float("inf")
    return max(0.0, a + b - 1.0) / np.sqrt(denom)


def two_part_bound(P_plus, P_minus, Q, R):
    """Fractional bound on ``||P_minus R||^2`` for ``R <= P_plus + P_minus``.

    Requires ``||Q P_minus|| < ||Q P_plus||``.
    """
    qp = operator_norm(Q @ P_plus) ** 2
    qm = operator_norm(Q @ P_minus) ** 2
    num = (qp + operator_norm(complement(Q) @ R) ** 2
           + operator_norm(P_plus @ complement(Q) @ P_minus) - 1.0)
    return num / (qp - qm)

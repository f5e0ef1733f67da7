"""Support projections, quasi-inverses and functional calculus.

All routines work from a singular value (or Hermitian eigen) decomposition.
Singular values under the noise floor of :func:`projcalc.numeric.zero_floor`
count as exact zeros; an input whose smallest nonzero ``sigma(TT*)`` value is
not above ``tol.wellsup`` is rejected as numerically degenerate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AmbiguousThreshold, DomainError, NumericallyDegenerate
from .numeric import (adjoint, as_matrix, hermitian_eig, operator_norm,
                      resolve, snapped_eigenvalues, zero_floor)


class WellSupported(NamedTuple):
    ok: bool
    gap: float


@dataclass(frozen=True)
class PolarParts:
    """``T = U @ absT`` with ``U`` a partial isometry and ``absT = |T|``."""

    U: np.ndarray
    absT: np.ndarray


def _svd(T, tol):
    W, s, Vh = np.linalg.svd(T)
    keep = s > zero_floor(T, tol)
    return W[:, :s.size][:, keep], s[keep], Vh[:s.size][keep]


def is_well_supported(T, tol=None):
    """Whether ``T`` is safely away from numerical rank ambiguity.

    Returns
    -------
    WellSupported
        ``(ok, gap)`` where ``gap = min(sigma(TT*) minus {0})``, or ``inf``
        for the zero matrix.
    """
    tol = resolve(tol)
    T = as_matrix(T)
    if T.shape[0] == 0:
        return WellSupported(True, float("inf"))
    _, s, _ = _svd(T, tol)
    if s.size == 0:
        return WellSupported(True, float("inf"))
    gap = float(s.min() ** 2)
    return WellSupported(gap > tol.wellsup, gap)


def _require_well_supported(T, tol):
    ok, gap = is_well_supported(T, tol)
    if not ok:
        raise NumericallyDegenerate(
            f"smallest nonzero eigenvalue of TT* is {gap:.3g}, "
            f"not above {tol.wellsup:.1g}")


def left_support(T, tol=None):
    """[T], the projection onto the range of ``T``."""
    tol = resolve(tol)
    T = as_matrix(T)
    _require_well_supported(T, tol)
    W, _, _ = _svd(T, tol)
    return W @ adjoint(W)


def right_support(T, tol=None):
    """[T*], the projection onto the orthocomplement of the kernel of ``T``."""
    return left_support(adjoint(as_matrix(T)), tol)


def quasi_inverse(T, tol=None):
    """Moore-Penrose inverse of a well-supported matrix.

    Built as ``V diag(1/s) W*`` from the SVD, which is ``T*(TT*)^{-1}``
    computed without squaring the condition number.  The zero matrix maps to
    zero.
    """
    tol = resolve(tol)
    T = as_matrix(T)
    _require_well_supported(T, tol)
    W, s, Vh = _svd(T, tol)
    return (adjoint(Vh) / s) @ adjoint(W)


def gap_threshold(values, lo, hi, tol=None):
    """Midpoint of the widest gap of ``values`` inside ``[lo, hi]``.

    The end points count as gap boundaries, so the result always lies in
    ``[lo, hi]`` and is as far as possible from any value inside it.
    """
    pts = sorted([lo, hi] + [float(v) for v in values if lo < v < hi])
    widths = np.diff(pts)
    k = int(np.argmax(widths))
    return 0.5 * (pts[k] + pts[k + 1])


def spectral_projection_above(S, t, strict=False, tol=None):
    """Spectral projection of ``S`` for ``(t, inf)``, or ``[t, inf)`` if strict.

    A non-strict threshold lying within ``tol.cluster`` of an eigenvalue is
    ambiguous and rejected.  With ``strict=True`` such eigenvalues are taken
    to equal ``t`` and are included.
    """
    tol = resolve(tol)
    d = hermitian_eig(S, tol)
    near = np.abs(d.eigenvalues - t) <= tol.cluster
    if near.any() and not strict:
        raise AmbiguousThreshold(
            f"threshold {t} lies within {tol.cluster:g} of an eigenvalue")
    return d.projection((d.eigenvalues > t) | near)


def apply_function(S, f, domain=None, tol=None):
    """f(S) for self-adjoint ``S`` through its eigendecomposition.

    ``f`` is any vectorised callable.  It is evaluated once per eigenvalue
    cluster at the cluster mean.  When a ``domain`` interval is given (or
    ``f.domain`` exists) cluster means within ``tol.cluster`` of a finite end
    point are snapped onto it and anything further outside raises
    :class:`DomainError`.
    """
    tol = resolve(tol)
    d = hermitian_eig(S, tol)
    if domain is None:
        domain = getattr(f, "domain", None)
    if domain is None:
        lo, hi = -np.inf, np.inf
    else:
        lo, hi = domain
    points = snapped_eigenvalues(d, tol, lo, hi)
    if np.any(points < lo) or np.any(points > hi):
        raise DomainError(f"spectrum leaves the domain [{lo}, {hi}]")
    values = np.asarray(f(points), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise DomainError("function is not finite on the spectrum")
    return d.apply(values)


def polar(T, tol=None):
    """Polar decomposition ``T = U|T|`` of a well-supported matrix.

    ``U`` has initial projection ``[T*]`` and final projection ``[T]``.
    """
    tol = resolve(tol)
    T = as_matrix(T)
    _require_well_supported(T, tol)
    W, s, Vh = _svd(T, tol)
    V = adjoint(Vh)
    return PolarParts(W @ Vh, (V * s) @ Vh)


def intertwining_residual(T, g, tol=None):
    """``||T g(T*T) - g(TT*) T||`` for a function ``g`` on the half line."""
    T = as_matrix(T)
    Th = adjoint(T)
    lhs = T @ apply_function(Th @ T, g, (0.0, np.inf), tol)
    rhs = apply_function(T @ Th, g, (0.0, np.inf), tol) @ T
    return operator_norm(lhs - rhs)

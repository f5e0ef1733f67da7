"""Sampled paths of projections.

Three generators:

* :func:`homotopy_close` joins ``R`` to ``Q`` when ``||Q - R|| < 1`` through
  projection-calculus images ``P_{Q,R,f_t}``.
* :func:`homotopy_orthogonal_mvn` joins ``Q = U*U`` to ``R = UU*`` when
  ``QR = 0`` by conjugating ``R`` with the unitary family
  ``S_t = R' - exp(i pi t) Q'``, where ``R'`` and ``Q'`` are the ``+1`` and
  ``-1`` spectral projections of ``U + U*``.
* :func:`homotopy_mvn` joins ``R = UU*`` to ``Q = U*U`` when ``||QR|| < 1``
  by first pushing ``R`` to some ``P`` with ``QP = 0`` and then using the
  orthogonal path.

The default ``schedule="angle"`` interpolates the principal angle of each
spectral point linearly in ``t``.  ``schedule="linear"`` interpolates ``f_t``
itself linearly (``(1 - t)s + t`` and ``(1 - t)s``); both produce the same
endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import pc_build, pc_projection_distance
from .errors import NormTooLarge, NotOrthogonal, NotPartialIsometry, PairTooFar
from .numeric import (adjoint, as_matrix, hermitian_part, is_partial_isometry,
                      operator_norm, require_projection, resolve)
from .support import spectral_projection_above

SCHEDULES = ("angle", "linear")


@dataclass(frozen=True)
class HomotopyPath:
    """Projections ``steps[i]`` sampled at ``parameters[i]``."""

    steps: list
    parameters: list
    start: np.ndarray
    end: np.ndarray

    @property
    def mesh(self):
        """Largest distance between consecutive steps."""
        return max((operator_norm(a - b)
                    for a, b in zip(self.steps[:-1], self.steps[1:])),
                   default=0.0)

    def endpoint_error(self):
        return max(operator_norm(self.steps[0] - self.start),
                   operator_norm(self.steps[-1] - self.end))

    def projection_error(self):
        return max(max(operator_norm(P @ P - P), operator_norm(P - adjoint(P)))
                   for P in self.steps)


def _grid(n_steps):
    if n_steps < 2:
        raise ValueError("n_steps must be at least 2")
    return np.linspace(0.0, 1.0, n_steps)


def _check_schedule(schedule):
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}")


def towards_one(t, schedule="angle"):
    """``f_t`` carrying every nonzero spectral point to 1 at ``t = 1``."""
    _check_schedule(schedule)

    def f(s):
        s = np.asarray(s, dtype=float)
        if schedule == "linear":
            out = (1 - t) * s + t
        else:
            out = np.cos((1 - t) * np.arccos(np.sqrt(np.clip(s, 0, 1)))) ** 2
        return np.where(s == 0.0, 0.0, out)
    return f


def towards_zero(t, schedule="angle"):
    """``f_t`` carrying every spectral point below 1 to 0 at ``t = 1``."""
    _check_schedule(schedule)

    def f(s):
        s = np.asarray(s, dtype=float)
        if schedule == "linear":
            return (1 - t) * s
        alpha = np.arccos(np.sqrt(np.clip(s, 0, 1)))
        out = np.cos((1 - t) * alpha + t * np.pi / 2) ** 2
        return np.where(s == 0.0, 0.0, out)
    return f


def close_mesh_bound(Q, R, parameters, schedule="angle", tol=None):
    """Largest closed-form distance between consecutive path samples."""
    return max((pc_projection_distance(Q, R, towards_one(a, schedule),
                                       towards_one(b, schedule), tol)
                for a, b in zip(parameters[:-1], parameters[1:])),
               default=0.0)


def homotopy_close(Q, R, n_steps, schedule="angle", tol=None):
    """Path from ``R`` to ``Q`` for projections with ``||Q - R|| < 1``."""
    tol = resolve(tol)
    Q, R = as_matrix(Q), as_matrix(R)
    require_projection(Q, R, tol=tol)
    if operator_norm(Q - R) >= 1.0 - tol.cluster:
        raise PairTooFar("||Q - R|| is 1 within the cluster margin")
    ts = _grid(n_steps)
    steps = [pc_build(Q, R, towards_one(t, schedule), tol).P for t in ts]
    return HomotopyPath(steps, ts.tolist(), R, Q)


def _orthogonal_parts(U, tol):
    if not is_partial_isometry(U, tol):
        raise NotPartialIsometry("||UU*U - U|| exceeds tolerance")
    Q = hermitian_part(adjoint(U) @ U)
    R = hermitian_part(U @ adjoint(U))
    if operator_norm(Q @ R) > tol.eq:
        raise NotOrthogonal("initial and final projections are not orthogonal")
    S = U + adjoint(U)
    Rp = spectral_projection_above(S, 0.5, tol=tol)
    Qp = spectral_projection_above(-S, 0.5, tol=tol)
    return Q, R, Rp, Qp


def _orthogonal_step(R, Rp, Qp, t):
    S = Rp - np.exp(1j * np.pi * t) * Qp
    return hermitian_part(S @ R @ adjoint(S))


def homotopy_orthogonal_mvn(U, n_steps, tol=None):
    """Path from ``U*U`` to ``UU*`` when the two are orthogonal.

    Each step is ``S_t R S_t*``.  ``S_t`` is a unitary on the span of both
    projections but is not self-adjoint for ``0 < t < 1``, so ``S_t R S_t``
    would not be a projection there.
    """
    tol = resolve(tol)
    U = as_matrix(U)
    Q, R, Rp, Qp = _orthogonal_parts(U, tol)
    ts = _grid(n_steps)
    steps = [_orthogonal_step(R, Rp, Qp, t) for t in ts]
    return HomotopyPath(steps, ts.tolist(), Q, R)


@dataclass(frozen=True)
class MvnHomotopy(HomotopyPath):
    """:class:`HomotopyPath` plus the intermediate projection and witness.

    ``middle`` is the phase-one end point ``P`` (with ``QP = 0``) and
    ``witness`` a partial isometry with initial projection ``Q`` and final
    projection ``P``.
    """

    middle: np.ndarray = None
    witness: np.ndarray = None


def homotopy_mvn(U, n_steps, schedule="angle", tol=None):
    """Path from ``R = UU*`` to ``Q = U*U`` when ``||QR|| < 1``.

    The first half of the parameter interval runs ``P_{Q,R,f_t}`` with
    ``f_1 = 0``, ending at ``P`` with ``QPQ = 0``.  The second half is the
    orthogonal path for ``V = U_{Q,R,f_1} U`` (which has ``V*V = Q`` and
    ``VV* = P``), run backwards from ``P`` to ``Q``.
    """
    tol = resolve(tol)
    U = as_matrix(U)
    if not is_partial_isometry(U, tol):
        raise NotPartialIsometry("||UU*U - U|| exceeds tolerance")
    Q = hermitian_part(adjoint(U) @ U)
    R = hermitian_part(U @ adjoint(U))
    if operator_norm(Q @ R) >= 1.0 - tol.cluster:
        raise NormTooLarge("||QR|| is 1 within the cluster margin")
    ts = _grid(n_steps)
    last = pc_build(Q, R, towards_zero(1.0, schedule), tol)
    V = last.U @ U
    _, PV, Rp, Qp = _orthogonal_parts(V, tol)
    steps = []
    for t in ts:
        if t <= 0.5:
            steps.append(pc_build(Q, R, towards_zero(2 * t, schedule), tol).P)
        else:
            steps.append(_orthogonal_step(PV, Rp, Qp, 2.0 - 2 * t))
    return MvnHomotopy(steps, ts.tolist(), R, Q, middle=last.P, witness=V)

"""Lifting through block-dropping quotients of finite block algebras.

A :class:`BlockAlgebra` is a direct sum of full matrix algebras realised as
block-diagonal matrices.  A :class:`QuotientMap` keeps some of the blocks,
optionally conjugating each kept block by a unitary, and discards the rest.
The lifting routines take elements of the target algebra (or elements of the
source whose images are to be preserved) and build source elements with the
same image and a prescribed norm or spectral relation to a second projection.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import block_diag

from .calculus import ScalarFunction, pc_build
from .errors import (AlgebraMismatch, BadInterval, DegenerateSplit,
                     GapNotClean, Inadmissible, JoinUndefined, NormTooLarge,
                     NotIdempotent, NotPartialIsometry, NotPositiveCase,
                     NotProjection, Stalled)
from .fixtures import random_matrix, random_projection, random_subprojection
from .geometry import (complement, idempotent_to_pair, split_bound,
                       split_partial_isometry, sup_join)
from .numeric import (adjoint, as_matrix, hausdorff, hermitian_eig,
                      hermitian_part, identity, is_idempotent,
                      is_partial_isometry, is_projection, operator_norm,
                      resolve, spectral_points, spectrum_of_pair)
from .support import (gap_threshold, is_well_supported, left_support, polar,
                      quasi_inverse, spectral_projection_above)


@dataclass(frozen=True)
class BlockAlgebra:
    """``M_{n_1} + ... + M_{n_k}`` as block-diagonal matrices."""

    block_dims: tuple

    def __post_init__(self):
        dims = tuple(int(n) for n in self.block_dims)
        if not dims or any(n <= 0 for n in dims):
            raise ValueError("block dimensions must be a nonempty list of "
                             "positive integers")
        object.__setattr__(self, "block_dims", dims)

    @property
    def total_dim(self):
        return sum(self.block_dims)

    @property
    def offsets(self):
        return np.concatenate([[0], np.cumsum(self.block_dims)]).astype(int)

    def block_slice(self, k):
        o = self.offsets
        return slice(int(o[k]), int(o[k + 1]))

    def blocks(self, T):
        return [T[self.block_slice(k), self.block_slice(k)]
                for k in range(len(self.block_dims))]

    def assemble(self, blocks):
        blocks = [np.asarray(b, dtype=complex) for b in blocks]
        for b, n in zip(blocks, self.block_dims):
            if b.shape != (n, n):
                raise AlgebraMismatch(f"block of shape {b.shape}, expected {n}")
        return block_diag(*blocks).astype(complex)

    def compress(self, T):
        """Drop off-diagonal blocks (removes rounding leakage)."""
        return self.assemble(self.blocks(T))

    def off_block_norm(self, T):
        return operator_norm(T - self.compress(T))

    def identity(self):
        return identity(self.total_dim)

    def element(self, T, tol=None):
        return BlockElement(self, as_matrix(T), tol)


@dataclass(frozen=True)
class BlockElement:
    """A block-diagonal matrix tagged with its algebra."""

    algebra: BlockAlgebra
    matrix: np.ndarray
    tol: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        T = as_matrix(self.matrix)
        if T.shape[0] != self.algebra.total_dim:
            raise AlgebraMismatch(
                f"matrix of size {T.shape[0]} in algebra of size "
                f"{self.algebra.total_dim}")
        if self.algebra.off_block_norm(T) > resolve(self.tol).eq:
            raise AlgebraMismatch("matrix has entries outside its blocks")
        object.__setattr__(self, "matrix", self.algebra.compress(T))


@dataclass(frozen=True)
class QuotientMap:
    """Surjection keeping blocks ``kept[j]`` of the source as block ``j``.

    With ``unitaries`` given, target block ``j`` is ``W_j T_k W_j*`` where
    ``T_k`` is source block ``kept[j]``.
    """

    source: BlockAlgebra
    kept: tuple
    unitaries: tuple = None

    def __post_init__(self):
        kept = tuple(int(k) for k in self.kept)
        nblocks = len(self.source.block_dims)
        if len(set(kept)) != len(kept) or any(not 0 <= k < nblocks for k in kept):
            raise ValueError("kept blocks must be distinct source block indices")
        if not kept:
            raise ValueError("the quotient must keep at least one block")
        object.__setattr__(self, "kept", kept)
        if self.unitaries is not None:
            us = tuple(as_matrix(W) for W in self.unitaries)
            if len(us) != len(kept):
                raise ValueError("need one unitary per kept block")
            for W, k in zip(us, kept):
                n = self.source.block_dims[k]
                if W.shape[0] != n or operator_norm(W @ adjoint(W) - identity(n)) > 1e-10:
                    raise ValueError("per-block maps must be unitaries of "
                                     "matching size")
            object.__setattr__(self, "unitaries", us)

    @property
    def target(self):
        return BlockAlgebra(tuple(self.source.block_dims[k] for k in self.kept))

    @property
    def dropped(self):
        return tuple(k for k in range(len(self.source.block_dims))
                     if k not in self.kept)

    def _unitary(self, j):
        if self.unitaries is None:
            return None
        return self.unitaries[j]

    def apply_matrix(self, T):
        blocks = self.source.blocks(T)
        out = []
        for j, k in enumerate(self.kept):
            W = self._unitary(j)
            b = blocks[k]
            out.append(b if W is None else W @ b @ adjoint(W))
        return self.target.assemble(out)

    def embed(self, x, fill=None):
        """Source matrix with image ``x`` and dropped blocks from ``fill``.

        ``fill`` maps dropped block indices to matrices; missing ones are 0.
        """
        fill = {} if fill is None else dict(fill)
        xb = self.target.blocks(as_matrix(x))
        blocks = [np.zeros((n, n), complex) for n in self.source.block_dims]
        for j, k in enumerate(self.kept):
            W = self._unitary(j)
            blocks[k] = xb[j] if W is None else adjoint(W) @ xb[j] @ W
        for k in self.dropped:
            if k in fill:
                blocks[k] = as_matrix(fill[k])
        return self.source.assemble(blocks)

    def random_fill(self, rng, kind="projection"):
        """Random dropped blocks: projections or general matrices."""
        rng = np.random.default_rng(rng)
        fill = {}
        for k in self.dropped:
            n = self.source.block_dims[k]
            if kind == "projection":
                fill[k] = random_projection(n, int(rng.integers(0, n + 1)), rng)
            else:
                fill[k] = random_matrix(n, rng)
        return fill


def _matrix(x, algebra=None):
    if isinstance(x, BlockElement):
        if algebra is not None and x.algebra != algebra:
            raise AlgebraMismatch("element belongs to a different algebra")
        return x.matrix
    return as_matrix(x)


def quotient_apply(pi, T):
    """``pi(T)`` as an element of the target algebra."""
    if isinstance(T, BlockElement) and T.algebra != pi.source:
        raise AlgebraMismatch("element is not in the source algebra")
    M = _matrix(T)
    if M.shape[0] != pi.source.total_dim:
        raise AlgebraMismatch("element is not in the source algebra")
    return BlockElement(pi.target, pi.apply_matrix(M), getattr(T, "tol", None))


def spectral_sandwich(S, t, s, tol=None):
    """Projection ``P`` with ``E(s) <= P <= E(t)``, ``E(x)`` the spectral
    projection of ``S`` for ``(x, inf)``.

    The cut is placed at the midpoint of the widest spectral gap of ``S``
    inside ``[t, s]``.
    """
    tol = resolve(tol)
    if not (s > t > 0):
        raise BadInterval(f"need s > t > 0, got t={t}, s={s}")
    M = _matrix(S)
    d = hermitian_eig(M, tol)
    r = gap_threshold(spectral_points(d.eigenvalues, tol, -np.inf, np.inf),
                      t, s)
    P = spectral_projection_above(M, r, strict=True, tol=tol)
    if isinstance(S, BlockElement):
        return BlockElement(S.algebra, S.algebra.compress(P), tol)
    return P


def _source_projection(pi, X, tol, name):
    M = _matrix(X, pi.source)
    if not is_projection(M, tol):
        raise NotProjection(f"{name} is not a projection")
    return M


def _wrap(pi, M, tol):
    return BlockElement(pi.source, pi.source.compress(hermitian_part(M)), tol)


def lift_projection_norm(pi, R, Q, tol=None):
    """``P`` with ``pi(P) = pi(R)`` and ``||PQ|| = ||pi(P) pi(Q)||``.

    Built as ``P_{Q,R,f}`` with ``f(s) = min(s, ||pi(QR)||^2)``.
    """
    tol = resolve(tol)
    Rm = _source_projection(pi, R, tol, "R")
    Qm = _source_projection(pi, Q, tol, "Q")
    if operator_norm(Qm @ Rm) >= 1.0 - tol.cluster:
        raise NormTooLarge("||QR|| is 1 within the cluster margin")
    c = operator_norm(pi.apply_matrix(Qm) @ pi.apply_matrix(Rm)) ** 2
    return _wrap(pi, pc_build(Qm, Rm, ScalarFunction.cap(min(c, 1.0)), tol).P,
                 tol)


def approximate_norm_lift(pi, R, Q, eps, tol=None):
    """Spectral-cut lift with ``||PQ||^2 <= lambda + eps``.

    ``lambda = ||pi(QR)||^2``; ``P`` cuts ``R Q' R`` in the widest gap of
    ``[1 - lambda - eps, 1 - lambda - eps/2]``.
    """
    tol = resolve(tol)
    Rm = _source_projection(pi, R, tol, "R")
    Qm = _source_projection(pi, Q, tol, "Q")
    lam = operator_norm(pi.apply_matrix(Qm) @ pi.apply_matrix(Rm)) ** 2
    if not 0 < eps < 1 - lam:
        raise BadInterval("need 0 < eps < 1 - ||pi(QR)||^2")
    M = Rm @ complement(Qm) @ Rm
    d = hermitian_eig(M, tol)
    r = gap_threshold(spectral_points(d.eigenvalues, tol), 1 - lam - eps,
                      1 - lam - eps / 2)
    return _wrap(pi, spectral_projection_above(M, r, strict=True, tol=tol), tol)


def _target_points(pi, Pm, Qm, tol):
    return spectrum_of_pair(pi.apply_matrix(Pm), pi.apply_matrix(Qm), tol)


def _clamp_below(s):
    return ScalarFunction.cap(s)


def _clamp_above(t):
    """``max(r, t)`` for ``r > 0`` and 0 at 0."""
    if t >= 1.0:
        return ScalarFunction.chi()
    return ScalarFunction(((0.0, t), (t, t), (1.0, 1.0)), jump_at_zero=True)


def step_distance_bound(s, t):
    """Bound on one gap-closing step: ``2 (sqrt((1-s)t) - sqrt(s(1-t)))``."""
    return 2.0 * (np.sqrt((1 - s) * t) - np.sqrt(s * (1 - t)))


def close_gap(pi, Pn, Q, s, t, delta, tol=None, r=None):
    """Push the eigenvalues of ``Pn Q Pn`` in ``(s, t)`` out to ``s`` or ``t``.

    Requires ``(s, t)`` to miss ``sigma(pi(Pn) pi(Q))``.  Cuts of ``Pn Q Pn``
    near ``r`` (a point of the widest gap of its spectrum in ``(s, t)``) at
    ``r +- delta`` and ``r +- 2 delta`` give projections ``E_- >= E >= E_+``.
    Writing ``B = E_- - E_+`` and ``C = E - E_+``, the projection
    ``S = [(C v [QC])' (B - C)]`` is joined with ``Pn - E_-`` to form ``T``,
    and the result is ``P_{Q,T,f} + P_{Q,E,g}`` with ``f = min(., s)`` and
    ``g = max(., t)``.  Passing ``r`` fixes the centre of the cuts instead.

    Raises
    ------
    GapNotClean
        If the quotient spectrum meets ``(s, t)``.
    DegenerateSplit
        If ``delta >= (t - s)/4``, or the cut band is too thick for ``S`` to
        stay close to ``B - C``.
    """
    tol = resolve(tol)
    Pm = _source_projection(pi, Pn, tol, "Pn")
    Qm = _source_projection(pi, Q, tol, "Q")
    if not 0.0 <= s < t <= 1.0:
        raise BadInterval(f"need 0 <= s < t <= 1, got ({s}, {t})")
    if not 0 < delta < (t - s) / 4:
        raise DegenerateSplit(f"delta={delta} must lie in (0, (t - s)/4)")
    margin = tol.cluster
    quotient = _target_points(pi, Pm, Qm, tol)
    if any(s + margin < x < t - margin for x in quotient):
        raise GapNotClean(f"quotient spectrum meets ({s}, {t})")
    M = hermitian_part(Pm @ Qm @ Pm)
    d = hermitian_eig(M, tol)
    points = spectral_points(d.eigenvalues, tol)
    if r is None:
        r = gap_threshold(points, s + 2 * delta, t - 2 * delta)
    elif not s + 2 * delta < r < t - 2 * delta:
        raise BadInterval("r must leave room for the cuts inside (s, t)")
    E_plus = spectral_sandwich(M, r + delta, r + 2 * delta, tol)
    E = spectral_sandwich(M, r - delta, r + delta, tol)
    E_minus = spectral_sandwich(M, r - 2 * delta, r - delta, tol)
    B = E_minus - E_plus
    C = E - E_plus
    if split_bound(B, Qm) >= 0.5:
        raise DegenerateSplit("cut band too thick; shrink delta")
    try:
        if operator_norm(C) > 0.5:
            J = sup_join(C, left_support(Qm @ C, tol), tol)
        else:
            J = np.zeros_like(M)
        S = left_support(complement(J) @ (B - C), tol)
        low = Pm - E_minus
        T = sup_join(S, low, tol) if operator_norm(S) > 0.5 else low
    except JoinUndefined as exc:
        raise DegenerateSplit(str(exc)) from exc
    if (operator_norm(T @ E) > 10 * tol.eq
            or operator_norm(T @ Qm @ E) > 10 * tol.eq):
        raise DegenerateSplit("T is not orthogonal to E and QE")
    lower = pc_build(Qm, hermitian_part(T), _clamp_below(s), tol).P
    upper = pc_build(Qm, hermitian_part(E), _clamp_above(t), tol).P
    return _wrap(pi, lower + upper, tol)


@dataclass(frozen=True)
class SpectrumLift:
    """Outcome of :func:`lift_projection_spectrum`."""

    P: BlockElement
    iterations: int
    distance: float
    target_spectrum: list
    spectrum: list
    stalled: bool = False


def quotient_gaps(points, min_width=0.0):
    """Open intervals of ``(0, 1)`` missed by ``points``, widest first."""
    pts = sorted(set([0.0, 1.0] + [float(x) for x in points if 0 < x < 1]))
    gaps = [(a, b) for a, b in zip(pts[:-1], pts[1:]) if b - a > min_width]
    return sorted(gaps, key=lambda g: (-(g[1] - g[0]), g[0]))


def lift_projection_spectrum(pi, R, Q, max_iters=200, tol=None, delta=None):
    """``P`` with ``pi(P) = pi(R)`` and ``sigma(PQ) = sigma(pi(P) pi(Q))``.

    Applies :func:`close_gap` to each gap of the quotient spectrum in
    ``(0, 1)``, widest first, then removes a spurious point 1 by passing to
    ``[PQ']``.  Each :func:`close_gap` call counts as an iteration, including
    calls retried with a halved ``delta``.

    Raises
    ------
    Stalled
        If ``max_iters`` is exhausted first; ``exc.result`` holds the best
        :class:`SpectrumLift` reached.
    """
    tol = resolve(tol)
    Pm = _source_projection(pi, R, tol, "R")
    Qm = _source_projection(pi, Q, tol, "Q")
    p = pi.apply_matrix(Pm)
    if operator_norm(p - identity(p.shape[0])) <= tol.eq:
        raise Inadmissible("pi(R) is the unit of the quotient")
    target = _target_points(pi, Pm, Qm, tol)
    gaps = quotient_gaps(target, 2 * tol.cluster)
    iterations = 0
    margin = tol.cluster

    def current():
        return spectrum_of_pair(Pm, Qm, tol)

    def make(stalled):
        spec = current()
        return SpectrumLift(_wrap(pi, Pm, tol), iterations,
                            hausdorff(spec, target), target, spec, stalled)

    for s, t in gaps:
        step = (t - s) / 8 if delta is None else min(delta, (t - s) / 8)
        while any(s + margin < x < t - margin for x in current()):
            if iterations >= max_iters:
                raise Stalled("iteration budget exhausted", make(True))
            iterations += 1
            try:
                Pm = close_gap(pi, Pm, Qm, s, t, step, tol).matrix
            except DegenerateSplit:
                step /= 2
    if 1.0 not in target and 1.0 in current():
        Pm = hermitian_part(left_support(Pm @ complement(Qm), tol))
    result = make(False)
    if result.distance > tol.spec:
        raise Stalled(f"Hausdorff distance {result.distance:.3g} above "
                      f"{tol.spec:g}", replace(result, stalled=True))
    return result


def lift_idempotent(pi, i, fill_p=None, fill_q=None, max_iters=200, tol=None):
    """Idempotent ``I`` with ``pi(I) = i`` and ``sigma(I*I) = sigma(i*i)``.

    ``i = (pq)^-1`` for ``p = [i*]`` and ``q = [i]``; ``q`` is lifted with
    dropped blocks ``fill_q``, ``p`` is lifted with ``fill_p`` and corrected
    by :func:`lift_projection_spectrum`, and ``I = (PQ)^-1``.
    """
    tol = resolve(tol)
    im = _matrix(i, pi.target)
    if not is_idempotent(im, tol):
        raise NotIdempotent("input is not idempotent")
    n = im.shape[0]
    if operator_norm(im - identity(n)) <= tol.eq:
        return BlockElement(pi.source, pi.source.identity(), tol)
    p, q = idempotent_to_pair(im, tol)
    Qm = pi.source.compress(pi.embed(q, fill_q))
    P0 = pi.source.compress(pi.embed(p, fill_p))
    lifted = lift_projection_spectrum(pi, P0, Qm, max_iters, tol)
    I = quasi_inverse(lifted.P.matrix @ Qm, tol)
    return BlockElement(pi.source, pi.source.compress(I), tol)


def _require_partial_isometry(u, tol):
    if not is_partial_isometry(u, tol):
        raise NotPartialIsometry("input is not a partial isometry")


def lift_partial_isometry(pi, u, fill=None, tol=None):
    """Partial isometry ``U`` with ``pi(U) = u`` and ``||U^2|| = ||u^2||``.

    ``fill`` gives the dropped blocks of the initial (arbitrary) lift ``T``.
    ``P`` is a cut of ``T*T`` between 1/3 and 2/3, so ``TP`` has a polar part
    ``V`` lifting ``u`` with final projection ``Q``.  ``R`` lifts ``uu*`` with
    ``||PR|| = ||pi(PR)||`` and ``||Q'R|| < 1``, and ``U = W V`` where ``W``
    is the polar part of ``RQ``.
    """
    tol = resolve(tol)
    um = _matrix(u, pi.target)
    _require_partial_isometry(um, tol)
    T = pi.source.compress(pi.embed(um, fill))
    P = spectral_sandwich(adjoint(T) @ T, 1 / 3, 2 / 3, tol)
    V = pi.source.compress(polar(T @ P, tol).U)
    Qm = hermitian_part(V @ adjoint(V))
    R = _norm_lift_final(pi, Qm, P, um, tol)
    if operator_norm(complement(Qm) @ R) >= 1.0 - tol.cluster:
        R = spectral_sandwich(hermitian_part(R @ Qm @ R), 1 / 3, 2 / 3, tol)
    W = polar(R @ Qm, tol).U
    return BlockElement(pi.source, pi.source.compress(W @ V), tol)


def _norm_lift_final(pi, Qm, P, um, tol):
    """Lift of ``uu*`` nearest in angle to ``P`` allowed by the quotient."""
    uu = um @ adjoint(um)
    if operator_norm(pi.apply_matrix(P) @ uu) >= 1.0 - tol.cluster:
        return Qm
    for R0 in (Qm, pi.source.compress(pi.embed(uu))):
        if operator_norm(P @ R0) < 1.0 - tol.cluster:
            return lift_projection_norm(pi, R0, P, tol).matrix
    return Qm


def lift_partial_isometry_spectrum(pi, u, fill=None, rng=None, max_iters=200,
                                   tol=None):
    """Partial isometry ``U`` with ``pi(U) = u`` and ``sigma(U) = sigma(u)``.

    Needs ``u*u^2`` positive and well-supported.  ``u`` is split into a
    square-zero part ``u_0`` and a part ``u_+`` with ``[u_+^2] = u_+u_+*``.
    ``u_0`` is lifted to ``U_0`` with ``U_0^2 = 0``; the projections of
    ``u_+`` are lifted inside the complement ``F'`` of the ranges of ``U_0``
    and ``U_0*`` with matched spectra, and ``U = U_0 + U_{QP}``.

    ``fill`` seeds the dropped blocks of the ``u_0`` lift; with ``rng`` the
    initial lifts of ``u_+u_+*`` and ``u_+*u_+`` get random dropped blocks
    inside ``F'``.
    """
    tol = resolve(tol)
    um = _matrix(u, pi.target)
    _require_partial_isometry(um, tol)
    if operator_norm(um - identity(um.shape[0])) <= tol.eq:
        raise Inadmissible("u is the unit of the quotient")
    X = adjoint(um) @ um @ um
    if operator_norm(X - adjoint(X)) > tol.eq:
        raise NotPositiveCase("u*u^2 is not self-adjoint")
    w = np.linalg.eigvalsh(hermitian_part(X))
    if w.size and w.min() < -tol.cluster:
        raise NotPositiveCase("u*u^2 is not positive")
    if not is_well_supported(X, tol).ok:
        raise NotPositiveCase("u*u^2 is not well-supported")
    parts = split_partial_isometry(um, tol)
    U0 = lift_partial_isometry(pi, parts.U_zero, fill, tol).matrix
    if np.trace(parts.P_plus).real < 0.5:
        return BlockElement(pi.source, U0, tol)
    F = left_support(U0 @ adjoint(U0) + adjoint(U0) @ U0, tol)
    iso, cpi, ranks = _corner(pi, complement(F))
    p = parts.P_plus
    q = hermitian_part(parts.U_plus @ adjoint(parts.U_plus))
    p_t = cpi.apply_matrix(adjoint(iso) @ pi.embed(p) @ iso)
    q_t = cpi.apply_matrix(adjoint(iso) @ pi.embed(q) @ iso)
    fill_q = _corner_fill(cpi, ranks, rng)
    fill_p = _corner_fill(cpi, ranks, rng)
    Qc = cpi.source.compress(cpi.embed(q_t, fill_q))
    if operator_norm(p_t - _corner_unit(cpi, ranks)) <= tol.eq:
        Pc = Qc
    else:
        P0 = cpi.source.compress(cpi.embed(p_t, fill_p))
        Pc = lift_projection_spectrum(cpi, P0, Qc, max_iters, tol).P.matrix
    Pbig = iso @ Pc @ adjoint(iso)
    Qbig = iso @ Qc @ adjoint(iso)
    Uplus = polar(Qbig @ Pbig, tol).U
    return BlockElement(pi.source, pi.source.compress(U0 + Uplus), tol)


def _corner_unit(cpi, ranks):
    """Unit of the corner quotient, zero on padding blocks."""
    blocks = []
    for k in cpi.kept:
        n = cpi.source.block_dims[k]
        blocks.append(np.eye(n) if ranks[k] else np.zeros((n, n)))
    return cpi.target.assemble(blocks)


def _corner_fill(cpi, ranks, rng):
    if rng is None:
        return None
    fill = {}
    for k in cpi.dropped:
        if ranks[k]:
            n = cpi.source.block_dims[k]
            fill[k] = random_projection(n, int(rng.integers(0, n + 1)), rng)
    return fill


def _corner(pi, D):
    """Isometry onto the range of a block-diagonal projection ``D`` and the
    quotient map of the corner algebra ``D A D`` in its own coordinates.

    Blocks where ``D`` vanishes keep one padding dimension so the corner is
    a valid block algebra; the isometry has a zero column there.
    """
    cols, dims, ranks = [], [], []
    total = pi.source.total_dim
    for k in range(len(pi.source.block_dims)):
        sl = pi.source.block_slice(k)
        w, V = np.linalg.eigh(hermitian_part(D[sl, sl]))
        V = V[:, w > 0.5]
        r = V.shape[1]
        block = np.zeros((total, max(r, 1)), complex)
        block[sl, :r] = V
        cols.append(block)
        dims.append(max(r, 1))
        ranks.append(r)
    cpi = QuotientMap(BlockAlgebra(tuple(dims)), pi.kept)
    return np.hstack(cols), cpi, ranks


def lift_triple_special(pi, p, q, r, fill_s=None, rng=None, tol=None):
    """Lift ``p, q, r`` with ``pqr = 0 = pr`` to ``P, Q, R`` with
    ``PQR = 0 = PR``, when ``||pq|| < 1`` and ``||pq'|| < 1``.

    ``S`` lifts ``p v [qp]``; ``P`` and ``Q_p`` are lifted below ``S`` and
    ``R`` and ``Q_r`` below ``S'``, with ``Q = Q_p + Q_r``.
    """
    tol = resolve(tol)
    pm, qm, rm = (_matrix(x, pi.target) for x in (p, q, r))
    for name, x in (("p", pm), ("q", qm), ("r", rm)):
        if not is_projection(x, tol):
            raise NotProjection(f"{name} is not a projection")
    if (operator_norm(pm @ qm @ rm) > tol.eq or operator_norm(pm @ rm) > tol.eq):
        raise Inadmissible("need pqr = 0 = pr")
    if (operator_norm(pm @ qm) >= 1 - tol.cluster
            or operator_norm(pm @ complement(qm)) >= 1 - tol.cluster):
        raise Inadmissible("special case needs ||pq|| < 1 and ||pq'|| < 1")
    qp = left_support(qm @ pm, tol)
    s = sup_join(pm, qp, tol)
    rng = np.random.default_rng(rng)
    S = pi.source.compress(pi.embed(s, fill_s))
    Sp = complement(S)

    def below(x, D):
        fill = {}
        for k in pi.dropped:
            sl = pi.source.block_slice(k)
            Dk = hermitian_part(D[sl, sl])
            rank = int(round(np.trace(Dk).real))
            sub = int(rng.integers(0, rank + 1)) if rank else 0
            if sub:
                fill[k] = random_subprojection(Dk, sub, rng)
        return pi.source.compress(pi.embed(x, fill))

    P = below(pm, S)
    Qp = below(qp, S)
    R = below(rm, Sp)
    Qr = below(hermitian_part(qm - qp), Sp)
    Q = hermitian_part(Qp + Qr)
    return tuple(BlockElement(pi.source, X, tol) for X in (P, Q, R))

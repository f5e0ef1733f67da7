"""Vector states, exact excision on projections and matrix-unit systems.

For a unit vector ``v`` and a projection ``Q`` with ``lam = <Qv, v>``,
:func:`excise` builds a projection ``P`` with ``Pv = v`` and
``PQP = lam P`` of any achievable rank.  It starts from ``vv*`` and grows
the projection one excising line at a time with :func:`excision_step`.

:func:`transitivity_units` turns an orthonormal family ``e_1..e_n`` into
partial isometries ``U_m`` acting as ``U_m e_l = delta(l, n) e_m``, so the
products ``U_i U_j*`` form a system of ``n x n`` matrix units.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .calculus import pc_constant
from .errors import (BasisNotOrthonormal, DegenerateSplit, DimensionTooSmall,
                     NotExcising, NumericallyDegenerate, RankUnachievable)
from .lifting import spectral_sandwich
from .numeric import (adjoint, as_matrix, clean_projection, haar_unitary,
                      hermitian_part, identity, operator_norm,
                      range_projection, rank_of_projection, require_projection,
                      resolve)
from .support import is_well_supported, left_support


@dataclass(frozen=True)
class PureState:
    """Vector state ``T -> <Tv, v>``."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).ravel()
        if v.size == 0 or abs(np.linalg.norm(v) - 1.0) > resolve(None).eq:
            raise ValueError("state vector must have unit norm")
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_vector(cls, v):
        """Normalise ``v`` and wrap it."""
        v = np.asarray(v, dtype=complex).ravel()
        return cls(v / np.linalg.norm(v))

    @property
    def dim(self):
        return self.vector.size

    def evaluate(self, T):
        v = self.vector
        return complex(np.vdot(v, as_matrix(T) @ v))

    def projection(self):
        return np.outer(self.vector, self.vector.conj())


@dataclass(frozen=True)
class MatrixUnitSystem:
    """Partial isometries ``U_1..U_n`` with common initial projection.

    ``Q`` and ``P`` hold the projections ``Q_1..Q_n`` and ``P_1..P_{n-1}``
    produced by the recursion.
    """

    units: list
    basis: list
    Q: list = field(default_factory=list)
    P: list = field(default_factory=list)

    @property
    def n(self):
        return len(self.units)

    def unit(self, i, j):
        """``E_ij = U_i U_j*`` (zero-based indices)."""
        return self.units[i] @ adjoint(self.units[j])

    def initial_residual(self):
        """Largest ``||U_m* U_m - U_n* U_n||``."""
        if not self.units:
            return 0.0
        Qn = adjoint(self.units[-1]) @ self.units[-1]
        return max(operator_norm(adjoint(U) @ U - Qn) for U in self.units)

    def law_residual(self):
        """Largest ``||E_ij E_kl - delta(j, k) E_il||``."""
        n = self.n
        E = [[self.unit(i, j) for j in range(n)] for i in range(n)]
        worst = 0.0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        target = E[i][l] if j == k else 0.0
                        worst = max(worst,
                                    operator_norm(E[i][j] @ E[k][l] - target))
        return worst

    def action_residual(self):
        """Largest ``||U_m e_l - delta(l, n) e_m||``."""
        n = self.n
        worst = 0.0
        for m in range(n):
            for l in range(n):
                want = self.basis[m] if l == n - 1 else 0.0
                worst = max(worst, float(np.linalg.norm(
                    self.units[m] @ self.basis[l] - want)))
        return worst

    def representation_rank(self, tol=None):
        """Numerical rank of ``E_ij -> (<E_ij e_l, e_k>)_{kl}``."""
        n = self.n
        if n == 0:
            return 0
        B = np.column_stack(self.basis)
        rows = [(adjoint(B) @ self.unit(i, j) @ B).ravel()
                for i in range(n) for j in range(n)]
        return int(np.linalg.matrix_rank(np.array(rows),
                                         tol=resolve(tol).cluster))

    def excision_residual(self):
        """Largest ``||P_m Q_m P_m - P_m / 2||``."""
        return max((operator_norm(P @ Q @ P - 0.5 * P)
                    for P, Q in zip(self.P, self.Q)), default=0.0)


def _basis(P):
    """Orthonormal columns spanning the range of a projection."""
    P = hermitian_part(as_matrix(P))
    if P.shape[0] == 0:
        return np.zeros((0, 0), complex)
    w, V = np.linalg.eigh(P)
    return V[:, w > 0.5]


def _random_unit(B, rng):
    c = rng.standard_normal(B.shape[1]) + 1j * rng.standard_normal(B.shape[1])
    w = B @ c
    return w / np.linalg.norm(w)


def _excision_residual(P, Q, lam):
    return operator_norm(P @ Q @ P - lam * P)


def _join(A, B, tol):
    return left_support(A + B, tol)


def _step(Q, Pn, Rnext, lam, tol):
    tol = resolve(tol)
    Q, Pn, Rnext = as_matrix(Q), as_matrix(Pn), as_matrix(Rnext)
    require_projection(Q, Pn, Rnext, tol=tol)
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise NotExcising(f"lambda={lam} outside [0, 1]")
    if _excision_residual(Pn, Q, lam) > 10 * tol.eq:
        raise NotExcising("Pn Q Pn differs from lambda Pn")
    if _excision_residual(Rnext, Q, lam) > 10 * tol.eq:
        raise NotExcising("Rnext Q Rnext differs from lambda Rnext")
    ok, _ = is_well_supported(Pn @ Rnext, tol)
    if not ok:
        raise NotExcising("Pn Rnext is not well supported")
    try:
        PR = left_support(Pn @ Rnext, tol)
        J = _join(Rnext, left_support(Q @ Rnext, tol), tol)
        rest = Pn - PR
        S = left_support((identity(Q.shape[0]) - J) @ rest, tol)
    except NumericallyDegenerate as exc:
        raise NotExcising(str(exc)) from exc
    PS = pc_constant(Q, S, lam, tol).P
    P = clean_projection(Rnext + PS)
    if _excision_residual(P, Q, lam) > 100 * tol.eq:
        raise DegenerateSplit("excision step left the excising subspace")
    terms = (operator_norm(PR - Rnext), operator_norm(S - rest),
             operator_norm(S - PS))
    return P, terms


def excision_step(Q, Pn, Rnext, lam, tol=None):
    """Extend an excising projection ``Pn`` so that it contains ``Rnext``.

    Both ``Pn`` and ``Rnext`` must satisfy ``XQX = lam X``.  The result is
    ``Rnext + P_{Q,S,lam}`` with ``S`` the support of the part of
    ``Pn - [Pn Rnext]`` orthogonal to ``Rnext v [Q Rnext]``.

    Raises
    ------
    NotExcising
        If a precondition fails.
    DegenerateSplit
        If the result misses ``PQP = lam P`` by more than ``100 tol.eq``.
    """
    return _step(Q, Pn, Rnext, lam, tol)[0]


def step_distance_terms(Q, Pn, Rnext, lam, tol=None):
    """The three terms whose sum bounds ``||P_{n+1} - Pn||``.

    They are ``||[Pn Rnext] - Rnext||``, ``||S - (Pn - [Pn Rnext])||`` and
    ``||S - P_{Q,S,lam}||``.
    """
    return _step(Q, Pn, Rnext, lam, tol)[1]


def _ambient(A, Q, v, tol):
    n = Q.shape[0]
    if A is None:
        return identity(n)
    A = as_matrix(A)
    require_projection(A, tol=tol)
    if operator_norm(A @ Q - Q @ A) > 10 * tol.eq:
        raise NotExcising("ambient projection does not commute with Q")
    if np.linalg.norm(A @ v - v) > 10 * tol.eq:
        raise NotExcising("state vector lies outside the ambient projection")
    return A


def excise(Q, state, target_rank, ambient=None, rng=None, tol=None):
    """Projection ``P`` with ``Pv = v`` and ``PQP = <Qv, v> P``.

    Parameters
    ----------
    Q : ndarray
        Projection.
    state : PureState or array_like
        The vector ``v``.
    target_rank : int
        Rank of the result.
    ambient : ndarray, optional
        Projection commuting with ``Q`` and fixing ``v``; the result lies
        below it.
    rng : optional
        Seed or Generator for the directions added after the seed ``vv*``.

    Raises
    ------
    RankUnachievable
        If the ambient space has too few dimensions inside ``Q`` or ``Q'``
        to host ``target_rank`` excising lines.
    """
    tol = resolve(tol)
    Q = as_matrix(Q)
    require_projection(Q, tol=tol)
    if not isinstance(state, PureState):
        state = PureState(state)
    v = state.vector
    if v.size != Q.shape[0]:
        raise ValueError("state and projection dimensions differ")
    target_rank = int(target_rank)
    if target_rank < 1:
        raise RankUnachievable("target rank must be at least 1")
    rng = np.random.default_rng(rng)
    A = _ambient(ambient, Q, v, tol)
    n = Q.shape[0]
    Qp = identity(n) - Q
    lam = float(np.clip(state.evaluate(Q).real, 0.0, 1.0))
    P = state.projection()

    if lam <= tol.eq or lam >= 1.0 - tol.eq:
        # v already lies in Q' or Q: extend by any vectors of that subspace
        side = Qp if lam <= tol.eq else Q
        room = _basis(side @ A @ (identity(n) - P))
        if room.shape[1] < target_rank - 1:
            raise RankUnachievable(
                f"only {room.shape[1] + 1} dimensions available")
        for _ in range(target_rank - 1):
            w = _random_unit(_basis(side @ A @ (identity(n) - P)), rng)
            P = P + np.outer(w, w.conj())
        return clean_projection(P)

    need = target_rank
    if min(rank_of_projection(Q @ A), rank_of_projection(Qp @ A)) < need:
        raise RankUnachievable(
            f"rank {target_rank} needs {target_rank} dimensions in both Q and "
            f"its complement inside the ambient space")
    K = range_projection(np.column_stack([v, Q @ v]), tol)
    for _ in range(target_rank - 1):
        Kp = identity(n) - K
        a = _random_unit(_basis(Q @ A @ Kp), rng)
        b = _random_unit(_basis(Qp @ A @ Kp), rng)
        w = np.sqrt(lam) * a + np.sqrt(1.0 - lam) * b
        P = excision_step(Q, P, np.outer(w, w.conj()), lam, tol)
        K = clean_projection(K + np.outer(a, a.conj()) + np.outer(b, b.conj()))
    return P


@dataclass(frozen=True)
class ApproximateExcision:
    """Positive contraction ``R`` and the projection cut from it.

    ``R`` has ``Rv = v`` and ``||RQR - lam R|| <= eps``; ``R_cut`` lies
    between the spectral projections of ``R`` above ``1 - eps`` and above
    ``1 - 2 eps``.
    """

    R: np.ndarray
    R_cut: np.ndarray
    eps: float
    residual: float
    cut_residual: float


def approximate_excision(Q, state, eps, rank=1, rng=None, tol=None):
    """Cut a projection from an approximately excising positive contraction.

    ``R`` is an exact excising projection of the given rank, perturbed away
    from ``v`` by a random self-adjoint matrix of norm ``eps / 4`` and
    clipped back into ``[0, 1]``.  Cutting ``R`` inside
    ``[1 - 2 eps, 1 - eps]`` gives a projection fixing ``v`` that excises
    ``Q`` up to ``7 eps`` (plus a second-order term).
    """
    tol = resolve(tol)
    eps = float(eps)
    if not 0.0 < eps < 0.25:
        raise ValueError("eps must lie in (0, 1/4)")
    if not isinstance(state, PureState):
        state = PureState(state)
    rng = np.random.default_rng(rng)
    Q = as_matrix(Q)
    n = Q.shape[0]
    lam = float(state.evaluate(Q).real)
    P = excise(Q, state, rank, rng=rng, tol=tol)
    V = identity(n) - state.projection()
    H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = V @ hermitian_part(H) @ V
    nh = operator_norm(H)
    if nh > 0:
        H *= eps / (4 * nh)
    w, X = np.linalg.eigh(hermitian_part(P + H))
    R = hermitian_part((X * np.clip(w, 0.0, 1.0)) @ adjoint(X))
    R_cut = spectral_sandwich(R, 1.0 - 2 * eps, 1.0 - eps, tol)
    return ApproximateExcision(R, R_cut, eps, _excision_residual(R, Q, lam),
                               _excision_residual(R_cut, Q, lam))


def _check_basis(basis, N, tol):
    vecs = [np.asarray(e, dtype=complex).ravel() for e in basis]
    if any(e.size != N for e in vecs):
        raise BasisNotOrthonormal(f"basis vectors must have length {N}")
    if vecs:
        B = np.column_stack(vecs)
        if operator_norm(adjoint(B) @ B - identity(len(vecs))) > tol.eq:
            raise BasisNotOrthonormal("basis is not orthonormal")
    return vecs


def _fat_first(e, basis, rank, N, rng):
    """Rank-``rank`` projection fixing ``e`` and killing the other basis
    vectors."""
    others = identity(N) - range_projection(np.column_stack(basis))
    extra = _basis(others)
    W = extra @ haar_unitary(extra.shape[1], rng)[:, :rank - 1]
    return range_projection(np.column_stack([e, W]))


def transitivity_units(N, basis, fat=False, rank=2, rng=None, tol=None):
    """Matrix units realising ``B(K)`` for ``K`` spanned by ``basis``.

    With ``fat=False`` every ``Q_m`` and ``P_m`` has rank one and the units
    are ``U_m = e_m e_n*``.  With ``fat=True`` they have rank ``rank``:
    ``Q_1`` is padded with random directions orthogonal to ``K`` and each
    ``P_m`` comes from :func:`excise` inside the part of the space orthogonal
    to ``Q_1..Q_{m-1}`` and ``e_{m+2}..e_n``.

    Raises
    ------
    DimensionTooSmall
        If ``N`` cannot host the construction (``N >= n`` for rank one,
        ``N >= n * rank`` for the fat path).
    BasisNotOrthonormal
        If the basis vectors are not orthonormal within ``tol.eq``.
    """
    tol = resolve(tol)
    N = int(N)
    vecs = _check_basis(basis, N, tol)
    n = len(vecs)
    if n == 0:
        return MatrixUnitSystem([], [])
    need = n * rank if fat and n > 1 else n
    if N < need:
        raise DimensionTooSmall(f"need N >= {need}, got {N}")
    rng = np.random.default_rng(rng)
    I = identity(N)

    def line(x):
        return np.outer(x, x.conj())

    Qs = [_fat_first(vecs[0], vecs, rank, N, rng) if fat and n > 1
          else line(vecs[0])]
    Ps = []
    for m in range(n - 1):
        f = (vecs[m] + vecs[m + 1]) / np.sqrt(2.0)
        if fat:
            A = I - sum(Qs[:m], np.zeros((N, N), complex))
            for e in vecs[m + 2:]:
                A = A - line(e)
            Pm = excise(Qs[m], PureState(f), rank, ambient=clean_projection(A),
                        rng=rng, tol=tol)
        else:
            Pm = line(f)
        Ps.append(Pm)
        Qs.append(clean_projection(2 * (I - Qs[m]) @ Pm @ (I - Qs[m])))
    units = [Qs[-1]]
    for m in range(n - 2, -1, -1):
        units.insert(0, 2 * Qs[m] @ Ps[m] @ units[0])
    return MatrixUnitSystem(units, vecs, Qs, Ps)


def transitivity_multi(algebra, bases, fat=False, rank=2, rng=None, tol=None):
    """One matrix-unit system per block of a block algebra.

    ``bases[k]`` lists orthonormal vectors in the coordinates of block ``k``.
    The systems are built independently and embedded block-diagonally, so
    units from different blocks multiply to zero.
    """
    tol = resolve(tol)
    if len(bases) != len(algebra.block_dims):
        raise ValueError("need one basis per block")
    seeds = np.random.SeedSequence(
        np.random.default_rng(rng).integers(2**32)).spawn(len(bases))

    def build(k):
        d = algebra.block_dims[k]
        return transitivity_units(d, bases[k], fat, rank,
                                  np.random.default_rng(seeds[k]), tol)

    with ThreadPoolExecutor() as pool:
        local = list(pool.map(build, range(len(bases))))

    out = []
    total = algebra.total_dim
    for k, sys in enumerate(local):
        sl = algebra.block_slice(k)

        def lift(X):
            Y = np.zeros((total, total), complex)
            Y[sl, sl] = X
            return Y

        def lift_vec(x):
            y = np.zeros(total, complex)
            y[sl] = x
            return y

        out.append(MatrixUnitSystem([lift(U) for U in sys.units],
                                    [lift_vec(e) for e in sys.basis],
                                    [lift(X) for X in sys.Q],
                                    [lift(X) for X in sys.P]))
    return out


def cross_residual(systems):
    """Largest product of two units taken from different systems."""
    worst = 0.0
    for a in range(len(systems)):
        for b in range(len(systems)):
            if a == b:
                continue
            for U in systems[a].units:
                for V in systems[b].units:
                    worst = max(worst, operator_norm(U @ V),
                                operator_norm(U @ adjoint(V)))
    return worst

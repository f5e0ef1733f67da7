"""Dense complex linear algebra substrate.

Operator matrices are plain square ``numpy`` arrays of dtype ``complex128``.
Everything here is a pure function of its inputs; tolerances travel as an
immutable :class:`Tolerances` value.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .errors import InvalidAngle, NotProjection, NotSelfAdjoint


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerance policy.

    Parameters
    ----------
    eq : float
        Residual tolerance for exact identities.
    cluster : float
        Eigenvalues closer than this are merged into one spectral point.
    wellsup : float
        ``T`` is well-supported when the smallest nonzero eigenvalue of
        ``T T*`` exceeds this.
    zero : float
        Relative noise floor: singular values below
        ``zero * dim * max(1, ||T||)`` are exact zeros.
    spec : float
        Hausdorff tolerance for spectrum-matching lifts.
    """

    eq: float = 1e-8
    cluster: float = 1e-7
    wellsup: float = 1e-9
    zero: float = 1e-13
    spec: float = 1e-4

    def __post_init__(self):
        if not 0 < self.wellsup < self.cluster:
            raise ValueError("need 0 < wellsup < cluster")
        for name in ("eq", "cluster", "wellsup", "zero"):
            value = getattr(self, name)
            if not 0 < value < 1e-3:
                raise ValueError(f"tolerance {name}={value} outside (0, 1e-3)")
        if self.spec <= 0:
            raise ValueError("spec tolerance must be positive")

    def with_eq(self, eq):
        return Tolerances(eq, self.cluster, self.wellsup, self.zero, self.spec)

    def with_spec(self, spec):
        return Tolerances(self.eq, self.cluster, self.wellsup, self.zero, spec)


DEFAULT_TOL = Tolerances()


def resolve(tol):
    return DEFAULT_TOL if tol is None else tol


def as_matrix(T):
    """Return ``T`` as a square complex array (no copy when already one)."""
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {T.shape}")
    return T


def adjoint(T):
    return np.conj(T).T


def identity(n):
    return np.eye(n, dtype=complex)


def operator_norm(T):
    """Largest singular value of ``T``."""
    T = np.asarray(T, dtype=complex)
    if T.size == 0:
        return 0.0
    return float(np.linalg.norm(T, 2))


def zero_floor(T, tol=None):
    tol = resolve(tol)
    n = max(1, T.shape[0])
    return tol.zero * n * max(1.0, operator_norm(T))


def is_self_adjoint(S, tol=None):
    tol = resolve(tol)
    S = as_matrix(S)
    return operator_norm(S - adjoint(S)) <= tol.eq * max(1.0, operator_norm(S))


def is_projection(P, tol=None):
    tol = resolve(tol)
    P = as_matrix(P)
    return (operator_norm(P - adjoint(P)) <= tol.eq
            and operator_norm(P @ P - P) <= tol.eq)


def is_idempotent(I, tol=None):
    tol = resolve(tol)
    I = as_matrix(I)
    return operator_norm(I @ I - I) <= tol.eq


def is_partial_isometry(U, tol=None):
    tol = resolve(tol)
    U = as_matrix(U)
    return operator_norm(U @ adjoint(U) @ U - U) <= tol.eq


def require_projection(*mats, tol=None):
    for P in mats:
        if not is_projection(P, tol):
            raise NotProjection("input is not a projection within tolerance")


def require_self_adjoint(S, tol=None):
    if not is_self_adjoint(S, tol):
        raise NotSelfAdjoint("input is not self-adjoint within tolerance")


def hermitian_part(S):
    return 0.5 * (S + adjoint(S))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ adjoint(V)

    def clusters(self, width):
        return cluster_indices(self.eigenvalues, width)

    def apply(self, values):
        """``V diag(values) V*`` for one value per eigenvalue."""
        V = self.eigenvectors
        return (V * np.asarray(values)) @ adjoint(V)

    def projection(self, mask):
        V = self.eigenvectors[:, np.asarray(mask, dtype=bool)]
        return V @ adjoint(V)


def hermitian_eig(S, tol=None):
    """Eigendecomposition of a self-adjoint matrix.

    Raises
    ------
    NotSelfAdjoint
        If ``||S - S*||`` exceeds the equality tolerance (scaled by ``||S||``
        when that is larger than one).
    """
    S = as_matrix(S)
    require_self_adjoint(S, tol)
    if S.shape[0] == 0:
        return SpectralDecomposition(np.zeros(0), np.zeros((0, 0), complex))
    w, V = np.linalg.eigh(hermitian_part(S))
    return SpectralDecomposition(w, V)


def cluster_indices(values, width):
    """Group sorted ``values`` into chains whose neighbours differ by <= width."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    order = np.argsort(values, kind="stable")
    groups = [[order[0]]]
    for prev, cur in zip(order[:-1], order[1:]):
        if values[cur] - values[prev] <= width:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    return [np.array(g) for g in groups]


def spectral_points(values, tol=None, lo=0.0, hi=1.0):
    """Cluster representatives of ``values`` snapped onto ``[lo, hi]``.

    Representatives are cluster means; any within ``tol.cluster`` of an
    endpoint is set exactly to that endpoint.
    """
    tol = resolve(tol)
    reps = []
    for group in cluster_indices(values, tol.cluster):
        reps.append(_snap(float(np.mean(np.asarray(values)[group])), tol, lo, hi))
    return sorted(set(reps))


def _snap(x, tol, lo, hi):
    if abs(x - lo) <= tol.cluster:
        return lo
    if abs(x - hi) <= tol.cluster:
        return hi
    return x


def snapped_eigenvalues(decomp, tol=None, lo=0.0, hi=1.0):
    """Per-eigenvalue cluster representative (same length as the spectrum)."""
    tol = resolve(tol)
    out = np.empty(decomp.dim)
    for group in decomp.clusters(tol.cluster):
        out[group] = _snap(float(np.mean(decomp.eigenvalues[group])), tol, lo, hi)
    return out


def spectrum_of_pair(P, Q, tol=None):
    """sigma(PQ) for projections P, Q, as the clustered spectrum of PQP.

    The list is sorted and deduplicated; values lie in [0, 1].  Zero is
    included whenever PQ is singular, i.e. unless P = Q = 1.
    """
    tol = resolve(tol)
    P, Q = as_matrix(P), as_matrix(Q)
    require_projection(P, Q, tol=tol)
    if P.shape[0] == 0:
        return []
    w = np.linalg.eigvalsh(hermitian_part(P @ Q @ P))
    return [min(1.0, max(0.0, x)) for x in spectral_points(w, tol)]


def hausdorff(a, b):
    """Symmetric Hausdorff distance between two finite sets of scalars."""
    a = np.asarray(list(a), dtype=complex)
    b = np.asarray(list(b), dtype=complex)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def haar_unitary(n, rng):
    rng = np.random.default_rng(rng)
    if n == 0:
        return np.zeros((0, 0), complex)
    if n == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(n, random_state=rng)


def range_projection(vectors, tol=None):
    """Projection onto the column span of ``vectors``."""
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.size == 0:
        return np.zeros((vectors.shape[0],) * 2, complex)
    W, s, _ = np.linalg.svd(vectors, full_matrices=False)
    floor = resolve(tol).zero * max(vectors.shape) * max(1.0, s[0] if s.size else 0)
    W = W[:, s > floor]
    return W @ adjoint(W)


def clean_projection(P):
    """Nearest exact projection to an almost-projection."""
    P = as_matrix(P)
    if P.shape[0] == 0:
        return P.copy()
    w, V = np.linalg.eigh(hermitian_part(P))
    V = V[:, w > 0.5]
    return V @ adjoint(V)


def rank_of_projection(P):
    return int(round(float(np.trace(P).real)))


def pair_from_angles(angles, extra_p=0, extra_q=0, extra_kernel=0, seed=0,
                     extra_both=0):
    """Two projections in general position with prescribed principal angles.

    Each angle contributes a 2x2 block where P projects onto the first axis
    and Q onto the line at that angle.  ``extra_p`` dimensions carry P=1, Q=0;
    ``extra_q`` carry P=0, Q=1; ``extra_kernel`` carry P=Q=0 and
    ``extra_both`` carry P=Q=1.  The whole pair is conjugated by a Haar
    unitary drawn from ``seed`` (an int or a ``numpy`` Generator).

    Returns
    -------
    P, Q : ndarray
    """
    angles = [float(a) for a in angles]
    for a in angles:
        if not 0.0 < a < np.pi / 2:
            raise InvalidAngle(f"angle {a} not in (0, pi/2)")
    n = 2 * len(angles) + extra_p + extra_q + extra_kernel + extra_both
    P = np.zeros((n, n), complex)
    Q = np.zeros((n, n), complex)
    for k, a in enumerate(angles):
        i = 2 * k
        c, s = np.cos(a), np.sin(a)
        P[i, i] = 1.0
        Q[i:i + 2, i:i + 2] = [[c * c, c * s], [c * s, s * s]]
    i = 2 * len(angles)
    for _ in range(extra_p):
        P[i, i] = 1.0
        i += 1
    for _ in range(extra_q):
        Q[i, i] = 1.0
        i += 1
    i += extra_kernel
    for _ in range(extra_both):
        P[i, i] = Q[i, i] = 1.0
        i += 1
    W = haar_unitary(n, seed)
    Wh = adjoint(W)
    return clean_projection(W @ P @ Wh), clean_projection(W @ Q @ Wh)

"""Random block-algebra fixtures for the lifting constructions."""
from __future__ import annotations

import numpy as np
from scipy.linalg import block_diag

from .fixtures import random_angles, random_partial_isometry
from .geometry import mvn_partial_isometry, pair_to_idempotent
from .lifting import BlockAlgebra, QuotientMap
from .numeric import adjoint, haar_unitary, operator_norm, pair_from_angles


def _block_dims(rng, dim_max, min_dim=1, max_blocks=3):
    k = int(rng.integers(2, max_blocks + 1))
    k = max(1, min(k, dim_max // min_dim))
    dims = [min_dim] * k
    for _ in range(int(rng.integers(0, dim_max - min_dim * k + 1))):
        dims[int(rng.integers(k))] += 1
    return tuple(dims)


def random_quotient(rng, dim_max=12, min_dim=1, max_blocks=3, unitaries=True):
    """Block algebra with a random quotient keeping a proper, nonempty set of
    blocks, optionally twisted by per-block unitaries."""
    rng = np.random.default_rng(rng)
    dims = _block_dims(rng, dim_max, min_dim, max_blocks)
    A = BlockAlgebra(dims)
    k = len(dims)
    n_kept = int(rng.integers(1, k)) if k > 1 else 1
    kept = tuple(sorted(int(x) for x in rng.choice(k, n_kept, replace=False)))
    us = (tuple(haar_unitary(dims[j], rng) for j in kept) if unitaries
          else None)
    return QuotientMap(A, kept, us)


def _angle_block(n, rng, max_angles=None, lo=0.05, hi=np.pi / 2 - 0.05):
    """``(R, Q)`` on ``C^n`` with ``||QR|| < 1`` and random principal angles."""
    top = n // 2 if max_angles is None else min(n // 2, max_angles)
    k = int(rng.integers(0, top + 1))
    rest = n - 2 * k
    cuts = np.sort(rng.integers(0, rest + 1, 2))
    angles = random_angles(k, rng, lo, hi) if k else []
    return pair_from_angles(angles, int(cuts[0]), int(cuts[1] - cuts[0]),
                            rest - int(cuts[1]), seed=rng)


def random_block_pair(rng, dim_max=12, max_stray=None, unitaries=True):
    """``(pi, R, Q)`` with ``||QR|| < 1`` and ``pi(R)`` not the unit.

    ``max_stray`` caps the number of principal angles in dropped blocks,
    i.e. the eigenvalues of ``RQR`` the quotient does not see.
    """
    rng = np.random.default_rng(rng)
    while True:
        pi = random_quotient(rng, dim_max, 1, 3, unitaries)
        Rs, Qs = [], []
        for j, n in enumerate(pi.source.block_dims):
            cap = max_stray if j in pi.dropped else None
            R, Q = _angle_block(n, rng, cap)
            Rs.append(R)
            Qs.append(Q)
        A = pi.source
        R, Q = A.assemble(Rs), A.assemble(Qs)
        r = pi.apply_matrix(R)
        if operator_norm(r - np.eye(r.shape[0])) > 0.5:
            return pi, R, Q


def random_block_isometry(rng, dim_max=12, unitaries=True):
    """``(pi, u, fill)``: a partial isometry in the quotient and random
    dropped blocks for its first lift."""
    rng = np.random.default_rng(rng)
    pi = random_quotient(rng, dim_max, 1, 3, unitaries)
    u = pi.target.assemble([random_partial_isometry(n, rng,
                                                    int(rng.integers(0, n + 1)))
                            for n in pi.target.block_dims])
    return pi, u, pi.random_fill(rng, "matrix")


def _positive_isometry_block(n, rng):
    """Partial isometry ``u`` with ``u*u^2`` positive and well supported."""
    k = int(rng.integers(0, n // 2 + 1))
    rest = n - 2 * k
    nil = 2 if rest >= 2 and rng.random() < 0.5 else 0
    both = int(rng.integers(0, rest - nil + 1))
    parts = []
    if 2 * k + both:
        P, Q = pair_from_angles(random_angles(k, rng, 0.1, 1.2) if k else [],
                                extra_both=both, seed=rng)
        parts.append(mvn_partial_isometry(P, Q))
    if nil:
        parts.append(np.array([[0.0, 0.0], [1.0, 0.0]]))
    parts.append(np.zeros((rest - nil - both,) * 2))
    W = haar_unitary(n, rng)
    return W @ block_diag(*parts) @ adjoint(W)


def positive_isometry_fixture(rng, dim_max=12, unitaries=True):
    """``(pi, u, fill)`` with ``u*u^2`` positive and well supported."""
    rng = np.random.default_rng(rng)
    while True:
        pi = random_quotient(rng, dim_max, 2, 3, unitaries)
        u = pi.target.assemble([_positive_isometry_block(n, rng)
                                for n in pi.target.block_dims])
        if operator_norm(u - np.eye(u.shape[0])) > 0.5:
            return pi, u, pi.random_fill(rng, "matrix")


def random_block_idempotent(rng, dim_max=12, unitaries=True):
    """``(pi, i, fill_p, fill_q)`` with ``i`` a non-unit idempotent."""
    rng = np.random.default_rng(rng)
    while True:
        pi = random_quotient(rng, dim_max, 2, 3, unitaries)
        blocks = []
        for n in pi.target.block_dims:
            k = int(rng.integers(0, n // 2 + 1))
            both = int(rng.integers(0, n - 2 * k + 1))
            P, Q = pair_from_angles(random_angles(k, rng, 0.05, 1.3) if k else [],
                                    extra_both=both,
                                    extra_kernel=n - 2 * k - both, seed=rng)
            blocks.append(pair_to_idempotent(P, Q))
        i = pi.target.assemble(blocks)
        if operator_norm(i - np.eye(i.shape[0])) > 0.5:
            return pi, i, pi.random_fill(rng), pi.random_fill(rng)


def two_block_fixture():
    """``M_2 + M_2`` quotient keeping block 1, with ``R`` and ``Q`` lines at
    angle pi/6 in block 0 and pi/4 in block 1."""
    A = BlockAlgebra((2, 2))
    pi = QuotientMap(A, (1,))
    R0, Q0 = pair_from_angles([np.pi / 6])
    R1, Q1 = pair_from_angles([np.pi / 4])
    return pi, A.assemble([R0, R1]), A.assemble([Q0, Q1])

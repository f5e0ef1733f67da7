"""Reproducible random inputs.

Every generator takes a ``numpy`` Generator (or anything accepted by
``np.random.default_rng``), so a fixture is fully determined by its seed.
"""
from __future__ import annotations

import zlib

import numpy as np

from .calculus import ScalarFunction
from .numeric import adjoint, haar_unitary, pair_from_angles


def trial_rng(seed, check_id, trial):
    """Generator for one trial of one named check."""
    return np.random.default_rng([int(seed), zlib.crc32(check_id.encode()),
                                  int(trial)])


def random_projection(n, rank, rng):
    rng = np.random.default_rng(rng)
    W = haar_unitary(n, rng)[:, :rank]
    return W @ adjoint(W)


def random_subprojection(P, rank, rng):
    """A random rank-``rank`` projection below ``P``."""
    rng = np.random.default_rng(rng)
    w, V = np.linalg.eigh(0.5 * (P + adjoint(P)))
    V = V[:, w > 0.5]
    if rank > V.shape[1]:
        raise ValueError("rank exceeds that of P")
    W = V @ haar_unitary(V.shape[1], rng)[:, :rank]
    return W @ adjoint(W)


def random_pair(n, rng, rank_p=None, rank_q=None):
    rng = np.random.default_rng(rng)
    rank_p = int(rng.integers(1, n)) if rank_p is None else rank_p
    rank_q = int(rng.integers(1, n)) if rank_q is None else rank_q
    return random_projection(n, rank_p, rng), random_projection(n, rank_q, rng)


def random_angles(k, rng, lo=0.05, hi=np.pi / 2 - 0.05, min_sep=1e-3):
    """``k`` angles in ``[lo, hi]`` pairwise at least ``min_sep`` apart."""
    rng = np.random.default_rng(rng)
    while True:
        a = np.sort(rng.uniform(lo, hi, k))
        if k < 2 or np.diff(a).min() >= min_sep:
            return a


def random_angle_pair(n, rng, lo=0.05, hi=np.pi / 2 - 0.05):
    """Pair with random principal angles and random extra dimensions."""
    rng = np.random.default_rng(rng)
    k = int(rng.integers(1, n // 2 + 1))
    rest = n - 2 * k
    cuts = np.sort(rng.integers(0, rest + 1, 2))
    extra_p, extra_q = int(cuts[0]), int(cuts[1] - cuts[0])
    extra_kernel = rest - extra_p - extra_q
    return pair_from_angles(random_angles(k, rng, lo, hi), extra_p, extra_q,
                            extra_kernel, seed=rng)


def random_matrix(n, rng, m=None):
    rng = np.random.default_rng(rng)
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def random_well_supported(n, rng, rank=None, smin=0.2, smax=3.0):
    """Random matrix of given rank with nonzero singular values in
    ``[smin, smax]``."""
    rng = np.random.default_rng(rng)
    rank = int(rng.integers(0, n + 1)) if rank is None else rank
    W = haar_unitary(n, rng)[:, :rank]
    V = haar_unitary(n, rng)[:, :rank]
    s = rng.uniform(smin, smax, rank)
    return (W * s) @ adjoint(V)


def random_partial_isometry(n, rng, rank=None):
    rng = np.random.default_rng(rng)
    rank = int(rng.integers(1, n + 1)) if rank is None else rank
    W = haar_unitary(n, rng)[:, :rank]
    V = haar_unitary(n, rng)[:, :rank]
    return W @ adjoint(V)


def random_function(rng, kind=None):
    """Random admissible :class:`ScalarFunction` with ``f(1) = 1``.

    ``kind`` is ``"pl"`` (continuous, ``f(0) = 0``), ``"jump"`` (with a jump
    at zero) or ``"cap"`` (``min(s, c)``, so ``f(1) = c``).
    """
    rng = np.random.default_rng(rng)
    kind = rng.choice(["pl", "jump", "cap"]) if kind is None else kind
    if kind == "cap":
        return ScalarFunction.cap(float(rng.uniform(0.05, 0.95)))
    k = int(rng.integers(0, 4))
    xs = np.sort(rng.uniform(0.02, 0.98, k))
    ys = rng.uniform(0, 1, k)
    y0 = float(rng.uniform(0, 1)) if kind == "jump" else 0.0
    pts = [(0.0, y0)] + list(zip(xs.tolist(), ys.tolist())) + [(1.0, 1.0)]
    return ScalarFunction(tuple(pts), jump_at_zero=(kind == "jump"))


def unit_vector(n, rng):
    v = random_matrix(n, rng, 1)[:, 0]
    return v / np.linalg.norm(v)


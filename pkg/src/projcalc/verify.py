"""Randomised verification suites.

Each :class:`CheckGroup` draws one fixture per trial from a generator seeded
by ``(seed, group name, trial)`` and returns one residual per check id.  A
check passes when its largest residual over all trials is at most its bound.
Reports are plain dicts with checks sorted by id, so two runs with the same
arguments serialise to identical JSON apart from ``wall_time``.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.linalg import expm

from . import block_fixtures as bf
from .calculus import (b_residual, pc_build, pc_projection_distance,
                       pc_unitary_distance, qpq_residual)
from .errors import ProjCalcError, RankUnachievable, Stalled, UnknownSuite
from .fixtures import (random_angles, random_function, random_matrix,
                       random_pair, random_projection, random_subprojection,
                       random_well_supported, trial_rng, unit_vector)
from .geometry import (complement, corner_bound, idempotent_to_pair,
                       mvn_partial_isometry, pair_report, pair_to_idempotent,
                       product_support, split_bound, split_partial_isometry,
                       sup_join, two_part_bound, upq_equivalences)
from .homotopy import homotopy_close, homotopy_mvn, homotopy_orthogonal_mvn
from .io import algebra_from_json, matrix_from_json, quotient_from_json
from .lifting import (BlockAlgebra, approximate_norm_lift, lift_idempotent,
                      lift_partial_isometry, lift_partial_isometry_spectrum,
                      lift_projection_norm, lift_projection_spectrum,
                      lift_triple_special, spectral_sandwich)
from .numeric import (DEFAULT_TOL, Tolerances, adjoint, haar_unitary,
                      hausdorff, identity, operator_norm,
                      pair_from_angles, rank_of_projection, spectral_points,
                      spectrum_of_pair)
from .states import (PureState, approximate_excision, cross_residual, excise,
                     excision_step, step_distance_terms, transitivity_multi,
                     transitivity_units)
from .support import (gap_threshold, intertwining_residual, left_support,
                      polar, quasi_inverse, right_support,
                      spectral_projection_above)

SUITES = ("support", "geometry", "calculus", "homotopy", "lifting", "states")


@dataclass(frozen=True)
class Context:
    dim_max: int
    tol: Tolerances


@dataclass(frozen=True)
class CheckGroup:
    """Checks sharing one fixture per trial.

    ``checks`` pairs each id with a function of the tolerances giving its
    bound.  ``trial(rng, ctx)`` returns one residual per check, or ``None``
    to skip the trial.  ``cap`` limits the number of trials; ``fixed``
    groups run exactly once.
    """

    name: str
    suite: str
    checks: tuple
    trial: object
    cap: int = None
    fixed: bool = False


GROUPS = []


def group(name, suite, checks, cap=None, fixed=False):
    def register(fn):
        GROUPS.append(CheckGroup(name, suite, tuple(checks), fn, cap, fixed))
        return fn
    return register


def eq(k):
    return lambda tol: k * tol.eq


def spec(tol):
    return tol.spec


def cluster(tol):
    return tol.cluster


def exact(tol):
    return 0.0


# fixtures --------------------------------------------------------------

def _dim(rng, ctx, lo=2):
    return int(rng.integers(lo, max(lo, ctx.dim_max) + 1))


def _angle_pair(rng, ctx, extras=("p", "q", "kernel", "both"), lo=0.05,
                hi=np.pi / 2 - 0.05, equal=False, min_angles=0, n=None):
    """``(P, Q)`` with random principal angles and extra dimensions of the
    listed kinds only."""
    n = _dim(rng, ctx) if n is None else n
    k = int(rng.integers(min(min_angles, n // 2), n // 2 + 1))
    rest = n - 2 * k
    counts = dict.fromkeys(("p", "q", "kernel", "both"), 0)
    if extras:
        split = rng.multinomial(rest, [1 / len(extras)] * len(extras))
        counts.update(zip(extras, (int(c) for c in split)))
    else:
        k = n // 2
        if n % 2:
            raise ValueError("no room for an odd dimension")
    if equal and k:
        angles = np.full(k, random_angles(1, rng, lo, hi)[0])
    else:
        angles = random_angles(k, rng, lo, hi) if k else []
    return pair_from_angles(angles, counts["p"], counts["q"],
                            counts["kernel"], seed=rng,
                            extra_both=counts["both"])


def _near_unitary(n, eps, rng):
    H = random_matrix(n, rng)
    H = H + adjoint(H)
    return expm(1j * eps * H / operator_norm(H))


def _line_gap(values, tol):
    """A threshold in the widest gap between positive spectral points."""
    pts = [p for p in spectral_points(values, tol, 0.0, np.inf) if p > 0]
    if len(pts) < 2:
        return None
    return gap_threshold(pts, pts[0], pts[-1])


# support ---------------------------------------------------------------

@group("pair-basics", "support",
       [("pair.nonzero-spectrum-swap", cluster),
        ("pair.difference-norm", eq(1)),
        ("pair.complement-spectrum", cluster),
        ("pair.report-consistency", eq(1))], cap=500)
def _pair_basics(rng, ctx):
    n = _dim(rng, ctx)
    P, Q = random_pair(n, rng)
    if rng.random() < 0.5:
        P, Q = _angle_pair(rng, ctx)
    a = np.sort(np.linalg.eigvalsh(P @ Q @ P))
    b = np.sort(np.linalg.eigvalsh(Q @ P @ Q))
    swap = float(np.abs(a - b).max())
    Pp, Qp = complement(P), complement(Q)
    diff = abs(operator_norm(P - Q)
               - max(operator_norm(P @ Qp), operator_norm(Pp @ Q)))
    tol = ctx.tol
    inner = [x for x in spectrum_of_pair(P, Q, tol)
             if tol.cluster < x < 1 - tol.cluster]
    mirror = [1 - x for x in spectrum_of_pair(P, Qp, tol)
              if tol.cluster < x < 1 - tol.cluster]
    if inner or mirror:
        comp = hausdorff(inner, mirror) if inner and mirror else np.inf
    else:
        comp = 0.0
    rep = pair_report(P, Q, tol)
    cons = abs(rep.norm_diff - max(rep.norm_p_qperp, rep.norm_pperp_q))
    if rep.norm_diff < 1 - tol.cluster:
        cons = max(cons, abs(rep.norm_p_qperp - rep.norm_pperp_q))
    return swap, diff, comp, cons


@group("angle-roundtrip", "support", [("pair.angle-roundtrip", cluster)],
       cap=500)
def _angle_roundtrip(rng, ctx):
    n = _dim(rng, ctx)
    k = int(rng.integers(1, n // 2 + 1))
    angles = random_angles(k, rng)
    rest = n - 2 * k
    P, Q = pair_from_angles(angles, rest, 0, 0, seed=rng)
    got = [x for x in spectrum_of_pair(P, Q, ctx.tol) if 0 < x < 1]
    return (hausdorff(got, np.cos(angles) ** 2),)


@group("functional-calculus", "support",
       [("support.intertwining", eq(10)),
        ("support.spectral-cut-transfer", eq(1))], cap=300)
def _functional(rng, ctx):
    n = _dim(rng, ctx)
    T = random_matrix(n, rng)
    if rng.random() < 0.5:
        T = random_well_supported(n, rng)
    tol = ctx.tol
    res = max(intertwining_residual(T, np.sqrt, tol),
              intertwining_residual(T, np.square, tol))
    t = _line_gap(np.linalg.eigvalsh(adjoint(T) @ T), tol)
    cut = 0.0
    if t is not None:
        res = max(res, intertwining_residual(
            T, lambda s: (s > t).astype(float), tol))
        lhs = spectral_projection_above(T @ adjoint(T), t, tol=tol)
        rhs = left_support(T @ spectral_projection_above(adjoint(T) @ T, t,
                                                         tol=tol), tol)
        cut = operator_norm(lhs - rhs)
    return res, cut


@group("quasi-inverse", "support",
       [("support.quasi-inverse-laws", eq(1)),
        ("support.quasi-inverse-norm", eq(10)),
        ("support.quasi-inverse-involution", eq(1)),
        ("support.quasi-inverse-criterion", exact),
        ("support.polar-parts", eq(1))], cap=300)
def _quasi_inverse(rng, ctx):
    tol = ctx.tol
    n = _dim(rng, ctx)
    T = random_well_supported(n, rng, int(rng.integers(1, n + 1)))
    Ti = quasi_inverse(T, tol)
    L, R = left_support(T, tol), right_support(T, tol)
    laws = max(operator_norm(T @ Ti - L), operator_norm(Ti @ T - R),
               operator_norm(T @ Ti @ T - T), operator_norm(Ti @ T @ Ti - Ti),
               operator_norm(adjoint(Ti) - quasi_inverse(adjoint(T), tol)))
    smin = min(p for p in np.linalg.eigvalsh(T @ adjoint(T))
               if p > tol.cluster)
    norm = abs(operator_norm(Ti) ** 2 * smin - 1.0)
    invol = operator_norm(quasi_inverse(Ti, tol) - T)
    # S = T^-1 + K satisfies both sides exactly when [T*] K = 0
    X = random_matrix(n, rng)
    if rng.random() < 0.5:
        K = complement(R) @ X
    else:
        K = X @ complement(L) if rng.random() < 0.5 else X
    S = Ti + K
    lhs = operator_norm(T @ S - L) <= tol.eq
    rhs = operator_norm(R @ S - Ti) <= 10 * tol.eq
    crit = 0.0 if lhs == rhs else 1.0
    parts = polar(T, tol)
    U, absT = parts.U, parts.absT
    pol = max(operator_norm(U @ absT - T),
              operator_norm(U @ adjoint(U) @ U - U),
              operator_norm(U @ adjoint(U) - L),
              operator_norm(adjoint(U) @ U - R))
    return laws, norm, invol, crit, pol


# geometry --------------------------------------------------------------

@group("product-support", "geometry",
       [("geometry.support-distance", eq(10)),
        ("geometry.product-support-continuity", eq(10))], cap=300)
def _product_support(rng, ctx):
    tol = ctx.tol
    P, Q = _angle_pair(rng, ctx, ("p", "kernel", "both"))
    PQ = product_support(P, Q, tol)
    npq = operator_norm(complement(P) @ Q)
    X = P - PQ + Q
    dist = max(abs(operator_norm(Q - PQ) - npq), operator_norm(X @ X - X))
    W = _near_unitary(P.shape[0], rng.uniform(0, 0.1), rng)
    R = W @ Q @ adjoint(W)
    npr = operator_norm(complement(P) @ R)
    if max(npq, npr) >= 1 - tol.cluster:
        return None
    bound = operator_norm(Q - R) / np.sqrt(1 - max(npq, npr) ** 2)
    cont = max(0.0, operator_norm(PQ - product_support(P, R, tol)) - bound)
    return dist, cont


@group("join", "geometry",
       [("geometry.inverse-norm", eq(10)),
        ("geometry.join-identity", eq(10)),
        ("geometry.join-continuity", eq(10))], cap=300)
def _join(rng, ctx):
    tol = ctx.tol
    P, Q = _angle_pair(rng, ctx, ("p", "q", "kernel"), min_angles=1)
    Pp, Qp = complement(P), complement(Q)
    npq = operator_norm(P @ Q)
    inv = abs(operator_norm(quasi_inverse(Pp @ Q, tol))
              - 1 / np.sqrt(1 - npq ** 2))
    J = sup_join(P, Q, tol)
    ident = operator_norm(quasi_inverse(Pp @ Q, tol)
                          + quasi_inverse(Qp @ P, tol) - J)
    W = _near_unitary(P.shape[0], rng.uniform(0, 0.1), rng)
    R = W @ Q @ adjoint(W)
    npr = operator_norm(P @ R)
    if npr >= 1 - tol.cluster:
        return None
    bound = operator_norm(Q - R) / np.sqrt(1 - max(npq, npr) ** 2)
    cont = max(0.0, operator_norm(J - sup_join(P, R, tol)) - bound)
    return inv, ident, cont


@group("corner", "geometry",
       [("geometry.corner-bound", eq(1)),
        ("geometry.split-bound", eq(1)),
        ("geometry.split-exact", eq(10))], cap=300)
def _corner(rng, ctx):
    tol = ctx.tol
    n = _dim(rng, ctx, 4)
    P, Q = random_pair(n, rng, int(rng.integers(2, n)))
    R = random_subprojection(P, int(rng.integers(1, rank_of_projection(P))),
                             rng)
    corner = max(0.0, operator_norm((P - R) @ Q @ R) - corner_bound(P, Q))

    def split_residual(P, Q, R):
        J = sup_join(R, product_support(Q, R, tol), tol)
        return operator_norm((P - R) @ J)

    P, Q = _angle_pair(rng, ctx, ("q", "kernel"), min_angles=2,
                       n=_dim(rng, ctx, 4))
    R = random_subprojection(P, int(rng.integers(1, rank_of_projection(P))),
                             rng)
    split = max(0.0, split_residual(P, Q, R) - split_bound(P, Q))
    P, Q = _angle_pair(rng, ctx, ("q", "kernel"), equal=True, min_angles=2,
                       n=_dim(rng, ctx, 4))
    R = random_subprojection(P, int(rng.integers(1, rank_of_projection(P))),
                             rng)
    return corner, split, split_residual(P, Q, R)


@group("two-part", "geometry", [("geometry.two-part-bound", eq(1))], cap=300)
def _two_part(rng, ctx):
    n = _dim(rng, ctx, 3)
    W = haar_unitary(n, rng)
    a = int(rng.integers(1, n - 1))
    b = int(rng.integers(1, n - a))
    Pa = W[:, :a] @ adjoint(W[:, :a])
    Pb = W[:, a:a + b] @ adjoint(W[:, a:a + b])
    Q = random_projection(n, int(rng.integers(1, n)), rng)
    qa, qb = operator_norm(Q @ Pa), operator_norm(Q @ Pb)
    if abs(qa - qb) < 1e-3:
        return None
    Pp, Pm = (Pa, Pb) if qa > qb else (Pb, Pa)
    R = random_subprojection(Pa + Pb, int(rng.integers(1, a + b + 1)), rng)
    lhs = operator_norm(Pm @ R) ** 2
    same = abs(operator_norm(complement(Pp) @ R) ** 2 - lhs)
    return (max(same, lhs - two_part_bound(Pp, Pm, Q, R)),)


@group("idempotents", "geometry",
       [("geometry.idempotent-roundtrip", eq(10)),
        ("geometry.mvn-conditions", eq(10)),
        ("geometry.closeness-equivalence", exact),
        ("geometry.isometry-split", eq(1))], cap=300)
def _idempotents(rng, ctx):
    tol = ctx.tol
    P, Q = _angle_pair(rng, ctx, ("kernel", "both"))
    Id = pair_to_idempotent(P, Q, tol)
    P2, Q2 = idempotent_to_pair(Id, tol)
    rt = max(operator_norm(Id @ Id - Id), operator_norm(P2 - P),
             operator_norm(Q2 - Q))
    U = mvn_partial_isometry(P, Q, tol)
    X = adjoint(U) @ U @ U
    mvn = max(operator_norm(adjoint(U) @ U - P), operator_norm(U @ adjoint(U) - Q),
              operator_norm(X - adjoint(X)),
              max(0.0, -np.linalg.eigvalsh(0.5 * (X + adjoint(X))).min()))
    rep = upq_equivalences(U, tol)
    agree = rep.consistent and rep.p_q_close
    agree = agree and abs(rep.norm_u_minus_ustar - rep.norm_p_minus_q) <= 10 * tol.eq
    # direct sum with an orthogonal nilpotent and a negative part
    n = U.shape[0]
    N = np.zeros((2, 2), complex)
    N[1, 0] = 1.0
    V = np.zeros((n + 4, n + 4), complex)
    V[:n, :n] = U
    V[n:n + 2, n:n + 2] = N
    V[n + 2:, n + 2:] = -np.eye(2)
    Wv = haar_unitary(n + 4, rng)
    V = Wv @ V @ adjoint(Wv)
    sp = split_partial_isometry(V, tol)
    recon = max(operator_norm(sp.U_plus - sp.U_minus + sp.U_zero - V),
                operator_norm(sp.P_plus + sp.P_minus + sp.P_zero
                              - adjoint(V) @ V),
                operator_norm(sp.U_zero @ sp.U_zero))
    return rt, mvn, 0.0 if agree else 1.0, recon


# calculus --------------------------------------------------------------

@group("projection-calculus", "calculus",
       [("calculus.compression", eq(10)),
        ("calculus.initial-projection", eq(10)),
        ("calculus.rank", exact),
        ("calculus.projection-distance", eq(10)),
        ("calculus.unitary-distance", eq(10)),
        ("calculus.product-formula", eq(10))], cap=500)
def _calculus(rng, ctx):
    tol = ctx.tol
    Q, R = _angle_pair(rng, ctx, ("p", "q", "kernel"))
    f, g = random_function(rng), random_function(rng)
    rf, rg = pc_build(Q, R, f, tol), pc_build(Q, R, g, tol)
    comp = qpq_residual(Q, R, rf.P, f, tol)
    init = operator_norm(adjoint(rf.U) @ rf.U - R)
    rank = abs(rank_of_projection(rf.P) - rank_of_projection(R))
    pd = abs(operator_norm(rf.P - rg.P) - pc_projection_distance(Q, R, f, g, tol))
    ud = abs(operator_norm(rf.U - rg.U) - pc_unitary_distance(Q, R, f, g, tol))
    return comp, init, float(rank), pd, ud, b_residual(Q, R, f, g, tol)


@group("calculus-continuity", "calculus", [("calculus.continuity", eq(10))],
       cap=100)
def _continuity(rng, ctx):
    tol = ctx.tol
    Q, R = _angle_pair(rng, ctx, ("p", "q", "kernel"), lo=0.2,
                       hi=np.pi / 2 - 0.2)
    f = random_function(rng, "pl")
    P0 = pc_build(Q, R, f, tol).P
    n = Q.shape[0]
    H = random_matrix(n, rng)
    H = (H + adjoint(H)) / operator_norm(H + adjoint(H))
    dists = []
    for eps in (1e-2, 1e-3, 1e-4):
        W = expm(1j * eps * H)
        dists.append(operator_norm(pc_build(Q, W @ R @ adjoint(W), f, tol).P
                                   - P0))
    return (max(0.0, dists[1] - dists[0], dists[2] - dists[1]),)


# homotopy --------------------------------------------------------------

def _isometry_between(A, B, rng):
    """Random partial isometry with initial projection ``A`` and final ``B``."""
    wa, Va = np.linalg.eigh(A)
    wb, Vb = np.linalg.eigh(B)
    Va, Vb = Va[:, wa > 0.5], Vb[:, wb > 0.5]
    return Vb @ haar_unitary(Va.shape[1], rng) @ adjoint(Va)


def _paths(rng, ctx, n_steps):
    """One path of each kind for ``n_steps`` sample points."""
    tol = ctx.tol
    close = _angle_pair(rng, ctx, ("kernel", "both"), min_angles=1)
    n = _dim(rng, ctx, 2)
    r = int(rng.integers(1, n // 2 + 1))
    W = haar_unitary(n, rng)
    Qo = W[:, :r] @ adjoint(W[:, :r])
    Ro = W[:, r:2 * r] @ adjoint(W[:, r:2 * r])
    Uo = _isometry_between(Qo, Ro, rng)
    e = int(rng.integers(0, 2))
    m = _dim(rng, ctx, 2 + 2 * e)
    k = int(rng.integers(1, (m - 2 * e) // 2 + 1))
    Qm, Rm = pair_from_angles(random_angles(k, rng), e, e,
                              m - 2 * k - 2 * e, seed=rng)
    Um = _isometry_between(Qm, Rm, rng)

    def build(steps):
        return (homotopy_close(close[0], close[1], steps, tol=tol),
                homotopy_orthogonal_mvn(Uo, steps, tol),
                homotopy_mvn(Um, steps, tol=tol))
    return build


@group("homotopy", "homotopy",
       [("homotopy.endpoints", eq(10)),
        ("homotopy.projections", eq(10)),
        ("homotopy.mesh-refinement", eq(10))], cap=50)
def _homotopy(rng, ctx):
    n_steps = int(rng.integers(6, 17))
    build = _paths(rng, ctx, n_steps)
    coarse, fine = build(n_steps), build(2 * n_steps)
    ends = max(p.endpoint_error() for p in coarse + fine)
    proj = max(p.projection_error() for p in coarse + fine)
    mesh = max(max(0.0, b.mesh - a.mesh / 2) for a, b in zip(coarse, fine))
    return ends, proj, mesh


# lifting ---------------------------------------------------------------

@group("quotient", "lifting",
       [("lifting.homomorphism", eq(1)),
        ("lifting.sandwich", eq(10))], cap=300)
def _quotient(rng, ctx):
    pi = bf.random_quotient(rng, ctx.dim_max)
    A = pi.source
    X = A.assemble([random_matrix(n, rng) for n in A.block_dims])
    Y = A.assemble([random_matrix(n, rng) for n in A.block_dims])
    a = complex(rng.standard_normal(), rng.standard_normal())
    hom = max(operator_norm(pi.apply_matrix(X @ Y)
                            - pi.apply_matrix(X) @ pi.apply_matrix(Y)),
              operator_norm(pi.apply_matrix(adjoint(X))
                            - adjoint(pi.apply_matrix(X))),
              operator_norm(pi.apply_matrix(X + a * Y) - pi.apply_matrix(X)
                            - a * pi.apply_matrix(Y)))
    S = A.assemble([random_matrix(n, rng) for n in A.block_dims])
    S = (S + adjoint(S)) / (2 * operator_norm(S + adjoint(S))) + 0.5
    t, s = np.sort(rng.uniform(0.05, 0.95, 2))
    w = np.linalg.eigvalsh(S)
    if s - t < 1e-3 or np.abs(w[:, None] - [t, s]).min() <= ctx.tol.cluster:
        return hom, 0.0
    P = spectral_sandwich(S, t, s, ctx.tol)
    lo = spectral_projection_above(S, s, tol=ctx.tol)
    hi = spectral_projection_above(S, t, tol=ctx.tol)
    return hom, max(operator_norm(P @ lo - lo), operator_norm(hi @ P - P))


@group("norm-lift", "lifting",
       [("lifting.norm-exact", eq(10)),
        ("lifting.norm-quotient", eq(10)),
        ("lifting.approximate-norm", eq(1))], cap=200)
def _norm_lift(rng, ctx):
    tol = ctx.tol
    pi, R, Q = bf.random_block_pair(rng, ctx.dim_max)
    P = lift_projection_norm(pi, R, Q, tol).matrix
    pP, pQ = pi.apply_matrix(P), pi.apply_matrix(Q)
    exact_ = abs(operator_norm(P @ Q) - operator_norm(pP @ pQ))
    quot = max(operator_norm(pP - pi.apply_matrix(R)), operator_norm(P @ P - P))
    lam = operator_norm(pQ @ pi.apply_matrix(R)) ** 2
    if 1 - lam < 1e-3:
        return exact_, quot, 0.0
    eps = float(rng.uniform(1e-3, 1 - lam))
    Pa = approximate_norm_lift(pi, R, Q, eps, tol).matrix
    approx = max(0.0, operator_norm(Pa @ Q) ** 2 - lam - eps,
                 operator_norm(pi.apply_matrix(Pa) - pi.apply_matrix(R)))
    return exact_, quot, approx


@group("norm-lift-two-block", "lifting",
       [("lifting.norm-two-block", eq(10))], fixed=True)
def _two_block(rng, ctx):
    pi, R, Q = bf.two_block_fixture()
    P = lift_projection_norm(pi, R, Q, ctx.tol).matrix
    return (abs(operator_norm(P @ Q) ** 2 - 0.5),)


def _spectrum_lift(pi, R, Q, tol):
    try:
        return lift_projection_spectrum(pi, R, Q, 200, tol), False
    except Stalled as exc:
        return exc.result, True


@group("spectrum-lift", "lifting",
       [("lifting.spectrum-exact", spec),
        ("lifting.spectrum-quotient", eq(10)),
        ("lifting.spectrum-complement", spec)], cap=200)
def _spectrum(rng, ctx):
    tol = ctx.tol
    pi, R, Q = bf.random_block_pair(rng, ctx.dim_max, max_stray=3)
    res, stalled = _spectrum_lift(pi, R, Q, tol)
    P = res.P.matrix
    dist = np.inf if stalled else res.distance
    quot = max(operator_norm(pi.apply_matrix(P) - pi.apply_matrix(R)),
               operator_norm(P @ P - P))
    Qp = complement(Q)
    cut = 1 - tol.cluster
    a = [x for x in spectrum_of_pair(P, Qp, tol) if x < cut]
    b = [x for x in spectrum_of_pair(pi.apply_matrix(P), pi.apply_matrix(Qp),
                                     tol) if x < cut]
    return dist, quot, hausdorff(a, b)


def shipped_spectrum_fixtures():
    """The fixture set of spectrum-lift problems shipped with the package."""
    text = resources.files("projcalc").joinpath(
        "data/spectrum_fixtures.json").read_text()
    out = []
    for item in json.loads(text)["fixtures"]:
        A = algebra_from_json(item["algebra"])
        out.append((quotient_from_json(item["map"], A),
                    matrix_from_json(item["R"]), matrix_from_json(item["Q"])))
    return out


@group("spectrum-fixtures", "lifting",
       [("lifting.spectrum-shipped", spec),
        ("lifting.spectrum-shipped-stalls", exact)], fixed=True)
def _shipped(rng, ctx):
    worst, stalls = 0.0, 0
    for pi, R, Q in shipped_spectrum_fixtures():
        res, stalled = _spectrum_lift(pi, R, Q, ctx.tol)
        stalls += stalled
        worst = max(worst, res.distance)
    return worst, float(stalls)


@group("idempotent-lift", "lifting",
       [("lifting.idempotent-spectrum", spec),
        ("lifting.idempotent-quotient", eq(10))], cap=100)
def _idem_lift(rng, ctx):
    tol = ctx.tol
    pi, i, fp, fq = bf.random_block_idempotent(rng, ctx.dim_max)
    try:
        I = lift_idempotent(pi, i, fp, fq, 200, tol).matrix
    except Stalled:
        return np.inf, np.inf
    a = spectral_points(np.linalg.eigvalsh(adjoint(I) @ I), tol, 0, np.inf)
    b = spectral_points(np.linalg.eigvalsh(adjoint(i) @ i), tol, 0, np.inf)
    quot = max(operator_norm(I @ I - I), operator_norm(pi.apply_matrix(I) - i))
    return hausdorff(a, b), quot


@group("isometry-lift", "lifting",
       [("lifting.isometry-square-norm", eq(10)),
        ("lifting.isometry-quotient", eq(10))], cap=100)
def _iso_lift(rng, ctx):
    tol = ctx.tol
    pi, u, fill = bf.random_block_isometry(rng, ctx.dim_max)
    U = lift_partial_isometry(pi, u, fill, tol).matrix
    sq = abs(operator_norm(U @ U) - operator_norm(u @ u))
    quot = max(operator_norm(U @ adjoint(U) @ U - U),
               operator_norm(pi.apply_matrix(U) - u))
    return sq, quot


@group("isometry-spectrum-lift", "lifting",
       [("lifting.isometry-spectrum", spec),
        ("lifting.isometry-spectrum-quotient", eq(10))], cap=100)
def _iso_spec(rng, ctx):
    tol = ctx.tol
    pi, u, fill = bf.positive_isometry_fixture(rng, ctx.dim_max)
    try:
        U = lift_partial_isometry_spectrum(pi, u, fill, rng, 200, tol).matrix
    except Stalled:
        return np.inf, np.inf
    quot = max(operator_norm(U @ adjoint(U) @ U - U),
               operator_norm(pi.apply_matrix(U) - u))
    return hausdorff(np.linalg.eigvals(U), np.linalg.eigvals(u)), quot


@group("triple-lift", "lifting", [("lifting.triple-special", eq(10))], cap=100)
def _triple(rng, ctx):
    tol = ctx.tol
    pi = bf.random_quotient(rng, ctx.dim_max, 4)
    ps, qs, rs = [], [], []
    for n in pi.target.block_dims:
        p, q = _angle_pair(rng, ctx, ("q", "kernel"), n=n)
        s = sup_join(p, product_support(q, p, tol), tol)
        sp = complement(s)
        k = rank_of_projection(sp)
        r = random_subprojection(sp, int(rng.integers(0, k + 1)), rng)
        ps.append(p)
        qs.append(q)
        rs.append(r)
    T = pi.target
    p, q, r = T.assemble(ps), T.assemble(qs), T.assemble(rs)
    P, Q, R = (x.matrix for x in lift_triple_special(
        pi, p, q, r, pi.random_fill(rng), rng, tol))
    res = max(operator_norm(P @ Q @ R), operator_norm(P @ R))
    for X, x in ((P, p), (Q, q), (R, r)):
        res = max(res, operator_norm(X @ X - X), operator_norm(X - adjoint(X)),
                  operator_norm(pi.apply_matrix(X) - x))
    return (res,)


# states ----------------------------------------------------------------

@group("excision", "states",
       [("states.excision", eq(100)),
        ("states.excision-fixes-state", eq(10)),
        ("states.excision-rank", exact)], cap=200)
def _excision(rng, ctx):
    tol = ctx.tol
    n = _dim(rng, ctx, 2)
    k = int(rng.integers(1, n // 2 + 1))
    Q = random_projection(n, int(rng.integers(k, n - k + 1)), rng)
    v = unit_vector(n, rng)
    u = rng.random()
    if u < 0.1:
        v = Q @ v
    elif u < 0.2:
        v = v - Q @ v
    if np.linalg.norm(v) < 1e-3:
        return None
    state = PureState.from_vector(v)
    try:
        P = excise(Q, state, k, rng=rng, tol=tol)
    except RankUnachievable:
        return None
    lam = state.evaluate(Q).real
    v = state.vector
    return (operator_norm(P @ Q @ P - lam * P), float(np.linalg.norm(P @ v - v)),
            float(abs(rank_of_projection(P) - k)))


@group("excision-step", "states",
       [("states.excision-step", eq(100)),
        ("states.excision-step-distance", eq(10))], cap=100)
def _excision_step(rng, ctx):
    tol = ctx.tol
    n = _dim(rng, ctx, 6)
    Q = random_projection(n, n // 2, rng)
    v = unit_vector(n, rng)
    lam = float(np.vdot(v, Q @ v).real)
    Pn = excise(Q, v, int(rng.integers(1, n // 4 + 1)), rng=rng, tol=tol)
    u = v + rng.uniform(0, 0.05) * unit_vector(n, rng)
    a, b = Q @ u, u - Q @ u
    u = (np.sqrt(lam) * a / np.linalg.norm(a)
         + np.sqrt(1 - lam) * b / np.linalg.norm(b))
    Rn = excise(Q, u, int(rng.integers(1, n // 4 + 1)), rng=rng, tol=tol)
    P = excision_step(Q, Pn, Rn, lam, tol)
    terms = step_distance_terms(Q, Pn, Rn, lam, tol)
    return (operator_norm(P @ Q @ P - lam * P),
            max(0.0, operator_norm(P - Pn) - sum(terms)))


@group("approximate-excision", "states",
       [("states.approximate-excision", lambda tol: 1.0),
        ("states.approximate-excision-fixes-state", eq(10))], cap=100)
def _approx(rng, ctx):
    """Worst of ``cut_residual / 7 eps`` and ``residual / eps``."""
    n = _dim(rng, ctx, 4)
    Q = random_projection(n, int(rng.integers(1, n)), rng)
    v = unit_vector(n, rng)
    ratio = fixed = 0.0
    for eps in (0.1, 0.01):
        try:
            a = approximate_excision(Q, v, eps, int(rng.integers(1, n // 4 + 1)),
                                     rng, ctx.tol)
        except RankUnachievable:
            return None
        ratio = max(ratio, a.cut_residual / (7 * eps), a.residual / eps)
        fixed = max(fixed, float(np.linalg.norm(a.R_cut @ v - v)))
    return ratio, fixed


@group("matrix-units", "states",
       [("states.matrix-unit-laws", eq(10)),
        ("states.unit-action", eq(10)),
        ("states.unit-initial", eq(10)),
        ("states.unit-excision", eq(100)),
        ("states.faithfulness", exact)], cap=100)
def _units(rng, ctx):
    n = int(rng.integers(1, 6))
    fat = bool(rng.random() < 0.5) and ctx.dim_max >= 2 * n
    N = int(rng.integers(2 * n if fat else n, max(ctx.dim_max, n) + 1))
    B = haar_unitary(N, rng)[:, :n]
    s = transitivity_units(N, list(B.T), fat=fat, rank=2, rng=rng, tol=ctx.tol)
    return (s.law_residual(), s.action_residual(), s.initial_residual(),
            s.excision_residual(), float(abs(s.representation_rank() - n * n)))


@group("hand-units", "states", [("states.hand-units", lambda tol: tol.eq / 10)],
       fixed=True)
def _hand(rng, ctx):
    e = identity(3)
    s = transitivity_units(3, [e[0], e[1]], tol=ctx.tol)
    U1 = np.outer(e[0], e[1])
    U2 = np.outer(e[1], e[1])
    return (max(operator_norm(s.units[0] - U1), operator_norm(s.units[1] - U2)),)


@group("multi-block-units", "states",
       [("states.multi-block-cross", eq(10)),
        ("states.multi-block-laws", eq(10))], cap=50)
def _multi(rng, ctx):
    k = int(rng.integers(1, 4))
    sizes = [int(rng.integers(0, 3)) for _ in range(k)]
    dims = tuple(max(1, m) + int(rng.integers(0, 2)) for m in sizes)
    if sum(dims) > max(ctx.dim_max, 3):
        return None
    bases = [list(haar_unitary(d, rng)[:, :m].T) for d, m in zip(dims, sizes)]
    systems = transitivity_multi(BlockAlgebra(dims), bases, rng=rng,
                                 tol=ctx.tol)
    return (cross_residual(systems),
            max((s.law_residual() for s in systems), default=0.0))


# running ---------------------------------------------------------------

def _round(x):
    x = float(x)
    if not np.isfinite(x):
        return None
    return float(f"{x:.6e}")


def groups_for(suite):
    if suite == "all":
        return list(GROUPS)
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; expected one of "
                           f"{', '.join(SUITES + ('all',))}")
    return [g for g in GROUPS if g.suite == suite]


def check_ids(suite="all"):
    return sorted(cid for g in groups_for(suite) for cid, _ in g.checks)


def run_group(g, seed, trials, ctx):
    """Worst residual per check of one group, with trial bookkeeping."""
    n = 1 if g.fixed else min(trials, g.cap or trials)
    worst = [0.0] * len(g.checks)
    done = skipped = errors = 0
    first_error = None
    for trial in range(n):
        rng = trial_rng(seed, g.name, trial)
        try:
            res = g.trial(rng, ctx)
        except (ProjCalcError, np.linalg.LinAlgError) as exc:
            errors += 1
            first_error = first_error or f"{type(exc).__name__}: {exc}"
            worst = [np.inf] * len(g.checks)
            continue
        if res is None:
            skipped += 1
            continue
        done += 1
        worst = [max(w, float(r)) if not np.isnan(r) else np.inf
                 for w, r in zip(worst, res)]
    out = []
    for (cid, bound_fn), w in zip(g.checks, worst):
        bound = bound_fn(ctx.tol)
        entry = {"id": cid, "suite": g.suite, "trials": done,
                 "skipped": skipped, "errors": errors,
                 "residual": _round(w), "bound": _round(bound),
                 "pass": bool(errors == 0 and w <= bound)}
        if first_error:
            entry["error"] = first_error
        out.append(entry)
    return out


def run_suite(suite="all", seed=0, trials=100, dim_max=12, tol=None,
              only=None):
    """Run a suite and return the report dict.

    ``only`` restricts the run to groups containing one of the given ids.
    """
    tol = DEFAULT_TOL if tol is None else tol
    if dim_max < 4:
        raise ValueError("dim_max must be at least 4")
    if trials < 1:
        raise ValueError("trials must be positive")
    start = time.perf_counter()
    ctx = Context(int(dim_max), tol)
    checks = []
    for g in groups_for(suite):
        if only is not None and not any(cid in only for cid, _ in g.checks):
            continue
        checks.extend(run_group(g, seed, trials, ctx))
    checks.sort(key=lambda c: c["id"])
    passed = sum(c["pass"] for c in checks)
    return {"suite": suite, "seed": int(seed), "trials": int(trials),
            "dim_max": int(dim_max),
            "tol": {"eq": tol.eq, "cluster": tol.cluster,
                    "wellsup": tol.wellsup, "zero": tol.zero,
                    "spec": tol.spec},
            "checks": checks,
            "summary": {"passed": passed, "failed": len(checks) - passed,
                        "total": len(checks)},
            "wall_time": round(time.perf_counter() - start, 3)}

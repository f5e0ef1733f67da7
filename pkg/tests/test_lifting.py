import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import close, line
from projcalc import block_fixtures as bf
from projcalc.errors import (AlgebraMismatch, BadInterval, DegenerateSplit,
                             Inadmissible, NotProjection)
from projcalc.fixtures import random_matrix
from projcalc.geometry import (complement, mvn_partial_isometry,
                               product_support, sup_join)
from projcalc.lifting import (BlockAlgebra, QuotientMap, approximate_norm_lift,
                              close_gap, lift_idempotent,
                              lift_partial_isometry,
                              lift_partial_isometry_spectrum,
                              lift_projection_norm, lift_projection_spectrum,
                              lift_triple_special, quotient_apply,
                              quotient_gaps, spectral_sandwich)
from projcalc.numeric import (adjoint, hausdorff, operator_norm,
                              pair_from_angles, spectrum_of_pair)

E1 = np.diag([1.0, 0.0])
E2 = np.diag([0.0, 1.0])
M2M2 = BlockAlgebra((2, 2))


def lines(theta):
    """``(R, Q)``: ``R`` onto e1 and ``Q`` onto the line at ``theta``."""
    return E1, line([np.cos(theta), np.sin(theta)])


def two_block(theta_dropped, theta_kept):
    R0, Q0 = lines(theta_dropped)
    R1, Q1 = lines(theta_kept)
    return (QuotientMap(M2M2, (1,)), M2M2.assemble([R0, R1]),
            M2M2.assemble([Q0, Q1]))


class TestQuotient:

    def test_keep_all_is_identity(self, rng):
        A = BlockAlgebra((2, 3))
        T = A.assemble([random_matrix(2, rng), random_matrix(3, rng)])
        assert close(QuotientMap(A, (0, 1)).apply_matrix(T), T)

    def test_keep_first(self, rng):
        X, Y = random_matrix(2, rng), random_matrix(2, rng)
        out = quotient_apply(QuotientMap(M2M2, (0,)), M2M2.assemble([X, Y]))
        assert close(out.matrix, X)

    def test_wrong_algebra(self):
        with pytest.raises(AlgebraMismatch):
            quotient_apply(QuotientMap(M2M2, (0,)), np.eye(3))

    def test_bad_kept(self):
        with pytest.raises(ValueError):
            QuotientMap(M2M2, (0, 0))

    def test_embed_roundtrip(self, rng):
        pi = bf.random_quotient(rng, 10)
        x = pi.target.assemble([random_matrix(n, rng) for n in pi.target.block_dims])
        assert close(pi.apply_matrix(pi.embed(x, pi.random_fill(rng, "matrix"))), x)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_homomorphism(self, seed):
        rng = np.random.default_rng(seed)
        pi = bf.random_quotient(rng, 10)
        A = pi.source
        X = A.assemble([random_matrix(n, rng) for n in A.block_dims])
        Y = A.assemble([random_matrix(n, rng) for n in A.block_dims])
        f = pi.apply_matrix
        assert close(f(X @ Y), f(X) @ f(Y))
        assert close(f(adjoint(X)), adjoint(f(X)))
        assert close(f(X + 2j * Y), f(X) + 2j * f(Y))


class TestSandwich:

    def test_projection(self):
        P = line([1, 2j, 0])
        assert close(spectral_sandwich(P, 1 / 3, 2 / 3), P)

    def test_diagonal(self):
        assert close(spectral_sandwich(np.diag([0.1, 0.9]), 0.3, 0.7), E2)

    def test_inside_eigenvalue(self):
        S = np.diag([0.1, 0.5, 0.9])
        P = spectral_sandwich(S, 0.3, 0.7)
        lo, hi = np.diag([0, 0, 1.0]), np.diag([0, 1.0, 1.0])
        assert close(P @ lo, lo) and close(hi @ P, P)

    def test_bad_interval(self):
        with pytest.raises(BadInterval):
            spectral_sandwich(E1, 0.7, 0.3)
        with pytest.raises(BadInterval):
            spectral_sandwich(E1, 0.0, 0.3)


class TestNormLift:

    def test_injective(self, rng):
        R, Q = pair_from_angles([0.3, 0.9], 1, 1, 0, seed=rng)
        pi = QuotientMap(BlockAlgebra((6,)), (0,))
        assert close(lift_projection_norm(pi, R, Q).matrix, R)

    def test_two_block(self):
        pi, R, Q = two_block(np.pi / 6, np.pi / 4)
        P = lift_projection_norm(pi, R, Q).matrix
        assert operator_norm(P @ Q) ** 2 == pytest.approx(0.5)
        assert close(pi.apply_matrix(P), pi.apply_matrix(R))

    def test_shipped_two_block(self):
        pi, R, Q = bf.two_block_fixture()
        P = lift_projection_norm(pi, R, Q).matrix
        assert operator_norm(P @ Q) ** 2 == pytest.approx(0.5)

    def test_orthogonal_in_quotient(self):
        pi, R, Q = two_block(np.pi / 6, np.pi / 2)
        P = lift_projection_norm(pi, R, Q).matrix
        assert operator_norm(P @ Q) < 1e-12

    def test_not_projection(self):
        pi, R, Q = two_block(np.pi / 6, np.pi / 4)
        with pytest.raises(NotProjection):
            lift_projection_norm(pi, 2 * R, Q)

    def test_approximate(self, rng):
        for _ in range(20):
            pi, R, Q = bf.random_block_pair(rng, 10)
            lam = operator_norm(pi.apply_matrix(Q) @ pi.apply_matrix(R)) ** 2
            if lam > 0.99:
                continue
            eps = (1 - lam) / 3
            P = approximate_norm_lift(pi, R, Q, eps).matrix
            assert operator_norm(P @ Q) ** 2 <= lam + eps + 1e-12
            assert close(pi.apply_matrix(P), pi.apply_matrix(R))

    def test_approximate_bad_eps(self):
        pi, R, Q = two_block(np.pi / 6, np.pi / 4)
        with pytest.raises(BadInterval):
            approximate_norm_lift(pi, R, Q, 0.6)


class TestCloseGap:

    def test_clean_gap_unchanged(self):
        pi, R, Q = two_block(1.2, 0.3)
        P = close_gap(pi, R, Q, 0.3, 0.8, 0.05).matrix
        assert close(P, R, 1e-9)

    def test_midpoint_pushed_out(self):
        pi, R, Q = two_block(np.pi / 4, 0.2)
        P = close_gap(pi, R, Q, 0.25, 0.75, 0.05).matrix
        pts = spectrum_of_pair(P, Q)
        assert not any(0.25 + 1e-7 < x < 0.75 - 1e-7 for x in pts)
        assert close(pi.apply_matrix(P), pi.apply_matrix(R))

    def test_delta_too_large(self):
        pi, R, Q = two_block(np.pi / 4, 0.2)
        with pytest.raises(DegenerateSplit):
            close_gap(pi, R, Q, 0.25, 0.75, 0.2)

    def test_gaps(self):
        assert quotient_gaps([0.0, 0.5, 1.0]) == [(0.0, 0.5), (0.5, 1.0)]
        assert quotient_gaps([0.2]) == [(0.2, 1.0), (0.0, 0.2)]


class TestSpectrumLift:

    def test_injective(self, rng):
        R, Q = pair_from_angles([0.3, 0.9], 1, 1, 0, seed=rng)
        pi = QuotientMap(BlockAlgebra((6,)), (0,))
        res = lift_projection_spectrum(pi, R, Q)
        assert close(res.P.matrix, R) and res.distance < 1e-9

    def test_two_block(self):
        pi, R, Q = bf.two_block_fixture()
        res = lift_projection_spectrum(pi, R, Q)
        assert res.spectrum == pytest.approx([0.0, 0.5])
        assert res.distance < 1e-4 and not res.stalled

    def test_zero_q(self):
        pi, R, _ = two_block(np.pi / 6, np.pi / 4)
        res = lift_projection_spectrum(pi, R, np.zeros((4, 4)))
        assert close(res.P.matrix, R) and res.spectrum == [0.0]

    def test_unit_quotient(self):
        pi, _, Q = two_block(np.pi / 6, np.pi / 4)
        with pytest.raises(Inadmissible):
            lift_projection_spectrum(pi, np.eye(4), Q)

    def test_random(self, rng):
        for _ in range(10):
            pi, R, Q = bf.random_block_pair(rng, 10, max_stray=3)
            res = lift_projection_spectrum(pi, R, Q)
            P = res.P.matrix
            assert close(pi.apply_matrix(P), pi.apply_matrix(R), 1e-8)
            target = spectrum_of_pair(pi.apply_matrix(P), pi.apply_matrix(Q))
            assert hausdorff(spectrum_of_pair(P, Q), target) < 1e-4


class TestIdempotentLift:

    def test_projection(self, rng):
        pi = QuotientMap(M2M2, (1,))
        p = line([1, 1j])
        I = lift_idempotent(pi, p, {0: E1}).matrix
        assert close(I @ I, I) and close(I, adjoint(I))
        assert close(pi.apply_matrix(I), p)

    def test_norm_preserved(self):
        pi = QuotientMap(M2M2, (1,))
        i = np.array([[1.0, 1.0], [0.0, 0.0]])
        I = lift_idempotent(pi, i, {0: E1}, {0: line([1, 3])}).matrix
        assert operator_norm(I) == pytest.approx(np.sqrt(2))
        assert close(I @ I, I) and close(pi.apply_matrix(I), i)

    def test_zero(self):
        pi = QuotientMap(M2M2, (1,))
        assert close(lift_idempotent(pi, np.zeros((2, 2))).matrix, 0)


class TestIsometryLift:

    def test_injective(self, rng):
        pi = QuotientMap(BlockAlgebra((3,)), (0,))
        u = mvn_partial_isometry(*pair_from_angles([0.5], 0, 0, 1, seed=rng))
        assert close(lift_partial_isometry(pi, u).matrix, u)

    def test_square_zero(self, rng):
        pi = QuotientMap(M2M2, (1,))
        u = np.array([[0.0, 0.0], [1.0, 0.0]])
        U = lift_partial_isometry(pi, u, {0: random_matrix(2, rng)}).matrix
        assert operator_norm(U @ U) < 1e-10
        assert close(pi.apply_matrix(U), u)

    def test_unitary_block(self, rng):
        pi = QuotientMap(M2M2, (1,))
        u = np.array([[0.0, 1.0], [1.0, 0.0]])
        U = lift_partial_isometry(pi, u, {0: random_matrix(2, rng)}).matrix
        assert operator_norm(U @ U) == pytest.approx(1.0)

    def test_spectrum_projection(self, rng):
        pi = QuotientMap(M2M2, (1,))
        U = lift_partial_isometry_spectrum(pi, E1, {0: random_matrix(2, rng)},
                                           rng).matrix
        assert close(U @ U, U) and close(U, adjoint(U))

    def test_spectrum_positive(self, rng):
        pi = QuotientMap(M2M2, (1,))
        u = mvn_partial_isometry(*lines(np.pi / 4))
        U = lift_partial_isometry_spectrum(pi, u, {0: random_matrix(2, rng)},
                                           rng).matrix
        ev = np.linalg.eigvals(U)
        assert np.abs(ev - np.cos(np.pi / 4)).min() < 1e-6
        assert hausdorff(ev, np.linalg.eigvals(u)) < 1e-4

    def test_spectrum_nilpotent(self, rng):
        pi = QuotientMap(M2M2, (1,))
        u = np.array([[0.0, 0.0], [1.0, 0.0]])
        U = lift_partial_isometry_spectrum(pi, u, {0: random_matrix(2, rng)},
                                           rng).matrix
        assert np.abs(np.linalg.eigvals(U)).max() < 1e-6


def test_triple_special(rng):
    pi = QuotientMap(BlockAlgebra((4, 5)), (1,))
    p, q = pair_from_angles([0.4], 0, 1, 2, seed=rng)
    # r sits below the complement of p v [qp], so pqr = 0 = pr
    s = complement(sup_join(p, product_support(q, p)))
    r = line(np.linalg.eigh(s)[1][:, -1])
    P, Q, R = (x.matrix for x in lift_triple_special(
        pi, p, q, r, {0: line([1, 0, 1, 0])}, rng))
    assert operator_norm(P @ Q @ R) < 1e-9 and operator_norm(P @ R) < 1e-9
    for X, x in ((P, p), (Q, q), (R, r)):
        assert close(X @ X, X) and close(pi.apply_matrix(X), x)


def test_triple_inadmissible(rng):
    pi = QuotientMap(M2M2, (1,))
    with pytest.raises(Inadmissible):
        lift_triple_special(pi, E1, E1, E1)

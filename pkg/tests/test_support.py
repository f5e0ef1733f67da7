import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import close, line
from projcalc.errors import AmbiguousThreshold, DomainError, NumericallyDegenerate
from projcalc.fixtures import random_matrix, random_well_supported
from projcalc.numeric import adjoint, operator_norm
from projcalc.support import (apply_function, gap_threshold,
                              intertwining_residual, is_well_supported,
                              left_support, polar, quasi_inverse,
                              right_support, spectral_projection_above)


class TestWellSupported:

    def test_zero(self):
        assert is_well_supported(np.zeros((3, 3))) == (True, np.inf)

    def test_tiny_singular_value(self):
        ok, gap = is_well_supported(np.diag([1.0, 1e-12]))
        assert not ok
        assert gap == pytest.approx(1e-24)

    def test_diagonal(self):
        assert is_well_supported(np.diag([2.0, 0.0])) == (True, pytest.approx(4.0))

    def test_degenerate_rejected(self):
        with pytest.raises(NumericallyDegenerate):
            left_support(np.diag([1.0, 1e-12]))


class TestSupports:

    def test_projection_is_its_own_support(self):
        P = line([1, 1j, 0])
        assert close(left_support(P), P)

    def test_diagonal(self):
        assert close(left_support(np.diag([5.0, 0.0])), np.diag([1.0, 0.0]))

    def test_outer_product(self, rng):
        v, w = random_matrix(4, rng, 1), random_matrix(4, rng, 1)
        T = v @ adjoint(w)
        assert close(left_support(T), line(v[:, 0]))
        assert close(right_support(T), line(w[:, 0]))


class TestQuasiInverse:

    def test_invertible(self, rng):
        T = random_matrix(4, rng) + 5 * np.eye(4)
        assert close(quasi_inverse(T), np.linalg.inv(T))

    def test_diagonal(self):
        assert close(quasi_inverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))

    def test_nilpotent(self):
        T = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert close(quasi_inverse(T), T.T)

    def test_zero(self):
        assert close(quasi_inverse(np.zeros((2, 2))), np.zeros((2, 2)))

    def test_matches_pinv(self, rng):
        T = random_well_supported(6, rng, 3)
        assert close(quasi_inverse(T), np.linalg.pinv(T), 1e-9)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 10**6))
    def test_laws(self, n, seed):
        rng = np.random.default_rng(seed)
        T = random_well_supported(n, rng, int(rng.integers(0, n + 1)))
        Ti = quasi_inverse(T)
        L, R = left_support(T), right_support(T)
        assert operator_norm(T @ Ti - L) < 1e-8
        assert operator_norm(Ti @ T - R) < 1e-8
        assert operator_norm(T @ Ti @ T - T) < 1e-8
        assert operator_norm(Ti @ T @ Ti - Ti) < 1e-8
        assert operator_norm(adjoint(Ti) - quasi_inverse(adjoint(T))) < 1e-8
        assert operator_norm(quasi_inverse(Ti) - T) < 1e-8
        if operator_norm(T) > 0:
            smin = min(np.linalg.svd(T, compute_uv=False)[:np.linalg.matrix_rank(T)])
            assert operator_norm(Ti) ** 2 * smin ** 2 == pytest.approx(1.0)


class TestSpectralProjection:

    @pytest.mark.parametrize("S, t, expected", [
        (np.diag([0.0, 1.0]), 0.5, np.diag([0.0, 1.0])),
        (np.diag([1.0, 2.0, 3.0]), 2.5, np.diag([0.0, 0.0, 1.0])),
    ])
    def test_examples(self, S, t, expected):
        assert close(spectral_projection_above(S, t), expected)

    def test_projection_fixed(self):
        P = line([1, 2, 3j])
        assert close(spectral_projection_above(P, 1 / 3), P)

    def test_ambiguous(self):
        with pytest.raises(AmbiguousThreshold):
            spectral_projection_above(np.diag([0.5, 1.0]), 0.5)
        assert close(spectral_projection_above(np.diag([0.5, 1.0]), 0.5, strict=True),
                     np.eye(2))

    def test_gap_threshold(self):
        assert gap_threshold([0.1, 0.2, 0.9], 0.0, 1.0) == pytest.approx(0.55)


class TestApplyFunction:

    def test_identity(self, rng):
        X = random_matrix(4, rng)
        S = X + adjoint(X)
        assert close(apply_function(S, lambda s: s), S)

    def test_sqrt(self):
        out = apply_function(np.diag([0.0, 0.25, 1.0]), np.sqrt, (0.0, np.inf))
        assert close(out, np.diag([0.0, 0.5, 1.0]))

    def test_chi_on_projection(self):
        P = 0.5 * np.ones((2, 2))
        out = apply_function(P, lambda s: (s > 0).astype(float), (0.0, 1.0))
        assert close(out, P)

    def test_domain(self):
        with pytest.raises(DomainError):
            apply_function(np.diag([-1.0, 1.0]), np.sqrt, (0.0, np.inf))
        # slightly negative noise snaps onto the domain
        out = apply_function(np.diag([-1e-9, 1.0]), np.sqrt, (0.0, np.inf))
        assert close(out, np.diag([0.0, 1.0]))


class TestPolar:

    def test_positive(self):
        T = np.diag([2.0, 1.0, 0.0])
        U, absT = polar(T).U, polar(T).absT
        assert close(U, np.diag([1.0, 1.0, 0.0]))
        assert close(absT, T)

    def test_negative_diagonal(self):
        p = polar(np.diag([-2.0, 0.0]))
        assert close(p.U, np.diag([-1.0, 0.0]))
        assert close(p.absT, np.diag([2.0, 0.0]))

    def test_nilpotent(self):
        T = np.array([[0.0, 1.0], [0.0, 0.0]])
        p = polar(T)
        assert close(p.U, T)
        assert close(p.absT, np.diag([0.0, 1.0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6))
def test_intertwining(n, seed):
    T = random_matrix(n, np.random.default_rng(seed))
    assert intertwining_residual(T, np.sqrt) < 1e-9
    assert intertwining_residual(T, lambda s: np.exp(-s)) < 1e-9

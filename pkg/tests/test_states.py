import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import close, line
from projcalc.errors import (BasisNotOrthonormal, DimensionTooSmall,
                             NotExcising, RankUnachievable)
from projcalc.fixtures import random_projection, unit_vector
from projcalc.lifting import BlockAlgebra
from projcalc.numeric import (haar_unitary, operator_norm, rank_of_projection)
from projcalc.states import (PureState, approximate_excision, cross_residual,
                             excise, excision_step, step_distance_terms,
                             transitivity_multi, transitivity_units)

E = np.eye(3, dtype=complex)


def excising_lines(a_vecs, b_vecs):
    """Projection onto ``(a_i + b_i)/sqrt2``, which excises with value 1/2."""
    W = (np.column_stack(a_vecs) + np.column_stack(b_vecs)) / np.sqrt(2)
    return W @ W.conj().T


class TestPureState:

    def test_evaluate(self):
        s = PureState.from_vector([1, 1])
        assert s.evaluate(np.diag([1.0, 0.0])) == pytest.approx(0.5)
        assert close(s.projection(), 0.5 * np.ones((2, 2)))

    def test_unit_norm(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]))


class TestExcise:

    def test_two_by_two(self):
        Q = np.diag([1.0, 0.0])
        v = np.array([1, 1]) / np.sqrt(2)
        P = excise(Q, v, 1)
        assert close(P, 0.5 * np.ones((2, 2)))
        assert close(P @ Q @ P, 0.5 * P)

    def test_state_inside_q(self, rng):
        Q = random_projection(5, 2, rng)
        v = Q @ unit_vector(5, rng)
        v /= np.linalg.norm(v)
        P = excise(Q, v, 1)
        assert close(P, line(v))
        assert close(P @ Q @ P, P)

    def test_six_dims_rank_three(self, rng):
        Q = np.diag([1.0, 1, 1, 0, 0, 0])
        v = np.array([1, 0, 0, 1, 0, 0]) / np.sqrt(2)
        P = excise(Q, v, 3, rng=rng)
        assert rank_of_projection(P) == 3
        assert operator_norm(P @ Q @ P - 0.5 * P) <= 1e-6
        assert close(P @ v, v)

    def test_rank_unachievable(self, rng):
        Q = np.diag([1.0, 0, 0])
        with pytest.raises(RankUnachievable):
            excise(Q, np.ones(3) / np.sqrt(3), 2, rng=rng)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 12), st.integers(0, 10**6))
    def test_properties(self, n, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(1, n // 2 + 1))
        Q = random_projection(n, int(rng.integers(k, n - k + 1)), rng)
        s = PureState.from_vector(unit_vector(n, rng))
        P = excise(Q, s, k, rng=rng)
        lam = s.evaluate(Q).real
        assert operator_norm(P @ Q @ P - lam * P) <= 1e-6
        assert np.linalg.norm(P @ s.vector - s.vector) <= 1e-7
        assert rank_of_projection(P) == k


class TestExcisionStep:

    def setup_method(self):
        self.Q = np.diag([1.0, 1, 1, 0, 0, 0])
        self.e = np.eye(6)

    def test_contained(self):
        e = self.e
        R = excising_lines([e[0]], [e[3]])
        Pn = excising_lines([e[0], e[1]], [e[3], e[4]])
        assert close(excision_step(self.Q, Pn, R, 0.5), Pn)

    def test_empty_start(self):
        e = self.e
        R = excising_lines([e[0], e[1]], [e[3], e[4]])
        assert close(excision_step(self.Q, np.zeros((6, 6)), R, 0.5), R)

    def test_small_angle(self):
        e = self.e
        Pn = excising_lines([e[0]], [e[3]])
        a = np.cos(0.1) * e[0] + np.sin(0.1) * e[1]
        R = excising_lines([a, -np.sin(0.1) * e[0] + np.cos(0.1) * e[1]],
                           [e[3], e[4]])
        P = excision_step(self.Q, Pn, R, 0.5)
        assert rank_of_projection(P) == 2
        assert operator_norm(P @ self.Q @ P - 0.5 * P) <= 1e-6
        assert operator_norm(P - Pn) <= sum(step_distance_terms(self.Q, Pn, R, 0.5)) + 1e-9

    def test_not_excising(self):
        with pytest.raises(NotExcising):
            excision_step(self.Q, np.zeros((6, 6)), line(self.e[0] + self.e[1]), 0.5)


class TestApproximate:

    @pytest.mark.parametrize("eps", [0.1, 0.01])
    def test_seven_eps(self, eps, rng):
        for _ in range(10):
            Q = random_projection(8, 4, rng)
            v = unit_vector(8, rng)
            a = approximate_excision(Q, v, eps, 2, rng)
            assert a.residual <= eps
            assert a.cut_residual <= 7 * eps
            assert np.linalg.norm(a.R_cut @ v - v) < 1e-9

    def test_eps_range(self, rng):
        with pytest.raises(ValueError):
            approximate_excision(np.eye(2), np.array([1.0, 0.0]), 0.3)


class TestTransitivity:

    def test_hand_system(self):
        s = transitivity_units(3, [E[0], E[1]])
        assert close(s.Q[0], line(E[0])) and close(s.Q[1], line(E[1]))
        assert close(s.P[0], line(E[0] + E[1]))
        assert operator_norm(s.units[0] - np.outer(E[0], E[1])) <= 1e-9
        assert operator_norm(s.units[1] - np.outer(E[1], E[1])) <= 1e-9

    def test_full_standard_basis(self):
        N = 4
        e = np.eye(N, dtype=complex)
        s = transitivity_units(N, list(e))
        for m in range(N):
            assert close(s.units[m], np.outer(e[m], e[N - 1]))

    def test_single_vector(self):
        s = transitivity_units(3, [E[2]])
        assert s.n == 1
        assert close(s.units[0], line(E[2]))

    def test_empty(self):
        assert transitivity_units(3, []).n == 0

    def test_dimension_too_small(self):
        with pytest.raises(DimensionTooSmall):
            transitivity_units(3, [E[0], E[1]], fat=True, rank=2)

    def test_not_orthonormal(self):
        with pytest.raises(BasisNotOrthonormal):
            transitivity_units(3, [E[0], E[0] + E[1]])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 5), st.booleans(), st.integers(0, 10**6))
    def test_laws(self, n, fat, seed):
        rng = np.random.default_rng(seed)
        N = 2 * n + int(rng.integers(0, 3))
        B = haar_unitary(N, rng)[:, :n]
        s = transitivity_units(N, list(B.T), fat=fat, rank=2, rng=rng)
        assert s.law_residual() <= 1e-7
        assert s.action_residual() <= 1e-7
        assert s.initial_residual() <= 1e-7
        assert s.excision_residual() <= 1e-6
        assert s.representation_rank() == n * n
        if fat and n > 1:
            assert rank_of_projection(s.Q[0]) == 2


class TestMulti:

    def test_single_block(self):
        systems = transitivity_multi(BlockAlgebra((3,)), [[E[0], E[1]]])
        direct = transitivity_units(3, [E[0], E[1]])
        assert all(close(a, b) for a, b in zip(systems[0].units, direct.units))

    def test_two_blocks(self, rng):
        bases = [list(haar_unitary(3, rng)[:, :2].T) for _ in range(2)]
        systems = transitivity_multi(BlockAlgebra((3, 3)), bases, rng=rng)
        assert [s.n for s in systems] == [2, 2]
        assert cross_residual(systems) <= 1e-7
        assert max(s.law_residual() for s in systems) <= 1e-7

    def test_empty_block(self):
        systems = transitivity_multi(BlockAlgebra((3, 2)), [[E[0]], []])
        assert systems[1].n == 0

    def test_deterministic(self):
        e = np.eye(4)
        bases = [[e[0], e[1]], [e[0], e[2]]]
        a = transitivity_multi(BlockAlgebra((4, 4)), bases, fat=True, rng=5)
        b = transitivity_multi(BlockAlgebra((4, 4)), bases, fat=True, rng=5)
        assert all(np.array_equal(x, y) for s, t in zip(a, b)
                   for x, y in zip(s.units, t.units))

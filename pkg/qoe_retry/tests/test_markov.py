import numpy as np
import pytest

from qoe_retry.analytic import (
    VideoModelParams,
    markov_transition_matrix,
    state_labels,
    stationary_closed_form,
    stationary_numeric,
    stationary_residual,
)
from qoe_retry.errors import ParameterError

FOREMAN = VideoModelParams(d=10, d_prime=2, big_d=3)


def _grid():
    for d in (2, 5, 10):
        for d_prime in (1, 2, 4):
            if d <= d_prime:
                continue
            for big_d in (1, 2, 3, 6):
                for p1 in (1e-4, 1e-2, 0.1, 0.5):
                    yield VideoModelParams(d=d, d_prime=d_prime, big_d=big_d), p1


class TestTransitionMatrix:
    def test_size_and_labels(self):
        matrix = markov_transition_matrix(FOREMAN, 0.01)
        assert matrix.shape == (16, 16)
        labels = state_labels(FOREMAN)
        assert labels[0] == "I,1"
        assert labels[10] == "N,1"
        assert labels[-1] == "3,4"

    def test_idr_exit_probability(self):
        matrix = markov_transition_matrix(FOREMAN, 0.01)
        assert matrix[9, 10] == pytest.approx(0.99**10)
        assert matrix[9, 10] == pytest.approx(0.904382, abs=1e-6)
        assert matrix[9, 12] == pytest.approx(1 - 0.99**10)
        assert matrix[15, 0] == 1.0

    def test_rows_sum_to_one(self):
        for params, p1 in _grid():
            matrix = markov_transition_matrix(params, p1)
            assert np.max(np.abs(matrix.sum(axis=1) - 1.0)) <= 1e-12

    def test_no_tail_routes_failures_to_idr(self):
        params = VideoModelParams(d=3, d_prime=1, big_d=1)
        matrix = markov_transition_matrix(params, 0.1)
        assert matrix.shape == (4, 4)
        assert matrix[3, 0] == pytest.approx(0.1)
        assert matrix[3, 3] == pytest.approx(0.9)

    def test_lossless_chain_stays_in_p_frames(self):
        params = VideoModelParams(d=2, d_prime=1, big_d=2)
        matrix = markov_transition_matrix(params, 0.0)
        assert matrix[1, 2] == 1.0
        assert matrix[2, 2] == 1.0

    def test_rejects_p1_of_one(self):
        with pytest.raises(ParameterError):
            markov_transition_matrix(FOREMAN, 1.0)


class TestStationaryNumeric:
    def test_cycle_is_uniform(self):
        matrix = np.roll(np.eye(5), 1, axis=1)
        assert np.allclose(stationary_numeric(matrix), np.full(5, 0.2))

    def test_residual_below_tolerance(self):
        matrix = markov_transition_matrix(FOREMAN, 0.01)
        pi = stationary_numeric(matrix)
        assert stationary_residual(matrix, pi) < 1e-12
        assert pi.sum() == pytest.approx(1.0)

    def test_rejects_non_stochastic(self):
        with pytest.raises(ParameterError):
            stationary_numeric(np.array([[0.5, 0.2], [0.0, 1.0]]))


class TestStationaryClosedForm:
    def test_scenario_value(self):
        dist = stationary_closed_form(FOREMAN, 0.01)
        assert dist.q_I == pytest.approx(0.09533, abs=1e-5)
        assert dist.q_31 == dist.q_I1

    def test_normalization(self):
        for params, p1 in _grid():
            dist = stationary_closed_form(params, p1)
            total = params.d * dist.q_I1 + params.d_prime * dist.q_N1
            total += (params.big_d - 1) * params.d_prime * dist.q_31
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_matches_numeric_solution(self):
        worst = 0.0
        for params, p1 in _grid():
            numeric = stationary_numeric(markov_transition_matrix(params, p1))
            closed = stationary_closed_form(params, p1).to_vector(params)
            worst = max(worst, float(np.max(np.abs(numeric - closed))))
        assert worst < 1e-9

    def test_states_of_a_class_share_mass(self):
        pi = stationary_numeric(markov_transition_matrix(FOREMAN, 0.1))
        assert np.ptp(pi[:10]) < 1e-9
        assert np.ptp(pi[10:12]) < 1e-9
        assert np.ptp(pi[12:]) < 1e-9

    def test_lossless_limit(self):
        dist = stationary_closed_form(FOREMAN, 0.0)
        assert dist.q_I == 0.0
        assert dist.q_N1 == pytest.approx(0.5)
        assert dist.idr_frame_rate(FOREMAN) == 0.0

    def test_certain_loss_limit(self):
        dist = stationary_closed_form(FOREMAN, 1.0)
        assert dist.q_I == pytest.approx(10 / 14)
        assert dist.q_N1 == 0.0

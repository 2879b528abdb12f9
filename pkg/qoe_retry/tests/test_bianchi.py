import pytest

from qoe_retry.analytic import bianchi_fixed_point
from qoe_retry.analytic.bianchi import attempt_probability
from qoe_retry.errors import ParameterError


def test_single_station_never_collides():
    tau, p = bianchi_fixed_point(1, 16, 6)
    assert p == 0.0
    assert tau == pytest.approx(2 / 17)


def test_fixed_point_residual():
    for n in (2, 5, 10):
        tau, p = bianchi_fixed_point(n, 16, 6)
        assert p == pytest.approx(1 - (1 - tau) ** (n - 1), abs=1e-10)
        assert tau == pytest.approx(attempt_probability(p, 16, 6, 7), abs=1e-9)


def test_collision_probability_grows_with_stations():
    values = [bianchi_fixed_point(n, 16, 5)[1] for n in range(2, 11)]
    assert all(0 < value < 1 for value in values)
    assert values == sorted(values)


def test_more_backoff_stages_reduce_attempt_rate():
    assert attempt_probability(0.3, 16, 6, 7) < attempt_probability(0.3, 16, 0, 7)


def test_rejects_invalid_arguments():
    with pytest.raises(ParameterError):
        bianchi_fixed_point(0, 16, 6)
    with pytest.raises(ParameterError):
        bianchi_fixed_point(3, 0, 6)

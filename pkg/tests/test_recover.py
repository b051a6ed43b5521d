import numpy as np
import pytest

from reinhardt import coeffs
from reinhardt import recover as rc


def test_constant_examples():
    s = rc.TorusSampler(rc.constant(1.0), (0.5, 0.5), 16)
    assert abs(rc.recover_coefficient(s, (0, 0)) - 1) < 1e-12
    assert abs(rc.recover_coefficient(s, (2, 3))) < 1e-12
    lhs, rhs, ok = rc.cauchy_estimate_check(s, (1, 4))
    assert lhs < 1e-12 and ok


def test_geometric_product():
    s = rc.TorusSampler(rc.geometric_product, (0.5, 0.5), 256)
    assert abs(rc.recover_coefficient(s, (2, 3)) - 1) < 1e-9
    lhs, rhs, ok = rc.cauchy_estimate_check(s, (2, 3))
    assert ok and lhs == pytest.approx(1.0, abs=1e-9) and rhs == pytest.approx(128.0)


def test_monomial_sharp_cauchy():
    s = rc.TorusSampler(rc.monomial((2, 3)), (0.7, 0.4), 16)
    lhs, rhs, ok = rc.cauchy_estimate_check(s, (2, 3))
    assert lhs == pytest.approx(1.0, abs=1e-12) and rhs == pytest.approx(1.0, abs=1e-12) and ok


def test_aliasing_guard():
    s = rc.TorusSampler(rc.constant(), (0.5, 0.5), 8)
    with pytest.raises(rc.AliasingError):
        rc.recover_coefficient(s, (4, 0))
    with pytest.raises(ValueError):
        rc.TorusSampler(rc.constant(), (0.5, -1), 8)


def test_truncated_series_round_trip():
    o = coeffs.entropy_ball(2)
    s = rc.TorusSampler(rc.truncated_series(o, 12), (0.3, 0.3), 32)
    for J in [(0, 0), (3, 4), (6, 6), (12, 0)]:
        assert rc.recover_coefficient(s, J).real == pytest.approx(np.exp(o.log_modulus(J)), rel=1e-9)


def test_three_variables():
    s = rc.TorusSampler(rc.geometric_product, (0.4, 0.5, 0.3), 64)
    assert abs(rc.recover_coefficient(s, (1, 2, 3)) - 1) < 1e-9


def test_evaluator_tags():
    assert rc.evaluator_from_tag("geometric_product") is rc.geometric_product
    f = rc.evaluator_from_tag("monomial:1,2")
    np.testing.assert_allclose(f(np.array([[2.0, 3.0]])), [18.0])
    with pytest.raises(ValueError):
        rc.evaluator_from_tag("nope")

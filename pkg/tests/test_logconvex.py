import json
import math

import numpy as np
import pytest

from reinhardt import logconvex as lc
from reinhardt.lattice import MultiIndex

LOG2 = math.log(2)


def ball_lagrange(alpha):
    # maximiser of <alpha, s> on {e^{2 s_1} + e^{2 s_2} = 1} is s_i = log(alpha_i) / 2
    a = np.asarray(alpha, float)
    return float(0.5 * np.sum(a[a > 0] * np.log(a[a > 0])))


def test_halfspace():
    hs = lc.HalfSpace((0.5, 0.5), -0.3)
    assert hs.contains((0.1, 0.1)) and not hs.contains((0.4, 0.4))
    assert hs.linf_distance() == pytest.approx(0.3)
    # the closest point in the l-infinity sense lies on the diagonal at 0.3
    assert hs.value((0.3, 0.3)) == pytest.approx(0.0)


def test_as_direction():
    with pytest.raises(ValueError):
        lc.as_direction((0.6, 0.6))
    with pytest.raises(ValueError):
        lc.as_direction((1.2, -0.2))


def test_point_cloud_support():
    assert lc.support_of_point_cloud([(0.0, 0.0)], (0.3, 0.7)) == 0.0
    assert lc.support_of_point_cloud([(LOG2, -5), (-5, LOG2)], (1, 0)) == pytest.approx(LOG2)
    g = np.linspace(-4, 0, 401)
    S = np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
    S = S[np.exp(2 * S).sum(axis=1) < 1]
    assert lc.support_of_point_cloud(S, (0.5, 0.5)) == pytest.approx(-LOG2 / 2, abs=0.01)


def test_builtin_supports():
    rng = np.random.default_rng(3)
    ball = lc.ball_domain(2)
    for a in rng.dirichlet([1, 1], size=20):
        assert ball.h(a) == pytest.approx(ball_lagrange(a), abs=1e-12)
    poly = lc.polydisc_domain(np.log([1.0, 2.0]))
    assert poly.h((0.5, 0.5)) == pytest.approx(LOG2 / 2)
    hsd = lc.halfspace_domain((1 / 3, 2 / 3), 1 / 3)
    assert hsd.h((1 / 3, 2 / 3)) == pytest.approx(1 / 3)
    assert hsd.h((0.5, 0.5)) == math.inf


def test_support_brackets_defining_function():
    # {psi < 0} lies inside every tested half-space <alpha, s> < h(alpha)
    rng = np.random.default_rng(4)
    for dom in [lc.ball_domain(2), lc.e_half_domain(2), lc.polydisc_domain([0.2, -0.1])]:
        A = rng.dirichlet([1, 1], size=50)
        H = dom.support_many(A)
        for s in rng.uniform(-4, 1, size=(300, 2)):
            if dom.psi(s) < 0:
                assert np.all(A @ s < H + 1e-12)


def test_legendre_examples():
    x = np.linspace(-3, 3, 601)
    fs = lc.legendre_transform([x], 0.5 * x**2, [np.array([1.0])])
    assert fs[0] == pytest.approx(0.5, abs=x[1] - x[0])
    ind = np.where(x <= 0, 0.0, np.inf)
    assert lc.legendre_transform([x], ind, [np.array([0.5])])[0] == pytest.approx(0.0)
    with pytest.raises(ValueError):
        lc.legendre_transform([x], np.full_like(x, np.inf), [x])


def test_rational_approx_examples():
    assert lc.rational_simplex_approx((0.5, 0.5), 10, positive=False) in {(k, k) for k in range(1, 100)}
    a = np.array([1 / math.sqrt(2), 1 - 1 / math.sqrt(2)])
    J = lc.rational_simplex_approx(a, 10)
    assert np.abs(np.array(J) / J.degree() - a).sum() < 0.1
    J = lc.rational_simplex_approx((1, 0), 5)
    assert J[1] >= 1 and 2 / (J.degree()) < 0.2


def test_rational_approx_precision_random():
    rng = np.random.default_rng(5)
    for a in rng.dirichlet([1, 1, 1], size=50):
        for j in (1, 3, 17):
            J = lc.rational_simplex_approx(a, j)
            assert min(J) >= 1
            assert np.abs(np.array(J) / J.degree() - a).sum() < 1 / j


def test_hull_examples():
    single = lc.log_convex_hull([(1, 1)])
    assert single.h((0.3, 0.7)) == 0.0
    assert single.contains((-0.1, -0.1)) and not single.contains((0.1, -1))
    hull = lc.log_convex_hull([(1, 2), (2, 1)])
    got = sorted((hs.gradient, hs.offset) for hs in hull.halfspaces)
    expect = sorted([((1.0, 0.0), -LOG2), ((0.0, 1.0), -LOG2), ((0.5, 0.5), -LOG2 / 2)])
    assert len(got) == 3
    for (g, o), (ge, oe) in zip(got, expect):
        np.testing.assert_allclose(g, ge, atol=1e-12)
        assert abs(o - oe) < 1e-12
    twice = lc.log_convex_hull([(1, 1), (1, 1)])
    assert len(twice.halfspaces) == len(single.halfspaces)


def test_hull_ignores_dominated_polydisc():
    a = lc.log_convex_hull([(1, 2), (2, 1)])
    b = lc.log_convex_hull([(1, 2), (2, 1), (1.2, 1.2)])
    for alpha in lc.simplex_grid(2, 20):
        assert a.h(alpha) == pytest.approx(b.h(alpha), abs=1e-12)


def test_domain_json_round_trip(tmp_path):
    hull = lc.log_convex_hull([(1, 2), (2, 1)])
    p = tmp_path / "d.json"
    p.write_text(json.dumps(hull.to_json(lc.simplex_grid(2, 4))), encoding="utf-8")
    back = lc.load_domain(p)
    for alpha in lc.simplex_grid(2, 10):
        assert back.h(alpha) == pytest.approx(hull.h(alpha), abs=1e-9)


def test_completeness_examples():
    s = np.random.default_rng(6).uniform(-2, 2, size=(4000, 2))
    ok, _ = lc.completeness_check(lambda x: max(x[0], x[1]), s, band=0.05)
    assert ok
    ok, bad = lc.completeness_check(lambda x: x[0] - x[1], s, band=0.05)
    assert not ok
    np.testing.assert_allclose(bad[0][1], [1 / math.sqrt(2), -1 / math.sqrt(2)], atol=1e-6)
    ok, _ = lc.completeness_check(lambda x: 0.5 * np.logaddexp(2 * x[0], 2 * x[1]), s, band=0.05)
    assert ok


def test_separate_examples():
    poly = lc.polydisc_domain([0.0, 0.0])
    hs = lc.separate(poly, (1.0, 1.0))
    np.testing.assert_allclose(hs.gradient, [0.5, 0.5])
    assert hs.offset == pytest.approx(0.0)
    J, hs = lc.separating_index(poly, (0.1, -5.0))
    assert J[1] >= 1 and J[0] > 10 * J[1]
    assert hs.value((0.1, -5.0)) > 0
    with pytest.raises(lc.SeparationError):
        lc.separate(poly, (-0.5, -0.5))


def test_separate_zero_coordinate():
    J, hs = lc.separating_index(lc.ball_domain(2), (0.1, -math.inf))
    assert J == MultiIndex((J[0], 0))

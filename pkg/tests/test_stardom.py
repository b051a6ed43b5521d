import math

import numpy as np
import pytest

from reinhardt import coeffs
from reinhardt import stardom as sd


def test_radial_examples():
    b = sd.ball(2)
    for th in np.linspace(0, 2 * np.pi, 7):
        assert sd.radial(b, (np.cos(th), np.sin(th))) == pytest.approx(1.0, abs=1e-9)
    p = sd.polydisc((1, 2))
    assert sd.radial(p, (1, 0)) == pytest.approx(1.0, abs=1e-9)
    assert sd.radial(p, (0, 1)) == pytest.approx(2.0, abs=1e-9)
    assert sd.radial(sd.hartogs_h(), (1, 0)) == math.inf


def test_gauge_examples():
    assert sd.gauge(sd.ball(2), (0.3, 0.4)) == pytest.approx(0.5, abs=1e-9)
    assert sd.gauge(sd.polydisc((1, 1)), (0.2, 0.8)) == pytest.approx(0.8, abs=1e-9)
    rng = np.random.default_rng(0)
    d = sd.polydisc((1, 3))
    for x in rng.normal(size=(20, 2)):
        assert sd.gauge(d, 2 * x) == pytest.approx(2 * sd.gauge(d, x), rel=1e-8)


def test_proper_star_examples():
    rays = np.array([[np.cos(t), np.sin(t)] for t in np.linspace(0, 2 * np.pi, 16, endpoint=False)])
    assert sd.proper_star_check(sd.ball(2), rays).ok
    annulus = sd.StarDomain(lambda x: 0.5 < np.linalg.norm(x) < 1, 2, name="annulus")
    chk = sd.proper_star_check(annulus, rays)
    assert not chk.ok and "origin" in chk.reason
    v = np.array([1.0, 0.0])

    def shell(x):
        r = np.linalg.norm(x)
        return r < 1 or (2 < r < 3 and np.dot(x, v) > 0.99 * r)

    chk = sd.proper_star_check(sd.StarDomain(shell, 2), rays)
    assert not chk.ok
    np.testing.assert_allclose(chk.offending[0], v)


def test_phi_map():
    b = sd.ball(2)
    assert np.all(sd.phi_map(b, (0, 0)) == 0)
    x = np.array([0.3, 0.4])
    y = sd.phi_map(b, x)
    # value of the displayed formula on the ball: |x| / (2 - |x|) * x
    np.testing.assert_allclose(y, 0.5 / 1.5 * x, rtol=1e-8)
    assert abs(x[0] * y[1] - x[1] * y[0]) < 1e-15
    with pytest.raises(ValueError):
        sd.phi_map(b, (0.8, 0.8))


def test_series_star_domain():
    d = sd.from_series(coeffs.geometric(2), 40)
    assert sd.radial(d, (1 / math.sqrt(2), 1 / math.sqrt(2))) == pytest.approx(math.sqrt(2), abs=1e-8)


def test_tags():
    assert sd.domain_from_tag("H").name == "H"
    with pytest.raises(ValueError):
        sd.domain_from_tag("torus")

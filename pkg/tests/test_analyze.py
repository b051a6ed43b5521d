import math

import numpy as np
import pytest

from reinhardt import analyze as an
from reinhardt import coeffs
from reinhardt.analyze import Membership

G = coeffs.geometric(2)
BALL = coeffs.entropy_ball(2)
R2 = 1 / math.sqrt(2)


def test_psi_examples():
    assert an.psi_estimate(G, (-0.1, -0.1), 40).value == pytest.approx(-0.1, abs=1e-14)
    assert an.psi_estimate(G, (0.0, 0.0), 40).value == 0.0
    st = coeffs.strand((1, 1), lambda k: -2.0 * k)
    rng = np.random.default_rng(0)
    for s in rng.uniform(-3, 3, size=(20, 2)):
        assert an.psi_estimate(st, s, 50).value == pytest.approx((s[0] + s[1]) / 2 - 1, abs=1e-12)


def test_psi_zero_coordinate():
    assert an.psi_estimate(G, (-0.2, -math.inf), 40).value == pytest.approx(-0.2)


def test_phi_examples():
    assert an.phi_estimate(G, (0.5, 0.5), 40) == pytest.approx(-0.5)
    assert an.phi_estimate(G, (1, 1), 40) == pytest.approx(0.0)
    assert an.phi_estimate(G, (2, 0.1), 40) == pytest.approx(1.0)


def test_support_examples():
    for a in [(0.5, 0.5), (1, 0), (0.2, 0.8)]:
        assert an.support_estimate(G, a, 100, 0.05).value == 0.0
        assert an.support_estimate(coeffs.scaled_monomial(2, 2.0), a, 100, 0.05).value == pytest.approx(math.log(2))
    est = an.support_estimate(BALL, (0.5, 0.5), 400, 0.02)
    assert est.value == pytest.approx(-math.log(2) / 2, abs=0.02)
    assert est.achieving_index is not None and est.degree_cutoff == 400


def test_support_window_widening():
    st = coeffs.strand((1, 2), lambda k: -k)
    est = an.support_estimate(st, (0.3, 0.7), 60, 0.02)
    assert est.window > 0.02
    assert est.value == pytest.approx(1 / 3, abs=1e-12)
    with pytest.raises(an.EmptyWindowError):
        an.support_estimate(st, (0.9, 0.1), 60, 0.02)


def test_tail_bounds():
    with pytest.raises(ValueError):
        an.psi_estimate(G, (0, 0), 3)


def test_radial_examples():
    for th in (0.0, 1.0, 2.5):
        z = np.array([np.exp(1j * th), 0])
        assert an.radial_estimate(G, z, 40) == pytest.approx(1.0)
    assert an.radial_estimate(G, (R2, R2), 40) == pytest.approx(math.sqrt(2))
    assert an.radial_estimate(BALL, (R2, R2), 400) == pytest.approx(1.0, abs=0.05)
    with pytest.raises(ValueError):
        an.radial_estimate(G, (1, 1), 40)


def test_gauge_examples():
    assert an.gauge_estimate(G, (0.5, 0.25), 40) == pytest.approx(0.5)
    z = np.array([0.3, 0.1])
    assert an.gauge_estimate(BALL, 2 * z, 200) == pytest.approx(2 * an.gauge_estimate(BALL, z, 200))
    assert an.gauge_estimate(BALL, (0.3, 0.4), 400) == pytest.approx(0.5, abs=0.03)


def test_membership_examples():
    assert an.membership(G, (0.9, 0.9), 40) is Membership.INSIDE
    assert an.membership(G, (1.1, 0.5), 40) is Membership.OUTSIDE
    assert an.membership(G, (0.9, 0), 40) is Membership.INSIDE
    assert an.membership(G, (1.0, 0.5), 40) is Membership.BOUNDARY_BAND


def test_membership_batch_matches_single():
    S = np.log(np.random.default_rng(1).uniform(0.01, 2, size=(50, 2)))
    batch = an.membership_batch(BALL, S, 100)
    single = [an.classify(an.psi_estimate(BALL, s, 100).value, 0.01) for s in S]
    assert batch == single


def test_conjugate_radii():
    assert an.conjugate_radii_residual(G, (1, 1), 40) == pytest.approx(1.0)
    assert an.conjugate_radii_residual(G, (0.5, 0.5), 40) == pytest.approx(0.5)
    assert an.conjugate_radii_residual(BALL, (R2, R2), 400) == pytest.approx(1.0, abs=0.05)


def test_holder_midpoint():
    p = np.array([0.3, 0.7])
    np.testing.assert_allclose(an.holder_midpoint(p, p, 0.4), p)
    np.testing.assert_allclose(an.holder_midpoint((1, 4), (4, 1), 0.5), (2, 2))
    np.testing.assert_allclose(an.holder_midpoint(p, (2, 2), 1.0), p)


def test_csv_writers(tmp_path):
    rows = [(a, an.support_estimate(G, a, 20, 0.05)) for a in [(1.0, 0.0), (0.5, 0.5)]]
    an.write_support_csv(tmp_path / "h.csv", rows, 2)
    lines = (tmp_path / "h.csv").read_text().splitlines()
    assert lines[0] == "alpha_1,alpha_2,h_hat,achieving_J,K,epsilon"
    assert len(lines) == 3
    an.write_psi_csv(tmp_path / "p.csv", [(0.0, 0.0)], [0.0])
    assert (tmp_path / "p.csv").read_text().splitlines()[1] == "0.0,0.0,0.0"


def test_e_half_family_against_sampled_boundary():
    # boundary of {sqrt|z1| + sqrt|z2| < 1} in log coordinates: s = (2 log u, 2 log(1 - u))
    u = (np.arange(10_000) + 0.5) / 10_000
    B = np.column_stack([2 * np.log(u), 2 * np.log1p(-u)])
    o = coeffs.entropy_e_half(2)
    for t in (0.2, 0.5, 0.7):
        a = np.array([t, 1 - t])
        assert an.support_estimate(o, a, 400, 0.02).value == pytest.approx(float(np.max(B @ a)), abs=0.1)


def test_reversed_orientation_is_not_the_ball():
    # sign -1 gives coefficients decaying like a multinomial; the diagonal radius exceeds 1
    o = coeffs.entropy_family(2, -1, 0.5)
    assert an.radial_estimate(o, (1 / math.sqrt(2), 1 / math.sqrt(2)), 200) > 1.3

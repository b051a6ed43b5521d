import json
import math

import numpy as np
import pytest

from reinhardt import coeffs
from reinhardt.coeffs import CoefficientFileError


def test_geometric_examples():
    g = coeffs.geometric(2)
    assert g.log_modulus((5, 7)) == 0.0
    assert g.value((0, 0)) == 1
    assert abs(coeffs.evaluate_truncated(g, (0.5, 0.5), 60) - 4.0) < 1e-6


def test_entropy_examples():
    ball = coeffs.entropy_family(2, +1, 0.5)
    assert ball.log_modulus((1, 1)) == pytest.approx(math.log(2), abs=1e-12)
    for sign in (1, -1):
        for w in (0.5, 2.0):
            o = coeffs.entropy_family(2, sign, w)
            assert o.log_modulus((7, 0)) == 0.0
            assert o.log_modulus((0, 3)) == 0.0


def test_entropy_is_log_sqrt_multinomial():
    # independent oracle: log of sqrt(|J|^|J| / prod j^j) via math.lgamma-free arithmetic
    ball = coeffs.entropy_ball(3)
    for J in [(2, 3, 4), (1, 0, 5), (10, 10, 1)]:
        k = sum(J)
        expect = 0.5 * (k * math.log(k) - sum(j * math.log(j) for j in J if j))
        assert ball.log_modulus(J) == pytest.approx(expect, abs=1e-12)


def test_value_matches_modulus():
    for o in [coeffs.geometric(2), coeffs.scaled_monomial(2, 3.0), coeffs.entropy_ball(2)]:
        block = o.indices(0, 12)
        vals = o.value_array(block)
        np.testing.assert_allclose(np.abs(vals), np.exp(o.log_modulus_array(block)), rtol=1e-12)


def test_strand_examples():
    s = coeffs.strand((1, 1), lambda k: 0.0)
    assert s.log_modulus((3, 3)) == 0.0
    assert s.log_modulus((2, 3)) == -math.inf
    assert s.value((2, 3)) == 0
    h = coeffs.strand((1, 2), lambda k: -k)
    np.testing.assert_array_equal(h.support_array(0, 9), [[0, 0], [1, 2], [2, 4], [3, 6]])
    assert h.support_array(4, 5).shape == (0, 2)


def test_scaled_monomial_rejects_bad_rho():
    with pytest.raises(ValueError):
        coeffs.scaled_monomial(2, 0.0)


def write(tmp_path, lines):
    p = tmp_path / "c.jsonl"
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return p


def test_load_table(tmp_path):
    t = coeffs.load_table(write(tmp_path, ['{"J":[1,2],"log_c":0.0}', '{"J":[0,1],"log_c":"-inf"}']))
    assert t.log_modulus((1, 2)) == 0.0
    assert t.log_modulus((5, 5)) == -math.inf
    assert t.log_modulus((0, 1)) == -math.inf
    assert t.max_degree == 3


def test_load_table_errors(tmp_path):
    with pytest.raises(CoefficientFileError, match="line 2"):
        coeffs.load_table(write(tmp_path, ['{"J":[1,2],"log_c":0}', '{"J":[1,2],"log_c":1}']))
    with pytest.raises(CoefficientFileError, match="line 1"):
        coeffs.load_table(write(tmp_path, ["not json"]))
    with pytest.raises(CoefficientFileError, match="line 2"):
        coeffs.load_table(write(tmp_path, ['{"J":[1,2],"log_c":0}', '{"J":[1],"log_c":0}']))
    with pytest.raises(CoefficientFileError, match="line 1"):
        coeffs.load_table(write(tmp_path, ['{"J":[1,2],"log_c":"big"}']))
    with pytest.raises(CoefficientFileError, match="line 1"):
        coeffs.load_table(write(tmp_path, ['{"J":[1,-2],"log_c":0}']))


def test_save_geometric_line_count(tmp_path):
    p = tmp_path / "g.jsonl"
    assert coeffs.save_table(coeffs.geometric(2), 3, p) == 10
    lines = p.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 10
    assert json.loads(lines[0]) == {"J": [0, 0], "log_c": 0.0, "re": 1.0, "im": 0.0}


@pytest.mark.parametrize("tag", ["entropy_ball", "scaled_monomial:2", "strand:1,2:-1"])
def test_round_trip(tmp_path, tag):
    o = coeffs.from_tag(tag, 2)
    p = tmp_path / "t.jsonl"
    coeffs.save_table(o, 15, p)
    t = coeffs.load_table(p)
    for J, lc in t.items():
        assert lc == pytest.approx(o.log_modulus(J), abs=1e-15)
    block = t.indices(0, 15)
    np.testing.assert_allclose(t.log_modulus_array(block), o.log_modulus_array(block))


def test_from_tag_unknown():
    with pytest.raises(ValueError):
        coeffs.from_tag("bogus")

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radial_chirp.symbols import (RadialSymbolSpec, eval_symbol, log2_support, make_bochner_riesz,
                                  make_custom_radial, make_modified_br, scale_symbol)


@pytest.mark.parametrize("lam, t, expected", [
    (1, 0.0, 1.0), (1, 0.25, 0.75), (2, 0.5, 0.25), (1, 1.0, 0.0), (0, 0.999, 1.0), (0, 1.0, 0.0), (1, 2.0, 0.0),
])
def test_bochner_riesz_profile(lam, t, expected):
    assert make_bochner_riesz(lam, 2, 1).profile(t) == pytest.approx(expected, abs=1e-15)


def test_br_parts_sum_to_full():
    t = np.linspace(0, 1.2, 1001)
    full, outer, inner = (make_bochner_riesz(2, 3, 1, part=p).profile(t) for p in ("full", "outer", "inner"))
    np.testing.assert_allclose(outer + inner, full, atol=1e-15)
    assert np.all(outer[t <= 0.25] == 0)
    assert np.all(inner[t >= 0.5] == 0)


def test_modified_br_values():
    s = make_modified_br(2, 1)
    assert s.m == 2
    assert s.profile(0.0) == 1.0
    assert s.profile(1 - np.exp(-1)) == pytest.approx(0.25)
    assert s.profile(1.0) == 0.0
    assert s.theorem_hypothesis_met
    assert not make_modified_br(0.5, 1).theorem_hypothesis_met


@pytest.mark.parametrize("bad", [lambda: make_bochner_riesz(-0.5, 2, 1), lambda: make_modified_br(0, 1),
                                 lambda: make_bochner_riesz(1, 2, 1, part="middle"),
                                 lambda: make_custom_radial([(0, 1), (1, 1)], 1.0, 2, 1),
                                 lambda: make_custom_radial([(0, 1), (2, 0)], 1.0, 2, 1),
                                 lambda: make_custom_radial([(0.5, 1), (0.2, 1), (1, 0)], 1.0, 2, 1)])
def test_invalid_specs_rejected(bad):
    with pytest.raises(ValueError):
        bad()


def test_custom_interpolation():
    lin = make_custom_radial([(0, 1), (0.5, 0.5), (1, 0)], 1.0, 2, 1)
    assert lin.profile(0.25) == pytest.approx(0.75)
    assert lin.profile(1.5) == 0.0
    cub = make_custom_radial([(0, 0), (0.25, 0.0625), (0.5, 0.25), (0.75, 0.5625), (1, 0)], 1.0, 2, 1,
                             interp="cubic")
    assert np.isfinite(cub.profile(0.3))


def test_discontinuity_flags():
    assert make_bochner_riesz(0, 2, 1).discontinuous
    assert not make_bochner_riesz(1, 2, 1).discontinuous
    assert not make_bochner_riesz(0, 2, 1, part="inner").discontinuous


def test_theorem_hypothesis_flag():
    assert make_bochner_riesz(2, 3, 1).theorem_hypothesis_met
    assert not make_bochner_riesz(0.5, 3, 1).theorem_hypothesis_met


def test_eval_symbol_shapes():
    s = make_bochner_riesz(1, 2, 3)
    pts = np.zeros((4, 5, 2, 3))
    assert eval_symbol(s, pts).shape == (4, 5)
    with pytest.raises(ValueError):
        eval_symbol(s, np.zeros((4, 3, 2)))


@given(st.floats(0.125, 8.0), st.floats(0.0, 2.0))
def test_scaling_is_dilation(factor, t):
    s = make_bochner_riesz(1, 2, 1)
    sc = scale_symbol(s, factor)
    assert sc.R == pytest.approx(1.0 / factor)
    assert sc.profile(t) == pytest.approx(s.profile(factor ** 2 * t), abs=1e-12)


@settings(max_examples=30)
@given(st.sampled_from(["bochner_riesz", "modified_br", "custom"]), st.floats(0.25, 4.0))
def test_json_round_trip(family, factor):
    if family == "bochner_riesz":
        s = make_bochner_riesz(1.5, 3, 2, part="outer")
    elif family == "modified_br":
        s = make_modified_br(2, 1)
    else:
        s = make_custom_radial([(0, 1), (2.0, 0.5), (4.0, 0)], 2.0, 2, 1)
    s = scale_symbol(s, factor)
    back = RadialSymbolSpec.from_json(s.to_json())
    assert back.R == pytest.approx(s.R)
    t = np.linspace(0, 1.5 * s.R ** 2, 50)
    np.testing.assert_allclose(back.profile(t), s.profile(t), atol=1e-14)
    json.loads(s.to_json())


@pytest.mark.parametrize("R, J", [(1.0, 0), (1.5, 1), (0.25, -2), (3.0, 2)])
def test_log2_support(R, J):
    assert log2_support(scale_symbol(make_bochner_riesz(1, 2, 1), 1.0 / R)) == J

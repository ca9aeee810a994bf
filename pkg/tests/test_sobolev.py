import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radial_chirp.sobolev import (DifferentiationError, JRangeError, LadderError, br_inner_profile, condition_check,
                                  method_equivalence_ratio, psi, psi0, radial_integer_sobolev, required_j_range,
                                  sobolev_norm_1d, square_function_norm)
from radial_chirp.spectral import QuadratureRule
from radial_chirp.symbols import make_bochner_riesz, make_custom_radial, scale_symbol
from radial_chirp.trace import TraceProfile, dyadic_localize

COS = TraceProfile.from_function(lambda x: np.cos(2 * np.pi * x))
ZERO = TraceProfile.from_function(lambda x: np.zeros_like(x))


@pytest.mark.parametrize("s", [0.5, 1.0, 1.7])
def test_cos_norm(s):
    assert sobolev_norm_1d(COS, s) == pytest.approx(2 ** ((s - 1) / 2), rel=1e-12)


def test_zero_trace():
    assert sobolev_norm_1d(ZERO, 1.0) == 0.0
    assert square_function_norm(ZERO, 1.0).value == 0.0


def test_cutoffs_shape():
    assert psi0(0.4) == 1 and psi0(1.0) == 0
    assert psi(0) == 0 and psi(0.5) == 1 and psi(1.0) == 1 and psi(2.0) == 0 and psi(0.25) == 0


@pytest.mark.parametrize("trace", [COS, dyadic_localize(make_bochner_riesz(1, 2, 1), -1).trace],
                         ids=["cos", "br1_j-1"])
def test_methods_agree_within_factor_4(trace):
    assert 0.25 <= method_equivalence_ratio(trace, 1.0) <= 4


def test_single_shell_synthesis():
    j0, s = 6, 0.8
    tr = TraceProfile.from_function(lambda x: np.cos(2 * np.pi * 48 * x))
    res = square_function_norm(tr, s)
    one_shell = 2 ** (j0 * s) * np.sqrt(0.5)  # psi(48 / 64) = 1
    assert 1.0 <= res.value / one_shell <= 4.0
    assert not res.flagged


def test_method_equivalence_family():
    spec1, spec2 = make_bochner_riesz(1, 2, 1), make_bochner_riesz(2, 2, 1)
    traces = [TraceProfile.from_function(lambda x, k=k: np.cos(2 * np.pi * k * x)) for k in (1, 3, 10, 40)]
    traces += [dyadic_localize(sp, j).trace for sp in (spec1, spec2) for j in (-3, -1, 0)]
    traces += [TraceProfile.from_function(lambda x, w=w: np.exp(-(x / w) ** 2)) for w in (0.05, 0.1)]
    ratios = [method_equivalence_ratio(t, 0.9) for t in traces]
    assert len(ratios) >= 10
    assert max(ratios) / min(ratios) <= 16


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 2.0), st.floats(0.0, 1.0))
def test_monotone_in_s(s, ds):
    tr = dyadic_localize(make_bochner_riesz(1, 2, 1), -1).trace
    assert sobolev_norm_1d(tr, s, K=512) <= sobolev_norm_1d(tr, s + ds, K=512) * (1 + 1e-12)


def test_ladder_failure_carries_partial_sums():
    tr = dyadic_localize(make_bochner_riesz(0, 2, 1), 0).trace
    with pytest.raises(LadderError) as exc:
        sobolev_norm_1d(tr, 0.9, rule=QuadratureRule(max_nodes=2 ** 16, check_tol=1.0))
    a, b = exc.value.last_two
    assert b > a > 0


def test_condition_zero_symbol():
    zero = make_custom_radial([(0.0, 0.0), (1.0, 0.0)], 1.0, 2, 1)
    rep = condition_check(zero, 0.3)
    assert rep.supremum == 0.0


def test_condition_entries_outside_support_vanish():
    rep = condition_check(make_bochner_riesz(1, 2, 1), 0.4, K=512)
    assert rep.per_j[2] == 0.0 and rep.per_j[1] > 0
    assert rep.supremum == max(rep.per_j.values())
    assert rep.s == pytest.approx(0.9) and rep.method == "fourier_weight"


@pytest.mark.parametrize("kw", [{"eps": 0.0}, {"eps": 0.5}, {"eps": 0.3, "method": "wavelet"}])
def test_condition_input_validation(kw):
    with pytest.raises(ValueError):
        condition_check(make_bochner_riesz(1, 2, 1), **kw)


def test_condition_rejects_short_j_range():
    spec = make_bochner_riesz(1, 2, 1)
    with pytest.raises(JRangeError) as exc:
        condition_check(spec, 0.4, j_range=(-2, 2))
    assert exc.value.required == required_j_range(spec)
    with pytest.raises(ValueError):
        condition_check(make_bochner_riesz(2, 3, 1), 0.4)


def test_scaling_covariance():
    spec = make_bochner_riesz(1, 2, 1)
    a = condition_check(spec, 0.4, K=512)
    b = condition_check(scale_symbol(spec, 2.0), 0.4, K=512)
    for j, v in b.per_j.items():
        if j + 1 in a.per_j:
            assert v == pytest.approx(a.per_j[j + 1], abs=1e-8)
    assert b.supremum == pytest.approx(a.supremum, abs=1e-8)


def test_square_function_method():
    rep = condition_check(make_bochner_riesz(1, 2, 1), 0.4, K=256, method="square_function")
    fw = condition_check(make_bochner_riesz(1, 2, 1), 0.4, K=256)
    assert 0.25 <= rep.supremum / fw.supremum <= 4


def test_report_export(tmp_path):
    rep = condition_check(make_bochner_riesz(1, 2, 1), 0.4, K=256)
    rep.to_json(tmp_path / "r.json")
    rep.to_csv(tmp_path / "r.csv")
    d = json.loads((tmp_path / "r.json").read_text())
    assert d["supremum"] == rep.supremum and len(d["per_j"]) == len(rep.per_j)
    assert (tmp_path / "r.csv").read_text().startswith("j,norm")


def test_radial_constant_profile():
    res = radial_integer_sobolev(np.ones_like, 2, 0)
    assert res.total == pytest.approx(np.sqrt(15) / 2, rel=1e-12)


def test_radial_linear_profile():
    res = radial_integer_sobolev(lambda r: r, 2, 1)
    assert res.terms[1] == pytest.approx(np.sqrt(255 / 32), rel=1e-9)


def test_radial_br_inner_stable():
    res = radial_integer_sobolev(br_inner_profile(1.0), 2, 2)
    assert np.isfinite(res.total) and res.refinement_change <= 0.01
    assert len(res.terms) == 3


def test_radial_dilation():
    # k shifts the window: profile(2**k r) on [1/4, 4]
    res = radial_integer_sobolev(lambda r: r ** 2, 2, 0, k=1)
    assert res.total == pytest.approx(np.sqrt(16 * (4 ** 5 - 0.25 ** 5) / 5), rel=1e-9)


def test_radial_kink_refused():
    with pytest.raises(DifferentiationError):
        radial_integer_sobolev(lambda r: np.abs(r - 1.0), 2, 2)

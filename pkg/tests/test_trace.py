import numpy as np
import pytest
from hypothesis import given, strategies as st

from radial_chirp.cutoffs import RingCutoff
from radial_chirp.symbols import make_bochner_riesz, scale_symbol
from radial_chirp.trace import CutoffError, TraceProfile, check_partition_member, dyadic_localize, extract_trace


@pytest.mark.parametrize("m", [2, 3, 4])
def test_trace_support_and_values(m):
    tr = extract_trace(make_bochner_riesz(1, m, 1))
    x = np.linspace(-0.5, 0.5, 2001)
    v = tr(x)
    assert np.all(v[np.abs(x) >= 1 / (2 * m)] == 0)
    assert tr(0.0) == 1.0
    assert tr(1 / (4 * m)) == pytest.approx(0.5)


def test_extensions():
    spec = make_bochner_riesz(1, 2, 1)
    even, zero = extract_trace(spec, "even"), extract_trace(spec, "zero")
    assert even(-0.1) == even(0.1)
    assert zero(-0.1) == 0.0 and zero(0.1) == even(0.1)
    with pytest.raises(ValueError):
        extract_trace(spec, "odd")


@given(st.integers(4, 14))
def test_sample_nodes_are_symmetric(p):
    tr = extract_trace(make_bochner_riesz(2, 2, 1))
    x, v = tr.sample(2 ** p)
    assert x.min() == -0.5 and x.max() < 0.5
    np.testing.assert_array_equal(v[1:], v[1:][::-1])


def test_trace_is_invariant_under_scaling():
    spec = make_bochner_riesz(1, 2, 1)
    x = np.linspace(-0.5, 0.5, 513)
    np.testing.assert_allclose(extract_trace(scale_symbol(spec, 3.0))(x), extract_trace(spec)(x), atol=1e-14)


@pytest.mark.parametrize("j", [-3, 0, 1])
def test_localized_trace_support(j):
    loc = dyadic_localize(make_bochner_riesz(1, 2, 1), j)
    x = np.linspace(-0.5, 0.5, 8193)
    v = loc.trace(x)
    assert np.all(v[np.abs(x) > 0.25] == 0)
    assert np.all(v[np.abs(x) < 2.0 ** -10] == 0)
    assert loc.trace.rescale_factor == 2.0 ** (j + 3)


def test_localized_trace_matches_symbol_piece():
    j = -1
    loc = dyadic_localize(make_bochner_riesz(1, 2, 1), j)
    x = np.linspace(2.0 ** -10, 0.25, 300)
    radius = 2.0 ** (j + 3) * np.sqrt(x)
    np.testing.assert_allclose(loc.trace(x), loc.symbol_profile(radius ** 2), atol=1e-15)


def test_partition_member_check():
    check_partition_member(RingCutoff.wide())
    check_partition_member(RingCutoff.narrow())
    with pytest.raises(CutoffError):
        check_partition_member(RingCutoff(0.25, 8.0))


def test_csv_export(tmp_path):
    tr = TraceProfile.from_function(lambda x: np.cos(2 * np.pi * x))
    tr.to_csv(tmp_path / "t.csv", N=16)
    rows = (tmp_path / "t.csv").read_text().splitlines()
    assert rows[0] == "x,value" and len(rows) == 17

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radial_chirp.chirp import build_decomposition
from radial_chirp.operator import (BudgetError, GridFunction, GridMismatchError, apply_direct, apply_fast,
                                   apply_linear_multiplier, holder_chain, norm_probe, random_bandlimited)
from radial_chirp.symbols import make_bochner_riesz, make_custom_radial

ONE = make_custom_radial([(0.0, 1.0), (50.0, 1.0), (100.0, 0.0)], 10.0, 2, 1)


@pytest.fixture(scope="module")
def dec():
    return build_decomposition(make_bochner_riesz(1, 2, 1), K=512)


def _inputs(seed, m=2, n=1, N=16, L=8.0, band=1.0):
    rng = np.random.default_rng(seed)
    return [random_bandlimited(rng, n, N, L, band) for _ in range(m)]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([1, 2]))
def test_spectrum_round_trip(seed, n):
    f = random_bandlimited(np.random.default_rng(seed), n, 16, 5.0, 1.5)
    g = GridFunction.from_spectrum(f.spectrum(), f.L)
    assert np.max(np.abs(g.samples - f.samples)) < 1e-12


def test_riemann_norm():
    f = GridFunction(np.ones((32, 32)), 3.0)
    assert f.norm() == pytest.approx(3.0)
    assert f.lp_norm(1.0) == pytest.approx(9.0)


def test_identity_and_pythagoras(rng):
    f = random_bandlimited(rng, 1, 64, 10.0, 2.0)
    assert np.max(np.abs(apply_linear_multiplier(f, np.ones(64)).samples - f.samples)) < 1e-12
    mask = (np.arange(64) % 2).astype(float)
    a = apply_linear_multiplier(f, mask)
    b = GridFunction(f.samples - a.samples, f.L)
    assert a.norm() ** 2 + b.norm() ** 2 == pytest.approx(f.norm() ** 2, rel=1e-12)


def test_chirp_preserves_norm_inside_cutoff(dec, rng):
    f = random_bandlimited(rng, 1, 64, 10.0, 1.0)
    out = apply_linear_multiplier(f, dec.multiplier(1, f.freq_sq()))
    assert out.norm() == pytest.approx(f.norm(), rel=1e-12)


def test_direct_with_unit_symbol_is_product():
    fs = _inputs(1)
    out = apply_direct(ONE, fs)
    assert np.max(np.abs(out.samples - fs[0].samples * fs[1].samples)) < 1e-10


def test_zero_input_gives_zero(dec):
    fs = _inputs(2)
    fs[1] = GridFunction(np.zeros(16), 8.0)
    assert np.all(apply_direct(dec.spec, fs).samples == 0)
    assert np.all(apply_fast(dec, fs).samples == 0)


@pytest.mark.parametrize("m, N, L, lam, part", [(2, 16, 8.0, 1, "full"), (2, 16, 6.0, 2, "outer"),
                                                 (3, 8, 4.0, 2, "outer")])
def test_fast_matches_direct(m, N, L, lam, part):
    spec = make_bochner_riesz(lam, m, 1, part=part)
    d = build_decomposition(spec, K=1024)
    fs = _inputs(3, m=m, N=N, L=L)
    ref = apply_direct(spec, fs)
    err = np.linalg.norm(apply_fast(d, fs).samples - ref.samples) / np.linalg.norm(ref.samples)
    scale = np.prod([np.abs(f.spectrum()).sum() for f in fs]) / np.linalg.norm(ref.spectrum())
    assert err <= d.tail.total * scale + 1e-8


def test_fast_k0_is_scaled_lowpass_product():
    d = build_decomposition(make_bochner_riesz(1, 2, 1), K=0)
    fs = _inputs(4, band=1.5)
    low = [apply_linear_multiplier(f, d.multiplier(0, f.freq_sq())) for f in fs]
    expect = d.table[0] * low[0].samples * low[1].samples
    assert np.max(np.abs(apply_fast(d, fs).samples - expect)) < 1e-12


@settings(max_examples=10, deadline=None)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), st.integers(0, 15))
def test_linearity_and_translation(dec, alpha, shift):
    fs = _inputs(5)
    base = apply_fast(dec, fs)
    scaled = apply_fast(dec, [fs[0] * alpha, fs[1]])
    assert np.max(np.abs(scaled.samples - alpha * base.samples)) <= 1e-12 * max(1.0, abs(alpha)) * 10
    moved = apply_fast(dec, [f.shift(shift) for f in fs])
    assert np.max(np.abs(moved.samples - base.shift(shift).samples)) < 1e-12


def test_budget_refusal():
    spec = make_bochner_riesz(2, 3, 1)
    with pytest.raises(BudgetError) as exc:
        apply_direct(spec, _inputs(6, m=3, N=64), budget=10 ** 6)
    assert exc.value.required == 64 ** 4


def test_grid_mismatch(dec):
    fs = [random_bandlimited(np.random.default_rng(0), 1, 16, 8.0, 1.0),
          random_bandlimited(np.random.default_rng(0), 1, 16, 9.0, 1.0)]
    with pytest.raises(GridMismatchError):
        apply_fast(dec, fs)
    with pytest.raises(GridMismatchError):
        apply_direct(dec.spec, fs)


@pytest.mark.parametrize("dtype", ["complex128", "complex64"])
def test_save_load(tmp_path, dtype):
    f = random_bandlimited(np.random.default_rng(7), 2, 8, 3.0, 1.0)
    f.save(tmp_path / "g", dtype=dtype)
    g = GridFunction.load(tmp_path / "g")
    tol = 0 if dtype == "complex128" else 1e-6 * np.abs(f.samples).max()
    assert g.L == f.L and np.max(np.abs(g.samples - f.samples)) <= tol


def test_norm_probe_cauchy_schwarz():
    stats = norm_probe(lambda fs: apply_direct(ONE, fs), 2, 25, N=16, L=8.0, seed=3)
    assert stats.max <= 1 + 1e-10
    again = norm_probe(lambda fs: apply_direct(ONE, fs), 2, 25, N=16, L=8.0, seed=3)
    assert np.array_equal(stats.ratios, again.ratios)


def test_norm_probe_rejects_zero_trials():
    with pytest.raises(ValueError):
        norm_probe(lambda fs: fs[0], 2, 0)


@pytest.mark.parametrize("k", [0, 1, 7, -12])
def test_holder_chain(dec, k):
    for m, d in ((2, dec), (3, build_decomposition(make_bochner_riesz(2, 3, 1, part="outer"), K=8))):
        fs = _inputs(8 + abs(k), m=m, band=1.5)
        a, b, c = holder_chain(d, k, fs)
        assert a <= b * (1 + 1e-10) and b <= c * (1 + 1e-10)

"""Applying radial multipliers to sampled periodic functions.

Grid model: ``N`` points per axis on a torus of side ``L``; the discrete
frequencies are ``l / L`` with ``l = -N/2 .. N/2 - 1``.  Spectral coefficients
are taken with the forward sign ``exp(-2 pi i x . xi)`` and normalized so that
``f(x) = sum_l F_l exp(2 pi i x . xi_l)`` on the grid.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .chirp import ChirpDecomposition
from .symbols import RadialSymbolSpec


class BudgetError(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"direct evaluation needs {required} operations, budget is {budget}")
        self.required = required
        self.budget = budget


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GridFunction:
    samples: np.ndarray
    L: float = 1.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if len(set(s.shape)) != 1:
            raise ValueError("grids must have the same N on every axis")
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return self.samples.ndim

    @property
    def N(self) -> int:
        return self.samples.shape[0]

    @property
    def h(self) -> float:
        return self.L / self.N

    def same_grid(self, other: "GridFunction") -> bool:
        return self.samples.shape == other.samples.shape and self.L == other.L

    def freqs(self) -> np.ndarray:
        """Frequency vectors, shape ``(N,)*n + (n,)``."""
        f1 = np.fft.fftfreq(self.N, d=self.h)
        return np.stack(np.meshgrid(*([f1] * self.n), indexing="ij"), axis=-1)

    def freq_sq(self) -> np.ndarray:
        return np.sum(self.freqs() ** 2, axis=-1)

    @property
    def nyquist(self) -> float:
        return self.N / (2 * self.L)

    def spectrum(self) -> np.ndarray:
        return np.fft.fftn(self.samples) / self.samples.size

    @classmethod
    def from_spectrum(cls, F, L) -> "GridFunction":
        F = np.asarray(F)
        return cls(np.fft.ifftn(F) * F.size, L)

    def lp_norm(self, p: float) -> float:
        w = self.h ** self.n
        if p == np.inf:
            return float(np.max(np.abs(self.samples)))
        return float((w * np.sum(np.abs(self.samples) ** p)) ** (1.0 / p))

    def norm(self) -> float:
        return self.lp_norm(2.0)

    def shift(self, steps) -> "GridFunction":
        return GridFunction(np.roll(self.samples, steps, axis=tuple(range(self.n))), self.L)

    def __mul__(self, a):
        return GridFunction(self.samples * a, self.L)

    __rmul__ = __mul__

    # -- raw binary with JSON header ---------------------------------------
    def save(self, stem, dtype: str = "complex128") -> None:
        stem = Path(stem)
        header = {"n": self.n, "N": self.N, "L": self.L, "dtype": dtype, "layout": "row-major"}
        stem.with_suffix(".json").write_text(json.dumps(header, sort_keys=True))
        self.samples.astype(np.dtype(dtype).newbyteorder("<")).tofile(stem.with_suffix(".bin"))

    @classmethod
    def load(cls, stem) -> "GridFunction":
        stem = Path(stem)
        h = json.loads(stem.with_suffix(".json").read_text())
        if h.get("layout") != "row-major":
            raise ValueError(f"unsupported layout {h.get('layout')!r}")
        data = np.fromfile(stem.with_suffix(".bin"), dtype=np.dtype(h["dtype"]).newbyteorder("<"))
        return cls(data.reshape((h["N"],) * h["n"]).astype(complex), h["L"])


def random_bandlimited(rng: np.random.Generator, n: int, N: int, L: float, band: float) -> GridFunction:
    """Complex Gaussian spectrum on the modes with ``|xi| <= band``."""
    shape = (N,) * n
    g = GridFunction(np.zeros(shape), L)
    mask = g.freq_sq() <= band ** 2
    F = np.zeros(shape, dtype=complex)
    cnt = int(mask.sum())
    F[mask] = rng.standard_normal(cnt) + 1j * rng.standard_normal(cnt)
    return GridFunction.from_spectrum(F, L)


def apply_linear_multiplier(f: GridFunction, symbol: Callable | np.ndarray) -> GridFunction:
    """``(symbol * f^)^vee`` on the grid; ``symbol`` is an array or a map on frequency vectors."""
    mult = symbol if isinstance(symbol, np.ndarray) else np.asarray(symbol(f.freqs()))
    return GridFunction(np.fft.ifftn(mult * np.fft.fftn(f.samples)), f.L)


def _check_grids(fs):
    for g in fs[1:]:
        if not fs[0].same_grid(g):
            raise GridMismatchError("all inputs must live on the same grid")


def apply_direct(spec: RadialSymbolSpec, fs: Sequence[GridFunction], budget: int = 2 ** 24) -> GridFunction:
    """Oracle: explicit sum over all m-tuples of grid frequencies.

    Each tuple contributes ``sigma(xi_1..xi_m) prod_j F_j(xi_j)`` to the mode
    ``xi_1 + .. + xi_m`` (wrapped onto the grid); one inverse transform then
    synthesizes the output.
    """
    fs = list(fs)
    if len(fs) != spec.m:
        raise ValueError(f"symbol is {spec.m}-linear, got {len(fs)} inputs")
    _check_grids(fs)
    g0 = fs[0]
    if g0.n != spec.n:
        raise ValueError(f"symbol expects n={spec.n}, grid has n={g0.n}")
    modes = g0.N ** g0.n
    required = modes ** spec.m * modes
    if required > budget:
        raise BudgetError(required, budget)
    idx = np.indices((g0.N,) * g0.n).reshape(g0.n, -1).T  # (modes, n) integer indices
    lvec = np.where(idx >= g0.N // 2, idx - g0.N, idx)  # signed wave numbers
    spectra = [f.spectrum().reshape(-1) for f in fs]
    out = np.zeros(modes, dtype=complex)
    strides = g0.N ** np.arange(g0.n - 1, -1, -1)
    for tup in np.ndindex(*(modes,) * (spec.m - 1)):
        amp = np.ones(modes, dtype=complex)
        lsum = np.zeros((modes, g0.n), dtype=np.int64)
        sq = np.zeros(modes)
        for j, t in enumerate(tup):
            amp = amp * spectra[j][t]
            lsum = lsum + lvec[t]
            sq = sq + np.sum((lvec[t] / g0.L) ** 2)
        # last argument runs over all modes at once
        amp = amp * spectra[-1]
        lsum = lsum + lvec
        sq = sq + np.sum((lvec / g0.L) ** 2, axis=1)
        vals = amp * np.asarray(spec.profile(sq))
        target = (np.mod(lsum, g0.N) * strides).sum(axis=1)
        np.add.at(out, target, vals)
    return GridFunction.from_spectrum(out.reshape((g0.N,) * g0.n), g0.L)


def apply_fast(decomp: ChirpDecomposition, fs: Sequence[GridFunction], batch: int = 2048) -> GridFunction:
    """``sum_{|k|<=K} c_k prod_j T_{sigma^k} f_j`` in the decomposition's fixed ``k`` order."""
    fs = list(fs)
    if len(fs) != decomp.m:
        raise ValueError(f"decomposition is {decomp.m}-linear, got {len(fs)} inputs")
    _check_grids(fs)
    g0 = fs[0]
    shape = g0.samples.shape
    axes = tuple(range(1, g0.n + 1))
    sq = g0.freq_sq().reshape(-1)
    F = [np.fft.fftn(f.samples).reshape(-1) for f in fs]
    order = decomp.order()
    coeffs = decomp.table.c[order + decomp.K]
    acc = np.zeros(g0.samples.size, dtype=complex)
    for s in range(0, order.size, batch):
        ks = order[s:s + batch]
        mult = decomp.multiplier(ks, sq)  # (b, modes)
        prod = None
        for Fj in F:
            tj = np.fft.ifftn((mult * Fj).reshape((-1,) + shape), axes=axes).reshape(len(ks), -1)
            prod = tj if prod is None else prod * tj
        acc += coeffs[s:s + batch] @ prod
    return GridFunction(acc.reshape(shape), g0.L)


@dataclass(frozen=True)
class ProbeStats:
    ratios: np.ndarray
    max: float
    median: float
    q1: float
    q3: float
    seed: int

    def to_dict(self) -> dict:
        return {"max": self.max, "median": self.median, "q1": self.q1, "q3": self.q3,
                "trials": int(self.ratios.size), "seed": self.seed}


def norm_probe(applier: Callable[[list[GridFunction]], GridFunction], m: int, trials: int, *, n: int = 1,
               N: int = 32, L: float = 12.0, band: float = 1.0, seed: int = 0) -> ProbeStats:
    """Distribution of ``||T(f_1..f_m)||_{2/m} / prod ||f_j||_2`` over random inputs.

    Each trial draws its inputs from an independent child of ``SeedSequence(seed)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    children = np.random.SeedSequence(seed).spawn(trials)
    ratios = np.empty(trials)
    for i, ss in enumerate(children):
        rng = np.random.default_rng(ss)
        fs = [random_bandlimited(rng, n, N, L, band) for _ in range(m)]
        denom = math.prod(f.norm() for f in fs)
        ratios[i] = 0.0 if denom == 0 else applier(fs).lp_norm(2.0 / m) / denom
    q1, med, q3 = np.percentile(ratios, [25, 50, 75])
    return ProbeStats(ratios, float(ratios.max()), float(med), float(q1), float(q3), seed)


def holder_chain(decomp: ChirpDecomposition, k: int, fs: Sequence[GridFunction]) -> tuple[float, float, float]:
    """``(||prod_j T f_j||_{2/m}, prod_j ||T f_j||_2, prod_j ||f_j||_2)`` for ``T = T_{sigma^k}``."""
    m = decomp.m
    outs = [apply_linear_multiplier(f, decomp.multiplier(np.asarray(k), f.freq_sq())) for f in fs]
    prod = GridFunction(np.prod([o.samples for o in outs], axis=0), fs[0].L)
    return (prod.lp_norm(2.0 / m), math.prod(o.norm() for o in outs), math.prod(f.norm() for f in fs))

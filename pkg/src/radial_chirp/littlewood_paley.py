"""Dyadic partitions, LP projections, support splitting and a discrete maximal operator."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chirp import localized_chirp
from .cutoffs import BumpCutoff, RingCutoff
from .operator import GridFunction, apply_linear_multiplier
from .symbols import RadialSymbolSpec

VARIANTS = {"1/4-4": RingCutoff.wide, "1/2-2": RingCutoff.narrow}


class PartitionError(ValueError):
    pass


class NyquistError(ValueError):
    pass


@dataclass(frozen=True)
class DyadicPartition:
    ring: RingCutoff
    variant: str

    def __call__(self, r, j: int) -> np.ndarray:
        """``psi(2**-j r)``."""
        return self.ring(np.asarray(r, dtype=float) * 2.0 ** (-j))

    def total(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        j0, j1 = self.ring.active_range(float(r[r > 0].min()), float(r.max()))
        return sum(self(r, j) for j in range(j0, j1 + 1))

    def overlap(self, r) -> int:
        r = np.abs(np.asarray(r, dtype=float))
        j0, j1 = self.ring.active_range(float(r.min()), float(r.max()))
        live = np.stack([self(r, j) != 0 for j in range(j0, j1 + 1)])
        return int(live.sum(axis=0).max())

    def shell_range(self, j: int) -> tuple[float, float]:
        lo, hi = self.ring.support
        return (lo * 2.0 ** j, hi * 2.0 ** j)

    def active_j(self, g: GridFunction) -> range:
        """Shells touching the grid's nonzero frequencies."""
        sq = g.freq_sq()
        r = np.sqrt(sq[sq > 0])
        j0, j1 = self.ring.active_range(float(r.min()), float(r.max()))
        while self.shell_range(j1)[0] >= r.max():
            j1 -= 1
        return range(j0, j1 + 1)


def build_partition(variant: str = "1/4-4", tol: float = 1e-10) -> DyadicPartition:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {sorted(VARIANTS)}")
    part = DyadicPartition(VARIANTS[variant](), variant)
    r = np.geomspace(2.0 ** -8, 2.0 ** 8, 20001)
    err = float(np.max(np.abs(part.total(r) - 1.0)))
    if err > tol:
        raise PartitionError(f"partition of unity fails: max |sum - 1| = {err:.3g}")
    return part


def lp_project(f: GridFunction, j: int, partition: DyadicPartition) -> GridFunction:
    lo, _ = partition.shell_range(j)
    top = math.sqrt(float(f.freq_sq().max()))
    if lo >= top:
        raise NyquistError(f"shell {j} starts at |xi| = {lo:g}, beyond the grid's largest frequency {top:g}")
    mult = partition(np.sqrt(f.freq_sq()), j)
    return apply_linear_multiplier(f, mult)


def lp_energies(f: GridFunction, partition: DyadicPartition) -> dict[int, float]:
    return {j: lp_project(f, j, partition).norm() ** 2 for j in partition.active_j(f)}


def support_split_predicate(j: int, r: int, s: int) -> bool:
    """True when ``sigma_j (Delta_r f_1 (x) Delta_s f_2)^`` must vanish."""
    return r > j + 4 or s > j + 4 or (r < j - 4 and s < j - 4)


def support_split_overlap(spec: RadialSymbolSpec, j: int, r: int, s: int, partition: DyadicPartition,
                          freqs: np.ndarray) -> float:
    """``max |sigma_j(xi, eta) psi_r(xi) psi_s(eta)|`` over a discrete 1-D frequency set.

    ``sigma_j = sigma * psi(2**-j .)`` with the same ring as the projections.
    """
    if spec.m != 2 or spec.n != 1:
        raise ValueError("the numerical verifier works with bilinear symbols on R x R")
    xi = np.asarray(freqs, dtype=float)
    wr = partition(np.abs(xi), r)
    ws = partition(np.abs(xi), s)
    a, b = np.nonzero(wr)[0], np.nonzero(ws)[0]
    if a.size == 0 or b.size == 0:
        return 0.0
    X, Y = np.meshgrid(xi[a], xi[b], indexing="ij")
    t = X ** 2 + Y ** 2
    sj = np.asarray(spec.profile(t)) * partition(np.sqrt(t), j)
    return float(np.max(np.abs(sj * wr[a][:, None] * ws[b][None, :])))


def hl_maximal(f: GridFunction) -> GridFunction:
    """Centered maximal function over the radii ``0`` and ``h 2**i`` (periodic balls)."""
    a = np.abs(f.samples)
    best = a.copy()  # radius 0: the point itself
    d = np.fft.fftfreq(f.N, d=1.0 / f.N)  # signed index offsets
    grids = np.meshgrid(*([d] * f.n), indexing="ij")
    dist2 = sum(g ** 2 for g in grids)
    A = np.fft.fftn(a)
    i = 0
    while 2 ** i <= f.N // 2:
        ball = (dist2 <= 4 ** i).astype(float)
        avg = np.fft.ifftn(A * np.fft.fftn(ball)).real / ball.sum()
        np.maximum(best, avg, out=best)
        i += 1
    return GridFunction(best, f.L)


@dataclass(frozen=True)
class DominationResult:
    ratio: float
    cut: int
    sup_out: float


def maximal_domination_check(j: int, k: int, m_block: int, f: GridFunction, partition: DyadicPartition,
                             cutoff: BumpCutoff | None = None, floor: float = 1e-12,
                             Mf: GridFunction | None = None) -> DominationResult:
    """``sup_x |T_{sigma_j^k}(low-pass f)(x)| / max(Mf(x), floor)``.

    The low-pass part keeps ``sum_{r <= j - 6 - ceil(m_block/2)} Delta_r f``
    (the zero mode is not part of any shell).
    """
    if not (k == 0 and m_block == 0) and not (2 ** (m_block - 1) <= abs(k) < 2 ** m_block):
        raise ValueError(f"k={k} is not in block D_{m_block}")
    cut = j - 6 - math.ceil(m_block / 2)
    reach = partition.ring.b * 2.0 ** cut
    r = np.sqrt(f.freq_sq())
    spacing = 1.0 / f.L
    if reach > math.sqrt(f.n) * f.nyquist or reach < spacing:
        raise NyquistError(f"low-pass cut {cut} (|xi| < {reach:g}) is not resolved by the grid")
    low = apply_linear_multiplier(f, partition.ring.lowpass(r, cut))
    out = apply_linear_multiplier(low, localized_chirp(j, k, f.freqs(), cutoff))
    Mf = Mf or hl_maximal(f)
    denom = np.maximum(Mf.samples.real, floor)
    ratio = float(np.max(np.abs(out.samples) / denom))
    return DominationResult(ratio, cut, float(np.max(np.abs(out.samples))))

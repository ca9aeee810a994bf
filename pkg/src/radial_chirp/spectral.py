"""Fourier coefficients of trace profiles on the period-1 torus.

Coefficients use ``c_k = int_{-1/2}^{1/2} f(x) exp(-2 pi i k x) dx``.  The
default rule is the trapezoid rule on ``N >= 64 K`` symmetric periodic nodes
(one real FFT), with a per-coefficient error estimate from the same samples
at half the node count.  :func:`quad_coefficient` is an independent adaptive
Gauss-Kronrod path used as the oracle.
"""
from __future__ import annotations

import csv
import json
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .trace import TraceProfile

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps


class QuadratureError(RuntimeError):
    """Node halving moved a low-order coefficient by more than the tolerance."""


class MemoryCapError(ValueError):
    def __init__(self, msg, achieved=None):
        super().__init__(msg)
        self.achieved = achieved


class DecayFitError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    oversample: int = 64
    min_nodes: int = 2 ** 16
    max_nodes: int = 2 ** 25
    check_k: int = 16
    check_tol: float = 1e-6  # relative to int |trace|

    def nodes_for(self, K: int) -> int:
        want = max(self.min_nodes, self.oversample * max(K, 1))
        return 1 << int(np.ceil(np.log2(want)))

    def max_K(self) -> int:
        return self.max_nodes // self.oversample


@dataclass(frozen=True)
class CoefficientTable:
    """Two-sided coefficients ``c[k]`` for ``k = -K..K``.

    ``error`` holds the per-coefficient quadrature estimate when the table
    came from quadrature (``None`` for synthetic tables).
    """

    c: np.ndarray = field(repr=False)
    K: int
    nodes: int | None = None
    error: np.ndarray | None = field(default=None, repr=False)
    rule: str = "synthetic"
    source: str = ""
    real_even: bool = False

    @property
    def k(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.K:
            raise KeyError(k)
        return complex(self.c[k + self.K])

    def side(self, sign: int) -> np.ndarray:
        """Magnitudes ``|c_{sign*k}|`` for ``k = 0..K``."""
        mags = np.abs(self.c)
        return mags[self.K:] if sign > 0 else mags[self.K::-1]

    @property
    def noise_floor(self) -> float:
        top = float(np.max(np.abs(self.c))) if self.c.size else 0.0
        return 1e3 * EPS * top

    @property
    def max_error(self) -> float:
        return float(np.max(self.error)) if self.error is not None else 0.0

    def truncate(self, K: int) -> "CoefficientTable":
        if K > self.K:
            raise ValueError(f"cannot extend a table of order {self.K} to {K}")
        sl = slice(self.K - K, self.K + K + 1)
        err = None if self.error is None else self.error[sl]
        return CoefficientTable(self.c[sl].copy(), K, self.nodes, err, self.rule, self.source, self.real_even)

    @classmethod
    def from_positive(cls, c_pos, c_neg=None, source="synthetic") -> "CoefficientTable":
        """Build from ``c_0..c_K`` and optionally ``c_0, c_-1, .., c_-K``.

        Without ``c_neg`` the table is conjugate symmetric.
        """
        c_pos = np.asarray(c_pos, dtype=complex)
        K = c_pos.size - 1
        neg = np.conj(c_pos[1:]) if c_neg is None else np.asarray(c_neg, dtype=complex)[1:]
        c = np.concatenate([neg[::-1], c_pos])
        real_even = c_neg is None and not np.any(c_pos.imag)
        return cls(c, K, rule="synthetic", source=source, real_even=real_even)

    # -- export -----------------------------------------------------------
    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "re", "im", "abs"])
            for k, v in zip(self.k, self.c):
                w.writerow([int(k), repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v)))])

    def summary(self, k_range=None, qs=(1.0,), block: int = 1) -> dict:
        out = {"K": self.K, "nodes": self.nodes, "rule": self.rule, "source": self.source,
               "max_quadrature_error": self.max_error,
               "block_sums": {str(j): s for j, s in block_sums(self)}}
        if k_range is not None:
            try:
                fit = fit_decay_exponent(self, k_range, block=block)
                out["decay_fit"] = {"alpha": fit.alpha, "residual": fit.residual, "k_range": list(k_range),
                                    "block": block, "excluded": fit.excluded}
            except DecayFitError as exc:
                out["decay_fit"] = {"error": str(exc)}
        out["ell_q"] = {}
        for q in qs:
            norm = ell_q_norm(self, q)
            out["ell_q"][str(q)] = {"value": norm.value, "partial": norm.partial, "remainder": norm.remainder,
                                    "method": norm.method}
        return out

    def to_json(self, path, **kw) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(**kw), fh, indent=2, sort_keys=True)


def fourier_coefficients(trace: TraceProfile, K: int, rule: QuadratureRule | None = None) -> CoefficientTable:
    rule = rule or QuadratureRule()
    if K < 0:
        raise ValueError("K must be >= 0")
    N = rule.nodes_for(K)
    if N > rule.max_nodes:
        raise MemoryCapError(f"K={K} needs {N} nodes, cap is {rule.max_nodes}")
    _, v = trace.sample(N)
    full = np.fft.rfft(v)[: K + 1] / N
    half = np.fft.rfft(v[::2])[: K + 1] / (N // 2)
    del v
    even = trace.extension == "even"
    if even:
        full, half = full.real.astype(complex), half.real.astype(complex)
    err = np.abs(full - half)
    scale = max(abs(full[0]), float(np.sum(np.abs(trace.sample(4096)[1]))) / 4096, 1e-300)
    kc = min(rule.check_k, K)
    worst = float(np.max(err[: kc + 1]))
    if worst > rule.check_tol * scale:
        msg = (f"node halving changes low-order coefficients by {worst:.3g} "
               f"(> {rule.check_tol:g} x {scale:.3g}) for {trace.label or 'trace'}")
        if trace.discontinuous:
            warnings.warn(msg + "; trace is flagged discontinuous", RuntimeWarning, stacklevel=2)
        else:
            raise QuadratureError(msg)
    c = np.concatenate([np.conj(full[:0:-1]), full])
    e = np.concatenate([err[:0:-1], err])
    return CoefficientTable(c, K, N, e, f"trapezoid/{N}", trace.label, even)


def quad_coefficient(trace: TraceProfile, k: int, breakpoints=(), epsabs: float = 1e-14) -> complex:
    """Adaptive Gauss-Kronrod (QUADPACK) value of ``c_k``; the oracle path."""
    pts = sorted({-0.5, 0.5, *[float(b) for b in breakpoints if -0.5 < b < 0.5]})
    if trace.extension != "full":
        pts = sorted(set(pts) | {0.0} | {-p for p in pts})
    re = im = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if k == 0:
            re += integrate.quad(trace, a, b, epsabs=epsabs, epsrel=1e-13, limit=500)[0]
        else:
            w = 2 * np.pi * k
            re += integrate.quad(trace, a, b, weight="cos", wvar=w, epsabs=epsabs, limit=500)[0]
            im -= integrate.quad(trace, a, b, weight="sin", wvar=w, epsabs=epsabs, limit=500)[0]
    return complex(re, im)


def block_sums(table: CoefficientTable) -> list[tuple[int, float]]:
    """``S_j = sum_{k in D_j} |c_k|``; only blocks fully inside ``|k| <= K``."""
    mags = np.abs(table.c)
    out = [(0, float(mags[table.K]))]
    j = 1
    while 2 ** j - 1 <= table.K:
        lo, hi = 2 ** (j - 1), 2 ** j
        pos = mags[table.K + lo: table.K + hi]
        neg = mags[table.K - hi + 1: table.K - lo + 1]
        out.append((j, float(pos.sum() + neg.sum())))
        j += 1
    return out


@dataclass(frozen=True)
class DecayFit:
    alpha: float
    log_C: float
    residual: float
    n_points: int
    excluded: int = 0
    block: int = 1

    @property
    def C(self) -> float:
        return float(np.exp(self.log_C))


def _block_means(k, a, block):
    nb = k.size // block
    if nb == 0:
        return k[:0].astype(float), a[:0]
    kb = k[: nb * block].reshape(nb, block).mean(axis=1)
    ab = a[: nb * block].reshape(nb, block).mean(axis=1)
    return kb, ab


def _fit(k, a, floor, block, min_points=16):
    if k.size < min_points:
        raise DecayFitError(f"only {k.size} coefficients in range; need {min_points}")
    if block > 1:
        k, a = _block_means(k.astype(float), a, block)
    keep = a > floor
    excluded = int(np.count_nonzero(~keep))
    if np.count_nonzero(keep) < max(3, min_points // block):
        raise DecayFitError(f"{excluded} of {a.size} values at the noise floor {floor:.3g}; refusing to fit")
    x, y = np.log(k[keep]), np.log(a[keep])
    slope, icpt = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    return DecayFit(float(-slope), float(icpt), resid, int(keep.sum()), excluded, block)


def fit_decay_exponent(table: CoefficientTable, k_range, block: int = 1) -> DecayFit:
    """Least-squares slope of ``log|c_k|`` against ``log k``: ``|c_k| ~ C k**-alpha``.

    ``block > 1`` fits block means of ``|c_k|`` over consecutive runs of
    ``block`` indices, which is needed when whole residue classes of ``k``
    vanish.  With ``block == 1`` values at the noise floor are excluded and
    counted in ``excluded``.
    """
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    if k_lo < 1 or k_hi > table.K or k_hi <= k_lo:
        raise DecayFitError(f"range [{k_lo}, {k_hi}] invalid for K={table.K}")
    k = np.arange(k_lo, k_hi + 1)
    mags = np.maximum(table.side(1)[k], table.side(-1)[k])
    return _fit(k, mags, table.noise_floor, block)


@dataclass(frozen=True)
class Tail:
    """Truncation tail ``sum_{|k| > K'} |c_k|`` split into computed and extrapolated parts."""

    partial: float
    remainder: float
    method: str
    extrapolated: bool

    @property
    def total(self) -> float:
        return self.partial + self.remainder

    def __float__(self) -> float:
        return self.total


def _side_remainder(table: CoefficientTable, sign: int, q: float, block: int):
    """Extrapolated ``sum_{k > K} |c_{sign k}|**q`` or ``None`` if no reliable fit."""
    a = table.side(sign) ** q
    floor = table.noise_floor ** q
    K = table.K
    lo = max(1, K // 8)
    k = np.arange(lo, K + 1)
    if np.all(a[k] <= floor):
        return 0.0
    try:
        fit = _fit(k, a[k], floor, block)
    except DecayFitError:
        return None
    if fit.alpha <= 1.0:
        return None
    return fit.C * float(special.zeta(fit.alpha, K + 1))


def _remainder(table, q, block):
    parts = [_side_remainder(table, s, q, block) for s in (1, -1)]
    if any(p is None for p in parts):
        return 0.0, "unextrapolated"
    if parts[0] == 0.0 and parts[1] == 0.0:
        return 0.0, "vanishing beyond K"
    return parts[0] + parts[1], f"power-law fit on block means (block={block}) over [K/8, K], Hurwitz zeta remainder"


def tail_bound(table: CoefficientTable, K_prime: int, block: int = 8) -> Tail:
    if not 0 <= K_prime < table.K:
        raise ValueError(f"need 0 <= K' < K (K' = {K_prime}, K = {table.K})")
    mags = np.abs(table.c)
    c = table.K
    partial = float(mags[c + K_prime + 1:].sum() + mags[: c - K_prime].sum())
    rem, method = _remainder(table, 1.0, block)
    return Tail(partial, rem, method, method != "unextrapolated")


@dataclass(frozen=True)
class EllQ:
    value: float
    partial: float
    remainder: float
    method: str


def ell_q_norm(table: CoefficientTable, q: float, extrapolate: bool = True, block: int = 8) -> EllQ:
    """``(sum |c_k|**q)**(1/q)``, optionally with the extrapolated tail."""
    if not q > 0:
        raise ValueError("q must be positive")
    partial = float(np.sum(np.abs(table.c) ** q))
    rem, method = (0.0, "not requested")
    if extrapolate:
        rem, method = _remainder(table, q, block)
    return EllQ((partial + rem) ** (1.0 / q), partial ** (1.0 / q), rem, method)


def parseval_gap(table: CoefficientTable, trace: TraceProfile, nodes: int = 2 ** 18) -> float:
    """``int |f|**2 - sum |c_k|**2`` (nonnegative up to quadrature error)."""
    _, v = trace.sample(nodes)
    return float(np.mean(np.abs(v) ** 2) - np.sum(np.abs(table.c) ** 2))

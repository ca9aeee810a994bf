"""Fractional Sobolev norms of 1-D traces and the dyadic condition on radial symbols.

The Fourier-weight norm is the periodic proxy
``(sum_k (1 + k**2)**s |c_k|**2)**(1/2)``.  Every localized trace lives in
``|x| <= 1/4``, strictly inside the period, so the proxy is equivalent to the
norm on the line.
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .cutoffs import RingCutoff, smooth_step
from .spectral import CoefficientTable, MemoryCapError, QuadratureRule, fourier_coefficients
from .symbols import RadialSymbolSpec, make_bochner_riesz
from .trace import TraceProfile, dyadic_localize

METHODS = ("fourier_weight", "square_function")
# the ladder only resolves 0.1% changes; localized traces can be tiny in mass
SOBOLEV_RULE = QuadratureRule(min_nodes=2 ** 18, check_tol=1e-4)


class LadderError(RuntimeError):
    """The K ladder reached the memory cap without converging."""

    def __init__(self, msg, last_two):
        super().__init__(msg)
        self.last_two = last_two


class JRangeError(ValueError):
    def __init__(self, msg, required):
        super().__init__(msg)
        self.required = required


class DifferentiationError(RuntimeError):
    pass


def weighted_sum(table: CoefficientTable, s: float) -> float:
    k = table.k.astype(float)
    return float(np.sum((1.0 + k * k) ** s * np.abs(table.c) ** 2))


def sobolev_norm_1d(trace: TraceProfile, s: float, K: int | None = None, rule: QuadratureRule | None = None,
                    K0: int = 64, rtol: float = 1e-3) -> float:
    """Periodic ``H^s`` norm of ``trace``.

    With ``K`` given the sum runs over ``|k| <= K``.  Otherwise ``K`` doubles
    from ``K0`` until the squared sum changes by less than ``rtol``.
    """
    rule = rule or SOBOLEV_RULE
    if K is not None:
        return math.sqrt(weighted_sum(fourier_coefficients(trace, K, rule), s))
    prev = None
    Kc = K0
    while True:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                cur = weighted_sum(fourier_coefficients(trace, Kc, rule), s)
        except MemoryCapError:
            raise LadderError(f"H^{s} ladder did not converge below the memory cap (K={Kc // 2})",
                              last_two=prev) from None
        if prev is not None:
            if cur == 0.0 or abs(cur - prev[1]) <= rtol * cur:
                return math.sqrt(cur)
            prev = (prev[1], cur)
        else:
            prev = (0.0, cur)
        Kc *= 2


def psi0(r) -> np.ndarray:
    """1 on ``|r| <= 1/2``, 0 on ``|r| >= 1``."""
    r = np.abs(np.asarray(r, dtype=float))
    return 1.0 - smooth_step((r - 0.5) / 0.5)


def psi(r) -> np.ndarray:
    """1 on ``1/2 <= |r| <= 1``, rising on ``[1/4, 1/2]``, falling on ``[1, 2]``; ``psi(0) = 0``."""
    r = np.abs(np.asarray(r, dtype=float))
    return smooth_step((r - 0.25) / 0.25) * (1.0 - smooth_step(r - 1.0))


@dataclass(frozen=True)
class SquareFunctionResult:
    value: float
    j_max: int
    truncation_change: float
    flagged: bool


def square_function_norm(trace: TraceProfile, s: float, N: int | None = None,
                         Psi0: Callable = psi0, Psi: Callable = psi, tol: float = 0.01) -> SquareFunctionResult:
    """``|| (|Psi0 piece|**2 + sum_{j>=1} (2**(j s) |Delta_j trace|)**2)**(1/2) ||_2`` on the period.

    The pieces are synthesized on ``N`` equispaced nodes.  ``truncation_change``
    is the relative change from dropping the top shell; above ``tol`` the
    result is flagged.
    """
    N = N or trace.resolution
    _, v = trace.sample(N)
    F = np.fft.fft(v)
    k = np.fft.fftfreq(N, d=1.0 / N)
    pieces = [np.abs(np.fft.ifft(Psi0(k) * F)) ** 2]
    j_max = int(math.floor(math.log2(N / 2))) + 2  # shells past this see no grid frequency
    for j in range(1, j_max + 1):
        pieces.append((2.0 ** (j * s) * np.abs(np.fft.ifft(Psi(k * 2.0 ** (-j)) * F))) ** 2)
    total = np.sum(pieces, axis=0)
    value = math.sqrt(float(np.mean(total)))
    less = math.sqrt(float(np.mean(total - pieces[-1] - pieces[-2])))
    change = 0.0 if value == 0 else (value - less) / value
    flagged = change > tol
    if flagged:
        warnings.warn(f"square function changes by {change:.2%} over the top shells; "
                      "the grid truncates the j range", RuntimeWarning, stacklevel=2)
    return SquareFunctionResult(value, j_max, change, flagged)


@dataclass(frozen=True)
class SobolevReport:
    s: float
    per_j: dict
    supremum: float
    eps: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def argmax(self) -> int | None:
        if not self.per_j:
            return None
        return max(self.per_j, key=self.per_j.get)

    def to_dict(self) -> dict:
        return {"s": self.s, "eps": self.eps, "per_j": [[int(j), v] for j, v in sorted(self.per_j.items())],
                "supremum": self.supremum, "method": self.method, "diagnostics": self.diagnostics}

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "norm"])
            for j, v in sorted(self.per_j.items()):
                w.writerow([int(j), repr(float(v))])


def required_j_range(spec: RadialSymbolSpec) -> tuple[int, int]:
    """Blocks that must be checked: the top blocks meeting the support plus a margin below."""
    lr = math.log2(spec.R)
    return (math.floor(lr) - 6, math.ceil(lr) + 2)


def condition_check(spec: RadialSymbolSpec, eps: float, j_range=None, cutoff: RingCutoff | None = None,
                    K: int | None = None, method: str = "fourier_weight",
                    rule: QuadratureRule | None = None) -> SobolevReport:
    """``sup_j ||trace of sigma * Phi(2**-j .)||_{H^{1/2 + eps}}`` over ``j_range``.

    ``K`` fixes the number of coefficients (the resolution); ``None`` runs the
    convergence ladder.  Blocks with an identically zero trace contribute 0.
    """
    if spec.m != 2:
        raise ValueError("the condition is checked for bilinear symbols (m = 2)")
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    req = required_j_range(spec)
    if j_range is None:
        j_range = req
    j0, j1 = int(j_range[0]), int(j_range[1])
    if j0 > req[0] or j1 < req[1]:
        raise JRangeError(f"j_range [{j0}, {j1}] misses part of the required range [{req[0]}, {req[1]}]", req)
    s = 0.5 + eps
    cutoff = cutoff or RingCutoff.wide()
    per_j, diag = {}, {}
    probe = np.linspace(2.0 ** -10, 0.25, 4097)
    for j in range(j0, j1 + 1):
        tr = dyadic_localize(spec, j, cutoff).trace
        if not np.any(tr(probe)):
            per_j[j] = 0.0
            continue
        with warnings.catch_warnings():
            if spec.discontinuous:
                warnings.simplefilter("ignore", RuntimeWarning)
            if method == "fourier_weight":
                per_j[j] = sobolev_norm_1d(tr, s, K=K, rule=rule)
            else:
                res = square_function_norm(tr, s, N=None if K is None else 64 * K)
                per_j[j] = res.value
                if res.flagged:
                    diag.setdefault("truncation_flagged", []).append(j)
    diag.update({"j_range": [j0, j1], "K": K, "discontinuous": spec.discontinuous})
    return SobolevReport(s, per_j, max(per_j.values()) if per_j else 0.0, eps, method, diag)


def method_equivalence_ratio(trace: TraceProfile, s: float, **kw) -> float:
    """``square_function / fourier_weight``; equivalent norms keep this bounded."""
    fw = sobolev_norm_1d(trace, s, **kw)
    sq = square_function_norm(trace, s).value
    return sq / fw if fw else float("nan")


# -- integer order radial norm ----------------------------------------------

@dataclass(frozen=True)
class RadialNorm:
    total: float
    terms: tuple
    refinement_change: float


def _derivative(g: Callable, r: np.ndarray, order: int, h: float) -> np.ndarray:
    """Central difference of the given order (error ``O(h**2)``)."""
    if order == 0:
        return g(r)
    acc = np.zeros_like(r)
    for i in range(order + 1):
        acc += (-1) ** i * math.comb(order, i) * g(r + (order / 2 - i) * h)
    return acc / h ** order


def _richardson(g, r, order, h, tol):
    d1 = _derivative(g, r, order, h)
    d2 = _derivative(g, r, order, h / 2)
    d = (4 * d2 - d1) / 3
    scale = max(float(np.max(np.abs(d))), 1.0)
    if float(np.max(np.abs(d - d2))) > tol * scale:
        raise DifferentiationError(f"order-{order} differences unstable at h={h:g}: "
                                   f"{float(np.max(np.abs(d - d2))):.3g} vs scale {scale:.3g}")
    return d


def _radial_terms(g, d, order, window, M, h, tol):
    r = np.linspace(window[0], window[1], M + 1)
    out = []
    for j in range(order + 1):
        w = r ** ((d - 2 + 2 * j) / 4)
        dj = _richardson(g, r, j, h, tol)
        out.append(math.sqrt(float(integrate.simpson((w * dj) ** 2, x=r))))
    return out


def radial_integer_sobolev(profile: Callable, d: int, order: int, k: int = 0, window=(0.25, 4.0),
                           M: int = 4096, h: float = 1e-3, tol: float = 1e-3) -> RadialNorm:
    """``sum_{j <= order} || r**((d - 2 + 2j)/4) (d/dr)**j profile(2**k r) ||_{L2(window)}``.

    ``profile`` is the radial profile in the squared radius.  Derivatives are
    Richardson-extrapolated central differences; the integral is Simpson's
    rule on ``M`` intervals and ``refinement_change`` compares against ``M/2``.
    """
    if order < 0 or d < 1:
        raise ValueError("need order >= 0 and d >= 1")

    def g(r):
        return np.asarray(profile(2.0 ** k * np.asarray(r, dtype=float)), dtype=float)

    fine = _radial_terms(g, d, order, window, M, h, tol)
    coarse = _radial_terms(g, d, order, window, M // 2, h, tol)
    total = sum(fine)
    change = abs(total - sum(coarse)) / total if total else 0.0
    return RadialNorm(total, tuple(fine), change)


def br_inner_profile(lam: float) -> Callable:
    """``(1 - r)_+**lam`` times the inner cutoff, as a function of the squared radius."""
    return make_bochner_riesz(lam, 2, 1, part="inner").profile

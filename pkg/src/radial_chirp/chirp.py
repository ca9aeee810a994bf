"""Separable chirp decomposition of a radial m-linear symbol.

With ``x = sum_j |xi_j|**2 / (2 m R**2)`` the symbol equals the periodized
trace at ``x`` whenever every ``|xi_j| <= R``; writing the trace as its
Fourier series turns ``exp(2 pi i k x)`` into a product of one factor per
argument,

    sigma(xi_1, .., xi_m) = sum_k c_k prod_j exp(i pi k |xi_j / R|**2 / m) phi(xi_j / R).

The cutoff ``phi`` must vanish for ``|xi| >= c_sup`` with
``c_sup**2 < 2 - 1/m``.  Otherwise points outside ``B(0, R)`` reach the
next period of the trace, where the series is nonzero although the symbol
is zero.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .cutoffs import BumpCutoff
from .spectral import (CoefficientTable, DecayFitError, MemoryCapError, QuadratureRule, Tail,
                       fourier_coefficients, tail_bound)
from .symbols import RadialSymbolSpec, eval_symbol
from .trace import extract_trace

log = logging.getLogger(__name__)


class AliasingGuardError(ValueError):
    pass


class TruncationError(RuntimeError):
    def __init__(self, msg, achieved_tail=None, K=None):
        super().__init__(msg)
        self.achieved_tail = achieved_tail
        self.K = K


@dataclass(frozen=True)
class ChirpDecomposition:
    spec: RadialSymbolSpec
    table: CoefficientTable = field(repr=False)
    cutoff: BumpCutoff
    tail: Tail

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def R(self) -> float:
        return self.spec.R

    @property
    def K(self) -> int:
        return self.table.K

    def order(self) -> np.ndarray:
        """Summation order: ascending ``|k|``, negative before positive."""
        ks = np.arange(1, self.K + 1)
        return np.concatenate([[0], np.stack([-ks, ks], axis=1).ravel()]).astype(np.int64)

    def multiplier(self, k, xi_sq) -> np.ndarray:
        """``sigma^k`` at squared frequency norms ``xi_sq``.

        An array ``k`` adds a leading batch axis in front of ``xi_sq``.
        """
        q = np.asarray(xi_sq, dtype=float) / self.R ** 2
        k = np.asarray(k, dtype=float)
        if k.ndim:
            k = k[..., None]
        return np.exp(1j * (np.pi / self.m) * k * q) * self.cutoff(np.sqrt(q))

    def to_dict(self) -> dict:
        return {"spec": self.spec.to_dict(), "K": self.K, "c_sup": self.cutoff.c_sup,
                "coefficients": {"re": self.table.c.real.tolist(), "im": self.table.c.imag.tolist()},
                "nodes": self.table.nodes, "rule": self.table.rule,
                "tail": {"partial": self.tail.partial, "remainder": self.tail.remainder,
                         "method": self.tail.method, "extrapolated": self.tail.extrapolated}}

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def from_json(cls, path) -> "ChirpDecomposition":
        with open(path) as fh:
            d = json.load(fh)
        c = np.asarray(d["coefficients"]["re"]) + 1j * np.asarray(d["coefficients"]["im"])
        table = CoefficientTable(c, d["K"], d["nodes"], None, d["rule"], "json",
                                 not np.any(c.imag) and np.array_equal(c, c[::-1]))
        t = d["tail"]
        return cls(RadialSymbolSpec.from_dict(d["spec"]), table, BumpCutoff(d["c_sup"]),
                   Tail(t["partial"], t["remainder"], t["method"], t["extrapolated"]))


def check_cutoff(cutoff: BumpCutoff, m: int) -> None:
    if not cutoff.guard_ok(m):
        raise AliasingGuardError(
            f"c_sup={cutoff.c_sup} violates c_sup^2 < 2 - 1/m = {2 - 1 / m:.4g}; "
            "the periodized trace would leak onto points outside the support")


def _table_for(spec, K, rule):
    return fourier_coefficients(extract_trace(spec, "even"), K, rule)


def choose_truncation(source, eps_tail: float, rule: QuadratureRule | None = None,
                      start_table: int = 4096) -> tuple[int, CoefficientTable]:
    """Smallest ``K`` on the ladder 1, 2, 4, .. whose tail is at most ``eps_tail``.

    ``source`` is a spec (coefficient tables are grown by doubling up to the
    rule's memory cap) or a fixed :class:`CoefficientTable`.  Returns ``K`` and
    the table it was judged on.  A finite spectrum returns its last nonzero
    index.
    """
    rule = rule or QuadratureRule()
    if isinstance(source, CoefficientTable):
        tables = iter([source])
    else:
        def grow():
            Kt = start_table
            while Kt <= rule.max_K():
                yield _table_for(source, Kt, rule)
                Kt *= 2
        tables = grow()
    best = None
    for table in tables:
        mags = np.maximum(table.side(1), table.side(-1))
        nz = np.nonzero(mags > table.noise_floor)[0]
        last = int(nz[-1]) if nz.size else 0
        if last < table.K // 2:
            return last, table
        K = 1
        while K < table.K:
            t = tail_bound(table, K)
            if t.extrapolated and t.total <= eps_tail:
                return K, table
            K *= 2
        # K == table.K: judge on the extrapolated remainder alone
        t = tail_bound(table, table.K - 1)
        rem = t.remainder
        best = (table.K, rem, table)
        if t.extrapolated and rem <= eps_tail:
            return table.K, table
    if best is None:
        raise MemoryCapError("no coefficient table fits under the memory cap")
    raise TruncationError(f"tail {best[1]:.3g} at K={best[0]} still exceeds {eps_tail:g} at the memory cap",
                          achieved_tail=best[1], K=best[0])


def build_decomposition(spec: RadialSymbolSpec, K: int | None = None, cutoff: BumpCutoff | None = None,
                        rule: QuadratureRule | None = None, eps_tail: float | None = None,
                        allow_unguarded: bool = False) -> ChirpDecomposition:
    """Coefficients of the even-extended trace, truncated at ``K``.

    Give either ``K`` or ``eps_tail`` (then ``K`` comes from
    :func:`choose_truncation`).  ``allow_unguarded`` admits cutoffs that break
    the aliasing guard, for experiments only.
    """
    if spec.m < 2:
        raise ValueError("the chirp decomposition needs m >= 2")
    cutoff = cutoff or BumpCutoff()
    if not allow_unguarded:
        check_cutoff(cutoff, spec.m)
    rule = rule or QuadratureRule()
    if K is None:
        if eps_tail is None:
            raise ValueError("give K or eps_tail")
        K, big = choose_truncation(spec, eps_tail, rule)
    else:
        if K < 0:
            raise ValueError("K must be >= 0")
        big = _table_for(spec, max(K, 1) * 2 if K < rule.max_K() else K, rule)
    table = big.truncate(K)
    if K < big.K:
        tail = tail_bound(big, K)
    else:
        t = tail_bound(big, K - 1) if K > 0 else Tail(0.0, 0.0, "empty", False)
        tail = Tail(0.0, t.remainder, t.method, t.extrapolated)
    return ChirpDecomposition(spec, table, cutoff, tail)


def eval_chirp(decomp: ChirpDecomposition, k: int, xi) -> complex | np.ndarray:
    xi = np.asarray(xi, dtype=float)
    sq = np.sum(xi * xi, axis=-1)
    out = decomp.multiplier(np.asarray(k), sq)
    return out[()] if np.ndim(out) == 0 else out


def localized_chirp(j: int, k: int, xi, cutoff: BumpCutoff | None = None):
    """``exp(i pi k |2**-(j+2) xi|**2 / 2) phi(2**-(j+2) xi)`` (bilinear, ``R = 2**(j+2)``)."""
    cutoff = cutoff or BumpCutoff()
    xi = np.asarray(xi, dtype=float) * 2.0 ** (-j - 2)
    q = np.sum(xi * xi, axis=-1)
    out = np.exp(1j * (np.pi / 2) * k * q) * cutoff(np.sqrt(q))
    return out[()] if np.ndim(out) == 0 else out


def _series_at(table: CoefficientTable, x: np.ndarray, block: int = 1024, chunk: int = 2048) -> np.ndarray:
    """``sum_{|k|<=K} c_k exp(2 pi i k x)`` in a fixed blocked order.

    ``exp(2 pi i (k0 + r) x) = exp(2 pi i k0 x) exp(2 pi i r x)``: the inner
    factor is shared by every block, so each chunk of points costs one
    matrix product.
    """
    K = table.K
    pos = table.c[K:]
    neg = np.conj(table.c[K::-1])
    nb = (K + 1 + block - 1) // block
    pad = nb * block - (K + 1)
    P = np.stack([np.pad(pos, (0, pad)).reshape(nb, block), np.pad(neg, (0, pad)).reshape(nb, block)])
    P[1, 0, 0] = 0.0  # c_0 is counted once
    out = np.empty(x.size, dtype=complex)
    r = np.arange(block)
    k0 = np.arange(nb) * block
    for s in range(0, x.size, chunk):
        xs = x[s:s + chunk]
        inner = np.exp(2j * np.pi * np.outer(xs, r))
        base = np.exp(2j * np.pi * np.outer(xs, k0))
        tp = inner @ P[0].T
        tn = inner @ P[1].T
        out[s:s + chunk] = np.sum(base * tp, axis=1) + np.conj(np.sum(base * tn, axis=1))
    return out


def reconstruct(decomp: ChirpDecomposition, points) -> tuple[np.ndarray, float]:
    """Truncated series ``sum_k c_k prod_j sigma^k(xi_j)`` and its sup error against the symbol.

    The product of the ``m`` chirp phases is ``exp(2 pi i k x)`` with
    ``x = sum_j |xi_j|**2 / (2 m R**2)``; the phases are combined before
    summing over ``k``.
    """
    p = np.asarray(points, dtype=float)
    if p.ndim == 2:
        p = p[..., None]
    sq = np.sum(p * p, axis=-1)  # (P, m)
    weight = np.prod(decomp.cutoff(np.sqrt(sq) / decomp.R), axis=-1)
    x = np.sum(sq, axis=-1) / (2 * decomp.m * decomp.R ** 2)
    vals = np.zeros(x.shape, dtype=complex)
    live = weight != 0
    if np.any(live):
        vals[live] = weight[live] * _series_at(decomp.table, x[live])
    truth = eval_symbol(decomp.spec, p)
    err = float(np.max(np.abs(vals - truth))) if vals.size else 0.0
    return vals, err


REGIONS = ("inside_support", "outside_ball_in_cutoff", "outside_cutoff")


def sample_regions(decomp: ChirpDecomposition, n_points: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Points of shape ``(P, m, n)`` in three regions, about a third each.

    ``inside_support``: the ball ``B(0, R)``.  ``outside_ball_in_cutoff``:
    outside ``B(0, R)`` but every ``|xi_j| < c_sup R``, where the series is
    live and must vanish.  ``outside_cutoff``: some ``|xi_j| >= c_sup R``.
    """
    m, n, R = decomp.m, decomp.spec.n, decomp.R
    c = decomp.cutoff.c_sup
    d = m * n
    counts = [n_points // 3, n_points // 3, n_points - 2 * (n_points // 3)]
    out = {}
    g = rng.standard_normal((counts[0], d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    out[REGIONS[0]] = (g * R * rng.random((counts[0], 1)) ** (1.0 / d)).reshape(-1, m, n)

    def rejection(count, half, keep):
        got = []
        while sum(len(x) for x in got) < count:
            p = rng.uniform(-half, half, (4 * count + 16, m, n))
            got.append(p[keep(p)])
        return np.concatenate(got)[:count]

    def in_cutoff(p):
        return np.all(np.linalg.norm(p, axis=-1) < c * R, axis=-1)

    out[REGIONS[1]] = rejection(counts[1], c * R,
                                lambda p: in_cutoff(p) & (np.linalg.norm(p.reshape(len(p), -1), axis=1) > R))
    out[REGIONS[2]] = rejection(counts[2], 1.5 * c * R, lambda p: ~in_cutoff(p))
    return out

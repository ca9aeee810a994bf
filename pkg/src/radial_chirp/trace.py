"""Rescaled one-dimensional traces of radial symbols.

A radial symbol supported in ``B(0, R)`` of R^{mn} is read off in the
variable ``x = |xi|**2 / (2 m R**2)``, which places its support inside
``[0, 1/(2m)]``.  Negative ``x`` is filled by even reflection (default) or by
zero.  Dyadically localized pieces ``sigma * Phi(2**-j .)`` are rescaled by
``2**(j+3)`` in the radius, which places them in ``|x| in [2**-10, 1/4]``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .cutoffs import RingCutoff
from .symbols import RadialSymbolSpec

EXTENSIONS = ("even", "zero", "full")
DEFAULT_RESOLUTION = 2 ** 16


@dataclass(frozen=True)
class TraceProfile:
    """A function on ``[-1/2, 1/2]`` used as one period of a Fourier series.

    ``func`` is evaluated at ``|x|`` for ``even`` extension, at ``x >= 0`` only
    for ``zero`` extension and at signed ``x`` for ``full`` (synthetic traces).
    """

    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    extension: str = "even"
    origin: RadialSymbolSpec | None = None
    rescale_factor: float = 1.0
    j: int | None = None
    resolution: int = DEFAULT_RESOLUTION
    discontinuous: bool = False
    label: str = ""

    def __post_init__(self):
        if self.extension not in EXTENSIONS:
            raise ValueError(f"extension must be one of {EXTENSIONS}")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.extension == "full":
            return np.asarray(self.func(x), dtype=float)
        out = np.asarray(self.func(np.abs(x)), dtype=float)
        if self.extension == "zero":
            out = np.where(x < 0, 0.0, out)
        return out

    def sample(self, N: int) -> tuple[np.ndarray, np.ndarray]:
        """Values on the symmetric periodic nodes ``n/N`` folded into ``[-1/2, 1/2)``."""
        x = np.arange(N) / N
        x[x >= 0.5] -= 1.0
        return x, self(x)

    @cached_property
    def cache(self) -> tuple[np.ndarray, np.ndarray]:
        return self.sample(self.resolution)

    def to_csv(self, path, N: int | None = None) -> None:
        x, v = self.sample(N or self.resolution)
        order = np.argsort(x)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "value"])
            for xi, vi in zip(x[order], v[order]):
                w.writerow([repr(float(xi)), repr(float(vi))])

    @classmethod
    def from_function(cls, func, extension: str = "full", label: str = "", discontinuous=False):
        return cls(func=func, extension=extension, label=label, discontinuous=discontinuous)


def extract_trace(spec: RadialSymbolSpec, extension: str = "even",
                  resolution: int = DEFAULT_RESOLUTION) -> TraceProfile:
    factor = 2.0 * spec.m * spec.R ** 2

    def func(x):
        return spec.profile(factor * np.asarray(x, dtype=float))

    # zero extension jumps at the origin unless the profile vanishes there
    jump = extension == "zero" and spec.profile(0.0) != 0
    return TraceProfile(func, extension, spec, float(np.sqrt(factor)), None, resolution,
                        spec.discontinuous or jump, f"{spec.family}:{spec.params}")


@dataclass(frozen=True)
class DyadicLocalization:
    j: int
    cutoff: RingCutoff
    trace: TraceProfile
    spec: RadialSymbolSpec

    def symbol_profile(self, t) -> np.ndarray:
        """``sigma_j = sigma * Phi(2**-j .)`` at squared radius ``t``."""
        t = np.asarray(t, dtype=float)
        return np.asarray(self.spec.profile(t)) * self.cutoff(np.sqrt(t) * 2.0 ** (-self.j))


class CutoffError(ValueError):
    pass


def check_partition_member(cutoff: RingCutoff, annulus=(0.25, 4.0), tol: float = 1e-10) -> None:
    lo, hi = cutoff.support
    if lo < annulus[0] or hi > annulus[1]:
        raise CutoffError(f"cutoff support [{lo}, {hi}] leaves the annulus {annulus}")
    r = np.geomspace(2.0 ** -6, 2.0 ** 6, 4001)
    j0, j1 = cutoff.active_range(r[0], r[-1])
    total = sum(cutoff(r * 2.0 ** (-j)) for j in range(j0, j1 + 1))
    err = float(np.max(np.abs(total - 1.0)))
    if err > tol:
        raise CutoffError(f"cutoff is not a partition member (max |sum - 1| = {err:.3g})")


def dyadic_localize(spec: RadialSymbolSpec, j: int, cutoff: RingCutoff | None = None,
                    extension: str = "even", resolution: int = DEFAULT_RESOLUTION) -> DyadicLocalization:
    cutoff = cutoff or RingCutoff.wide()
    check_partition_member(cutoff)
    radius_scale = 2.0 ** (j + 3)
    t_scale = 2.0 ** (2 * j + 6)

    def func(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(spec.profile(t_scale * x)) * cutoff(8.0 * np.sqrt(x))

    trace = TraceProfile(func, extension, spec, radius_scale, j, resolution,
                         spec.discontinuous, f"{spec.family}:{spec.params}@j={j}")
    return DyadicLocalization(j, cutoff, trace, spec)

"""Smooth cutoff functions shared by every module.

All cutoffs are built from the C-infinity transition ``h(u) = exp(-1/u)``
(``u > 0``), so a function that is "zero outside its support" evaluates to
an exact floating point zero there.  That exactness is what the support
statements in :mod:`radial_chirp.littlewood_paley` rely on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _h(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    pos = u > 0
    with np.errstate(over="ignore"):  # subnormal u: exp(-inf) = 0 is right
        out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_step(u) -> np.ndarray:
    """C-infinity step: 0 for ``u <= 0``, 1 for ``u >= 1``.

    ``S(u) = h(u) / (h(u) + h(1 - u))``; note ``S(u) + S(1 - u) == 1``.
    """
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    a = _h(u)
    b = _h(1.0 - u)
    return a / (a + b)


@dataclass(frozen=True)
class BumpCutoff:
    """Radial bump: 1 on ``|xi| <= 1`` and 0 on ``|xi| >= c_sup``.

    This is the cutoff of the chirp factors.  The transition runs linearly
    in the radius over ``[1, c_sup]``.
    """

    c_sup: float = 1.2

    def __post_init__(self):
        if not self.c_sup > 1.0:
            raise ValueError(f"c_sup must exceed 1, got {self.c_sup}")

    def __call__(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        return smooth_step((self.c_sup - r) / (self.c_sup - 1.0))

    def guard_ok(self, m: int) -> bool:
        # periodization argument stays below 1 - 1/(2m)
        return bool(self.c_sup ** 2 < 2.0 - 1.0 / m)


@dataclass(frozen=True)
class RingCutoff:
    """Dyadic ring ``Phi(r) = chi(r) - chi(2r)``.

    ``chi`` is 1 for ``r <= a`` and 0 for ``r >= b``, with the transition
    taken in ``log2 r``.  Then ``sum_j Phi(2**-j r)`` telescopes to 1 for every
    ``r > 0`` and ``Phi`` is supported in ``[a/2, b]``.

    ``RingCutoff.wide()`` fills the annulus ``[1/4, 4]``; ``RingCutoff.narrow()``
    fills ``[1/2, 2]``.
    """

    a: float = 0.5
    b: float = 4.0

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError("need 0 < a < b")

    @classmethod
    def wide(cls) -> "RingCutoff":
        return cls(0.5, 4.0)

    @classmethod
    def narrow(cls) -> "RingCutoff":
        return cls(1.0, 2.0)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a / 2.0, self.b)

    @property
    def max_overlap(self) -> int:
        """Largest number of dilates ``Phi(2**-j .)`` nonzero at one point."""
        lo, hi = self.support
        return int(np.ceil(np.log2(hi / lo)))

    def chi(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        out = np.zeros_like(r)
        out[r <= self.a] = 1.0
        mid = (r > self.a) & (r < self.b)
        lb = np.log2(self.b)
        u = (lb - np.log2(r[mid])) / (lb - np.log2(self.a))
        out[mid] = smooth_step(u)
        return out

    def __call__(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        out = self.chi(r) - self.chi(2.0 * r)
        out[r == 0] = 0.0
        return out

    def lowpass(self, r, j_max: int) -> np.ndarray:
        """``sum_{j <= j_max} Phi(2**-j r)`` in closed form; 0 at ``r = 0``."""
        r = np.abs(np.asarray(r, dtype=float))
        out = self.chi(r * 2.0 ** (-j_max))
        out[r == 0] = 0.0
        return out

    def active_range(self, r_min: float, r_max: float) -> tuple[int, int]:
        """Indices ``j`` whose dilate can be nonzero for radii in ``[r_min, r_max]``."""
        lo, hi = self.support
        return (int(np.floor(np.log2(r_min / hi))), int(np.ceil(np.log2(r_max / lo))))


def inner_outer_split(t):
    """Smooth split of the squared radius: ``(phi_2(t), phi_1(t))``.

    ``phi_1`` vanishes for ``t <= 1/4`` and is 1 for ``t >= 1/2``;
    ``phi_2 = 1 - phi_1``.
    """
    t = np.asarray(t, dtype=float)
    outer = smooth_step((t - 0.25) / 0.25)
    return 1.0 - outer, outer

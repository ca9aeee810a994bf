"""Radial symbols on R^{mn}, stored as profiles in the squared radius."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.interpolate import CubicSpline

from .cutoffs import inner_outer_split

FAMILIES = ("bochner_riesz", "modified_br", "custom")
BR_PARTS = ("full", "outer", "inner")


@dataclass(frozen=True)
class RadialSymbolSpec:
    """A compactly supported radial symbol ``sigma(xi) = profile(|xi|**2)``.

    ``params`` is family specific: ``{"lam", "part"}`` for Bochner-Riesz,
    ``{"gamma"}`` for the log-modified symbol and ``{"interp"}`` for custom
    samples.  The BR ``part`` selects the full symbol or one side of the smooth
    split at squared radius 1/4..1/2 (``outer`` vanishes near the origin,
    ``inner`` vanishes near the unit sphere).
    """

    family: str
    m: int
    n: int
    R: float
    params: dict = field(default_factory=dict)
    samples: tuple | None = None
    scale: float = 1.0  # profile(t) is evaluated at scale**2 * t

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")
        if not self.R > 0:
            raise ValueError("support radius must be positive")
        if self.family == "custom":
            t, v = (np.asarray(a, dtype=float) for a in zip(*self.samples))
            object.__setattr__(self, "_interp", _make_interp(t, v, self.params.get("interp", "linear")))

    # -- evaluation -------------------------------------------------------
    def profile(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        u = t * self.scale ** 2
        if self.family == "bochner_riesz":
            lam = self.params["lam"]
            base = np.zeros_like(u)
            inside = u < 1.0
            base[inside] = (1.0 - u[inside]) ** lam
            part = self.params.get("part", "full")
            if part != "full":
                inner, outer = inner_outer_split(u)
                base = base * (outer if part == "outer" else inner)
        elif self.family == "modified_br":
            g = self.params["gamma"]
            base = np.zeros_like(u)
            inside = u < 1.0
            base[inside] = (1.0 - np.log1p(-u[inside])) ** (-g)
        else:
            base = self._interp(u)
        out = np.where(t > self.R ** 2, 0.0, base)
        return out if out.ndim else float(out)

    # -- flags ------------------------------------------------------------
    @property
    def discontinuous(self) -> bool:
        """True when the profile jumps (Sobolev checks should expect divergence)."""
        if self.family == "bochner_riesz":
            return self.params["lam"] == 0 and self.params.get("part", "full") != "inner"
        if self.family == "custom":
            _, v = zip(*self.samples)
            return self.params.get("interp", "linear") == "linear" and abs(v[-1]) > 0
        return False

    @property
    def theorem_hypothesis_met(self) -> bool:
        if self.family == "modified_br":
            return self.params["gamma"] > 1
        if self.family == "bochner_riesz":
            return self.params["lam"] > self.m / 2 - 1
        return True

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        # R is stored unscaled; from_dict reapplies the scale
        d = {"family": self.family, "m": self.m, "n": self.n, "R": self.R * self.scale,
             "params": dict(self.params)}
        if self.samples is not None:
            d["samples"] = [list(s) for s in self.samples]
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RadialSymbolSpec":
        fam = d["family"]
        p = dict(d.get("params", {}))
        if fam == "bochner_riesz":
            spec = make_bochner_riesz(p["lam"], d["m"], d["n"], part=p.get("part", "full"))
        elif fam == "modified_br":
            spec = make_modified_br(p["gamma"], d["n"])
        elif fam == "custom":
            spec = make_custom_radial(d["samples"], d["R"], d["m"], d["n"], interp=p.get("interp", "linear"))
        else:
            raise ValueError(f"unknown family {fam!r}")
        if d.get("scale", 1.0) != 1.0:
            spec = scale_symbol(spec, d["scale"])
        return spec

    @classmethod
    def from_json(cls, text: str) -> "RadialSymbolSpec":
        return cls.from_dict(json.loads(text))


def _make_interp(t, v, order):
    if t.size < 2:
        raise ValueError("need at least two samples")
    if np.any(np.diff(t) <= 0):
        raise ValueError("sample grid must be strictly increasing in t")
    if order == "linear":
        def f(u):
            u = np.asarray(u, dtype=float)
            out = np.interp(u, t, v, left=v[0], right=0.0)
            return np.where(u > t[-1], 0.0, out)
    elif order == "cubic":
        spline = CubicSpline(t, v)

        def f(u):
            u = np.asarray(u, dtype=float)
            out = spline(np.clip(u, t[0], t[-1]))
            return np.where(u > t[-1], 0.0, out)
    else:
        raise ValueError(f"interpolation order must be 'linear' or 'cubic', got {order!r}")
    return f


def make_bochner_riesz(lam: float, m: int, n: int, part: str = "full") -> RadialSymbolSpec:
    """``(1 - t)_+**lam`` on the unit ball of R^{mn}."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if part not in BR_PARTS:
        raise ValueError(f"part must be one of {BR_PARTS}")
    return RadialSymbolSpec("bochner_riesz", m, n, 1.0, {"lam": lam, "part": part})


def make_modified_br(gamma: float, n: int) -> RadialSymbolSpec:
    """Bilinear ball indicator damped by ``(1 - log(1 - t))**-gamma``.

    Any ``gamma > 0`` is accepted; ``theorem_hypothesis_met`` reports whether
    ``gamma > 1``.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return RadialSymbolSpec("modified_br", 2, n, 1.0, {"gamma": gamma})


def make_custom_radial(samples, R: float, m: int, n: int, interp: str = "linear") -> RadialSymbolSpec:
    samples = tuple((float(t), float(v)) for t, v in samples)
    for t, v in samples:
        if t < 0 or t > R ** 2 * (1 + 1e-12):
            raise ValueError(f"sample t={t} outside [0, R^2]")
        if t >= R ** 2 and v != 0:
            raise ValueError(f"nonzero value {v} at t={t} >= R^2")
    return RadialSymbolSpec("custom", m, n, float(R), {"interp": interp}, samples)


def scale_symbol(spec: RadialSymbolSpec, factor: float) -> RadialSymbolSpec:
    """The symbol ``xi -> sigma(factor * xi)`` (support radius ``R / factor``)."""
    return RadialSymbolSpec(spec.family, spec.m, spec.n, spec.R / factor, dict(spec.params),
                            spec.samples, spec.scale * factor)


def eval_symbol(spec: RadialSymbolSpec, points) -> np.ndarray:
    """Evaluate at points of shape ``(..., m, n)``."""
    p = np.asarray(points, dtype=float)
    if p.shape[-2:] != (spec.m, spec.n):
        raise ValueError(f"points must end in shape ({spec.m}, {spec.n}), got {p.shape}")
    t = np.sum(p * p, axis=(-2, -1))
    return np.asarray(spec.profile(t))


def log2_support(spec: RadialSymbolSpec) -> int:
    """Smallest integer ``J`` with ``R <= 2**J``."""
    return math.ceil(math.log2(spec.R))

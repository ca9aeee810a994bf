"""Reconstruction error outside the ball for guarded and unguarded chirp cutoffs.

With ``c_sup = sqrt(m)`` points outside ``B(0, R)`` reach the next period
of the trace once ``m >= 3``; the guarded cutoff keeps ``c_sup**2 < 2 - 1/m``.
"""
import numpy as np

from radial_chirp.chirp import build_decomposition, reconstruct, sample_regions
from radial_chirp.cutoffs import BumpCutoff
from radial_chirp.symbols import make_bochner_riesz


def main():
    print("m  c_sup   guard  sup error outside ball")
    for m in (2, 3, 4):
        spec = make_bochner_riesz(1, m, 1)
        for c_sup in (1.2, np.sqrt(m) + 1e-9):
            cut = BumpCutoff(c_sup)
            dec = build_decomposition(spec, K=1024, cutoff=cut, allow_unguarded=True)
            pts = sample_regions(dec, 6000, np.random.default_rng(m))["outside_ball_in_cutoff"]
            _, err = reconstruct(dec, pts)
            print(f"{m}  {c_sup:.4f}  {str(cut.guard_ok(m)):5}  {err:.3e}")


if __name__ == "__main__":
    main()

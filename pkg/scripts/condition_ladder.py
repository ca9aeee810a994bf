"""Per-block H^(1/2+eps) norms under resolution doubling, smooth vs indicator symbol."""
import argparse

from radial_chirp.sobolev import condition_check
from radial_chirp.symbols import make_bochner_riesz


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps", type=float, default=0.4)
    ap.add_argument("--j", type=int, default=0)
    args = ap.parse_args()
    for lam in (1, 0):
        prev = None
        for K in (512, 1024, 2048, 4096, 8192, 16384):
            v = condition_check(make_bochner_riesz(lam, 2, 1), args.eps, K=K).per_j[args.j]
            growth = "" if prev is None else f"x{v / prev:.3f}"
            print(f"lam={lam} K={K:6d} norm={v:.6f} {growth}")
            prev = v


if __name__ == "__main__":
    main()

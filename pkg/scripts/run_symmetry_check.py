"""Commutator residuals of J_z, A_x, A_y and the o(1,2) closure under grid refinement.

    python3 scripts/run_symmetry_check.py --grids 128 256 512
"""
from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

from spinsusy.oracle import PlaneGrid, symmetry_residuals


@dataclass
class PlaneConfig:
    extent: float = 20.0
    coupling: float = 1.0
    spins: tuple[str, ...] = ("1/2", "1")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", type=int, nargs="+", default=[128, 256, 512])
    ap.add_argument("--control", action="store_true", help="random Hermitian interaction instead of mu")
    args = ap.parse_args()
    cfg = PlaneConfig()
    for s in cfg.spins:
        print(f"spin {s}{' (control)' if args.control else ''}")
        prev = None
        for n in args.grids:
            res = symmetry_residuals(s, cfg.coupling, PlaneGrid(cfg.extent, n), control=args.control)
            cells = "  ".join(f"{k}={v:.3e}" for k, v in res.items())
            if prev:
                cells += "  order " + " ".join(f"{math.log2(prev[k] / res[k]):.2f}" for k in res)
            print(f"  n={n:4d}  {cells}")
            prev = res


if __name__ == "__main__":
    main()

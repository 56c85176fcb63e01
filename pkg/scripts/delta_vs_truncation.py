#!/usr/bin/env python3
"""Four-point constants of horoball truncations across sizes.

Prints a table of delta over (base halfwidth, depth) pairs; exhaustive scans
only, so keep the sizes modest.  Certifying the constant of the untruncated
object is out of reach from finite pieces — these tables are the honest
substitute.
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from horokit.hyperbolicity import four_point_delta
from horokit.spaces import build_horoball, interval_points


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--halfwidths", type=int, nargs="+", default=[4, 8, 12])
    ap.add_argument("--depths", type=int, nargs="+", default=[2, 3, 4])
    args = ap.parse_args()
    print(f"{'halfwidth':>10s} {'depth':>6s} {'vertices':>9s} {'delta':>6s} {'secs':>6s}")
    for w in args.halfwidths:
        for depth in args.depths:
            hb = build_horoball(
                interval_points(-w, w), lambda p, q: abs(p - q), (0, depth), lmax=depth
            )
            t0 = time.time()
            est = four_point_delta(hb)
            print(
                f"{w:>10d} {depth:>6d} {len(hb):>9d} {est.delta:>6.1f} {time.time() - t0:>6.2f}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

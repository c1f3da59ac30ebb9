"""Capped strong pi_1-injectivity scans of larger disk grids.

A collapsible complex should never produce a violation. Exhaustive scans
blow up quickly past disk_grid(2), so Y and Z are capped by simplex count.
"""

import argparse
import time

from npc2.harness import ScanConfig, generate, strong_injectivity_scan


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=[2, 3])
    p.add_argument("--max-y", type=int, default=7)
    p.add_argument("--max-z", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args(argv)

    for n in args.sizes:
        c = generate("disk_grid", n=n)[0]
        t0 = time.perf_counter()
        cfg = ScanConfig(max_y_size=args.max_y, max_z_size=args.max_z, workers=args.workers)
        r = strong_injectivity_scan(c, cfg)
        dt = time.perf_counter() - t0
        print(f"disk_grid({n}): {r.verdict}, {r.pairs_tested} pairs, {r.y_candidates} Y, {r.z_candidates} Z, "
              f"{len(r.violations)} violations, {len(r.unknowns)} unknowns, {dt:.1f}s")


if __name__ == "__main__":
    main()

"""Upper and lower hemispheres of the octahedron.

The upper disk is pi_1-injective in the sphere (it is simply connected),
but meeting it with the lower disk leaves the equator, whose loop dies
in the lower disk. So the upper disk is not strongly pi_1-injective.
"""

import argparse

from npc2.harness import ScanConfig, generate, octahedron_parts, strong_injectivity_scan, verify_violation
from npc2.io import emit_report


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--format", choices=["human", "machine"], default="human")
    p.add_argument("--all-z", action="store_true", help="scan every connected Z instead of the lower disk only")
    args = p.parse_args(argv)

    c = generate("octahedron")[0]
    parts = octahedron_parts(c)
    z = None if args.all_z else [parts["lower"]]
    report = strong_injectivity_scan(c, ScanConfig(y_candidates=[parts["upper"]], z_candidates=z))
    print(emit_report(report, args.format), end="")
    if args.format == "human":
        ok = all(verify_violation(v) for v in report.violations)
        print(f"witnesses replayed: {'ok' if ok else 'FAILED'}")


if __name__ == "__main__":
    main()

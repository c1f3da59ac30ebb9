"""Print the machine-format outputs behind acceptance criteria 1-5.

Run twice (or with different ``--workers``) and diff the output to check
that reports are byte-identical.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from npc2.collapse import is_collapsible
from npc2.harness import ScanConfig, enumerate_subcomplexes, generate, octahedron_parts, strong_injectivity_scan
from npc2.homology import homology
from npc2.io import emit_report
from npc2.metric import check_link_condition


def outputs(workers: int = 1) -> str:
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    run = pool.map if pool else map
    chunks = []

    octa = generate("octahedron")[0]
    parts = octahedron_parts(octa)
    cfg = ScanConfig(y_candidates=[parts["upper"]], z_candidates=[parts["lower"]], workers=workers)
    chunks.append(emit_report(strong_injectivity_scan(octa, cfg), "machine"))

    curv = [generate("octahedron"), generate("torus_grid", n=3), generate("triangle")]
    chunks += run(lambda cm: emit_report(check_link_condition(*cm), "machine"), curv)

    disks = [generate("disk_grid", n=n)[0] for n in (1, 2, 3)] + [octa]
    chunks += run(lambda c: emit_report(is_collapsible(c), "machine"), disks)

    disk2 = generate("disk_grid", n=2)[0]
    chunks.append(emit_report(strong_injectivity_scan(disk2, ScanConfig(workers=workers)), "machine"))

    subs = [s for s in enumerate_subcomplexes(disk2) if s != disk2.full()]
    chunks += run(lambda s: emit_report(homology(s), "machine"), subs)
    if pool:
        pool.shutdown()
    return "".join(chunks)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args(argv)
    sys.stdout.write(outputs(args.workers))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Run every check over all union-closed families with full base set [n].

For each enumerated family this builds and verifies the witness chain,
runs the per-level superset-balance search, the frequency-sum bound, the
partition under both tie-breaks with exhaustive block-union verification,
and (on families without the empty set) the block-doubling condition.
Prints a summary table and exits 2 if any open-conjecture counterexample
turned up, 3 on any internal-consistency failure.

Example:
    python scripts/exhaustive_sweep.py --n 4
"""

import argparse
import sys
import time
from collections import Counter

from uclab.conjectures import check_conj21_all, check_frankl, check_reimer
from uclab.enumeration import EnumerationSpec, enumerate_union_closed
from uclab.errors import InternalConsistencyError
from uclab.families import fingerprint
from uclab.partition import build_partition, check_conj35_on_family, verify_block_unions
from uclab.witness import construct_witness_chain, verify_chain


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=4, help="base set size (1..5)")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    t0 = time.time()
    tally = Counter()
    counterexamples = []
    internal = []

    spec = EnumerationSpec(n=args.n)
    for fam in enumerate_union_closed(spec, workers=args.workers):
        tally["families"] += 1

        if not check_frankl(fam).holds:
            counterexamples.append(("frankl", fingerprint(fam)))
        for v in check_conj21_all(fam):
            tally["c21_checks"] += 1
            if not v.holds:
                counterexamples.append(("c21", fingerprint(fam)))

        try:
            certs = construct_witness_chain(fam)
            if not verify_chain(fam, certs):
                internal.append(("chain_verify", fingerprint(fam)))
            tally["certificates"] += len(certs)
        except InternalConsistencyError as exc:
            internal.append(("chain", f"{fingerprint(fam)}: {exc}"))

        if not check_reimer(fam).holds:
            internal.append(("reimer", fingerprint(fam)))

        for tie in ("min", "max"):
            part = build_partition(fam, tie)
            if not verify_block_unions(fam, part).holds:
                internal.append(("block_unions", fingerprint(fam)))
            tally["partitions"] += 1

        if 0 not in fam.member_set:
            tally["c35_checks"] += 1
            if not check_conj35_on_family(fam, "both").holds:
                counterexamples.append(("c35", fingerprint(fam)))

    dt = time.time() - t0
    for key in sorted(tally):
        print(f"{key:>14}: {tally[key]}")
    print(f"{'elapsed':>14}: {dt:.1f}s")
    if internal:
        print(f"INTERNAL FAILURES ({len(internal)}):")
        for kind, info in internal[:20]:
            print(f"  {kind}: {info}")
        return 3
    if counterexamples:
        print(f"counterexamples ({len(counterexamples)}):")
        for kind, fp in counterexamples[:20]:
            print(f"  {kind}: {fp}")
        return 2
    print("all checks clean")
    return 0


if __name__ == "__main__":
    sys.exit(main())

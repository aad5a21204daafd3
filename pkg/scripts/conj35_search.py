#!/usr/bin/env python3
"""Random search for families violating the block-doubling condition.

Samples seeded random union-closed families without the empty set, builds
the greedy partition under both tie-breaks, and reports any family whose
block sizes fail the doubling condition.  The condition is open, so a hit
is a genuine finding: it is printed as a replayable JSON payload (family
in text format plus block data) and the script exits 2.

Example:
    python scripts/conj35_search.py --trials 20000 --max-n 7
"""

import argparse
import json
import random
import sys

from uclab.families import fingerprint, make_family, union_closure, universe_of
from uclab.partition import check_conj35_on_family
from uclab.textio import family_to_text


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    hits = 0
    for trial in range(args.trials):
        rng = random.Random(args.seed + trial)
        n = rng.randint(2, args.max_n)
        full = universe_of(n)
        count = rng.randint(2, 3 * n)
        # skip the empty set: the condition is stated for families without it
        masks = [rng.randrange(1, full + 1) for _ in range(count)]
        family = union_closure(make_family(masks, full))
        verdict = check_conj35_on_family(family, "both")
        if not verdict.holds:
            hits += 1
            print(
                json.dumps(
                    {
                        "finding": "block-doubling violation",
                        "fingerprint": fingerprint(family),
                        "family": family_to_text(family),
                        "universe": n,
                        "detail": verdict.detail,
                    }
                )
            )
    if hits:
        print(f"{hits} violation(s) in {args.trials} trials", file=sys.stderr)
        return 2
    print(f"no violations in {args.trials} trials", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

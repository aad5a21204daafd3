"""Greedy max-frequency partition of a union-closed family.

The partition is built by peeling: take a most frequent element of the
remaining family (ties broken toward the smallest or largest element),
extract every remaining member containing it into the next block, and
repeat.  If the leftover is exactly {{}}, it becomes a final, label-less
block.  Every union of blocks is itself union-closed, which the
exhaustive block-union verifier re-checks subset by subset.

The size-sequence predicates operate on arbitrary positive integer
sequences, not only on sequences coming from partitions, so tabulated
examples can be reproduced verbatim:

* ``sequence_frankl_ok``: the first block is at least as large as all
  later blocks combined;
* ``sequence_corollary34_ok``: every prefix block dominates the sum of
  the blocks after it (the binding case of the subset form);
* ``sequence_conj35_ok``: every earlier block is at least twice every
  later block;
* ``mu_bound``: the iterated-halving ceiling on the tail sum implied by
  the doubling condition, always strictly below the head.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .conjectures import BLOCK_UNIONS, CONJ35, Verdict
from .errors import InputError
from .families import (
    SetFamily,
    bit,
    elements_of,
    fingerprint,
    is_union_closed,
    masks_union_closed,
)


@dataclass(frozen=True)
class Partition:
    """Ordered blocks with their peeling labels.

    Members of block i contain labels[i] and none of labels[j] for j < i.
    A final block equal to {{}} carries label None.
    """

    blocks: tuple[tuple[int, ...], ...]
    labels: tuple[int | None, ...]

    @property
    def w(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


def _require_partition_input(family: SetFamily) -> None:
    if not family.members:
        raise InputError("family is empty")
    if family.members == (0,):
        raise InputError("family {{}} cannot be partitioned")
    if not is_union_closed(family):
        raise InputError("family is not union-closed")


def build_partition(family: SetFamily, tie_break: str = "min") -> Partition:
    """Peel blocks of members sharing a most frequent remaining element.

    ``tie_break`` selects the smallest ("min") or largest ("max") element
    among those attaining the maximum frequency of the residual family.
    """
    if tie_break not in ("min", "max"):
        raise InputError(f"tie_break must be 'min' or 'max', got {tie_break!r}")
    _require_partition_input(family)
    remaining = list(family.members)
    blocks: list[tuple[int, ...]] = []
    labels: list[int | None] = []
    while remaining:
        counts: dict[int, int] = {}
        for mem in remaining:
            for e in elements_of(mem):
                counts[e] = counts.get(e, 0) + 1
        high = max(counts.values())
        candidates = [e for e, c in counts.items() if c == high]
        label = min(candidates) if tie_break == "min" else max(candidates)
        bl = bit(label)
        blocks.append(tuple(m for m in remaining if m & bl))
        labels.append(label)
        remaining = [m for m in remaining if not m & bl]
        if remaining == [0]:
            blocks.append((0,))
            labels.append(None)
            remaining = []
    return Partition(tuple(blocks), tuple(labels))


def verify_block_unions(
    family: SetFamily,
    partition: Partition,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 256,
) -> Verdict:
    """Check that every union of blocks is union-closed.

    Exhaustive mode scans all 2^w block subsets (w capped at 20); sampled
    mode checks a seeded random selection.  The property is proved for
    partitions built here, so a failing verdict means a bug.
    """
    if mode not in ("exhaustive", "sampled"):
        raise InputError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    w = partition.w
    if mode == "exhaustive" and w > 20:
        raise InputError(
            f"{w} blocks is too many for the exhaustive scan; use mode='sampled'"
        )
    flat: list[int] = []
    for block in partition.blocks:
        flat.extend(block)
    if sorted(flat) != list(family.members) or len(flat) != len(set(flat)):
        raise InputError("partition blocks do not exactly cover the family")

    if mode == "exhaustive":
        subset_masks = range(1 << w)
    else:
        rng = random.Random(seed)
        subset_masks = [rng.randrange(1 << w) for _ in range(samples)]

    checked = 0
    for smask in subset_masks:
        selection: list[int] = []
        for i in range(w):
            if smask >> i & 1:
                selection.extend(partition.blocks[i])
        checked += 1
        if not masks_union_closed(selection):
            return Verdict(
                BLOCK_UNIONS,
                fingerprint(family),
                False,
                None,
                {
                    "mode": mode,
                    "w": w,
                    "subsets_checked": checked,
                    "failing_subset": [i + 1 for i in range(w) if smask >> i & 1],
                },
            )
    return Verdict(
        BLOCK_UNIONS,
        fingerprint(family),
        True,
        f"{checked} subsets",
        {"mode": mode, "w": w, "subsets_checked": checked, "failing_subset": None},
    )


def _require_sizes(sizes: Sequence[int]) -> None:
    if any(not isinstance(s, int) or s < 1 for s in sizes):
        raise InputError("block sizes must be positive integers")


def sequence_frankl_ok(sizes: Sequence[int]) -> bool:
    """First block at least as large as all later blocks combined."""
    _require_sizes(sizes)
    if not sizes:
        return True
    return sizes[0] >= sum(sizes[1:])


def sequence_conj35_ok(sizes: Sequence[int]) -> bool:
    """Every earlier block at least twice every later block."""
    _require_sizes(sizes)
    return all(
        sizes[i] >= 2 * sizes[j]
        for i in range(len(sizes))
        for j in range(i + 1, len(sizes))
    )


def corollary34_violations(sizes: Sequence[int]) -> list[tuple[int, int, int]]:
    """All positions k where block k is smaller than the sum after it.

    Returns (k, sizes[k], suffix_sum) triples with 1-based k.
    """
    _require_sizes(sizes)
    out = []
    suffix = sum(sizes)
    for k, s in enumerate(sizes[:-1], start=1):
        suffix -= s
        if s < suffix:
            out.append((k, s, suffix))
    return out


def sequence_corollary34_ok(sizes: Sequence[int]) -> bool:
    """Every prefix block dominates the total of the blocks after it.

    This suffix-sum criterion is the binding case of quantifying over all
    earlier blocks j <= k and all subsets of later blocks; the reduction is
    exercised against the brute-force quantification in the tests.
    """
    return not corollary34_violations(sizes)


def mu_bound(seq_head: int, w: int) -> int:
    """Sum of w-1 iterated halvings of the head block size.

    Upper-bounds the tail sum of any sequence where each block is at most
    half of the previous one; always strictly below ``seq_head``.
    """
    if seq_head < 1:
        raise InputError("head block size must be positive")
    if w < 1:
        raise InputError("block count must be at least 1")
    total = 0
    cur = seq_head
    for _ in range(w - 1):
        cur //= 2
        total += cur
    return total


_POLICIES = {"all_min": ("min",), "all_max": ("max",), "both": ("min", "max")}


def check_conj35_on_family(
    family: SetFamily, tie_break_policy: str = "both"
) -> Verdict:
    """Build the partition(s) and test the block-doubling condition.

    Requires a union-closed family without the empty set as a member.  With
    policy "both" the condition must hold under both tie-breaks; a failure
    under any policy is reported as a counterexample with the full block
    data, since the condition is an open conjecture.
    """
    if tie_break_policy not in _POLICIES:
        raise InputError(
            f"tie_break_policy must be one of {sorted(_POLICIES)}, got {tie_break_policy!r}"
        )
    _require_partition_input(family)
    if 0 in family.member_set:
        raise InputError(
            "the empty set is a member; the block-doubling condition "
            "is stated only for families without it"
        )
    per_policy: dict[str, dict] = {}
    holds = True
    for tie in _POLICIES[tie_break_policy]:
        part = build_partition(family, tie_break=tie)
        ok = sequence_conj35_ok(part.sizes)
        per_policy[tie] = {
            "sizes": list(part.sizes),
            "labels": list(part.labels),
            "ok": ok,
        }
        holds = holds and ok
    failing = [tie for tie, rec in per_policy.items() if not rec["ok"]]
    return Verdict(
        CONJ35,
        fingerprint(family),
        holds,
        None if failing else "all policies",
        {"policy": tie_break_policy, "per_tie_break": per_policy, "failing": failing},
    )

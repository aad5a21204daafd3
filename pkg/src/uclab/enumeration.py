"""Exhaustive and randomized generation of union-closed families.

Exhaustive mode walks every subfamily of the full power set of [n] in
ascending candidate-index order (candidate i contains member mask j iff
bit j of i is set) and keeps the ones passing the union-closed test and
the requested constraints.  The order makes runs bit-identical, lets the
index space be split across worker processes, and supports resuming from
a plain-text checkpoint holding the last completed index.

n = 5 is allowed but is a long-running job (2^32 candidates); use the
checkpoint and worker options.  Larger n must use random sampling.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterator

from .errors import InputError
from .families import SetFamily, make_family, masks_union_closed, universe_of

EXHAUSTIVE_MAX_N = 5
CHECKPOINT_CHUNK = 1 << 24


@dataclass(frozen=True)
class EnumerationSpec:
    """Constraints for the exhaustive scan.

    ``require_full_base``: keep only families whose member union is all of
    [n].  ``exclude_empty_member``: drop families containing the empty set.
    ``exclude_trivial``: drop the family {{}} (on by default and expected
    to stay on; every consumer here assumes it).
    """

    n: int
    require_full_base: bool = True
    exclude_empty_member: bool = False
    exclude_trivial: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.n <= EXHAUSTIVE_MAX_N:
            raise InputError(
                f"exhaustive enumeration supports n in 1..{EXHAUSTIVE_MAX_N}; "
                f"use random_union_closed for larger ground sets"
            )


def _accepted_in_range(
    n: int,
    require_full_base: bool,
    exclude_empty_member: bool,
    exclude_trivial: bool,
    lo: int,
    hi: int,
) -> list[int]:
    """Candidate indices in [lo, hi) passing the closure test and constraints."""
    full = universe_of(n)
    out = []
    for idx in range(lo, hi):
        if idx == 0:  # no members at all
            continue
        if exclude_trivial and idx == 1:  # the family {{}}
            continue
        if exclude_empty_member and idx & 1:
            continue
        members = [j for j in range(full + 1) if idx >> j & 1]
        if require_full_base:
            u = 0
            for m in members:
                u |= m
            if u != full:
                continue
        if masks_union_closed(members):
            out.append(idx)
    return out


def _scan_worker(args: tuple) -> list[int]:
    return _accepted_in_range(*args)


def _read_checkpoint(path: str) -> int:
    if not os.path.exists(path):
        return -1
    text = open(path, encoding="utf-8").read().strip()
    if not text:
        return -1
    try:
        return int(text)
    except ValueError as exc:
        raise InputError(f"checkpoint file {path!r} is not an integer: {text!r}") from exc


def _family_from_index(idx: int, n: int) -> SetFamily:
    full = universe_of(n)
    return SetFamily(full, tuple(j for j in range(full + 1) if idx >> j & 1))


def enumerate_union_closed(
    spec: EnumerationSpec,
    workers: int = 1,
    checkpoint_path: str | None = None,
    chunk: int = CHECKPOINT_CHUNK,
) -> Iterator[SetFamily]:
    """Stream the requested union-closed families in ascending index order.

    With ``workers > 1`` the index space is scanned by a process pool in
    fixed chunks and results are merged in order, so output is identical
    for any worker count.  ``checkpoint_path`` records the last completed
    candidate index after each chunk and resumes past it on restart.
    """
    if workers < 1:
        raise InputError("workers must be at least 1")
    total = 1 << (1 << spec.n)
    start = 0
    if checkpoint_path is not None:
        start = _read_checkpoint(checkpoint_path) + 1
    flags = (spec.n, spec.require_full_base, spec.exclude_empty_member, spec.exclude_trivial)

    ranges = [(lo, min(lo + chunk, total)) for lo in range(start, total, chunk)]
    if workers == 1:
        chunk_results = (_accepted_in_range(*flags, lo, hi) for lo, hi in ranges)
        for (lo, hi), accepted in zip(ranges, chunk_results):
            for idx in accepted:
                yield _family_from_index(idx, spec.n)
            if checkpoint_path is not None:
                with open(checkpoint_path, "w", encoding="utf-8") as fh:
                    fh.write(f"{hi - 1}\n")
        return

    import multiprocessing

    with multiprocessing.Pool(workers) as pool:
        jobs = [(*flags, lo, hi) for lo, hi in ranges]
        for (lo, hi), accepted in zip(ranges, pool.imap(_scan_worker, jobs)):
            for idx in accepted:
                yield _family_from_index(idx, spec.n)
            if checkpoint_path is not None:
                with open(checkpoint_path, "w", encoding="utf-8") as fh:
                    fh.write(f"{hi - 1}\n")


_DENSE_SAMPLE_MAX_N = 6
_COUNT_SAMPLE_SCALE_N = 12  # sampled count ~ density * 2^min(n, this)
_COUNT_SAMPLE_CAP = 4096


def random_union_closed(
    n: int,
    member_density: float,
    seed: int,
    require_full_base: bool = True,
) -> SetFamily:
    """Seeded random union-closed family over [n].

    For n <= 6 every subset of [n] is kept independently with probability
    ``member_density``; larger ground sets draw a density-scaled, capped
    number of uniform random subsets instead.  The sample is then closed
    under unions, and [n] is added first when ``require_full_base`` is set.
    Identical arguments give identical families.
    """
    if not 1 <= n <= 64:
        raise InputError(f"ground set size {n} outside 1..64")
    if not 0.0 < member_density < 1.0:
        raise InputError(f"member density {member_density} outside (0, 1)")
    rng = random.Random(seed)
    full = universe_of(n)
    if n <= _DENSE_SAMPLE_MAX_N:
        masks = [m for m in range(full + 1) if rng.random() < member_density]
    else:
        count = round(member_density * (1 << min(n, _COUNT_SAMPLE_SCALE_N)))
        count = max(1, min(count, _COUNT_SAMPLE_CAP))
        masks = [rng.randrange(full + 1) for _ in range(count)]
    if require_full_base:
        masks.append(full)
    from .families import union_closure

    return union_closure(make_family(masks, full))


def random_family(n: int, member_count: int, seed: int) -> SetFamily:
    """Seeded random family (not closed): member_count uniform subsets of [n]."""
    if not 1 <= n <= 64:
        raise InputError(f"ground set size {n} outside 1..64")
    if member_count < 1:
        raise InputError("member_count must be positive")
    rng = random.Random(seed)
    full = universe_of(n)
    return make_family((rng.randrange(full + 1) for _ in range(member_count)), full)


CANONICAL_MAX_BASE = 8


def canonical_form(family: SetFamily) -> SetFamily:
    """Relabel the base set to minimise the sorted member-mask list.

    Tries every bijection from the base elements onto 1..k (factorial
    scan, so the base is capped at 8 elements) and keeps the
    lexicographically least sorted member tuple.  Families differing only
    by a relabeling of elements map to the same canonical form, and the
    result is a fixed point.
    """
    base_elems = [e - 1 for e in range(1, family.base.bit_length() + 1) if family.base >> (e - 1) & 1]
    k = len(base_elems)
    if k > CANONICAL_MAX_BASE:
        raise InputError(
            f"canonical_form supports base sets of up to {CANONICAL_MAX_BASE} elements"
        )
    if k == 0:
        return SetFamily(0, family.members)
    import itertools

    member_positions = [
        [i for i, src in enumerate(base_elems) if mem >> src & 1]
        for mem in family.members
    ]
    best: tuple[int, ...] | None = None
    for perm in itertools.permutations(range(k)):
        mapped = tuple(
            sorted(sum(1 << perm[i] for i in positions) for positions in member_positions)
        )
        if best is None or mapped < best:
            best = mapped
    assert best is not None
    return SetFamily(universe_of(k), best)

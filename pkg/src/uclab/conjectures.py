"""Decision procedures for the conjectures and theorems under test.

Each check takes one family and returns a :class:`Verdict`: a replayable
record of the outcome with the counts that decided it.  Checks never guess;
``holds=True`` always comes with an independently re-checkable witness and
``holds=False`` with enough detail to reproduce the violation.

The ids in :data:`THEOREM_BACKED` mark checks whose statement is proved
unconditionally; a failing verdict there means an implementation bug, not
a mathematical discovery, and the CLI reports it through a distinct exit
path.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

from .errors import InputError
from .families import (
    SetFamily,
    bit,
    elements_of,
    fingerprint,
    frequency_profile,
    is_power_set,
    is_separating,
    is_union_closed,
    mask_of,
)
from .textio import member_to_text

# conjecture ids used in verdicts and CLI flags
FRANKL = "frankl"
CONJ21 = "c21"
DOUBLETON = "c25"
REIMER = "reimer"
BLOCK_UNIONS = "t33"
CONJ35 = "c35"
CONJ41A = "c41a"
CONJ41B = "c41b"
Q23 = "q23"

#: checks whose statements are proved; a failure is an internal bug.
THEOREM_BACKED = frozenset({DOUBLETON, REIMER, BLOCK_UNIONS})


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check on one family."""

    conjecture: str
    fingerprint: str
    holds: bool
    witness: str | None
    detail: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "conjecture": self.conjecture,
                "fingerprint": self.fingerprint,
                "holds": self.holds,
                "witness": self.witness,
                "detail": self.detail,
            }
        )


def require_checkable(family: SetFamily) -> None:
    """Shared precondition of the conjecture checks.

    The family must be nonempty, different from {{}}, and union-closed.
    """
    if not family.members:
        raise InputError("family is empty; conjecture checks need members")
    if family.members == (0,):
        raise InputError("family {{}} is excluded by the standing assumption")
    if not is_union_closed(family):
        raise InputError("family is not union-closed")


_TABLE_BASE_LIMIT = 16


class _RestrictionCounter:
    """Counts members containing / disjoint from many query sets B.

    For base sets of up to 16 elements the per-mask member counts are
    expanded into superset-sum and subset-sum tables over the base, making
    each query O(1); larger bases fall back to scanning the member list.
    The table route is cross-checked against the restriction filters in
    the test suite.
    """

    def __init__(self, family: SetFamily):
        self._members = family.members
        self._base = family.base
        base_elems = elements_of(self._base)
        self._positions = {e: i for i, e in enumerate(base_elems)}
        b = len(base_elems)
        self._sup: list[int] | None = None
        self._sub: list[int] | None = None
        if b <= _TABLE_BASE_LIMIT:
            size = 1 << b
            counts = [0] * size
            for mem in self._members:
                counts[self._compact(mem)] += 1
            sup = counts[:]
            sub = counts[:]
            for i in range(b):
                step = 1 << i
                for s in range(size):
                    if s & step:
                        sub[s] += sub[s ^ step]
                    else:
                        sup[s] += sup[s | step]
            self._sup = sup
            self._sub = sub
            self._full = size - 1

    def _compact(self, mask: int) -> int:
        c = 0
        for e in elements_of(mask):
            c |= 1 << self._positions[e]
        return c

    def containing(self, b_mask: int) -> int:
        """Number of members containing every element of b_mask."""
        if b_mask & ~self._base:
            return 0
        if self._sup is not None:
            return self._sup[self._compact(b_mask)]
        return sum(1 for m in self._members if m & b_mask == b_mask)

    def disjoint(self, b_mask: int) -> int:
        """Number of members sharing no element with b_mask."""
        b_mask &= self._base
        if self._sub is not None:
            return self._sub[self._full ^ self._compact(b_mask)]
        return sum(1 for m in self._members if not m & b_mask)


def check_frankl(family: SetFamily) -> Verdict:
    """Does some base element lie in at least half of the members?

    Threshold comparison is exact integer arithmetic (2*count >= m).  The
    witness is the least qualifying element.
    """
    require_checkable(family)
    prof = frequency_profile(family)
    m = len(family.members)
    fp = fingerprint(family)
    for k in elements_of(family.base):
        c = prof.count_of(k)
        if 2 * c >= m:
            return Verdict(
                FRANKL, fp, True, str(k), {"m": m, "frequency": c}
            )
    return Verdict(
        FRANKL,
        fp,
        False,
        None,
        {
            "m": m,
            "high": prof.high(),
            "arg_high": member_to_text(prof.arg_high()),
        },
    )


def check_conj21_at(
    family: SetFamily, x: int, _counter: _RestrictionCounter | None = None
) -> Verdict:
    """Is there a B of size n+1-x with at least as many members containing
    it as avoiding it?

    Scans all candidate sets B inside the base set in lexicographic order
    of their sorted element lists and returns the first success, so the
    witness is deterministic.
    """
    require_checkable(family)
    base_elems = elements_of(family.base)
    n = len(base_elems)
    if not 1 <= x <= n:
        raise InputError(f"x={x} outside 1..{n}")
    k = n + 1 - x
    counter = _counter or _RestrictionCounter(family)
    m = len(family.members)
    fp = fingerprint(family)
    best: tuple[int, int, int] | None = None
    for combo in itertools.combinations(base_elems, k):
        b = mask_of(combo)
        a = counter.containing(b)
        d = counter.disjoint(b)
        if a >= d:
            return Verdict(
                CONJ21,
                fp,
                True,
                member_to_text(b),
                {"x": x, "n": n, "set_size": k, "containing": a, "disjoint": d, "m": m},
            )
        if best is None or a - d > best[1] - best[2]:
            best = (b, a, d)
    assert best is not None
    return Verdict(
        CONJ21,
        fp,
        False,
        None,
        {
            "x": x,
            "n": n,
            "set_size": k,
            "m": m,
            "best_b": member_to_text(best[0]),
            "containing": best[1],
            "disjoint": best[2],
        },
    )


def check_conj21_all(family: SetFamily) -> list[Verdict]:
    """One verdict per x in 1..n, sharing a counting table."""
    require_checkable(family)
    counter = _RestrictionCounter(family)
    n = family.base.bit_count()
    return [check_conj21_at(family, x, _counter=counter) for x in range(1, n + 1)]


def check_doubleton_implication(family: SetFamily) -> Verdict:
    """If some doubleton beats its avoiders, some singleton must too.

    Holds for every finite family, union-closed or not, so there is no
    precondition; a False verdict signals an implementation bug.
    """
    counter = _RestrictionCounter(family)
    base_elems = elements_of(family.base)
    fp = fingerprint(family)
    antecedent = None
    for combo in itertools.combinations(base_elems, 2):
        b = mask_of(combo)
        a = counter.containing(b)
        d = counter.disjoint(b)
        if a >= d:
            antecedent = (b, a, d)
            break
    if antecedent is None:
        return Verdict(
            DOUBLETON, fp, True, None, {"doubleton": None, "vacuous": True}
        )
    for k in base_elems:
        b = bit(k)
        a = counter.containing(b)
        d = counter.disjoint(b)
        if a >= d:
            return Verdict(
                DOUBLETON,
                fp,
                True,
                str(k),
                {
                    "doubleton": member_to_text(antecedent[0]),
                    "doubleton_counts": [antecedent[1], antecedent[2]],
                    "singleton_counts": [a, d],
                },
            )
    return Verdict(
        DOUBLETON,
        fp,
        False,
        None,
        {
            "doubleton": member_to_text(antecedent[0]),
            "doubleton_counts": [antecedent[1], antecedent[2]],
        },
    )


def reimer_sum(family: SetFamily) -> int:
    """Total frequency over the base set: sum over elements k of the number
    of members containing k (equivalently, the sum of member sizes)."""
    prof = frequency_profile(family)
    return sum(prof.counts)


REIMER_SLACK = 1e-9


def check_reimer(family: SetFamily) -> Verdict:
    """Verify the frequency-sum lower bound (m/2)*log2(m) for a nonempty
    union-closed family.  Proved unconditionally: a failure is a bug."""
    if not family.members:
        raise InputError("family is empty")
    if not is_union_closed(family):
        raise InputError("family is not union-closed")
    m = len(family.members)
    total = reimer_sum(family)
    bound = (m / 2.0) * math.log2(m)
    holds = total >= bound - REIMER_SLACK
    return Verdict(
        REIMER,
        fingerprint(family),
        holds,
        str(total) if holds else None,
        {"sum": total, "m": m, "bound": bound},
    )


def mix_lower_bound(c: float, m: int) -> float:
    """Frequency-sum lower bound for a family split by a top element held
    by a fraction c of the m members.

    Binary logarithms throughout.  At c = 1/2 this equals (m/2)*log2(m)
    exactly, and the function is strictly increasing on [1/2, 1).  The tail
    term for the part avoiding the top element is defined as 0 when its
    size (1-c)*m drops below 1, where the logarithm would go negative.
    """
    if not 0.5 <= c < 1.0:
        raise InputError(f"mix fraction c={c} outside [1/2, 1)")
    if not isinstance(m, int) or m < 1:
        raise InputError(f"member count m={m} must be a positive integer")
    cm = c * m
    rest = (1.0 - c) * m
    value = cm + (cm / 2.0) * math.log2(cm)
    if rest >= 1.0:
        value += (rest / 2.0) * math.log2(rest)
    return value


def check_conj41(family: SetFamily, variant: str) -> Verdict:
    """Power-set characterisation of maximum frequency, for separating
    union-closed families.

    variant "a": holds iff the family is a power set or some element lies
    in strictly more than half of the members.
    variant "b": holds iff (maximum frequency equals exactly half the
    members) is equivalent to (the family is a power set).
    """
    if variant not in ("a", "b"):
        raise InputError(f"variant must be 'a' or 'b', got {variant!r}")
    require_checkable(family)
    if not is_separating(family):
        raise InputError(
            "family is not separating; apply separating_quotient first"
        )
    prof = frequency_profile(family)
    high = prof.high()
    m = len(family.members)
    power = is_power_set(family)
    if variant == "a":
        holds = power or 2 * high > m
    else:
        holds = (2 * high == m) == power
    witness = str(elements_of(prof.arg_high())[0]) if holds else None
    return Verdict(
        CONJ41A if variant == "a" else CONJ41B,
        fingerprint(family),
        holds,
        witness,
        {"variant": variant, "m": m, "high": high, "power_set": power},
    )


def restriction_counter(family: SetFamily) -> _RestrictionCounter:
    """Expose the counting helper for other modules (partitioning, CLI)."""
    return _RestrictionCounter(family)

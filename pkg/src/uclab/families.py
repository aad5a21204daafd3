"""Bitmask algebra for families of finite sets.

Sets over a ground set of at most 64 numbered elements are stored as
integer bitmasks: element ``k`` occupies bit ``k - 1``, so union,
containment and disjointness are single bitwise instructions.  A family is
an immutable, deduplicated, ascending-sorted tuple of member masks plus the
mask of its ambient ground set (the *universe*).

The *base set* of a family is the union of its members.  It is always
contained in the universe and is the ground set that frequency,
restriction and separation queries refer to.  Keeping members sorted by
numeric mask value makes equality, hashing and fingerprinting canonical.

Everything here is a pure function over immutable data; families are safe
to share across threads and worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from hashlib import blake2b
from typing import Iterable, Iterator

from .errors import InputError

MAX_ELEMENTS = 64


def bit(element: int) -> int:
    """Mask of the singleton set {element}."""
    if not 1 <= element <= MAX_ELEMENTS:
        raise InputError(f"element {element} outside 1..{MAX_ELEMENTS}")
    return 1 << (element - 1)


def mask_of(elements: Iterable[int]) -> int:
    """Mask of a set given by its elements."""
    m = 0
    for e in elements:
        m |= bit(e)
    return m


def elements_of(mask: int) -> list[int]:
    """Ascending element list of a mask."""
    return [i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1]


def universe_of(n: int) -> int:
    """Mask of the ground set {1, ..., n}."""
    if not 0 <= n <= MAX_ELEMENTS:
        raise InputError(f"ground set size {n} outside 0..{MAX_ELEMENTS}")
    return (1 << n) - 1


@dataclass(frozen=True)
class SetFamily:
    """Immutable collection of distinct member sets over a fixed universe."""

    universe: int
    members: tuple[int, ...]

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def base(self) -> int:
        """Union of all members."""
        b = 0
        for m in self.members:
            b |= m
        return b

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.member_set


@dataclass(frozen=True)
class MultiFamily:
    """Family with repeated members allowed, in caller-given order."""

    universe: int
    members: tuple[int, ...]

    @cached_property
    def base(self) -> int:
        b = 0
        for m in self.members:
            b |= m
        return b

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)


def _check_universe(universe: int) -> None:
    if universe < 0 or universe.bit_length() > MAX_ELEMENTS:
        raise InputError(f"universe mask {universe:#x} does not fit in {MAX_ELEMENTS} bits")


def make_family(members: Iterable[int], universe: int) -> SetFamily:
    """Build a family: validates membership, removes duplicates, sorts."""
    _check_universe(universe)
    seen = set()
    for m in members:
        if m < 0 or m & ~universe:
            raise InputError(
                f"member mask {m:#x} (elements {elements_of(m) if m >= 0 else m}) "
                f"not contained in universe {elements_of(universe)}"
            )
        seen.add(m)
    return SetFamily(universe, tuple(sorted(seen)))


def make_multifamily(members: Iterable[int], universe: int) -> MultiFamily:
    """Build a multi-family: validates membership, keeps order and repeats."""
    _check_universe(universe)
    ms = tuple(members)
    for m in ms:
        if m < 0 or m & ~universe:
            raise InputError(
                f"member mask {m:#x} not contained in universe {elements_of(universe)}"
            )
    return MultiFamily(universe, ms)


def widen_universe(family: SetFamily, universe: int) -> SetFamily:
    """Same members over a larger universe."""
    _check_universe(universe)
    if family.universe & ~universe:
        raise InputError("new universe must contain the old one")
    return SetFamily(universe, family.members)


def masks_union_closed(members: Iterable[int]) -> bool:
    """True iff the collection of masks contains all pairwise unions."""
    ms = list(members)
    have = set(ms)
    for i, x in enumerate(ms):
        for y in ms[i + 1 :]:
            if (x | y) not in have:
                return False
    return True


def is_union_closed(family: SetFamily) -> bool:
    """True iff the union of any two members is a member."""
    return masks_union_closed(family.members)


def union_closure(family: SetFamily) -> SetFamily:
    """Smallest union-closed family containing the input.

    Extensive and idempotent; the base set is unchanged because unions
    introduce no new elements.
    """
    found = set(family.members)
    work = list(found)
    processed: list[int] = []
    while work:
        x = work.pop()
        for y in processed:
            u = x | y
            if u not in found:
                found.add(u)
                work.append(u)
        processed.append(x)
    return SetFamily(family.universe, tuple(sorted(found)))


def restrict_contains(family: SetFamily, b: int) -> SetFamily:
    """Subfamily of members containing every element of b."""
    if b & ~family.universe:
        raise InputError(f"restriction set {elements_of(b)} not within universe")
    return SetFamily(family.universe, tuple(m for m in family.members if m & b == b))


def restrict_disjoint(family: SetFamily, b: int) -> SetFamily:
    """Subfamily of members sharing no element with b."""
    if b & ~family.universe:
        raise InputError(f"restriction set {elements_of(b)} not within universe")
    return SetFamily(family.universe, tuple(m for m in family.members if not m & b))


@dataclass(frozen=True)
class FrequencyProfile:
    """Per-element membership counts of one family.

    ``counts`` is aligned with the ascending elements of ``universe``;
    entries are zero exactly for elements outside the base set.
    """

    universe: int
    m: int
    counts: tuple[int, ...]

    def count_of(self, element: int) -> int:
        b = bit(element)
        if not self.universe & b:
            raise InputError(f"element {element} outside universe")
        return self.counts[(self.universe & (b - 1)).bit_count()]

    def high(self) -> int:
        """Maximum frequency over the base set (0 for an empty base)."""
        return max(self.counts, default=0)

    def arg_high(self) -> int:
        """Mask of the base-set elements attaining the maximum frequency."""
        h = self.high()
        if h == 0:
            return 0
        elems = elements_of(self.universe)
        return mask_of(e for e, c in zip(elems, self.counts) if c == h)


def frequency_profile(family: SetFamily) -> FrequencyProfile:
    """Count, for every universe element, how many members contain it."""
    elems = elements_of(family.universe)
    counts = [0] * len(elems)
    for mem in family.members:
        for i, e in enumerate(elems):
            if mem >> (e - 1) & 1:
                counts[i] += 1
    return FrequencyProfile(family.universe, len(family.members), tuple(counts))


def _membership_patterns(family: SetFamily) -> dict[int, int]:
    """For each base element, the bitmask of member indices containing it.

    Two elements are indistinguishable exactly when their patterns match;
    the dict keeps the smallest element of each pattern class.
    """
    patterns: dict[int, int] = {}
    for k in elements_of(family.base):
        bk = bit(k)
        pat = 0
        for i, mem in enumerate(family.members):
            if mem & bk:
                pat |= 1 << i
        patterns.setdefault(pat, k)
    return patterns


def is_separating(family: SetFamily) -> bool:
    """True iff no two base elements lie in exactly the same members."""
    return len(_membership_patterns(family)) == family.base.bit_count()


def separating_quotient(family: SetFamily) -> SetFamily:
    """Collapse indistinguishable elements and relabel to consecutive ids.

    Each class of elements with identical membership patterns is replaced
    by its smallest element, and the survivors are renumbered 1..n'.  The
    member count is preserved (members are unions of whole classes), and a
    union-closed input stays union-closed.
    """
    reps = sorted(_membership_patterns(family).values())
    new_universe = universe_of(len(reps))
    new_members = []
    for mem in family.members:
        nm = 0
        for i, rep in enumerate(reps):
            if mem >> (rep - 1) & 1:
                nm |= 1 << i
        new_members.append(nm)
    return make_family(new_members, new_universe)


def join(x: SetFamily, y: SetFamily) -> SetFamily:
    """All unions of one member of x with one member of y.

    Operands must share a universe (widen first if needed).  If both
    operands are union-closed the result is union-closed as well, since
    unions of unions regroup into one union from each operand.
    """
    if x.universe != y.universe:
        raise InputError("join operands must share a universe; widen_universe first")
    members = {a | b for a in x.members for b in y.members}
    return SetFamily(x.universe, tuple(sorted(members)))


def extend_with_new_element(family: SetFamily) -> SetFamily:
    """Adjoin a fresh element z and double the family.

    z is one past the largest base element; the result is the join with
    {{z}, {}}, i.e. every member appears once as-is and once with z added.
    Every old element's frequency doubles and z lands in exactly half of
    the new members.  Preserves union-closedness and separation.
    """
    if not family.members:
        raise InputError("cannot extend an empty family")
    z = family.base.bit_length() + 1
    if z > MAX_ELEMENTS:
        raise InputError(f"universe is full: no room for element {z}")
    u = family.universe | bit(z)
    gadget = SetFamily(u, (0, bit(z)))
    return join(widen_universe(family, u), gadget)


def delete_element(family: SetFamily, k: int) -> SetFamily:
    """Remove element k from every member, merging duplicates.

    The universe is kept unchanged; deleting an element outside the base
    set is the identity.  Union-closedness is preserved.
    """
    bk = bit(k)
    if not family.universe & bk:
        raise InputError(f"element {k} outside universe")
    if not family.base & bk:
        return family
    return SetFamily(family.universe, tuple(sorted({m & ~bk for m in family.members})))


def is_power_set(family: SetFamily) -> bool:
    """True iff the members are exactly all subsets of the base set.

    Members are distinct subsets of the base, so it suffices to compare
    counts.  The family {{}} is the power set of the empty base.
    """
    return len(family.members) == 1 << family.base.bit_count()


def fingerprint(family: SetFamily | MultiFamily) -> str:
    """Stable 64-bit digest of the member list, as 16 hex digits.

    Hashes only the canonical member sequence, so equal member lists give
    equal fingerprints regardless of universe padding.
    """
    h = blake2b(digest_size=8)
    for m in family.members:
        h.update(m.to_bytes(8, "little"))
    return h.hexdigest()

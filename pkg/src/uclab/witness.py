"""Constructive witnesses for the superset-balance property.

For a union-closed family with base set of size n, a *witness chain* is a
sequence of sets C of sizes n, n-1, ... such that at least as many members
contain C as avoid it.  The chain is built step by step:

* step 1 uses the base set itself (it is a member, and at most the empty
  set avoids it);
* each later step shrinks the current C by one element.  If some y' in C
  is contained in no member that avoids the rest of C, dropping y' can
  only help (removal branch).  Otherwise every y in C has a private
  member reaching outside C, and those members can be stitched into a
  member D of exactly the right size (construction branch): cover the
  outside elements reachable from C by a set Z of members, top Z up with
  private members of |C minus Z|-many elements V, and take D as the union.

The construction branch is guaranteed to succeed while the step index
stays within the proven range (about n/3 steps); every structural claim
it relies on is asserted at runtime and raises
:class:`InternalConsistencyError` if violated, since a violation means a
bug rather than bad input.

A :class:`WitnessCertificate` records one step; certificates are
re-checkable from scratch against the family, and whole chains can be
re-validated including the linkage between consecutive steps.

The sub-multiset solver (:func:`solve_q23`) searches a multi-family for a
proper sub-collection whose removal count exceeds its union size by
exactly one.  When it succeeds, :func:`construct_witness_via_q23` turns
the solution into a witness set D, extending the constructive range to
about n/2; when it fails on a valid input, that absence is itself a
reportable research finding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, InternalConsistencyError
from .families import (
    MultiFamily,
    SetFamily,
    bit,
    elements_of,
    is_union_closed,
    mask_of,
)


def chain_length(n: int) -> int:
    """Number of witness-chain steps for base size n: min(n, ceil(n/3)+1)."""
    if n < 1:
        raise InputError("base set must be nonempty")
    return min(n, (n + 2) // 3 + 1)


@dataclass(frozen=True)
class WitnessCertificate:
    """Replayable record of one witness-chain step.

    ``x`` is the 1-based step index; ``c_set`` has size n+1-x and satisfies
    counts[0] >= counts[1], where counts are (members containing c_set,
    members disjoint from c_set).  Construction steps also carry the sets
    used to build c_set = d_set: the covering members ``z_family`` with
    union ``z_union``, the topping-up elements ``v_set``, and the union
    ``f_union`` of their private members.
    """

    x: int
    c_set: int
    branch: str  # "base" | "removal" | "construction"
    counts: tuple[int, int]
    y_prime: int | None = None
    z_family: tuple[int, ...] | None = None
    z_union: int | None = None
    v_set: int | None = None
    f_union: int | None = None
    d_set: int | None = None


@dataclass(frozen=True)
class VerifyResult:
    """Boolean verdict with a reason code on failure."""

    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _pair_counts(members: tuple[int, ...], c: int) -> tuple[int, int]:
    if c == 0:
        # every member both contains and avoids the empty set
        return len(members), len(members)
    a = 0
    d = 0
    for p in members:
        if p & c == c:
            a += 1
        elif not p & c:
            d += 1
    return a, d


def _require_chain_input(family: SetFamily) -> int:
    if not family.members:
        raise InputError("family is empty")
    if family.members == (0,):
        raise InputError("family {{}} has an empty base set")
    if not is_union_closed(family):
        raise InputError("family is not union-closed")
    return family.base.bit_count()


def _induction_step(
    family: SetFamily, c_cur: int, x_old: int
) -> tuple[WitnessCertificate, dict]:
    """Shrink the current witness set by one element.

    Returns the certificate for step x_old+1 plus a trace of the
    intermediate objects, for audit output.
    """
    members = family.members
    mset = family.member_set
    base = family.base
    n = base.bit_count()

    def fail(message: str, **extra) -> InternalConsistencyError:
        trace = {"x": x_old, "c_set": c_cur, "n": n, **extra}
        return InternalConsistencyError(message, trace)

    a_cur, d_cur = _pair_counts(members, c_cur)
    if a_cur < d_cur:
        raise fail("current witness set fails its count inequality")

    # removal branch: an element of C no member reaches privately
    for y in elements_of(c_cur):
        by = bit(y)
        if not any(p & by and p & c_cur == by for p in members):
            c_next = c_cur & ~by
            a, d = _pair_counts(members, c_next)
            if a < a_cur:
                raise fail("removal decreased the containing count", y_prime=y)
            if d != d_cur:
                raise fail("removal changed the disjoint count", y_prime=y)
            cert = WitnessCertificate(
                x=x_old + 1,
                c_set=c_next,
                branch="removal",
                counts=(a, d),
                y_prime=y,
            )
            return cert, {"x": x_old + 1, "branch": "removal", "y_prime": y}

    # construction branch: every y in C has a private member, so stitch one
    # member per uncovered outside element (Z) and one per topping element (F)
    p_family = [p for p in members if (p & c_cur).bit_count() <= 1]
    p_union = 0
    for p in p_family:
        p_union |= p
    outside_reach = p_union & ~c_cur

    z_list: list[int] = []
    z_seen: set[int] = set()
    z_for: dict[int, int] = {}
    for w in elements_of(outside_reach):
        bw = bit(w)
        z = min(p for p in p_family if p & bw)
        z_for[w] = z
        if z not in z_seen:
            z_seen.add(z)
            z_list.append(z)
    z_family = tuple(sorted(z_list))
    z_union = 0
    for z in z_family:
        z_union |= z

    x_minus = n - c_cur.bit_count()  # |[n] \ C| = x_old - 1
    if x_minus != x_old - 1:
        raise fail("witness set size inconsistent with step index")
    if outside_reach & ~z_union:
        raise fail("covering union misses reachable outside elements")
    if len(z_family) > outside_reach.bit_count() or outside_reach.bit_count() > x_minus:
        raise fail("covering family larger than the outside reach allows")
    if z_union.bit_count() > 2 * x_minus:
        raise fail("covering union exceeds twice the outside reach")

    v_size = n - x_old - z_union.bit_count()
    if v_size < 0:
        raise fail("negative topping size", z_union=z_union)
    p_without_z = p_union & ~z_union
    if p_without_z & ~c_cur:
        raise fail("elements outside C survived the covering union")
    if p_without_z.bit_count() <= v_size:
        raise fail("no room to choose the topping elements as a proper subset")
    v_elems = elements_of(p_without_z)[:v_size]
    v_set = mask_of(v_elems)

    f_union = 0
    v_choices: dict[int, int] = {}
    for v in v_elems:
        bv = bit(v)
        try:
            choice = min(p for p in members if p & bv and p & c_cur == bv)
        except ValueError:
            raise fail("topping element has no private member", v=v) from None
        v_choices[v] = choice
        f_union |= choice

    if f_union & ~(v_set | z_union):
        raise fail("private members escape the covering union")
    d_set = z_union | f_union
    if d_set != z_union | v_set:
        raise fail("union of covers and toppings disagrees")
    if d_set.bit_count() != n - x_old:
        raise fail("constructed set has the wrong size", d_set=d_set)
    if d_set not in mset:
        raise fail("constructed set is not a family member", d_set=d_set)

    a, d = _pair_counts(members, d_set)
    if a < d:
        raise fail("constructed set fails its count inequality", d_set=d_set)

    cert = WitnessCertificate(
        x=x_old + 1,
        c_set=d_set,
        branch="construction",
        counts=(a, d),
        z_family=z_family,
        z_union=z_union,
        v_set=v_set,
        f_union=f_union,
        d_set=d_set,
    )
    trace = {
        "x": x_old + 1,
        "branch": "construction",
        "p_family": p_family,
        "p_union": p_union,
        "z_for": z_for,
        "z_family": list(z_family),
        "v_choices": v_choices,
    }
    return cert, trace


def construct_witness_chain_with_trace(
    family: SetFamily,
) -> tuple[list[WitnessCertificate], list[dict]]:
    """Build the full witness chain and keep per-step intermediates."""
    n = _require_chain_input(family)
    base = family.base
    if base not in family.member_set:
        raise InternalConsistencyError(
            "union-closed family does not contain its base set", {"base": base}
        )
    counts = _pair_counts(family.members, base)
    certs = [WitnessCertificate(x=1, c_set=base, branch="base", counts=counts)]
    traces: list[dict] = [{"x": 1, "branch": "base"}]
    for x_new in range(2, chain_length(n) + 1):
        cert, trace = _induction_step(family, certs[-1].c_set, x_new - 1)
        certs.append(cert)
        traces.append(trace)
    return certs, traces


def construct_witness_chain(family: SetFamily) -> list[WitnessCertificate]:
    """Witness certificates for steps x = 1 .. min(n, ceil(n/3)+1)."""
    return construct_witness_chain_with_trace(family)[0]


def verify_certificate(family: SetFamily, cert: WitnessCertificate) -> VerifyResult:
    """Re-check one certificate from scratch.

    Recounts the members containing / avoiding c_set and validates the
    branch-specific structure that does not need the preceding step.
    Returns a falsy result with a reason code instead of raising.
    """
    base = family.base
    n = base.bit_count()
    if cert.c_set & ~base:
        return VerifyResult(False, "c_set not within base set")
    if n == 0:
        return VerifyResult(False, "family has an empty base set")
    if not 1 <= cert.x <= chain_length(n):
        return VerifyResult(False, "x beyond chain length")
    if cert.c_set.bit_count() != n + 1 - cert.x:
        return VerifyResult(False, "c_set size inconsistent with x")
    a, d = _pair_counts(family.members, cert.c_set)
    if (a, d) != tuple(cert.counts):
        return VerifyResult(False, "stored counts do not match recount")
    if a < d:
        return VerifyResult(False, "count inequality fails")

    if cert.branch == "base":
        if cert.x != 1 or cert.c_set != base:
            return VerifyResult(False, "base certificate must use the base set")
        return VerifyResult(True)

    if cert.branch == "removal":
        if cert.y_prime is None:
            return VerifyResult(False, "removal certificate missing y_prime")
        by = bit(cert.y_prime)
        if by & cert.c_set or not by & base:
            return VerifyResult(False, "y_prime must be a base element outside c_set")
        parent = cert.c_set | by
        if any(p & by and p & parent == by for p in family.members):
            return VerifyResult(False, "removal condition fails: y_prime has a private member")
        return VerifyResult(True)

    if cert.branch == "construction":
        required = (cert.z_family, cert.z_union, cert.v_set, cert.f_union, cert.d_set)
        if any(f is None for f in required):
            return VerifyResult(False, "construction certificate missing fields")
        if cert.d_set != cert.c_set:
            return VerifyResult(False, "construction c_set must equal d_set")
        if cert.d_set not in family.member_set:
            return VerifyResult(False, "D not in family")
        z_union = 0
        for z in cert.z_family:
            if z not in family.member_set:
                return VerifyResult(False, "covering set not in family")
            z_union |= z
        if z_union != cert.z_union:
            return VerifyResult(False, "z_union does not match z_family")
        if cert.z_family and cert.z_union not in family.member_set:
            return VerifyResult(False, "z_union not in family")
        if cert.v_set & cert.z_union:
            return VerifyResult(False, "topping elements overlap the covering union")
        if cert.v_set and cert.f_union not in family.member_set:
            return VerifyResult(False, "f_union not in family")
        if not cert.v_set and cert.f_union:
            return VerifyResult(False, "f_union must be empty when v_set is empty")
        if cert.f_union & cert.v_set != cert.v_set:
            return VerifyResult(False, "f_union must contain every topping element")
        if cert.f_union & ~(cert.v_set | cert.z_union):
            return VerifyResult(False, "f_union escapes covering union and toppings")
        if cert.z_union | cert.f_union != cert.d_set:
            return VerifyResult(False, "d_set is not the union of z_union and f_union")
        return VerifyResult(True)

    return VerifyResult(False, f"unknown branch {cert.branch!r}")


def verify_chain(family: SetFamily, certs: list[WitnessCertificate]) -> VerifyResult:
    """Re-check a whole chain including the linkage between steps."""
    if not certs:
        return VerifyResult(True)
    for i, cert in enumerate(certs):
        if cert.x != i + 1:
            return VerifyResult(False, f"step {i + 1}: x out of sequence")
        res = verify_certificate(family, cert)
        if not res:
            return VerifyResult(False, f"step {cert.x}: {res.reason}")
    if certs[0].branch != "base":
        return VerifyResult(False, "chain must start with a base certificate")
    for prev, cert in zip(certs, certs[1:]):
        parent = prev.c_set
        if cert.branch == "removal":
            if cert.y_prime is None or not parent & bit(cert.y_prime):
                return VerifyResult(False, f"step {cert.x}: y_prime not in parent set")
            if cert.c_set != parent & ~bit(cert.y_prime):
                return VerifyResult(False, f"step {cert.x}: removal does not match parent")
        elif cert.branch == "construction":
            assert cert.z_union is not None and cert.v_set is not None
            p_union = 0
            for p in family.members:
                if (p & parent).bit_count() <= 1:
                    p_union |= p
            if (p_union & ~parent) & ~cert.z_union:
                return VerifyResult(
                    False, f"step {cert.x}: covering union misses reachable elements"
                )
            for z in cert.z_family or ():
                if (z & parent).bit_count() > 1:
                    return VerifyResult(
                        False, f"step {cert.x}: covering member meets parent twice"
                    )
            if cert.v_set & ~parent:
                return VerifyResult(False, f"step {cert.x}: toppings leave the parent set")
            if cert.v_set & ~p_union:
                return VerifyResult(False, f"step {cert.x}: toppings are unreachable")
        else:
            return VerifyResult(False, f"step {cert.x}: unexpected branch {cert.branch!r}")
    return VerifyResult(True)


MAX_Q23_MEMBERS = 24


@dataclass(frozen=True)
class Q23Solution:
    """Proper sub-multiset whose removal count exceeds its union size by 1.

    ``indices`` point into the searched multi-family; ``union_size`` is the
    size of the union of the selected members, so
    len(family) - len(indices) == union_size + 1.
    """

    indices: tuple[int, ...]
    union_mask: int
    union_size: int

    def members(self, family: MultiFamily) -> tuple[int, ...]:
        return tuple(family.members[i] for i in self.indices)


def solve_q23(family: MultiFamily, max_members: int = MAX_Q23_MEMBERS) -> Q23Solution | None:
    """Exhaustive search for a sub-multiset with the removal/union balance.

    Requires the hypothesis len(family) > |union of family| + 1.  Scans
    index subsets by ascending cardinality and lexicographic order, so the
    first hit is the canonical solution; subsets whose running union
    already exceeds the required size are pruned.  Returns None when no
    solution exists, which on a valid input is a reportable finding.
    """
    members = family.members
    total = len(members)
    if total > max_members:
        raise InputError(
            f"multi-family has {total} members, above the search cap {max_members}"
        )
    full_union = 0
    for m in members:
        full_union |= m
    if total <= full_union.bit_count() + 1:
        raise InputError(
            "hypothesis violated: need more members than union size plus one"
        )

    for k in range(total):  # proper sub-multisets only
        target = total - k - 1
        if target > full_union.bit_count():
            continue

        # depth-first over index combinations in lexicographic order
        def search(start: int, depth: int, union: int) -> tuple[int, ...] | None:
            if union.bit_count() > target:
                return None
            if depth == k:
                return () if union.bit_count() == target else None
            # not enough indices left to reach cardinality k
            for i in range(start, total - (k - depth) + 1):
                found = search(i + 1, depth + 1, union | members[i])
                if found is not None:
                    return (i, *found)
            return None

        hit = search(0, 0, 0)
        if hit is not None:
            union = 0
            for i in hit:
                union |= members[i]
            return Q23Solution(hit, union, union.bit_count())
    return None


def construct_witness_via_q23(
    family: SetFamily, c_set: int, x: int, max_members: int = MAX_Q23_MEMBERS
) -> int | None:
    """Build a witness set D of size n-x through the sub-multiset solver.

    Collects one private member per element of C (minimal by mask value),
    strips C from each to form a multi-family over the outside elements,
    and lifts a sub-multiset solution back to the union D of the selected
    private members.  Works for x up to floor(n/2); returns None when the
    solver finds nothing, which is logged as evidence rather than an error.
    """
    n = _require_chain_input(family)
    if x > n // 2:
        raise InputError(f"x={x} beyond floor(n/2)={n // 2}; the method breaks down")
    if x < 1:
        raise InputError("x must be at least 1")
    if c_set & ~family.base:
        raise InputError("c_set must lie inside the base set")
    if c_set.bit_count() != n + 1 - x:
        raise InputError(
            f"c_set has {c_set.bit_count()} elements, expected {n + 1 - x}"
        )

    chosen: list[int] = []
    for c in elements_of(c_set):
        bc = bit(c)
        candidates = [p for p in family.members if p & bc and p & c_set == bc]
        if not candidates:
            raise InputError(
                f"element {c} has no private member; the construction premise fails"
            )
        chosen.append(min(candidates))

    stripped = tuple(s & ~c_set for s in chosen)
    multi = MultiFamily(family.universe, stripped)
    solution = solve_q23(multi, max_members=max(max_members, len(stripped)))
    if solution is None:
        return None

    d_set = 0
    for i in solution.indices:
        d_set |= chosen[i]
    if d_set.bit_count() != n - x:
        raise InternalConsistencyError(
            "lifted witness set has the wrong size",
            {"d_set": d_set, "n": n, "x": x, "indices": solution.indices},
        )
    if d_set not in family.member_set:
        raise InternalConsistencyError(
            "lifted witness set is not a family member", {"d_set": d_set}
        )
    return d_set

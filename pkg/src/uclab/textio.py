"""Plain-text family format shared by all CLI commands.

One family per line.  Members are separated by single spaces; each member
is a comma-separated ascending list of positive decimal integers, and the
bare token ``0`` denotes the empty set.  Lines starting with ``#`` are
comments.  The universe of a family is inferred as 1..max element of its
line unless a preceding header line ``#universe n`` pins it for the rest
of the file (or until the next such header).

Example line for the power set of {1, 2}::

    0 1 2 1,2

A family with no members has no line representation; writers reject it.
"""

from __future__ import annotations

import re
from typing import IO, Iterable, Iterator

from .errors import InputError
from .families import (
    MultiFamily,
    SetFamily,
    elements_of,
    make_family,
    make_multifamily,
    universe_of,
)

_UNIVERSE_RE = re.compile(r"#\s*universe\s+(\d+)\s*$")


class ParseError(InputError):
    """Malformed family text; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def member_to_text(mask: int) -> str:
    """Render one member in the text format (``0`` for the empty set)."""
    if mask == 0:
        return "0"
    return ",".join(str(e) for e in elements_of(mask))


def member_from_text(token: str, line_no: int = 0) -> int:
    """Parse one member token; elements must be positive and ascending."""
    if token == "0":
        return 0
    mask = 0
    prev = 0
    for part in token.split(","):
        if not part.isdigit():
            raise ParseError(f"bad member token {token!r}", line_no)
        e = int(part)
        if e <= 0 or e <= prev:
            raise ParseError(
                f"member token {token!r} must list positive elements in ascending order",
                line_no,
            )
        if e > 64:
            raise ParseError(f"element {e} exceeds the 64-element capacity", line_no)
        mask |= 1 << (e - 1)
        prev = e
    return mask


def family_to_text(family: SetFamily | MultiFamily) -> str:
    """Render a family as one line, members in stored order."""
    if not family.members:
        raise InputError("the empty family has no text representation")
    return " ".join(member_to_text(m) for m in family.members)


def _parse_lines(lines: Iterable[str]) -> Iterator[tuple[int, list[int], int | None]]:
    """Yield (line_no, member masks, universe override or None) per family line."""
    override: int | None = None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _UNIVERSE_RE.match(line)
            if m:
                n = int(m.group(1))
                if not 1 <= n <= 64:
                    raise ParseError(f"universe size {n} outside 1..64", line_no)
                override = universe_of(n)
            continue
        masks = [member_from_text(tok, line_no) for tok in line.split()]
        yield line_no, masks, override


def _line_universe(masks: list[int], override: int | None, line_no: int) -> int:
    if override is not None:
        for m in masks:
            if m & ~override:
                raise ParseError(
                    f"member {member_to_text(m)} outside declared universe", line_no
                )
        return override
    u = 0
    for m in masks:
        u |= m
    # inferred ground set is 1..max element
    return universe_of(u.bit_length())


def iter_families(lines: Iterable[str]) -> Iterator[SetFamily]:
    """Parse family lines (deduplicated, sorted) from an iterable of lines."""
    for line_no, masks, override in _parse_lines(lines):
        yield make_family(masks, _line_universe(masks, override, line_no))


def iter_multifamilies(lines: Iterable[str]) -> Iterator[MultiFamily]:
    """Parse multi-family lines (order and repetition preserved)."""
    for line_no, masks, override in _parse_lines(lines):
        yield make_multifamily(masks, _line_universe(masks, override, line_no))


def read_families(path: str) -> list[SetFamily]:
    with open(path, encoding="utf-8") as fh:
        return list(iter_families(fh))


def read_multifamilies(path: str) -> list[MultiFamily]:
    with open(path, encoding="utf-8") as fh:
        return list(iter_multifamilies(fh))


def write_families(
    out: IO[str], families: Iterable[SetFamily], universe_size: int | None = None
) -> None:
    """Write families one per line, with an optional ``#universe`` header."""
    if universe_size is not None:
        out.write(f"#universe {universe_size}\n")
    for fam in families:
        out.write(family_to_text(fam) + "\n")

"""Square arrays over a group, the exact verifier, translations, and block export.

The verifier is the ground truth for the whole package: every construction is
required to pass it before a square is handed to a caller.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import FormatError
from .groups import Element, GroupSpec, Isomorphism, parse_group, solve_congruence


@dataclass(frozen=True)
class Square:
    """An n x n array of group elements; ``cells[i][j]`` with 0-based indices."""

    spec: GroupSpec
    cells: tuple[tuple[Element, ...], ...]

    @property
    def n(self) -> int:
        return len(self.cells)

    @classmethod
    def from_rows(cls, spec: GroupSpec, rows: Sequence[Sequence[Sequence[int]]]) -> "Square":
        n = len(rows)
        out = []
        for row in rows:
            if len(row) != n:
                raise FormatError("square rows must all have the same length")
            out.append(tuple(spec.element(c) for c in row))
        return cls(spec, tuple(out))

    def flat(self):
        for row in self.cells:
            yield from row

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "n": self.n,
            "cells": [[list(c) for c in row] for row in self.cells],
        }


@dataclass(frozen=True)
class SumsReport:
    """All 2n+2 line sums plus the derived magic flags."""

    row_sums: tuple[Element, ...]
    col_sums: tuple[Element, ...]
    diag_sum: Element
    antidiag_sum: Element
    distinct: bool
    is_magic: bool
    constant: Optional[Element]
    is_zero_sum: bool

    def to_json(self) -> dict:
        return {
            "row_sums": [list(s) for s in self.row_sums],
            "col_sums": [list(s) for s in self.col_sums],
            "diag_sum": list(self.diag_sum),
            "antidiag_sum": list(self.antidiag_sum),
            "distinct": self.distinct,
            "is_magic": self.is_magic,
            "constant": list(self.constant) if self.constant is not None else None,
            "is_zero_sum": self.is_zero_sum,
        }


def verify(square: Square) -> SumsReport:
    """Exact line sums and distinctness; pure and total for well-formed squares.

    The main diagonal takes cells (i, i); the antidiagonal takes (i, n-1-i).
    """
    spec = square.spec
    n = square.n
    if spec.order != n * n:
        raise FormatError(f"group order {spec.order} is not side^2 = {n * n}")
    for row in square.cells:
        for c in row:
            if not spec.contains(c):
                raise FormatError(f"cell {c} is not a reduced element of {spec.name()}")
    row_sums = tuple(spec.sum(row) for row in square.cells)
    col_sums = tuple(spec.sum(square.cells[i][j] for i in range(n)) for j in range(n))
    diag = spec.sum(square.cells[i][i] for i in range(n))
    anti = spec.sum(square.cells[i][n - 1 - i] for i in range(n))
    distinct = len(set(square.flat())) == spec.order
    sums = set(row_sums) | set(col_sums) | {diag, anti}
    is_magic = distinct and len(sums) == 1
    constant = row_sums[0] if is_magic else None
    return SumsReport(
        row_sums=row_sums,
        col_sums=col_sums,
        diag_sum=diag,
        antidiag_sum=anti,
        distinct=distinct,
        is_magic=is_magic,
        constant=constant,
        is_zero_sum=is_magic and constant == spec.zero(),
    )


def translate(square: Square, x: Element) -> Square:
    """Shift every cell by x; a magic constant mu becomes mu + n*x."""
    spec = square.spec
    if not spec.contains(tuple(x)):
        raise FormatError(f"{x} is not an element of {spec.name()}")
    if not verify(square).is_magic:
        raise FormatError("translate requires a magic square")
    shifted = tuple(tuple(spec.add(c, tuple(x)) for c in row) for row in square.cells)
    return Square(spec, shifted)


def zero_translate(square: Square) -> Optional[Square]:
    """Translate a magic square to zero constant, or None when impossible.

    Solves n*x = -mu one coordinate at a time; a coordinate fails exactly when
    gcd(n, m_i) does not divide mu_i.  Among all solutions the lexicographically
    smallest x is used.
    """
    report = verify(square)
    if not report.is_magic:
        raise FormatError("zero_translate requires a magic square")
    spec = square.spec
    n = square.n
    x = []
    for mu_i, m in zip(report.constant, spec.moduli):
        xi = solve_congruence(n, (-mu_i) % m, m)
        if xi is None:
            return None
        x.append(xi)
    return translate(square, tuple(x))


@dataclass(frozen=True)
class DesignBlock:
    kind: str  # row | column | diagonal | antidiagonal
    index: int
    elements: tuple[Element, ...]


@dataclass(frozen=True)
class DesignBlocks:
    """The 2n+2 lines of a zero-sum square, each a zero-sum block."""

    spec: GroupSpec
    blocks: tuple[DesignBlock, ...]

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "blocks": [
                {"kind": b.kind, "index": b.index, "elements": [list(e) for e in b.elements]}
                for b in self.blocks
            ],
        }


def export_blocks(square: Square) -> DesignBlocks:
    """Rows, columns and both diagonals of a verified zero-sum square."""
    report = verify(square)
    if not report.is_zero_sum:
        raise FormatError("export_blocks requires a zero-sum magic square")
    n = square.n
    blocks = []
    for i, row in enumerate(square.cells):
        blocks.append(DesignBlock("row", i, tuple(row)))
    for j in range(n):
        blocks.append(DesignBlock("column", j, tuple(square.cells[i][j] for i in range(n))))
    blocks.append(DesignBlock("diagonal", 0, tuple(square.cells[i][i] for i in range(n))))
    blocks.append(DesignBlock("antidiagonal", 0, tuple(square.cells[i][n - 1 - i] for i in range(n))))
    return DesignBlocks(square.spec, tuple(blocks))


def map_square(square: Square, iso: Isomorphism) -> Square:
    """Transport a square through an additive isomorphism, cell by cell."""
    if square.spec.moduli != iso.source.moduli:
        raise FormatError("square spec does not match the isomorphism source")
    cells = tuple(tuple(iso.forward(c) for c in row) for row in square.cells)
    return Square(iso.target, cells)


# ---------------------------------------------------------------------------
# serialization


def square_from_json(obj: dict) -> Square:
    try:
        spec = GroupSpec(tuple(int(m) for m in obj["group"]["moduli"]))
        n = int(obj["n"])
        cells = obj["cells"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad square JSON: {exc!r}") from exc
    if len(cells) != n:
        raise FormatError("square JSON: cell matrix does not match n")
    return Square.from_rows(spec, cells)


_TUPLE = re.compile(r"\(([^()]*)\)")
_BARE = re.compile(r"[+-]?\d+")


def render_text(square: Square) -> str:
    """Group name on the first line, then one row per line of (a,b) tuples.

    Rank-1 groups print bare residues, matching the usual way cyclic squares
    are written.
    """
    lines = [square.spec.name()]
    for row in square.cells:
        if square.spec.rank == 1:
            lines.append(" ".join(str(c[0]) for c in row))
        else:
            lines.append(" ".join("(" + ",".join(str(x) for x in c) + ")" for c in row))
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> Square:
    """Inverse of render_text; '|' is accepted as an alternate row separator."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty square text")
    spec = parse_group(lines[0])
    body = "\n".join(lines[1:])
    rows_raw = [r for r in re.split(r"[\n|]", body) if r.strip()]
    rows = []
    for raw in rows_raw:
        tuples = _TUPLE.findall(raw)
        if tuples:
            row = [[int(x) for x in t.split(",")] for t in tuples]
        else:
            row = [[int(x)] for x in _BARE.findall(raw)]
        rows.append(row)
    if not rows:
        raise FormatError("square text has no rows")
    return Square.from_rows(spec, rows)


def load_square(text: str) -> Square:
    """Parse a square from JSON or pretty text, sniffing the format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return square_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad square JSON: {exc}") from exc
    return parse_text(text)

"""Classical integer magic squares for every side n > 2.

Three standard constructions, fixed per residue of n so output is deterministic:
Siamese for odd n, the quadrant-complement pattern for n divisible by 4, and
Conway's LUX arrangement for singly even n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError, ImpossibleError


@dataclass(frozen=True)
class IntSquare:
    n: int
    cells: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"n": self.n, "cells": [list(r) for r in self.cells]}


def _siamese(n: int) -> list[list[int]]:
    grid = [[0] * n for _ in range(n)]
    i, j = 0, n // 2
    for t in range(1, n * n + 1):
        grid[i][j] = t
        ni, nj = (i - 1) % n, (j + 1) % n
        if grid[ni][nj]:
            ni, nj = (i + 1) % n, j
        i, j = ni, nj
    return grid


def _doubly_even(n: int) -> list[list[int]]:
    grid = [[i * n + j + 1 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            # invert on the two diagonals of each 4x4 tile
            if (i % 4 == j % 4) or (i % 4 + j % 4 == 3):
                grid[i][j] = n * n + 1 - grid[i][j]
    return grid


_LUX_OFFSETS = {
    "L": ((4, 1), (2, 3)),
    "U": ((1, 4), (2, 3)),
    "X": ((1, 4), (3, 2)),
}


def _lux(n: int) -> list[list[int]]:
    m = n // 2  # odd
    k = (m - 1) // 2
    labels = [["L"] * m for _ in range(m)]
    labels[k + 1] = ["U"] * m
    for r in range(k + 2, m):
        labels[r] = ["X"] * m
    # swap the centre U with the L above it
    labels[k][m // 2], labels[k + 1][m // 2] = "U", "L"
    small = _siamese(m)
    grid = [[0] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            base = 4 * (small[i][j] - 1)
            off = _LUX_OFFSETS[labels[i][j]]
            for u in range(2):
                for v in range(2):
                    grid[2 * i + u][2 * j + v] = base + off[u][v]
    return grid


def integer_ms(n: int, allow_trivial: bool = False) -> IntSquare:
    """A magic square on 1..n^2 with constant n(n^2+1)/2; requires n >= 3.

    n = 1 is available behind ``allow_trivial``; sides 2 (and 1 without the
    flag) do not exist.
    """
    if n == 1:
        if allow_trivial:
            return IntSquare(1, ((1,),))
        raise ImpossibleError("side-1 square is trivial; pass allow_trivial=True")
    if n < 1 or n == 2:
        raise ImpossibleError(f"no magic square of side {n} exists")
    if n % 2 == 1:
        grid = _siamese(n)
    elif n % 4 == 0:
        grid = _doubly_even(n)
    else:
        grid = _lux(n)
    return IntSquare(n, tuple(tuple(r) for r in grid))


def zero_based(sq: IntSquare) -> IntSquare:
    """Shift entries to 0..n^2-1; every line sum drops by n to n(n^2-1)/2."""
    return IntSquare(sq.n, tuple(tuple(x - 1 for x in row) for row in sq.cells))


def verify_int(sq: IntSquare, base: int = 1) -> int:
    """Check entries are exactly base..base+n^2-1 with equal line sums; return the constant."""
    n = sq.n
    entries = [x for row in sq.cells for x in row]
    if sorted(entries) != list(range(base, base + n * n)):
        raise FormatError("entries are not the expected consecutive range")
    sums = {sum(row) for row in sq.cells}
    sums |= {sum(sq.cells[i][j] for i in range(n)) for j in range(n)}
    sums.add(sum(sq.cells[i][i] for i in range(n)))
    sums.add(sum(sq.cells[i][n - 1 - i] for i in range(n)))
    if len(sums) != 1:
        raise FormatError(f"line sums differ: {sorted(sums)}")
    return sums.pop()

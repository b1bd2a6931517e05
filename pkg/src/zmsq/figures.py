"""Embedded reference squares.

These are the hand-checked base squares the power-of-two constructions grow
from, plus the small translation examples.  Names encode group and side;
``mu`` records the magic constant each square verifies to.
"""

from __future__ import annotations

from .errors import FormatError
from .groups import GroupSpec, iso_between
from .squares import Square, map_square

_FIGS: dict[str, tuple[tuple[int, ...], tuple, list]] = {
    # ---- side-4 zero-sum base squares -------------------------------------
    "zms_z2z8_4": (
        (2, 8),
        (0, 0),
        [
            [(0, 2), (0, 0), (1, 2), (1, 4)],
            [(1, 6), (1, 0), (0, 6), (0, 4)],
            [(1, 1), (1, 7), (1, 3), (1, 5)],
            [(0, 7), (0, 1), (0, 5), (0, 3)],
        ],
    ),
    "zms_z4z4_4": (
        (4, 4),
        (0, 0),
        [
            [(2, 0), (0, 1), (3, 0), (3, 3)],
            [(2, 3), (0, 2), (1, 1), (1, 2)],
            [(1, 0), (1, 3), (0, 0), (2, 1)],
            [(3, 1), (3, 2), (0, 3), (2, 2)],
        ],
    ),
    "zms_z2z2z4_4": (
        (2, 2, 4),
        (0, 0, 0),
        [
            [(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 3)],
            [(0, 0, 3), (0, 0, 2), (1, 0, 1), (1, 0, 2)],
            [(1, 1, 0), (1, 1, 3), (0, 1, 0), (0, 1, 1)],
            [(1, 1, 1), (1, 1, 2), (0, 1, 3), (0, 1, 2)],
        ],
    ),
    "zms_z2z2z2z2_4": (
        (2, 2, 2, 2),
        (0, 0, 0, 0),
        [
            [(0, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1), (0, 1, 0, 1)],
            [(1, 1, 0, 0), (1, 0, 0, 0), (1, 1, 0, 1), (1, 0, 0, 1)],
            [(0, 0, 1, 0), (0, 1, 1, 0), (0, 0, 1, 1), (0, 1, 1, 1)],
            [(1, 1, 1, 0), (1, 0, 1, 0), (1, 1, 1, 1), (1, 0, 1, 1)],
        ],
    ),
    # ---- side-8 zero-sum squares ------------------------------------------
    "zms_z8z8_8": (
        (8, 8),
        (0, 0),
        [
            [(0, 2), (0, 0), (4, 2), (4, 4), (1, 2), (3, 0), (5, 2), (7, 4)],
            [(4, 6), (4, 0), (0, 6), (0, 4), (7, 6), (5, 0), (3, 6), (1, 4)],
            [(4, 1), (4, 7), (4, 3), (4, 5), (5, 1), (7, 7), (5, 3), (7, 5)],
            [(0, 7), (0, 1), (0, 5), (0, 3), (3, 7), (1, 1), (3, 5), (1, 3)],
            [(3, 2), (1, 0), (7, 2), (5, 4), (2, 2), (2, 0), (6, 2), (6, 4)],
            [(5, 6), (7, 0), (1, 6), (3, 4), (6, 6), (6, 0), (2, 6), (2, 4)],
            [(7, 1), (5, 7), (7, 3), (5, 5), (6, 1), (6, 7), (6, 3), (6, 5)],
            [(1, 7), (3, 1), (1, 5), (3, 3), (2, 7), (2, 1), (2, 5), (2, 3)],
        ],
    ),
    "zms_z2z32_8": (
        (2, 32),
        (0, 0),
        [
            [(0, 8), (0, 0), (1, 8), (1, 16), (0, 1), (0, 31), (0, 5), (0, 27)],
            [(1, 24), (1, 0), (0, 24), (0, 16), (1, 31), (1, 1), (1, 27), (1, 5)],
            [(1, 4), (1, 28), (1, 12), (1, 20), (0, 11), (0, 21), (0, 15), (0, 17)],
            [(0, 28), (0, 4), (0, 20), (0, 12), (1, 21), (1, 11), (1, 17), (1, 15)],
            [(0, 3), (0, 29), (0, 7), (0, 25), (0, 2), (0, 30), (0, 6), (0, 26)],
            [(1, 29), (1, 3), (1, 25), (1, 7), (1, 30), (1, 2), (1, 26), (1, 6)],
            [(0, 9), (0, 23), (0, 13), (0, 19), (0, 10), (0, 22), (0, 14), (0, 18)],
            [(1, 23), (1, 9), (1, 19), (1, 13), (1, 22), (1, 10), (1, 18), (1, 14)],
        ],
    ),
    "zms_z2z2z16_8": (
        (2, 2, 16),
        (0, 0, 0),
        [
            [(0, 0, 0), (0, 0, 4), (1, 0, 0), (1, 0, 12), (0, 0, 1), (0, 0, 15), (1, 0, 1), (1, 0, 15)],
            [(0, 0, 12), (0, 0, 8), (1, 0, 4), (1, 0, 8), (0, 0, 9), (0, 0, 7), (1, 0, 9), (1, 0, 7)],
            [(1, 1, 0), (1, 1, 12), (0, 1, 0), (0, 1, 4), (1, 1, 15), (1, 1, 1), (0, 1, 15), (0, 1, 1)],
            [(1, 1, 4), (1, 1, 8), (0, 1, 12), (0, 1, 8), (1, 1, 7), (1, 1, 9), (0, 1, 7), (0, 1, 9)],
            [(0, 0, 2), (0, 0, 14), (1, 0, 2), (1, 0, 14), (0, 0, 3), (0, 0, 13), (1, 0, 3), (1, 0, 13)],
            [(0, 0, 10), (0, 0, 6), (1, 0, 10), (1, 0, 6), (0, 0, 11), (0, 0, 5), (1, 0, 11), (1, 0, 5)],
            [(1, 1, 14), (1, 1, 2), (0, 1, 14), (0, 1, 2), (1, 1, 13), (1, 1, 3), (0, 1, 13), (0, 1, 3)],
            [(1, 1, 6), (1, 1, 10), (0, 1, 6), (0, 1, 10), (1, 1, 5), (1, 1, 11), (0, 1, 5), (0, 1, 11)],
        ],
    ),
    # ---- translation examples ---------------------------------------------
    "ms_z9_3_mu3": (
        (9,),
        (3,),
        [[(7,), (0,), (5,)], [(2,), (4,), (6,)], [(3,), (8,), (1,)]],
    ),
    "zms_z9_3": (
        (9,),
        (0,),
        [[(0,), (2,), (7,)], [(4,), (6,), (8,)], [(5,), (1,), (3,)]],
    ),
    "ms_z2z8_4_mu06": (
        (2, 8),
        (0, 6),
        [
            [(0, 0), (0, 1), (0, 3), (0, 2)],
            [(0, 7), (0, 6), (0, 4), (0, 5)],
            [(1, 0), (1, 1), (1, 3), (1, 2)],
            [(1, 7), (1, 6), (1, 4), (1, 5)],
        ],
    ),
}


def names() -> list[str]:
    return list(_FIGS)


def figure(name: str) -> Square:
    if name not in _FIGS:
        raise FormatError(f"unknown figure {name!r}")
    moduli, _, rows = _FIGS[name]
    return Square.from_rows(GroupSpec(moduli), rows)


def figure_constant(name: str) -> tuple:
    return _FIGS[name][1]


def figures_for(spec: GroupSpec, n: int) -> list[tuple[str, Square]]:
    """Embedded squares of side n over groups isomorphic to ``spec``,
    transported onto the requested presentation."""
    out = []
    for name, (moduli, _, rows) in _FIGS.items():
        if len(rows) != n:
            continue
        src = GroupSpec(moduli)
        if not src.is_isomorphic(spec):
            continue
        sq = figure(name)
        if moduli != spec.moduli:
            sq = map_square(sq, iso_between(src, spec))
        out.append((name, sq))
    return out

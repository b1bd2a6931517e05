"""Kotzig arrays, complete mappings, and zero-sum partitions.

A j x |G| Kotzig array has permutation rows and equal column sums; everything
here is normalized so all column sums are the identity.  Such arrays exist
exactly when j > 1 and (j is even or G has odd order or at least two
involutions); the odd-j case rides on a complete mapping.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

from .certificate import ImpossibilityCertificate
from .errors import BudgetError, BuildError, FormatError, ImpossibleError
from .groups import Element, GroupSpec, classify

DEFAULT_BUDGET = 10_000_000


def _ensure_recursion_room(depth: int) -> None:
    if sys.getrecursionlimit() < depth:
        sys.setrecursionlimit(depth)


@dataclass(frozen=True)
class KotzigArray:
    """Rows are permutations of the group; all column sums are the identity.

    When ``group_size`` is set, every row additionally splits into consecutive
    zero-sum groups of that size.
    """

    spec: GroupSpec
    cells: tuple[tuple[Element, ...], ...]
    group_size: Optional[int] = None

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "group_size": self.group_size,
            "cells": [[list(e) for e in row] for row in self.cells],
        }


def check_kotzig(arr: KotzigArray) -> None:
    """Raise unless the array satisfies every Kotzig invariant it claims."""
    spec = arr.spec
    order = spec.order
    zero = spec.zero()
    for row in arr.cells:
        if len(row) != order or len(set(row)) != order:
            raise BuildError("row is not a permutation of the group")
    for j in range(order):
        if spec.sum(arr.cells[i][j] for i in range(arr.rows)) != zero:
            raise BuildError(f"column {j} does not sum to the identity")
    if arr.group_size is not None:
        g = arr.group_size
        if g < 1 or order % g:
            raise BuildError("group_size does not divide the row length")
        for row in arr.cells:
            for start in range(0, order, g):
                if spec.sum(row[start : start + g]) != zero:
                    raise BuildError("a row group does not sum to the identity")


@dataclass(frozen=True)
class CompleteMapping:
    """Permutation sigma of G for which x -> x + sigma(x) is also a permutation.

    ``sigma[i]`` is the image of the i-th element in enumeration order.
    """

    spec: GroupSpec
    sigma: tuple[Element, ...]

    def check(self) -> None:
        spec = self.spec
        elems = list(spec.elements())
        if sorted(self.sigma) != sorted(elems):
            raise BuildError("sigma is not a permutation")
        sums = {spec.add(x, s) for x, s in zip(elems, self.sigma)}
        if len(sums) != spec.order:
            raise BuildError("x + sigma(x) is not a permutation")


def complete_mapping(spec: GroupSpec, budget: int = DEFAULT_BUDGET) -> CompleteMapping:
    """Find a complete mapping; exists iff the element sum is the identity.

    Odd order takes the identity map (x -> 2x is then a bijection); otherwise a
    deterministic backtracking over enumeration order.
    """
    profile = classify(spec)
    if not profile.in_g:
        raise ImpossibleError(
            f"{spec.name()} has a unique involution {profile.total_sum}; no complete mapping exists",
            certificate=ImpossibilityCertificate(
                "unique_involution", spec, 0, involution=profile.total_sum
            ),
        )
    elems = list(spec.elements())
    if spec.order % 2 == 1:
        cm = CompleteMapping(spec, tuple(elems))
        cm.check()
        return cm
    n = spec.order
    sigma: list[Optional[Element]] = [None] * n
    used_img = set()
    used_sum = set()
    nodes = 0
    pos = 0
    cursor = [0] * n
    while pos >= 0:
        if pos == n:
            cm = CompleteMapping(spec, tuple(sigma))  # type: ignore[arg-type]
            cm.check()
            return cm
        placed = False
        x = elems[pos]
        for ci in range(cursor[pos], n):
            img = elems[ci]
            if img in used_img:
                continue
            s = spec.add(x, img)
            if s in used_sum:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetError("complete mapping search budget exhausted")
            sigma[pos] = img
            used_img.add(img)
            used_sum.add(s)
            cursor[pos] = ci + 1
            pos += 1
            if pos < n:
                cursor[pos] = 0
            placed = True
            break
        if not placed:
            cursor[pos] = 0
            pos -= 1
            if pos >= 0:
                img = sigma[pos]
                sigma[pos] = None
                used_img.discard(img)
                used_sum.discard(spec.add(elems[pos], img))
    raise ImpossibleError(f"exhaustive search: no complete mapping over {spec.name()}")


def _allowed_sums(spec: GroupSpec, multiplier: int) -> list[Element]:
    """Elements h with multiplier*h = 0, in enumeration order."""
    zero = spec.zero()
    return [h for h in spec.elements() if spec.scale(multiplier, h) == zero]


def partition_with_annihilated_sums(
    spec: GroupSpec,
    parts: int,
    size: int,
    multiplier: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> tuple[tuple[Element, ...], ...]:
    """Partition the group into ``parts`` blocks of ``size`` whose sums s all
    satisfy multiplier*s = 0.  multiplier=1 is the plain zero-sum partition.

    Deterministic canonical backtracking: parts are ordered by smallest member,
    members ascend within a part, and the last member of each part is forced
    from the required sum.  Full exhaustion is a proof of non-existence;
    running out of budget raises BudgetError instead.
    """
    n = spec.order
    if parts * size != n:
        raise FormatError(f"parts*size = {parts * size} != group order {n}")
    if size < 1:
        raise FormatError("part size must be positive")
    profile = classify(spec)
    total = profile.total_sum
    if spec.scale(multiplier, total) != spec.zero():
        cert = None
        if multiplier == 1 and not profile.in_g:
            cert = ImpossibilityCertificate(
                "unique_involution", spec, 0, involution=total
            )
        raise ImpossibleError(
            f"{spec.name()}: element sum {total} is not annihilated by {multiplier}; "
            "no such partition exists",
            certificate=cert,
        )
    allowed = _allowed_sums(spec, multiplier)
    elems = list(spec.elements())
    if len(allowed) == n:
        # every sum qualifies: sequential chunks of the enumeration
        return tuple(tuple(elems[i * size : (i + 1) * size]) for i in range(parts))
    index = {e: i for i, e in enumerate(elems)}
    used = [False] * n
    result: list[list[Element]] = []
    nodes = 0
    _ensure_recursion_room(3 * n + 200)

    def first_free() -> int:
        for i, u in enumerate(used):
            if not u:
                return i
        return -1

    def extend(part: list[Element], acc: Element, min_idx: int) -> bool:
        # Canonical form: parts ordered by smallest member, members ascending,
        # so exhaustion proves non-existence.
        nonlocal nodes
        if len(part) == size:
            result.append(list(part))
            if len(result) == parts:
                return True
            anchor = first_free()
            used[anchor] = True
            if extend([elems[anchor]], elems[anchor], anchor + 1):
                return True
            used[anchor] = False
            result.pop()
            return False
        if len(part) == size - 1:
            # final member forced by each admissible part sum
            for target in allowed:
                last = spec.sub(target, acc)
                li = index[last]
                if used[li] or li < min_idx:
                    continue
                nodes += 1
                if nodes > budget:
                    raise BudgetError("partition search budget exhausted")
                used[li] = True
                if extend(part + [last], spec.add(acc, last), li + 1):
                    return True
                used[li] = False
            return False
        for ci in range(min_idx, n):
            if used[ci]:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetError("partition search budget exhausted")
            used[ci] = True
            if extend(part + [elems[ci]], spec.add(acc, elems[ci]), ci + 1):
                return True
            used[ci] = False
        return False

    if size == 1:
        # every singleton must itself be annihilated
        if all(spec.scale(multiplier, e) == spec.zero() for e in elems):
            return tuple((e,) for e in elems)
        raise ImpossibleError("singleton parts are not all annihilated")
    used[0] = True
    if extend([elems[0]], elems[0], 1):
        return tuple(tuple(p) for p in result)
    raise ImpossibleError(
        f"exhaustive search: {spec.name()} has no partition into {parts} parts of {size} "
        f"with sums annihilated by {multiplier}"
    )


def zero_sum_partition(
    spec: GroupSpec, parts: int, size: int, budget: int = DEFAULT_BUDGET
) -> tuple[tuple[Element, ...], ...]:
    """Partition the group into ``parts`` disjoint ``size``-subsets, each zero-sum."""
    return partition_with_annihilated_sums(spec, parts, size, multiplier=1, budget=budget)


def _normalize_rows(spec: GroupSpec, rows: list[list[Element]]) -> list[list[Element]]:
    """Shift each row so its first entry is the identity; keeps zero column sums."""
    out = []
    for row in rows:
        shift = spec.neg(row[0])
        out.append([spec.add(e, shift) for e in row])
    return out


def build_kotzig(
    spec: GroupSpec,
    j: int,
    group_size: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> KotzigArray:
    """Build a j-row Kotzig array with zero column sums.

    Plain arrays pair a permutation with its negation; an odd row count adds a
    three-row block (x, sigma(x), -(x+sigma(x))) from a complete mapping and is
    therefore only possible when the group qualifies.  With ``group_size`` g,
    rows are built from a zero-sum partition so that every consecutive g-chunk
    of every row is zero-sum.
    """
    if j <= 1:
        raise FormatError("a Kotzig array needs at least two rows")
    n = spec.order
    profile = classify(spec)
    if j % 2 == 1 and not profile.in_g:
        raise ImpossibleError(
            f"no {j}-row Kotzig array over {spec.name()}: odd row count needs odd order "
            f"or at least two involutions (element sum is {profile.total_sum})",
            certificate=ImpossibilityCertificate(
                "unique_involution", spec, 0, involution=profile.total_sum
            ),
        )
    if group_size is None:
        base = list(spec.elements())
    else:
        g = group_size
        if g < 1 or n % g:
            raise FormatError("group_size must divide the group order")
        if j % 2 == 1 and n % 2 == 0:
            raise BuildError(
                "no grouped construction for an odd row count over an even-order group"
            )
        parts = zero_sum_partition(spec, n // g, g, budget=budget)
        base = [e for part in parts for e in part]
    neg = [spec.neg(e) for e in base]
    rows: list[list[Element]] = []
    if j % 2 == 1:
        if group_size is None:
            cm = complete_mapping(spec, budget=budget)
            elems = list(spec.elements())
            row2 = list(cm.sigma)
            row3 = [spec.neg(spec.add(x, s)) for x, s in zip(elems, cm.sigma)]
            rows.extend(_normalize_rows(spec, [elems, row2, row3]))
        else:
            # odd order is guaranteed here: x -> -2x is a bijection
            rows.append(base)
            rows.append(list(base))
            rows.append([spec.scale(-2, e) for e in base])
    while len(rows) < j:
        rows.append(list(base))
        rows.append(list(neg))
    arr = KotzigArray(spec, tuple(tuple(r) for r in rows), group_size=group_size)
    check_kotzig(arr)
    return arr

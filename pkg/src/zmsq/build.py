"""Constructions of zero-sum magic squares and the dispatching builder.

Every route here is constructive and deterministic, and every intermediate
square is re-checked by the exact verifier before it is used; a square that
fails verification aborts the build with its derivation context.  The builder
either returns a verified square with a replayable derivation trace or an
impossibility certificate whose witness can be re-checked independently.

Construction inventory:

* odd sides: a zero-based classical square taken mod n^2 (cyclic case) or the
  coordinate grid (i, j) over Z_n + Z_n, glued across prime powers by a block
  expansion whose magic constant is predicted exactly and then translated to
  zero;
* power-of-two sides: four embedded side-4 base squares grown by three block
  tilings (2x2 blocks for Z_2 + cyclic, 4x4 blocks for an order-4 summand +
  cyclic, and a quadrant doubling that scales the first coordinate by 4);
* products: a side-m zero-sum square over G0 and an order-k^2 summand H
  combine into a side-mk square by filling each cell's k x k block with a full
  copy of H arranged so that all line sums cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import figures
from .certificate import ImpossibilityCertificate
from .classic import integer_ms, zero_based
from .errors import BudgetError, BuildError, FormatError, ImpossibleError
from .groups import (
    Element,
    GroupSpec,
    Isomorphism,
    classify,
    factorize,
    iso_between,
    primary_split,
)
from .kotzig import DEFAULT_BUDGET, partition_with_annihilated_sums
from .squares import Square, map_square, translate, verify

# ---------------------------------------------------------------------------
# traces and certificates


@dataclass(frozen=True)
class TraceStep:
    lemma: str
    params: dict
    mu: Element
    children: tuple["TraceStep", ...] = ()

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class ConstructionTrace:
    root: TraceStep
    fallbacks: int = 0

    def to_json(self) -> dict:
        steps = []

        def emit(step: TraceStep):
            entry = {"lemma": step.lemma, **step.params, "mu": list(step.mu),
                     "children": len(step.children)}
            steps.append(entry)
            for c in step.children:
                emit(c)

        emit(self.root)
        return {"fallbacks": self.fallbacks, "steps": steps}


@dataclass(frozen=True)
class BuildResult:
    square: Optional[Square]
    trace: Optional[ConstructionTrace]
    certificate: Optional[ImpossibilityCertificate]

    @property
    def ok(self) -> bool:
        return self.square is not None


class _Fallbacks:
    """Counter of constructions that had to leave their first-choice route."""

    def __init__(self):
        self.count = 0

    def bump(self):
        self.count += 1


def _checked(square: Square, context: str, expect_constant: Optional[Element] = None) -> Element:
    """Verify a square is magic (zero-sum unless a constant is given); return mu."""
    report = verify(square)
    if not report.is_magic:
        raise BuildError(f"{context}: output failed verification (not magic)")
    want = expect_constant if expect_constant is not None else square.spec.zero()
    if report.constant != want:
        raise BuildError(
            f"{context}: constant {report.constant} differs from required {want}"
        )
    return report.constant


# ---------------------------------------------------------------------------
# odd side constructions


def zms_cyclic_odd(n: int) -> Square:
    """Zero-sum square over Z_{n^2} for odd n >= 3.

    Start from the zero-based classical square, whose constant n(n^2-1)/2 is a
    multiple of n mod n^2, then subtract (n^2-1)/2 everywhere.
    """
    if n < 3 or n % 2 == 0:
        raise FormatError("cyclic construction needs odd n >= 3")
    spec = GroupSpec((n * n,))
    base = zero_based(integer_ms(n))
    sq = Square(spec, tuple(tuple((x % (n * n),) for x in row) for row in base.cells))
    delta = (n * (n * n - 1) // 2) % (n * n)
    _checked(sq, "cyclic base", expect_constant=(delta,))
    shift = (-(n * n - 1) // 2) % (n * n)
    out = translate(sq, (shift,))
    _checked(out, "cyclic zero-sum")
    return out


def zms_rank2_odd(n: int) -> Square:
    """Zero-sum square over Z_n + Z_n for odd n >= 3: cell (i, j) = (i, j)."""
    if n < 3 or n % 2 == 0:
        raise FormatError("rank-2 construction needs odd n >= 3")
    spec = GroupSpec((n, n))
    cells = tuple(tuple((i, j) for j in range(n)) for i in range(n))
    sq = Square(spec, cells)
    _checked(sq, "rank-2 grid")
    return sq


def expand_dwl(square: Square, k: int) -> Square:
    """Blow a magic square over Z_{m1} + Z_{m2} up by a k x k classical tile.

    Cell (a, b) becomes the block (k^2*a + T(u,v), b) where T is the
    zero-based side-k classical square.  The output constant is exactly
    (k^3*d1 + n(k^2-1)/2, k*d2) for input constant (d1, d2) and output side n;
    that formula is enforced, not assumed.
    """
    if k <= 2:
        raise FormatError("block expansion needs k > 2")
    if square.spec.rank != 2:
        raise FormatError("block expansion expects a rank-2 group presentation")
    report = verify(square)
    if not report.is_magic:
        raise FormatError("block expansion requires a magic input square")
    m1, m2 = square.spec.moduli
    s = square.n
    n = s * k
    target = GroupSpec((k * k * m1, m2))
    tile = zero_based(integer_ms(k)).cells
    cells = [[None] * n for _ in range(n)]
    for i in range(s):
        for j in range(s):
            a, b = square.cells[i][j]
            for u in range(k):
                for v in range(k):
                    cells[i * k + u][j * k + v] = ((k * k * a + tile[u][v]) % (k * k * m1), b)
    out = Square(target, tuple(tuple(row) for row in cells))
    d1, d2 = report.constant
    expected = target.element((k**3 * d1 + n * (k * k - 1) // 2, k * d2))
    _checked(out, "block expansion", expect_constant=expected)
    return out


def _odd_prime_power_traced(p: int, alpha: int, beta: int) -> tuple[Square, TraceStep]:
    if p < 3 or p % 2 == 0:
        raise FormatError("p must be an odd prime")
    if beta < 0 or alpha < beta or (alpha + beta) % 2:
        raise FormatError("need alpha >= beta >= 0 with alpha + beta even")
    lam = (alpha + beta) // 2
    if lam < 1:
        raise FormatError("side p^lambda must be at least p")
    if beta == 0:
        sq = zms_cyclic_odd(p**lam)
        return sq, TraceStep("primep-cyclic", {"n": p**lam}, sq.spec.zero())
    if alpha == beta:
        sq = zms_rank2_odd(p**beta)
        return sq, TraceStep("primep-rank2", {"n": p**beta}, sq.spec.zero())
    base = zms_rank2_odd(p**beta)
    base_step = TraceStep("primep-rank2", {"n": p**beta}, base.spec.zero())
    k = p ** ((alpha - beta) // 2)
    grown = expand_dwl(base, k)
    mu = verify(grown).constant
    dwl_step = TraceStep("DWL", {"k": k}, mu, (base_step,))
    shift = grown.spec.element((-(p ** (alpha - beta) - 1) // 2, 0))
    out = translate(grown, shift)
    _checked(out, f"odd prime power p={p} alpha={alpha} beta={beta}")
    step = TraceStep("translate", {"x": list(shift)}, out.spec.zero(), (dwl_step,))
    return out, step


def zms_odd_prime_power(p: int, alpha: int, beta: int) -> Square:
    """Zero-sum square over Z_{p^alpha} + Z_{p^beta}, p odd, alpha+beta even."""
    sq, _ = _odd_prime_power_traced(p, alpha, beta)
    return sq


# ---------------------------------------------------------------------------
# product composition


def _klein_letter_grids_direct(m: int) -> tuple[list[list[int]], list[list[int]]]:
    """Letter grids (indices 0/1/2 into the nonzero Klein elements) for odd m.

    R carries each block's row-pair sum, C the column-pair sum; the diagonal
    letter is forced as R+C.  Required: R rows zero-sum, C columns zero-sum,
    R+C zero-sum on both main diagonals, R != C everywhere.
    """
    a, b, c = 0, 1, 2
    if m == 3:
        return (
            [[b, a, c], [c, a, b], [a, c, b]],
            [[c, b, b], [a, c, c], [b, a, a]],
        )
    centre = (m - 1) // 2
    # Background pair (R, C) = (a, b); specials flip single cells:
    #   P: (b, a) one per row and column (shifted diagonal)
    #   Q: (c, b) one per row  -> letter a in R+C
    #   S: (a, c) one per column -> letter b in R+C
    # The centre Q cell and the two row-0 S cells give each main diagonal odd
    # counts of every letter, which is what zero-sum needs for odd m.
    p_cells = {(i, (i + 1) % m) for i in range(m)}
    q_col = {}
    for i in range(m):
        if i == centre:
            q_col[i] = centre
            continue
        forbidden = {(i + 1) % m, i, m - 1 - i}
        col = next(
            (i + 2 + t) % m for t in range(m) if (i + 2 + t) % m not in forbidden
        )
        q_col[i] = col
    q_cells = {(i, q_col[i]) for i in range(m)}
    s_row = {0: 0, m - 1: 0}
    for j in range(1, m - 1):
        forbidden = {j, m - 1 - j, (j - 1) % m}
        forbidden |= {i for i in range(m) if q_col[i] == j}
        row = next(
            ((j + 2 + t) % m for t in range(m) if (j + 2 + t) % m not in forbidden),
            None,
        )
        if row is None:
            raise BuildError("letter grid greedy placement failed")
        s_row[j] = row
    s_cells = {(s_row[j], j) for j in range(m)}
    if s_cells & (p_cells | q_cells):
        raise BuildError("letter grid cells collide")
    R = [[a] * m for _ in range(m)]
    C = [[b] * m for _ in range(m)]
    for (i, j) in p_cells:
        R[i][j], C[i][j] = b, a
    for (i, j) in q_cells:
        R[i][j] = c
    for (i, j) in s_cells:
        C[i][j] = c
    return R, C


def _klein_letter_grids_search(m: int, budget: int = 2_000_000):
    """Bounded deterministic cell-by-cell search over (R, C) letter pairs."""
    pairs = [(r, c) for r in range(3) for c in range(3) if r != c]
    xor = lambda r, c: r ^ c if r ^ c != 0 else None  # Klein addition on {0,1,2} via {1,2,3}
    # encode letters as 1, 2, 3 so Klein addition is xor
    R = [[0] * m for _ in range(m)]
    C = [[0] * m for _ in range(m)]
    nodes = 0

    def ok_after(i: int, j: int) -> bool:
        if j == m - 1:
            acc = 0
            for t in range(m):
                acc ^= R[i][t]
            if acc != 0:
                return False
        if i == m - 1:
            acc = 0
            for t in range(m):
                acc ^= C[t][j]
            if acc != 0:
                return False
            if i == j:
                acc = 0
                for t in range(m):
                    acc ^= R[t][t] ^ C[t][t]
                if acc != 0:
                    return False
            if j == 0:
                acc = 0
                for t in range(m):
                    acc ^= R[t][m - 1 - t] ^ C[t][m - 1 - t]
                if acc != 0:
                    return False
        return True

    def rec(pos: int) -> bool:
        nonlocal nodes
        if pos == m * m:
            return True
        i, j = divmod(pos, m)
        for r in (1, 2, 3):
            for c in (1, 2, 3):
                if r == c:
                    continue
                nodes += 1
                if nodes > budget:
                    raise BudgetError("letter grid search budget exhausted")
                R[i][j], C[i][j] = r, c
                if ok_after(i, j) and rec(pos + 1):
                    return True
        R[i][j] = C[i][j] = 0
        return False

    if not rec(0):
        raise BuildError("letter grid search exhausted without a solution")
    # back to 0/1/2 indices over the nonzero elements
    return [[x - 1 for x in row] for row in R], [[x - 1 for x in row] for row in C]


def _compose_klein(s0: Square, h: GroupSpec, fb: _Fallbacks) -> Square:
    """Compose with the order-4 group of three involutions when the side is odd.

    Each 2x2 block is [[0, r], [c, r+c]] over H; choosing the letter grids so
    rows, columns, and both diagonals cancel across blocks."""
    m = s0.n
    nz = [h_el for h_el in h.elements() if h_el != h.zero()]
    try:
        R, C = _klein_letter_grids_direct(m)
        _check_klein_letters(R, C, m)
    except BuildError:
        fb.bump()
        R, C = _klein_letter_grids_search(m)
        _check_klein_letters(R, C, m)
    target = GroupSpec(s0.spec.moduli + h.moduli)
    n = 2 * m
    cells = [[None] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            r = nz[R[i][j]]
            c = nz[C[i][j]]
            d = h.add(r, c)
            block = ((h.zero(), r), (c, d))
            for u in range(2):
                for v in range(2):
                    cells[2 * i + u][2 * j + v] = s0.cells[i][j] + block[u][v]
    return Square(target, tuple(tuple(row) for row in cells))


def _check_klein_letters(R, C, m: int) -> None:
    """Letter-grid sanity over Klein-encoded letters {0,1,2} -> {1,2,3} xor."""
    enc = lambda x: x + 1
    for i in range(m):
        acc = 0
        for j in range(m):
            if R[i][j] == C[i][j]:
                raise BuildError("letter grids collide pointwise")
            acc ^= enc(R[i][j])
        if acc:
            raise BuildError("letter grid row does not cancel")
    for j in range(m):
        acc = 0
        for i in range(m):
            acc ^= enc(C[i][j])
        if acc:
            raise BuildError("letter grid column does not cancel")
    d = 0
    ad = 0
    for t in range(m):
        d ^= enc(R[t][t]) ^ enc(C[t][t])
        ad ^= enc(R[t][m - 1 - t]) ^ enc(C[t][m - 1 - t])
    if d or ad:
        raise BuildError("letter grid diagonals do not cancel")


def _compose_traced(
    s0: Square, h: GroupSpec, fb: _Fallbacks, child: Optional[TraceStep], budget: int
) -> tuple[Square, TraceStep]:
    """Combine a zero-sum square over G0 with an order-k^2 summand H."""
    k2 = h.order
    k = math.isqrt(k2)
    if k * k != k2:
        raise FormatError(f"summand order {k2} is not a perfect square")
    children = (child,) if child is not None else ()
    if k2 == 1:
        out = Square(GroupSpec(s0.spec.moduli + h.moduli),
                     tuple(tuple(c + () for c in row) for row in s0.cells))
        step = TraceStep("SWL2", {"h": list(h.moduli), "route": "trivial"}, out.spec.zero(), children)
        return out, step
    m = s0.n
    if m < 2:
        raise FormatError("composition needs a base square of side >= 2")
    _checked(s0, "composition base")
    profile = classify(h)
    if m % 2 == 1 and not profile.in_g:
        raise ImpossibleError(
            f"no {m}-row Kotzig array over {h.name()} (unique involution), "
            "so the composition cannot exist",
            certificate=ImpossibilityCertificate(
                "unique_involution", h, 0, involution=profile.total_sum
            ),
        )
    route = None
    out = None
    # Route 1: grouped rows from a partition whose part sums vanish m times over.
    if m % 2 == 0 or k2 % 2 == 1:
        try:
            parts = partition_with_annihilated_sums(h, k, k, multiplier=m, budget=budget)
            out = _compose_grouped(s0, h, parts)
            route = "kotzig-grouped"
        except (ImpossibleError, BudgetError):
            fb.bump()
    # Route 2: a recursively built zero-sum square over H as the uniform block.
    if out is None and profile.in_g and k > 2:
        block, block_step = _build_traced(h, fb, budget)
        out = _compose_uniform(s0, h, block)
        route = "zms-block"
        children = children + (block_step,)
    # Route 3: the order-4, odd-side case via letter grids.
    if out is None and m % 2 == 1 and profile.in_g and k == 2:
        out = _compose_klein(s0, h, fb)
        route = "klein-letters"
    if out is None:
        raise BuildError(
            f"construction incomplete: no composition route for side {m} with {h.name()}"
        )
    _checked(out, f"composition with {h.name()} via {route}")
    step = TraceStep("SWL2", {"h": list(h.moduli), "route": route}, out.spec.zero(), children)
    return out, step


def _compose_grouped(s0: Square, h: GroupSpec, parts) -> Square:
    """Row-major blocks from grouped Kotzig rows built out of one partition."""
    m = s0.n
    k = len(parts)
    base = [e for part in parts for e in part]
    neg = [h.neg(e) for e in base]
    rows: list[list[Element]] = []
    if m % 2 == 1:
        rows.append(base)
        rows.append(list(base))
        rows.append([h.scale(-2, e) for e in base])
    while len(rows) < m:
        rows.append(list(base))
        rows.append(list(neg))
    target = GroupSpec(s0.spec.moduli + h.moduli)
    n = m * k
    cells = [[None] * n for _ in range(n)]
    for i in range(m):
        row = rows[i]
        for j in range(m):
            a = s0.cells[i][j]
            for u in range(k):
                for v in range(k):
                    cells[i * k + u][j * k + v] = a + row[u * k + v]
    return Square(target, tuple(tuple(r) for r in cells))


def _compose_uniform(s0: Square, h: GroupSpec, block: Square) -> Square:
    m = s0.n
    k = block.n
    target = GroupSpec(s0.spec.moduli + h.moduli)
    n = m * k
    cells = [[None] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            a = s0.cells[i][j]
            for u in range(k):
                for v in range(k):
                    cells[i * k + u][j * k + v] = a + block.cells[u][v]
    return Square(target, tuple(tuple(r) for r in cells))


def compose_swl(s0: Square, h: GroupSpec, budget: int = DEFAULT_BUDGET) -> Square:
    """Zero-sum square over G0 + H from a zero-sum square over G0."""
    sq, _ = _compose_traced(s0, h, _Fallbacks(), None, budget)
    return sq


# ---------------------------------------------------------------------------
# power-of-two constructions


def double_two_power(square: Square) -> Square:
    """Grow a zero-sum square over Z_{2^(a-2)} + H into one over Z_{2^a} + H.

    The first coordinate is scaled by 4 and the four quadrants receive the
    offsets 0, 2, and the 1/3 checkerboards; the two checkerboard quadrants
    cancel along the antidiagonal.
    """
    spec = square.spec
    if spec.rank < 1:
        raise FormatError("doubling needs a leading cyclic factor")
    m0 = spec.moduli[0]
    if m0 & (m0 - 1):
        raise FormatError("leading factor must be a power of two (or trivial)")
    alpha = m0.bit_length() + 1  # log2(m0) + 2
    h_moduli = spec.moduli[1:]
    h_order = math.prod(h_moduli)
    if h_order < 4 * m0:
        raise FormatError("doubling needs alpha <= beta (first factor at most the rest)")
    _checked(square, "doubling base")
    half = square.n
    n = 2 * half
    if n * n != 4 * m0 * h_order:
        raise FormatError("doubling: side/order mismatch")
    target = GroupSpec((4 * m0,) + h_moduli)
    mod = 4 * m0

    def lift(cell: Element, offset: int) -> Element:
        return ((4 * cell[0] + offset) % mod,) + cell[1:]

    cells = [[None] * n for _ in range(n)]
    for i in range(half):
        for j in range(half):
            c = square.cells[i][j]
            even = (i + j) % 2 == 0
            cells[i][j] = lift(c, 0)
            cells[i][j + half] = lift(c, 1 if even else 3)
            cells[i + half][j] = lift(c, 3 if even else 1)
            cells[i + half][j + half] = lift(c, 2)
    out = Square(target, tuple(tuple(r) for r in cells))
    _checked(out, "doubling")
    return out


def _tile_blocks(subsquare_side: int, ks: list[int], make_block) -> list[list]:
    """Row-major tiling of one subsquare by blocks for the sorted k list."""
    bs = None  # block side inferred from make_block output
    blocks = [make_block(k) for k in ks]
    bs = len(blocks[0])
    per_side = subsquare_side // bs
    grid = [[None] * subsquare_side for _ in range(subsquare_side)]
    for idx, block in enumerate(blocks):
        bi, bj = divmod(idx, per_side)
        for u in range(bs):
            for v in range(bs):
                grid[bi * bs + u][bj * bs + v] = block[u][v]
    return grid


def zms_z2_cyclic(alpha: int) -> Square:
    """Zero-sum square over Z_2 + Z_{2^(2*alpha-1)} of side 2^alpha, alpha >= 2.

    Base alpha = 2 is embedded; each growth step keeps (a, 4b) in the top-left
    quadrant and tiles the rest with 2x2 blocks B_k = [(0,k),(0,-k);(1,-k),(1,k)].
    Blocks with even k tile the bottom-right quadrant and odd-k blocks split
    alternately between the off quadrants, so the sorted row-major layout puts
    k and 2^(2L)-k opposite each other on every relevant diagonal.
    """
    if alpha < 2:
        raise FormatError("need alpha >= 2")
    sq = figures.figure("zms_z2z8_4")
    for lvl in range(2, alpha):
        sq = _z2_cyclic_step(sq, lvl)
    _checked(sq, f"Z2+cyclic side {2 ** alpha}")
    return sq


def _z2_cyclic_step(square: Square, lvl: int) -> Square:
    half = square.n  # 2^lvl
    n = 2 * half
    big = 1 << (2 * lvl + 1)
    kcap = 1 << (2 * lvl)
    target = GroupSpec((2, big))
    ks = [k for k in range(1, kcap) if k % 4 != 0]
    evens = [k for k in ks if k % 2 == 0]
    odd_pairs = []
    for k in ks:
        if k % 2 and k < kcap - k:
            odd_pairs.append((k, kcap - k))
    m12, m21 = [], []
    for t, (lo, hi) in enumerate(odd_pairs):
        (m12 if t % 2 == 0 else m21).extend((lo, hi))
    assign = {"m12": sorted(m12), "m21": sorted(m21), "m22": sorted(evens)}

    def block(k: int):
        return [
            [(0, k % big), (0, (-k) % big)],
            [(1, (-k) % big), (1, k % big)],
        ]

    quadrants = {
        name: _tile_blocks(half, assign[name], block) for name in ("m12", "m21", "m22")
    }
    cells = [[None] * n for _ in range(n)]
    for i in range(half):
        for j in range(half):
            a, b = square.cells[i][j]
            cells[i][j] = (a, (4 * b) % big)
            cells[i][j + half] = quadrants["m12"][i][j]
            cells[i + half][j] = quadrants["m21"][i][j]
            cells[i + half][j + half] = quadrants["m22"][i][j]
    out = Square(target, tuple(tuple(r) for r in cells))
    _checked(out, f"Z2+cyclic growth to side {n}")
    return out


_H4_COEFFS = {
    # (a1, a2, a3) with 2*a1 = 0 and a3 = a1 + a2, fixed to match the
    # embedded side-8 square.
    (2, 2): ((1, 0), (1, 1), (0, 1)),
    (4,): ((2,), (1,), (3,)),
}


def zms_h4_cyclic(h: GroupSpec, alpha: int) -> Square:
    """Zero-sum square over H + Z_{2^(2*alpha-2)}, |H| = 4, side 2^alpha.

    Bases alpha = 2 are embedded; growth tiles three quadrants with 4x4 blocks
    whose rows, columns and diagonals all cancel individually, so placement is
    unconstrained and goes row-major with ascending k.
    """
    if alpha < 2:
        raise FormatError("need alpha >= 2")
    if h.moduli not in _H4_COEFFS:
        raise FormatError("H must be given as Z2xZ2 or Z4")
    base_name = "zms_z2z2z4_4" if h.moduli == (2, 2) else "zms_z4z4_4"
    sq = figures.figure(base_name)
    for lvl in range(2, alpha):
        sq = _h4_cyclic_step(sq, h, lvl)
    _checked(sq, f"order-4 summand side {2 ** alpha}")
    return sq


def _h4_cyclic_step(square: Square, h: GroupSpec, lvl: int) -> Square:
    half = square.n  # 2^lvl
    n = 2 * half
    big = 1 << (2 * lvl)
    offset = 1 << (2 * lvl - 1)
    kcap = 1 << (2 * lvl - 2)
    hr = h.rank
    target = GroupSpec(h.moduli + (big,))
    a1, a2, a3 = _H4_COEFFS[h.moduli]
    zero = h.zero()
    na2, na3 = h.neg(a2), h.neg(a3)
    ks = [k for k in range(1, kcap) if k % 4 != 0]

    def block(k: int):
        r = lambda hp, c: hp + (c % big,)
        return [
            [r(zero, k), r(zero, -k), r(a1, k), r(a1, -k)],
            [r(zero, offset + k), r(zero, offset - k), r(a1, offset + k), r(a1, offset - k)],
            [r(a2, -k), r(a2, k), r(a3, -k), r(a3, k)],
            [r(na2, offset - k), r(na2, offset + k), r(na3, offset - k), r(na3, offset + k)],
        ]

    per = len(ks) // 3
    quadrants = {
        "m12": _tile_blocks(half, ks[:per], block),
        "m21": _tile_blocks(half, ks[per : 2 * per], block),
        "m22": _tile_blocks(half, ks[2 * per :], block),
    }
    cells = [[None] * n for _ in range(n)]
    for i in range(half):
        for j in range(half):
            c = square.cells[i][j]
            hp, b = c[:hr], c[hr]
            cells[i][j] = hp + ((4 * b) % big,)
            cells[i][j + half] = quadrants["m12"][i][j]
            cells[i + half][j] = quadrants["m21"][i][j]
            cells[i + half][j + half] = quadrants["m22"][i][j]
    out = Square(target, tuple(tuple(r) for r in cells))
    _checked(out, f"order-4 summand growth to side {n}")
    return out


_BASE_FIGURES = {
    (2, 8): "zms_z2z8_4",
    (4, 4): "zms_z4z4_4",
    (2, 2, 4): "zms_z2z2z4_4",
    (2, 2, 2, 2): "zms_z2z2z2z2_4",
}


def _two_power_traced(spec: GroupSpec, fb: _Fallbacks, budget: int) -> tuple[Square, TraceStep]:
    """Builder for groups of order 2^(2*alpha), alpha >= 2, with >= 2 involutions.

    ``spec`` must be in primary form (ascending powers of two).  The square
    comes back over some arrangement of those factors; the caller reorders.
    """
    exps = tuple(m.bit_length() - 1 for m in spec.moduli)
    alpha = sum(exps) // 2
    if alpha == 2:
        name = _BASE_FIGURES[spec.moduli]
        sq = figures.figure(name)
        return sq, TraceStep("base-figure", {"name": name}, sq.spec.zero())
    if (exps[0] == 1 and exps[1] == 1) or exps[0] == 2:
        h_exps = (1, 1) if exps[0] == 1 else (2,)
        h = GroupSpec(tuple(2**e for e in h_exps))
        k_exps = exps[len(h_exps):]
        if len(k_exps) >= 2:
            k_spec = GroupSpec(tuple(2**e for e in k_exps))
            inner, inner_step = _build_traced(k_spec, fb, budget)
            return _compose_traced(inner, h, fb, inner_step, budget)
        # remaining part is cyclic with a unique involution: direct tiling
        sq = zms_h4_cyclic(h, alpha)
        step = TraceStep("h4-blocks", {"h": list(h.moduli), "alpha": alpha}, sq.spec.zero())
        return sq, step
    if exps[0] == 1:
        beta = next(e for e in exps[1:] if e % 2 == 1)
        sq = zms_z2_cyclic((1 + beta) // 2)
        step = TraceStep("z2-blocks", {"alpha": (1 + beta) // 2}, sq.spec.zero())
        rest = list(exps)
        rest.remove(1)
        rest.remove(beta)
        if not rest:
            return sq, step
        k_spec = GroupSpec(tuple(2**e for e in rest))
        return _compose_traced(sq, k_spec, fb, step, budget)
    # smallest exponent >= 3: recurse two steps down on it, then double
    inner_spec = GroupSpec((2 ** (exps[0] - 2),) + tuple(2**e for e in exps[1:]))
    inner, inner_step = _build_traced(inner_spec, fb, budget)
    want = (2 ** (exps[0] - 2),) + tuple(2**e for e in exps[1:])
    if inner.spec.moduli != want:
        inner = map_square(inner, iso_between(inner.spec, GroupSpec(want)))
    out = double_two_power(inner)
    step = TraceStep("double", {"alpha": exps[0]}, out.spec.zero(), (inner_step,))
    return out, step


def zms_two_power(spec: GroupSpec, budget: int = DEFAULT_BUDGET) -> Square:
    """Zero-sum square for a group of order 2^(2*alpha), alpha >= 2, in class G."""
    profile = classify(spec)
    order = spec.order
    if order & (order - 1) or profile.side is None or profile.side < 4:
        raise FormatError("order must be 2^(2*alpha) with alpha >= 2")
    if not profile.in_g:
        raise ImpossibleError(
            f"{spec.name()} has a unique involution; no zero-sum square exists",
            certificate=ImpossibilityCertificate(
                "unique_involution", spec, profile.side, involution=profile.total_sum
            ),
        )
    prim, iso = primary_split(spec)
    sq, _ = _two_power_traced(prim, _Fallbacks(), budget)
    if sq.spec.moduli != spec.moduli:
        sq = map_square(sq, iso_between(sq.spec, spec))
    _checked(sq, "two-power dispatcher")
    return sq


# ---------------------------------------------------------------------------
# dispatcher


def _sylow_chunks(p: int, exps: list[int]) -> list[tuple[int, int]]:
    """Pair exponents of equal parity, descending; leftover even e becomes (e, 0)."""
    odds = sorted((e for e in exps if e % 2 == 1), reverse=True)
    evens = sorted((e for e in exps if e % 2 == 0), reverse=True)
    chunks = []
    for t in range(0, len(odds) - 1, 2):
        chunks.append((odds[t], odds[t + 1]))
    if len(odds) % 2:
        raise BuildError(f"odd count of odd exponents for p={p}; exponent sum cannot be even")
    for t in range(0, len(evens) - 1, 2):
        chunks.append((evens[t], evens[t + 1]))
    if len(evens) % 2:
        chunks.append((evens[-1], 0))
    return chunks


def _build_traced(spec: GroupSpec, fb: _Fallbacks, budget: int) -> tuple[Square, TraceStep]:
    """Construct a verified zero-sum square over ``spec`` (assumed buildable)."""
    prim, _ = primary_split(spec)
    by_prime: dict[int, list[int]] = {}
    for m in prim.moduli:
        p = factorize(m)[0][0]
        by_prime.setdefault(p, []).append(factorize(m)[0][1])
    odd_primes = sorted(p for p in by_prime if p != 2)
    if not odd_primes:
        sq, step = _two_power_traced(prim, fb, budget)
    else:
        p0 = odd_primes[0]
        chunks = _sylow_chunks(p0, by_prime[p0])
        sq, step = _odd_prime_power_traced(p0, *chunks[0])
        for a, b in chunks[1:]:
            h = GroupSpec((p0**a,) if b == 0 else (p0**a, p0**b))
            sq, step = _compose_traced(sq, h, fb, step, budget)
        for q in odd_primes[1:]:
            h = GroupSpec(tuple(q**e for e in sorted(by_prime[q])))
            sq, step = _compose_traced(sq, h, fb, step, budget)
        if 2 in by_prime:
            h = GroupSpec(tuple(2**e for e in sorted(by_prime[2])))
            sq, step = _compose_traced(sq, h, fb, step, budget)
    if sq.spec.moduli != spec.moduli:
        iso = iso_between(sq.spec, spec)
        sq = map_square(sq, iso)
        step = TraceStep(
            "map",
            {"target": list(spec.moduli), "slot_map": list(iso.slot_map),
             "source": list(iso.source.moduli)},
            sq.spec.zero(),
            (step,),
        )
    _checked(sq, f"dispatch for {spec.name()}")
    return sq, step


def build_zms(spec: GroupSpec, budget: int = DEFAULT_BUDGET) -> BuildResult:
    """Either a verified zero-sum square with its trace, or a certificate.

    The group order must be a perfect square n^2.  For n <= 2 or a group with
    a unique involution the result carries an impossibility certificate; both
    witnesses re-check independently of the construction code.
    """
    profile = classify(spec)
    n = profile.side
    if n is None:
        raise FormatError(f"group order {spec.order} is not a perfect square")
    if n <= 2:
        cert = ImpossibilityCertificate("side_too_small", spec, n)
        cert.check()
        return BuildResult(None, None, cert)
    if not profile.in_g:
        cert = ImpossibilityCertificate(
            "unique_involution", spec, n, involution=profile.total_sum
        )
        cert.check()
        return BuildResult(None, None, cert)
    fb = _Fallbacks()
    sq, root = _build_traced(spec, fb, budget)
    report = verify(sq)
    if not report.is_zero_sum or sq.spec.moduli != spec.moduli:
        raise BuildError("final square failed the zero-sum gate")
    return BuildResult(sq, ConstructionTrace(root, fb.count), None)


# ---------------------------------------------------------------------------
# trace replay


def replay_trace(trace: ConstructionTrace | TraceStep) -> Square:
    """Re-execute a derivation tree; reproduces the built square bit for bit."""
    step = trace.root if isinstance(trace, ConstructionTrace) else trace
    name = step.lemma
    p = step.params
    if name == "base-figure":
        return figures.figure(p["name"])
    if name == "primep-cyclic":
        return zms_cyclic_odd(p["n"])
    if name == "primep-rank2":
        return zms_rank2_odd(p["n"])
    if name == "DWL":
        return expand_dwl(replay_trace(step.children[0]), p["k"])
    if name == "translate":
        return translate(replay_trace(step.children[0]), tuple(p["x"]))
    if name == "SWL2":
        return compose_swl(replay_trace(step.children[0]), GroupSpec(tuple(p["h"])))
    if name == "double":
        return double_two_power(replay_trace(step.children[0]))
    if name == "z2-blocks":
        return zms_z2_cyclic(p["alpha"])
    if name == "h4-blocks":
        return zms_h4_cyclic(GroupSpec(tuple(p["h"])), p["alpha"])
    if name == "map":
        inner = replay_trace(step.children[0])
        iso = Isomorphism(
            GroupSpec(tuple(p["source"])), GroupSpec(tuple(p["target"])), tuple(p["slot_map"])
        )
        return map_square(inner, iso)
    raise FormatError(f"unknown trace step {name!r}")

"""Finite abelian groups as lists of cyclic moduli, with elements as residue vectors.

A group is written multiplicatively in text ("Z2xZ8") but stored as an ordered
tuple of moduli.  Elements are plain tuples of reduced residues, one per factor,
so they are hashable, comparable, and cheap to share.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterator, Optional, Sequence

from .errors import FormatError

# Orders above this are rejected outright; keeps every product within exact
# machine-int territory without arbitrary-precision bookkeeping.
MAX_ORDER = 2**32

Element = tuple

_GRAMMAR = re.compile(r"^\s*z\s*(\d+)(?:\s*[x+]\s*z\s*(\d+))*\s*$", re.IGNORECASE)
_FACTOR = re.compile(r"z\s*(\d+)", re.IGNORECASE)


@dataclass(frozen=True)
class GroupSpec:
    """An ordered direct sum of cyclic groups Z_m.

    ``moduli`` entries must be >= 2 when they come from user input; the
    constructor additionally tolerates 1 so that degenerate trivial factors can
    appear inside intermediate constructions.  The empty tuple is the trivial
    group.
    """

    moduli: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.moduli, tuple):
            object.__setattr__(self, "moduli", tuple(self.moduli))
        for m in self.moduli:
            if not isinstance(m, int) or m < 1:
                raise FormatError(f"modulus must be an integer >= 1, got {m!r}")
        if math.prod(self.moduli) > MAX_ORDER:
            raise FormatError(f"group order exceeds ceiling {MAX_ORDER}")

    # -- basic structure ---------------------------------------------------

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def zero(self) -> Element:
        return (0,) * len(self.moduli)

    def name(self) -> str:
        if not self.moduli:
            return "Z1"
        return "x".join(f"Z{m}" for m in self.moduli)

    # -- element arithmetic ------------------------------------------------

    def element(self, residues: Sequence[int]) -> Element:
        """Coerce a residue sequence to a reduced element of this group."""
        if len(residues) != len(self.moduli):
            raise FormatError(
                f"element has {len(residues)} coordinates, group {self.name()} has {len(self.moduli)}"
            )
        return tuple(int(r) % m for r, m in zip(residues, self.moduli))

    def contains(self, a: Element) -> bool:
        return len(a) == len(self.moduli) and all(
            isinstance(x, int) and 0 <= x < m for x, m in zip(a, self.moduli)
        )

    def _check_dim(self, a: Element) -> None:
        if len(a) != len(self.moduli):
            raise FormatError(f"dimension mismatch: {a} in {self.name()}")

    def add(self, a: Element, b: Element) -> Element:
        self._check_dim(a)
        self._check_dim(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: Element) -> Element:
        self._check_dim(a)
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def sub(self, a: Element, b: Element) -> Element:
        self._check_dim(a)
        self._check_dim(b)
        return tuple((x - y) % m for x, y, m in zip(a, b, self.moduli))

    def scale(self, c: int, a: Element) -> Element:
        """c*a for any integer c; negative c walks through the inverse."""
        self._check_dim(a)
        return tuple((c * x) % m for x, m in zip(a, self.moduli))

    def sum(self, elems) -> Element:
        return reduce(self.add, elems, self.zero())

    # -- enumeration (lexicographic by residues) ----------------------------

    def elements(self) -> Iterator[Element]:
        return itertools.product(*(range(m) for m in self.moduli))

    def index(self, a: Element) -> int:
        self._check_dim(a)
        idx = 0
        for x, m in zip(a, self.moduli):
            idx = idx * m + x
        return idx

    def element_at(self, idx: int) -> Element:
        out = []
        for m in reversed(self.moduli):
            out.append(idx % m)
            idx //= m
        return tuple(reversed(out))

    # -- isomorphy ----------------------------------------------------------

    def primary_moduli(self) -> tuple[int, ...]:
        """The multiset of prime-power factors, sorted by (prime, exponent)."""
        pieces = []
        for m in self.moduli:
            pieces.extend(p**e for p, e in factorize(m))
        return tuple(sorted(pieces, key=lambda q: (least_prime(q), q)))

    def is_isomorphic(self, other: "GroupSpec") -> bool:
        return self.primary_moduli() == other.primary_moduli()

    def to_json(self) -> dict:
        return {"moduli": list(self.moduli)}


@lru_cache(maxsize=None)
def factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of m as ((p, e), ...), primes ascending."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def least_prime(q: int) -> int:
    return factorize(q)[0][0] if q > 1 else 1


def parse_group(text: str, max_order: int = MAX_ORDER) -> GroupSpec:
    """Parse "Zk x Zk x ..." (x or + separators, case-insensitive) or JSON moduli.

    JSON forms accepted: {"moduli": [2, 8]} or a bare list [2, 8].
    Every parsed modulus must be >= 2.
    """
    stripped = text.strip()
    if not stripped:
        raise FormatError("empty group description")
    if stripped[0] in "[{":
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad group JSON: {exc}") from exc
        moduli = obj.get("moduli") if isinstance(obj, dict) else obj
        if not isinstance(moduli, list) or not all(isinstance(m, int) for m in moduli):
            raise FormatError("group JSON must provide an integer moduli list")
    else:
        if not _GRAMMAR.match(stripped):
            raise FormatError(f"unrecognized group syntax: {text!r}")
        moduli = [int(tok) for tok in _FACTOR.findall(stripped)]
    for m in moduli:
        if m < 2:
            raise FormatError(f"modulus {m} < 2")
    if math.prod(moduli) > max_order:
        raise FormatError(f"group order exceeds ceiling {max_order}")
    return GroupSpec(tuple(moduli))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class GroupProfile:
    """Structural summary: order, square side, involutions, element-sum."""

    order: int
    side: Optional[int]
    involution_count: int
    in_g: bool
    total_sum: Element

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "side": self.side,
            "involution_count": self.involution_count,
            "in_g": self.in_g,
            "total_sum": list(self.total_sum),
        }


def classify(spec: GroupSpec) -> GroupProfile:
    """Profile a group: involution count 2^e - 1 (e = even moduli) and the sum
    of all elements, which is the identity exactly when the order is odd or
    there are at least two involutions."""
    order = spec.order
    evens = sum(1 for m in spec.moduli if m % 2 == 0)
    involutions = 2**evens - 1
    in_g = (order % 2 == 1) or involutions >= 2
    # Coordinate i of the total sum: (order/m_i) copies of 0+1+...+(m_i-1).
    total = tuple(
        ((order // m) * (m * (m - 1) // 2)) % m for m in spec.moduli
    )
    root = math.isqrt(order)
    side = root if root * root == order else None
    return GroupProfile(
        order=order,
        side=side,
        involution_count=involutions,
        in_g=in_g,
        total_sum=total,
    )


# ---------------------------------------------------------------------------
# isomorphisms built from prime-power "slots"
#
# Every coordinate Z_m splits into prime-power slots Z_{p^e}; an isomorphism
# between two specs with equal slot multisets is a bijection between slots.
# Forward transport projects each source coordinate onto its slots and
# reassembles each target coordinate by the Chinese remainder theorem.


def _spec_slots(spec: GroupSpec) -> tuple[tuple[int, int], ...]:
    """Slots as (coordinate, prime_power), in coordinate order then prime order."""
    slots = []
    for i, m in enumerate(spec.moduli):
        for p, e in factorize(m):
            slots.append((i, p**e))
    return tuple(slots)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def crt_pair(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int]:
    """Combine x = a1 (mod m1), x = a2 (mod m2) for coprime m1, m2."""
    g, u, _ = _egcd(m1, m2)
    assert g == 1
    x = (a1 + (a2 - a1) * u % m2 * m1) % (m1 * m2)
    return x, m1 * m2

def solve_congruence(a: int, b: int, m: int) -> Optional[int]:
    """Smallest nonnegative x with a*x = b (mod m), or None when unsolvable."""
    if m == 1:
        return 0
    g, u, _ = _egcd(a % m, m)
    if b % g != 0:
        return None
    m2 = m // g
    x = (b // g) * u % m2
    return x % m2


@dataclass(frozen=True)
class Isomorphism:
    """Additive bijection between two group presentations with equal slot multisets.

    ``slot_map[t]`` names the source slot feeding target slot ``t``; matched
    slots carry identical prime powers, which makes the map additive by
    construction.
    """

    source: GroupSpec
    target: GroupSpec
    slot_map: tuple[int, ...]

    def __post_init__(self):
        src = _spec_slots(self.source)
        tgt = _spec_slots(self.target)
        if len(self.slot_map) != len(tgt) or sorted(self.slot_map) != list(range(len(src))):
            raise FormatError("slot map is not a bijection between slot lists")
        for t, s in enumerate(self.slot_map):
            if tgt[t][1] != src[s][1]:
                raise FormatError(
                    f"slot mismatch: target slot {tgt[t]} fed from source slot {src[s]}"
                )

    @classmethod
    def identity(cls, spec: GroupSpec) -> "Isomorphism":
        n = len(_spec_slots(spec))
        return cls(spec, spec, tuple(range(n)))

    @classmethod
    def permutation(cls, source: GroupSpec, perm: Sequence[int]) -> "Isomorphism":
        """Reorder coordinates: target coordinate t is source coordinate perm[t]."""
        target = GroupSpec(tuple(source.moduli[p] for p in perm))
        src = _spec_slots(source)
        by_coord: dict[int, list[int]] = {}
        for idx, (coord, _) in enumerate(src):
            by_coord.setdefault(coord, []).append(idx)
        mapping = []
        for p in perm:
            mapping.extend(by_coord[p])
        return cls(source, target, tuple(mapping))

    def forward(self, a: Element) -> Element:
        src = _spec_slots(self.source)
        tgt = _spec_slots(self.target)
        vals = []
        for t, s in enumerate(self.slot_map):
            coord, pp = src[s]
            vals.append((a[coord] % pp, pp))
        out = []
        pos = 0
        for m in self.target.moduli:
            acc, mod = 0, 1
            while mod < m:
                v, pp = vals[pos]
                _ = tgt[pos]
                acc, mod = crt_pair(acc, mod, v, pp)
                pos += 1
            out.append(acc % m if m > 1 else 0)
        return tuple(out)

    def inverse(self) -> "Isomorphism":
        inv = [0] * len(self.slot_map)
        for t, s in enumerate(self.slot_map):
            inv[s] = t
        return Isomorphism(self.target, self.source, tuple(inv))

    def then(self, other: "Isomorphism") -> "Isomorphism":
        if self.target.moduli != other.source.moduli:
            raise FormatError("isomorphisms do not compose: middle specs differ")
        composed = tuple(self.slot_map[s] for s in other.slot_map)
        return Isomorphism(self.source, other.target, composed)

    def self_check(self, exhaustive_limit: int = 10_000) -> None:
        """Check additivity and bijectivity, exhaustively for small groups."""
        inv = self.inverse()
        if self.source.order <= exhaustive_limit:
            seen = set()
            prev = None
            for a in self.source.elements():
                fa = self.forward(a)
                assert self.target.contains(fa)
                assert inv.forward(fa) == a
                seen.add(fa)
                if prev is not None:
                    assert self.forward(self.source.add(prev, a)) == self.target.add(
                        self.forward(prev), fa
                    )
                prev = a
            assert len(seen) == self.source.order
        else:
            zero = self.source.zero()
            assert self.forward(zero) == self.target.zero()
            assert inv.forward(self.target.zero()) == zero

    def to_json(self) -> dict:
        return {
            "source": list(self.source.moduli),
            "target": list(self.target.moduli),
            "slot_map": list(self.slot_map),
        }


def primary_split(spec: GroupSpec) -> tuple[GroupSpec, Isomorphism]:
    """Decompose into prime-power cyclic factors grouped by prime, ascending.

    Returns the primary spec and the isomorphism from ``spec`` onto it.
    Projection onto each prime-power factor is reduction mod p^e; the inverse
    reassembles coordinates by CRT.
    """
    src = _spec_slots(spec)
    order = sorted(range(len(src)), key=lambda s: (least_prime(src[s][1]), src[s][1], s))
    target = GroupSpec(tuple(src[s][1] for s in order))
    iso = Isomorphism(spec, target, tuple(order))
    return target, iso


def iso_between(source: GroupSpec, target: GroupSpec) -> Isomorphism:
    """Any additive isomorphism source -> target (they must be isomorphic)."""
    if not source.is_isomorphic(target):
        raise FormatError(f"{source.name()} and {target.name()} are not isomorphic")
    _, a = primary_split(source)
    _, b = primary_split(target)
    return a.then(b.inverse())


# ---------------------------------------------------------------------------
# enumeration of isomorphism classes (used by sweeps and the test suite)


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n, descending parts, deterministic order."""
    if n == 0:
        yield ()
        return
    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest
    yield from rec(n, n)


def abelian_group_specs(order: int) -> list[GroupSpec]:
    """All isomorphism classes of abelian groups of the given order, one spec each.

    Specs come back in primary form (prime-power moduli sorted by prime then
    exponent) and deterministic order.
    """
    if order < 1:
        raise FormatError("order must be positive")
    if order == 1:
        return [GroupSpec(())]
    per_prime = []
    for p, e in factorize(order):
        choices = []
        for part in _partitions(e):
            choices.append(tuple(sorted(p**k for k in part)))
        per_prime.append(choices)
    specs = []
    for combo in itertools.product(*per_prime):
        moduli = tuple(itertools.chain.from_iterable(combo))
        specs.append(GroupSpec(moduli))
    return specs

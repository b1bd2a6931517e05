"""Independent search oracle: exhaustive/budgeted magic-square search and the
magic-constant spectrum.

The oracle shares nothing with the constructive builder except the verifier,
so agreement between the two is meaningful evidence.  Budgets are node counts,
never wall time, and identical inputs give identical reports.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import figures
from ._search import backend_name, get_kernel
from .build import build_zms
from .errors import FormatError
from .groups import Element, GroupSpec, classify
from .squares import Square, translate, verify

DEFAULT_BUDGET = 10_000_000
MAX_SEARCH_ORDER = 4096


@dataclass(frozen=True)
class SearchReport:
    spec: GroupSpec
    n: int
    mu: Optional[Element]
    count: int
    exhaustive: bool
    nodes: int
    elapsed: float
    squares: tuple[Square, ...]
    fixed_first_cell: bool
    shortcut: Optional[str] = None
    backend: str = "python"

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "n": self.n,
            "mu": list(self.mu) if self.mu is not None else None,
            "count": self.count,
            "exhaustive": self.exhaustive,
            "nodes": self.nodes,
            "elapsed": self.elapsed,
            "fixed_first_cell": self.fixed_first_cell,
            "shortcut": self.shortcut,
            "backend": self.backend,
            "squares": [sq.to_json() for sq in self.squares],
        }


def _addition_table(spec: GroupSpec) -> np.ndarray:
    """Dense index-level addition table, rows/cols in enumeration order."""
    moduli = np.array(spec.moduli, dtype=np.int64)
    order = spec.order
    res = np.empty((order, len(spec.moduli)), dtype=np.int64)
    for i, e in enumerate(spec.elements()):
        res[i] = e
    sums = (res[:, None, :] + res[None, :, :]) % moduli
    strides = np.ones(len(spec.moduli), dtype=np.int64)
    for k in range(len(spec.moduli) - 2, -1, -1):
        strides[k] = strides[k + 1] * spec.moduli[k + 1]
    return (sums * strides).sum(axis=2).astype(np.int64)


def exhaustive_search(
    spec: GroupSpec,
    n: int,
    mu: Optional[Element] = None,
    budget: int = DEFAULT_BUDGET,
    cap: int = 64,
    fix_first: bool = False,
) -> SearchReport:
    """Backtracking search for side-n magic squares, optionally pinned to mu.

    Row-major fill with a check the moment any row, column or diagonal
    completes.  ``fix_first`` restricts cell (0,0) to the identity; for a free
    constant the full count is then exactly |G| times the restricted count.
    A pinned mu with n*mu different from the group's element sum short-circuits
    to an exhaustive zero (summing all lines row-wise gives n*mu, element-wise
    the group total).
    """
    if spec.order != n * n:
        raise FormatError(f"group order {spec.order} is not {n}^2")
    if spec.order > MAX_SEARCH_ORDER:
        raise FormatError("group too large for the search oracle")
    start = time.perf_counter()
    profile = classify(spec)
    if mu is not None:
        mu = spec.element(mu)
        if spec.scale(n, mu) != profile.total_sum:
            return SearchReport(
                spec, n, mu, 0, True, 0, time.perf_counter() - start, (),
                fix_first, shortcut="line-sum-total", backend=backend_name(),
            )
    if n == 0:
        raise FormatError("side must be positive")
    add_tab = _addition_table(spec)
    mu_idx = spec.index(mu) if mu is not None else -1
    out = np.zeros((max(cap, 1), n * n), dtype=np.int64)
    kernel = get_kernel()
    count, stored, nodes, exhausted = kernel(
        n, add_tab, mu_idx, 1 if fix_first else 0, cap, budget, out
    )
    elems = list(spec.elements())
    squares = []
    for s in range(int(stored)):
        flat = [elems[int(idx)] for idx in out[s]]
        cells = tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))
        squares.append(Square(spec, cells))
    return SearchReport(
        spec,
        n,
        mu,
        int(count),
        bool(exhausted),
        int(nodes),
        time.perf_counter() - start,
        tuple(squares),
        fix_first,
        backend=backend_name(),
    )


# ---------------------------------------------------------------------------
# spectrum of magic constants


@dataclass(frozen=True)
class SpectrumEntry:
    status: str  # achieved | impossible | unknown
    origin: Optional[str] = None  # constructed | translated | searched
    witness: Optional[Square] = None
    exhausted: bool = False


@dataclass(frozen=True)
class SpectrumReport:
    spec: GroupSpec
    n: int
    entries: dict
    coset_lower_bound: frozenset
    exhaustive: bool

    def achieved(self) -> set:
        return {mu for mu, e in self.entries.items() if e.status == "achieved"}

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "n": self.n,
            "exhaustive": self.exhaustive,
            "coset_lower_bound": sorted(list(m) for m in self.coset_lower_bound),
            "entries": [
                {
                    "mu": list(mu),
                    "status": e.status,
                    "origin": e.origin,
                    "witness": e.witness.to_json() if e.witness is not None else None,
                }
                for mu, e in sorted(self.entries.items())
            ],
        }


def spectrum(
    spec: GroupSpec,
    n: int,
    budget: int = DEFAULT_BUDGET,
    search: bool = True,
) -> SpectrumReport:
    """Explore which magic constants side-n squares over the group achieve.

    Seeds with the constructive builder and any embedded squares, closes the
    achieved set under translation (mu + n*x is witnessed by adding x
    everywhere), then spends ``budget`` nodes per remaining constant on
    a pinned search.  Partial knowledge is reported as such, never asserted
    away.
    """
    if spec.order != n * n:
        raise FormatError(f"group order {spec.order} is not {n}^2")
    if spec.order > MAX_SEARCH_ORDER:
        raise FormatError("group too large for the search oracle")
    profile = classify(spec)
    entries: dict = {}

    def note(mu, entry):
        if mu not in entries or entries[mu].status != "achieved":
            entries[mu] = entry

    seeds: list[Square] = []
    if n > 2 and profile.in_g:
        result = build_zms(spec)
        if result.ok:
            seeds.append(result.square)
    for _, fig_sq in figures.figures_for(spec, n):
        seeds.append(fig_sq)
    for seed in seeds:
        report = verify(seed)
        if not report.is_magic:
            continue
        note(report.constant, SpectrumEntry("achieved", "constructed", seed))
        for x in spec.elements():
            shifted = translate(seed, x)
            mu2 = spec.add(report.constant, spec.scale(n, x))
            if mu2 not in entries:
                note(mu2, SpectrumEntry("achieved", "translated", shifted))
    coset = frozenset()
    if entries:
        mu0 = sorted(entries)[0]
        coset = frozenset(spec.add(mu0, spec.scale(n, x)) for x in spec.elements())
    for mu in spec.elements():
        if mu in entries:
            continue
        if spec.scale(n, mu) != profile.total_sum:
            entries[mu] = SpectrumEntry("impossible", "line-sum-total", None, exhausted=True)
            continue
        if not search:
            entries[mu] = SpectrumEntry("unknown")
            continue
        rep = exhaustive_search(spec, n, mu=mu, budget=budget, cap=1)
        if rep.count > 0:
            entries[mu] = SpectrumEntry("achieved", "searched", rep.squares[0] if rep.squares else None)
        elif rep.exhaustive:
            entries[mu] = SpectrumEntry("impossible", "searched", None, exhausted=True)
        else:
            entries[mu] = SpectrumEntry("unknown")
    exhaustive = all(e.status != "unknown" for e in entries.values())
    return SpectrumReport(spec, n, entries, coset, exhaustive)

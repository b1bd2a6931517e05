"""Backtracking kernel for magic-square search over an encoded group.

Elements are integer indices into the lexicographic enumeration; the group
operation is a dense addition table.  Cells are filled row-major; a line is
checked the moment its last cell lands, which prunes the tree hard.  The same
function body runs either as a numba-compiled kernel or as plain Python, so
the two backends are bit-for-bit interchangeable; ZMSQ_BACKEND=python forces
the fallback.
"""

from __future__ import annotations

import os

import numpy as np


def _search_impl(n, add_tab, mu_filter, fix_first, cap, budget, out):
    """Count (and collect up to ``cap``) completions of an n x n magic square.

    mu_filter >= 0 pins the magic constant; -1 leaves it free, in which case
    the first completed row pins a candidate that the rest must match.
    Returns (count, stored, nodes, exhausted).
    """
    N = n * n
    cells = np.full(N, -1, np.int64)
    used = np.zeros(add_tab.shape[0], np.uint8)
    row_sum = np.zeros(n, np.int64)
    col_sum = np.zeros(n, np.int64)
    diag_sum = np.int64(0)
    adiag_sum = np.int64(0)
    sv_row = np.zeros(N, np.int64)
    sv_col = np.zeros(N, np.int64)
    sv_diag = np.zeros(N, np.int64)
    sv_adiag = np.zeros(N, np.int64)
    sv_mu = np.zeros(N, np.int64)
    mu = np.int64(mu_filter)
    count = np.int64(0)
    stored = np.int64(0)
    nodes = np.int64(0)
    exhausted = np.int64(1)
    pos = 0
    last = np.int64(-1)  # last value tried at the current position
    while pos >= 0:
        i = pos // n
        j = pos % n
        limit = 1 if (fix_first == 1 and pos == 0) else N
        pick = np.int64(-1)
        t = last + 1
        while t < limit:
            if used[t] == 0:
                r = add_tab[row_sum[i], t]
                c = add_tab[col_sum[j], t]
                mu_eff = mu
                ok = True
                if j == n - 1:
                    if mu_eff < 0:
                        mu_eff = r
                    elif r != mu_eff:
                        ok = False
                if ok and i == n - 1 and c != mu_eff:
                    ok = False
                if ok and i == j:
                    d = add_tab[diag_sum, t]
                    if i == n - 1 and d != mu_eff:
                        ok = False
                if ok and i + j == n - 1:
                    a = add_tab[adiag_sum, t]
                    if i == n - 1 and j == 0 and a != mu_eff:
                        ok = False
                if ok:
                    pick = t
                    break
            t += 1
        if pick < 0:
            pos -= 1
            if pos >= 0:
                last = cells[pos]
                i2 = pos // n
                j2 = pos % n
                used[last] = 0
                cells[pos] = -1
                row_sum[i2] = sv_row[pos]
                col_sum[j2] = sv_col[pos]
                diag_sum = sv_diag[pos]
                adiag_sum = sv_adiag[pos]
                mu = sv_mu[pos]
            continue
        nodes += 1
        if nodes > budget:
            exhausted = 0
            break
        sv_row[pos] = row_sum[i]
        sv_col[pos] = col_sum[j]
        sv_diag[pos] = diag_sum
        sv_adiag[pos] = adiag_sum
        sv_mu[pos] = mu
        cells[pos] = pick
        used[pick] = 1
        row_sum[i] = add_tab[sv_row[pos], pick]
        col_sum[j] = add_tab[sv_col[pos], pick]
        if i == j:
            diag_sum = add_tab[sv_diag[pos], pick]
        if i + j == n - 1:
            adiag_sum = add_tab[sv_adiag[pos], pick]
        if j == n - 1 and mu < 0:
            mu = row_sum[i]
        if pos == N - 1:
            count += 1
            if stored < cap:
                for q in range(N):
                    out[stored, q] = cells[q]
                stored += 1
            used[pick] = 0
            cells[pos] = -1
            row_sum[i] = sv_row[pos]
            col_sum[j] = sv_col[pos]
            diag_sum = sv_diag[pos]
            adiag_sum = sv_adiag[pos]
            mu = sv_mu[pos]
            last = pick
            continue
        pos += 1
        last = np.int64(-1)
    return count, stored, nodes, exhausted


search_python = _search_impl

try:
    from numba import njit

    search_numba = njit(cache=True)(_search_impl)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    search_numba = None
    HAVE_NUMBA = False


def backend_name() -> str:
    """The active backend: ZMSQ_BACKEND overrides, else numba when importable."""
    choice = os.environ.get("ZMSQ_BACKEND", "auto").lower()
    if choice not in ("auto", "numba", "python"):
        raise ValueError(f"ZMSQ_BACKEND must be auto|numba|python, not {choice!r}")
    if choice == "python":
        return "python"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("ZMSQ_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if HAVE_NUMBA else "python"


def get_kernel():
    return search_numba if backend_name() == "numba" else search_python

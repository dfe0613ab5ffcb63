"""Exact linear algebra over Gaussian rationals.

Rows are sparse ``{column: scalar}`` dicts.  Elimination clears row
denominators first and keeps every intermediate value exact, so reduced
echelon forms and nullspace bases are canonical and bit-reproducible.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .coeffring import GaussianRational, ONE, ZERO


def _clear_denominators(row: dict) -> dict:
    lcm = 1
    for value in row.values():
        lcm = lcm * value.re.denominator // math.gcd(lcm, value.re.denominator)
        lcm = lcm * value.im.denominator // math.gcd(lcm, value.im.denominator)
    if lcm == 1:
        return dict(row)
    factor = GaussianRational(lcm)
    return {c: v * factor for c, v in row.items()}


def rref(rows: Sequence[dict], ncols: int):
    """Reduced row-echelon form under the natural column order.

    Returns ``(pivot_rows, pivot_cols)`` where ``pivot_rows[k]`` has a
    leading 1 in column ``pivot_cols[k]`` and zeros in every other pivot
    column.  Input rows are not modified.
    """
    pivot_rows: list[dict] = []
    pivot_cols: list[int] = []
    for row in rows:
        work = _clear_denominators(row)
        for prow, pcol in zip(pivot_rows, pivot_cols):
            factor = work.get(pcol)
            if factor is None or factor.is_zero:
                continue
            for c, v in prow.items():
                upd = work.get(c, ZERO) - factor * v
                if upd.is_zero:
                    work.pop(c, None)
                else:
                    work[c] = upd
        work = {c: v for c, v in work.items() if not v.is_zero}
        if not work:
            continue
        lead = min(work)
        inv = ONE / work[lead]
        work = {c: v * inv for c, v in work.items()}
        # back-eliminate the new pivot column from earlier rows
        for idx, prow in enumerate(pivot_rows):
            factor = prow.get(lead)
            if factor is None or factor.is_zero:
                continue
            merged = dict(prow)
            for c, v in work.items():
                upd = merged.get(c, ZERO) - factor * v
                if upd.is_zero:
                    merged.pop(c, None)
                else:
                    merged[c] = upd
            pivot_rows[idx] = merged
        pivot_rows.append(work)
        pivot_cols.append(lead)
    order = sorted(range(len(pivot_cols)), key=lambda k: pivot_cols[k])
    return [pivot_rows[k] for k in order], [pivot_cols[k] for k in order]


def nullspace(rows: Sequence[dict], ncols: int) -> list:
    """Canonical nullspace basis as dense coordinate vectors.

    The basis is the reduced-echelon representative of the solution space:
    one vector per free column, re-reduced so the output is unique for a
    given matrix regardless of row order quirks.
    """
    pivot_rows, pivot_cols = rref(rows, ncols)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    vectors = []
    for free in free_cols:
        vec = {free: ONE}
        for prow, pcol in zip(pivot_rows, pivot_cols):
            value = prow.get(free)
            if value is not None and not value.is_zero:
                vec[pcol] = -value
        vectors.append(vec)
    reduced, _ = rref(vectors, ncols)
    return [[row.get(c, ZERO) for c in range(ncols)] for row in reduced]


def solve(matrix: Sequence[Sequence[GaussianRational]], rhs: Sequence[GaussianRational]) -> Optional[list]:
    """Solve ``matrix @ x = rhs`` exactly.

    Returns a particular solution with free variables set to zero, or
    ``None`` when the system is inconsistent.
    """
    ncols = len(matrix[0]) if matrix else 0
    augmented = []
    for row, b in zip(matrix, rhs):
        entry = {c: v for c, v in enumerate(row) if not v.is_zero}
        if not b.is_zero:
            entry[ncols] = b
        augmented.append(entry)
    pivot_rows, pivot_cols = rref(augmented, ncols + 1)
    solution = [ZERO] * ncols
    for prow, pcol in zip(pivot_rows, pivot_cols):
        if pcol == ncols:
            return None
        solution[pcol] = prow.get(ncols, ZERO)
    return solution


def matrix_rank(rows: Sequence[dict], ncols: int) -> int:
    return len(rref(rows, ncols)[1])

"""Exact sparse linear algebra over the integers and over GF(2).

Rows are dicts ``{column: coefficient}`` with no zero entries.  Relation
matrices coming from forests have tiny, mostly unit, coefficients, so unit
pivoting removes almost everything before any gcd work is needed.
"""

from __future__ import annotations

from fractions import Fraction


class InconsistentSystem(RuntimeError):
    """Elimination produced a relation among columns that must stay independent."""


def _axpy(target: dict, coef, row: dict):
    """target += coef * row, in place, dropping zeros."""
    for c, v in row.items():
        w = target.get(c, 0) + coef * v
        if w:
            target[c] = w
        else:
            target.pop(c, None)


def reduce_onto(rows, free_columns, pivot_rank=None):
    """Echelon-reduce ``rows`` pivoting only on columns in ``free_columns``.

    Returns ``(pivots, leftovers)`` where ``pivots`` maps a free column to its
    (monic) pivot row, in insertion order, and ``leftovers`` holds reduced rows
    that still have entries outside the pivot set.  Unit pivots are preferred;
    a non-unit pivot is taken only when no unit is available and turns the row
    into rational coefficients.  ``pivot_rank`` orders candidate pivot columns
    (highest first) and defaults to column order.
    """
    pivots: dict = {}
    deferred = []
    rank = pivot_rank or (lambda c: c)

    def reduce(row):
        row = dict(row)
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                return row
            for c in hits:
                coef = row.get(c)
                if coef:
                    _axpy(row, -coef, pivots[c])

    def try_pivot(row, allow_nonunit):
        cands = [c for c in row if c in free_columns]
        if not cands:
            return False
        units = [c for c in cands if row[c] in (1, -1)]
        if units:
            c = max(units, key=rank)
        elif allow_nonunit:
            c = max(cands, key=rank)
        else:
            return False
        inv = row[c]
        if inv in (1, -1):
            pivots[c] = {col: v * inv for col, v in row.items()}
        else:
            pivots[c] = {col: Fraction(v) / inv for col, v in row.items()}
        return True

    for row in rows:
        r = reduce(row)
        if r and not try_pivot(r, False):
            deferred.append(r)

    leftovers = []
    progress = True
    while deferred and progress:
        progress = False
        again = []
        for row in deferred:
            r = reduce(row)
            if not r:
                continue
            if try_pivot(r, False):
                progress = True
            else:
                again.append(r)
        deferred = again
    for row in deferred:
        r = reduce(row)
        if r and not try_pivot(r, True):
            leftovers.append(r)
    leftovers = [r for r in (reduce(x) for x in leftovers) if r]
    return pivots, leftovers


def solve_pivots(pivots: dict) -> dict:
    """Back-substitute echelon pivots: column -> expression in non-pivot columns.

    A pivot row reads ``c + sum(a_j x_j) = 0``; its columns other than ``c``
    only ever become pivots later, so processing in reverse insertion order
    resolves every dependency once.
    """
    solved: dict = {}
    for c in reversed(list(pivots)):
        expr: dict = {}
        for col, v in pivots[c].items():
            if col == c:
                continue
            if col in solved:
                _axpy(expr, -v, solved[col])
            else:
                w = expr.get(col, 0) - v
                if w:
                    expr[col] = w
                else:
                    expr.pop(col, None)
        solved[c] = expr
    return solved


def smith_invariants(rows, ncols) -> list:
    """Nonzero Smith invariant factors of the integer matrix given by sparse rows."""
    rows = [dict(r) for r in rows if r]
    factors = []
    # unit pivoting: each unit pivot contributes an invariant factor 1 and
    # removes its row and column (column ops clear the rest of the row)
    col_rows: dict = {}
    live = {}
    for i, r in enumerate(rows):
        live[i] = r
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    changed = True
    while changed:
        changed = False
        for i in sorted(live, key=lambda i: len(live[i])):
            r = live.get(i)
            if r is None:
                continue
            unit = next((c for c, v in sorted(r.items(), key=lambda cv: len(col_rows[cv[0]]))
                         if v in (1, -1)), None)
            if unit is None:
                continue
            inv = r[unit]
            for j in list(col_rows[unit]):
                if j == i:
                    continue
                other = live[j]
                coef = other[unit] * inv
                before = set(other)
                _axpy(other, -coef, r)
                after = set(other)
                for c in before - after:
                    col_rows[c].discard(j)
                for c in after - before:
                    col_rows.setdefault(c, set()).add(j)
                if not other:
                    del live[j]
            for c in r:
                col_rows[c].discard(i)
            del live[i]
            factors.append(1)
            changed = True
    if live:
        cols = sorted({c for r in live.values() for c in r})
        index = {c: q for q, c in enumerate(cols)}
        dense = []
        for r in live.values():
            line = [0] * len(cols)
            for c, v in r.items():
                line[index[c]] = v
            dense.append(line)
        factors.extend(dense_smith_diagonal(dense))
    return sorted(factors)


def dense_smith_diagonal(A) -> list:
    """Nonzero invariant factors of a dense integer matrix (list of lists)."""
    from math import gcd
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for r in A:
            r[t], r[pj] = r[pj], r[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for r in A:
                        r[j] -= q * r[t]
                    if A[t][j]:
                        for r in A:
                            r[t], r[j] = r[j], r[t]
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    # enforce divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = gcd(diag[i], diag[j])
            diag[i], diag[j] = g, diag[i] * diag[j] // g
    return diag


def rank_mod2(rows) -> int:
    """Rank over GF(2) of sparse integer rows."""
    basis: dict = {}
    r = 0
    for row in rows:
        v = 0
        for c, x in row.items():
            if x & 1:
                v |= 1 << c
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                r += 1
                break
    return r


def rank_rational(rows) -> int:
    pivots, leftovers = reduce_onto(rows, _Everything())
    assert not leftovers
    return len(pivots)


class _Everything:
    def __contains__(self, _):
        return True


def solve_mod2(rows, free_columns) -> dict:
    """GF(2) analogue of ``reduce_onto`` + ``solve_pivots``.

    Returns column -> set of non-pivot columns it equals modulo the rows.
    Raises ``InconsistentSystem`` if a row survives with only non-free columns.
    """
    pivots: dict = {}
    for row in rows:
        v = {c for c, x in row.items() if x & 1}
        while True:
            hits = [c for c in v if c in pivots]
            if not hits:
                break
            for c in hits:
                if c in v:
                    v ^= pivots[c]
        if not v:
            continue
        cands = [c for c in v if c in free_columns]
        if not cands:
            raise InconsistentSystem("mod-2 relation among non-free columns")
        pivots[max(cands)] = v
    solved: dict = {}
    for c in reversed(list(pivots)):
        expr = set()
        for col in pivots[c]:
            if col == c:
                continue
            expr ^= solved[col] if col in solved else {col}
        solved[c] = expr
    return solved

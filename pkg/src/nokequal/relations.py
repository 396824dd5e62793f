"""Instances of the three-term and dual Jacobi relations among canonical forests."""

from __future__ import annotations

from itertools import combinations

from .forest import Forest, build_forest, enumerate_all, signed_canonical
from .params import Parameters


def member_links(f: Forest):
    """Edges of ``f`` as directed pairs of representative members."""
    def rep(ref):
        kind, i = ref
        return f.squares[i][0] if kind == "s" else f.rounds[i]
    return [(rep(u), rep(v)) for u, v in f.edges]


def _square_components(f: Forest):
    label = {}
    nbrs = {i: [] for i in range(len(f.squares))}
    for u, v in f.edges:
        if u[0] == "s" and v[0] == "s":
            nbrs[u[1]].append(v[1])
            nbrs[v[1]].append(u[1])
    for i in range(len(f.squares)):
        if i in label:
            continue
        stack = [i]
        label[i] = i
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in label:
                    label[y] = i
                    stack.append(y)
    return label


def _accumulate(row: dict, coef: int, f: Forest, p: Parameters, column: dict):
    sign, c = signed_canonical(f, p)
    col = column[c]
    v = row.get(col, 0) + coef * sign
    if v:
        row[col] = v
    else:
        row.pop(col, None)


def three_term_rows(p: Parameters, deg: int, column: dict):
    """One row per triple of squares lying in distinct components of a context forest.

    With ``e_XY`` the edge X->Y appended at the end of the context's
    orientation order, the row is ``e_AB e_BC + e_BC e_CA + e_CA e_AB``.
    """
    ctx_deg = deg - 2 * p.edge_degree
    if ctx_deg < 0:
        return
    for g in enumerate_all(p, ctx_deg):
        if len(g.squares) < 3:
            continue
        label = _square_components(g)
        base = len(g.edges)
        for a, b, c in combinations(range(len(g.squares)), 3):
            if len({label[a], label[b], label[c]}) < 3:
                continue
            A, B, C = ("s", a), ("s", b), ("s", c)
            row: dict = {}
            for first, second in (((A, B), (B, C)), ((B, C), (C, A)), ((C, A), (A, B))):
                f = Forest(g.squares, g.rounds, g.edges + (first, second),
                           g.order + (("e", base), ("e", base + 1)))
                _accumulate(row, 1, f, p, column)
            if row:
                yield row


def jacobi_rows(p: Parameters, deg: int, column: dict):
    """One row per square, fixed (k-2)-subset and full set of attached rounds.

    Each instance is generated from its term whose free square member is the
    smallest of the moving integers ``j_1 < ... < j_m``.
    """
    sign_step = -1 if (p.d - 1) % 2 else 1
    for f in enumerate_all(p, deg):
        links = member_links(f)
        for s, members in enumerate(f.squares):
            slots = [t for t, (u, v) in enumerate(f.edges) if u == ("s", s) and v[0] == "r"]
            rounds = [f.rounds[f.edges[t][1][1]] for t in slots]
            if not rounds:
                continue
            for free in members:
                if free > min(rounds):
                    continue
                fixed = tuple(x for x in members if x != free)
                moving = sorted(rounds + [free])
                row: dict = {}
                for ell, j in enumerate(moving, start=1):
                    squares = list(f.squares)
                    squares[s] = fixed + (j,)
                    old = members[0]
                    new_links = [(fixed[0] if u == old else u, fixed[0] if v == old else v)
                                 for u, v in links]
                    others = [x for x in moving if x != j]
                    for t, r in zip(slots, others):
                        new_links[t] = (fixed[0], r)
                    term = build_forest(p.n, squares, new_links, f.order)
                    _accumulate(row, sign_step ** ell, term, p, column)
                if row:
                    yield row


def relation_rows(p: Parameters, deg: int, column: dict):
    rows = list(three_term_rows(p, deg, column))
    rows.extend(jacobi_rows(p, deg, column))
    return rows

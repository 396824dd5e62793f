"""The graded ring: classes over Z or Z2, superposition products and straightening."""

from __future__ import annotations

import hashlib
import os
import pickle
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .forest import (
    ContractError,
    Forest,
    _basic_shape,
    canonical_sign_form,
    enumerate_all,
    enumerate_basic,
    validate_forest,
)
from .linalg import InconsistentSystem, reduce_onto, smith_invariants, solve_mod2, solve_pivots
from .params import Parameters
from .relations import relation_rows

Z, Z2 = "Z", "Z2"
RINGS = (Z, Z2)


def forest_degree(f: Forest, p: Parameters) -> int:
    return len(f.squares) * p.square_degree + len(f.edges) * p.edge_degree


# -- classes ------------------------------------------------------------------

class FormalSum(dict):
    """Canonical forest -> nonzero integer coefficient; keys need not be basic."""

    def add(self, f: Forest, coef: int):
        v = self.get(f, 0) + coef
        if v:
            self[f] = v
        else:
            self.pop(f, None)


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    params: Parameters
    ring: str
    terms: tuple  # sorted ((forest, coeff), ...), no zero coefficients

    @classmethod
    def from_dict(cls, p: Parameters, ring: str, terms: dict) -> "CohomologyClass":
        if ring not in RINGS:
            raise ValueError(f"unknown coefficient ring {ring!r}")
        items = []
        for f, c in terms.items():
            c = c % 2 if ring == Z2 else c
            if c:
                items.append((f, c))
        items.sort(key=lambda fc: fc[0].sort_key())
        return cls(p, ring, tuple(items))

    @classmethod
    def zero(cls, p: Parameters, ring: str = Z):
        return cls(p, ring, ())

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Common degree of the terms, ``None`` for zero, ``"mixed"`` otherwise."""
        degs = {forest_degree(f, self.params) for f, _ in self.terms}
        if not degs:
            return None
        return degs.pop() if len(degs) == 1 else "mixed"

    def _check(self, other):
        if not isinstance(other, CohomologyClass):
            raise TypeError(f"expected a CohomologyClass, got {type(other).__name__}")
        if other.params != self.params:
            raise ContractError(f"parameter mismatch: {self.params} vs {other.params}")
        if other.ring != self.ring:
            raise ContractError(f"coefficient ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        out = self.as_dict()
        for f, c in other.terms:
            out[f] = out.get(f, 0) + c
        return CohomologyClass.from_dict(self.params, self.ring, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return CohomologyClass.from_dict(self.params, self.ring, {f: k * c for f, c in self.terms})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other, self.params)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return (self.params, self.ring, self.terms) == (other.params, other.ring, other.terms)

    def __hash__(self):
        return hash((self.params, self.ring, self.terms))

    def __repr__(self):
        if not self.terms:
            return f"CohomologyClass({self.ring}, 0)"
        body = " + ".join(f"{c}*{f!r}" for f, c in self.terms)
        return f"CohomologyClass({self.ring}, {body})"


def unit(p: Parameters, ring: str = Z) -> CohomologyClass:
    (empty,) = enumerate_all(p, 0)
    return CohomologyClass.from_dict(p, ring, {empty: 1})


def basis_class(f: Forest, p: Parameters, ring: str = Z, coef: int = 1) -> CohomologyClass:
    if not _basic_shape(f) or f not in enumerate_basic(p, forest_degree(f, p)):
        raise ContractError("basis_class requires a basic canonical forest")
    return CohomologyClass.from_dict(p, ring, {f: coef})


def reduce_mod2(c: CohomologyClass) -> CohomologyClass:
    return CohomologyClass.from_dict(c.params, Z2, c.as_dict())


# -- straightening ------------------------------------------------------------

@dataclass(frozen=True)
class RelationMatrix:
    params: Parameters
    degree: int
    columns: tuple   # enumerate_all order
    rows: tuple      # sparse dict rows

    @property
    def shape(self):
        return (len(self.rows), len(self.columns))

    def rank(self) -> int:
        return len(self.invariant_factors())

    def invariant_factors(self) -> list:
        return smith_invariants(self.rows, len(self.columns))

    def dense(self):
        out = []
        for r in self.rows:
            line = [0] * len(self.columns)
            for c, v in r.items():
                line[c] = v
            out.append(line)
        return out


def relation_space(p: Parameters, deg: int) -> RelationMatrix:
    columns = enumerate_all(p, deg)
    index = {f: i for i, f in enumerate(columns)}
    return RelationMatrix(p, deg, columns, tuple(relation_rows(p, deg, index)))


class Straightener:
    """Expresses every canonical forest of one degree in the basic basis."""

    def __init__(self, p: Parameters, deg: int, table=None):
        self.params = p
        self.degree = deg
        self.columns = enumerate_all(p, deg)
        self.index = {f: i for i, f in enumerate(self.columns)}
        self.basis = enumerate_basic(p, deg)
        self.table = table if table is not None else self._solve()

    def _solve(self) -> dict:
        basic_cols = {self.index[f] for f in self.basis}
        nonbasic = set(range(len(self.columns))) - basic_cols
        rows = relation_rows(self.params, self.degree, self.index)
        pivots, leftovers = reduce_onto(rows, nonbasic)
        if leftovers:
            raise InconsistentSystem(
                f"relations force a dependency among basic forests in degree {self.degree}")
        missing = nonbasic - set(pivots)
        if missing:
            raise InconsistentSystem(
                f"{len(missing)} non-basic forests of degree {self.degree} not reducible")
        table = {}
        for col, expr in solve_pivots(pivots).items():
            out = {}
            for b, v in expr.items():
                if isinstance(v, Fraction):
                    if v.denominator != 1:
                        raise InconsistentSystem("non-integral straightening coefficient")
                    v = int(v)
                out[self.basis.index_of(self.columns[b])] = v
            table[col] = out
        return table

    def coordinates(self, f: Forest) -> dict:
        """basis index -> integer coefficient for a canonical forest of this degree."""
        if f in self.basis:
            return {self.basis.index_of(f): 1}
        try:
            return self.table[self.index[f]]
        except KeyError:
            raise ContractError(f"not a canonical forest of degree {self.degree}: {f!r}")


CACHE_FORMAT = hashlib.sha256(b"nokequal-straightener-v1").hexdigest()[:12]


class StraightenerCache:
    """Per-(d, k, n, degree) cache; many readers, one writer at a time."""

    def __init__(self):
        self._store: dict = {}
        self._lock = threading.Lock()

    def _path(self, p: Parameters, deg: int):
        root = os.environ.get("NOKE_CACHE_DIR")
        if not root:
            return None
        return Path(root) / f"straighten-{CACHE_FORMAT}-{p.d}-{p.k}-{p.n}-{deg}.pkl"

    def get(self, p: Parameters, deg: int) -> Straightener:
        key = (p, deg)
        s = self._store.get(key)
        if s is not None:
            return s
        with self._lock:
            s = self._store.get(key)
            if s is None:
                s = self._load(p, deg) or Straightener(p, deg)
                self._save(s)
                self._store[key] = s
        return s

    def _load(self, p, deg):
        path = self._path(p, deg)
        if path is None or not path.exists():
            return None
        with open(path, "rb") as fh:
            table = pickle.load(fh)
        return Straightener(p, deg, table=table)

    def _save(self, s: Straightener):
        path = self._path(s.params, s.degree)
        if path is None or path.exists():
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            pickle.dump(s.table, fh)
        os.replace(tmp, path)

    def clear(self):
        with self._lock:
            self._store.clear()


CACHE = StraightenerCache()


def straighten(s: dict, p: Parameters, ring: str = Z) -> CohomologyClass:
    """Express a formal sum of canonical forests in the basic basis."""
    out: dict = {}
    for f, c in s.items():
        deg = forest_degree(f, p)
        st = CACHE.get(p, deg)
        for b, v in st.coordinates(f).items():
            key = st.basis[b]
            out[key] = out.get(key, 0) + c * v
    return CohomologyClass.from_dict(p, ring, out)


def straighten_mod2_direct(s: dict, p: Parameters) -> CohomologyClass:
    """Independent mod-2 route: eliminate over GF(2) from scratch."""
    out: dict = {}
    by_degree: dict = {}
    for f, c in s.items():
        by_degree.setdefault(forest_degree(f, p), {})[f] = c
    for deg, part in by_degree.items():
        columns = enumerate_all(p, deg)
        index = {f: i for i, f in enumerate(columns)}
        basis = enumerate_basic(p, deg)
        nonbasic = {index[f] for f in columns if f not in basis}
        solved = solve_mod2(relation_rows(p, deg, index), nonbasic)
        for f, c in part.items():
            if not c & 1:
                continue
            col = index[f]
            targets = solved[col] if col in solved else {col}
            for t in targets:
                key = columns[t]
                out[key] = out.get(key, 0) + 1
    return CohomologyClass.from_dict(p, Z2, out)


# -- products -----------------------------------------------------------------

class ZeroReason(Enum):
    SQUARE_OVERLAP = "SquareOverlap"
    UNORIENTED_CYCLE = "UnorientedCycle"
    BARE_SQUARE = "BareSquare"


@dataclass(frozen=True)
class Zero:
    reason: ZeroReason


@dataclass(frozen=True)
class Graph:
    graph: Forest


def _has_cycle(nverts, edges) -> bool:
    parent = list(range(nverts))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return True
        parent[ru] = rv
    return False


def _bare_squares(g: Forest):
    attached = {u[1] for u, v in g.edges if u[0] == "s" and v[0] == "r"}
    attached |= {v[1] for u, v in g.edges if v[0] == "s" and u[0] == "r"}
    return [i for i in range(len(g.squares)) if i not in attached]


def superpose(t1: Forest, t2: Forest, p: Parameters):
    """Overlay two forests; returns ``Zero(reason)`` or ``Graph(g)``."""
    for t in (t1, t2):
        if t.n != p.n:
            raise ContractError(f"forest on {t.n} points, parameters say n={p.n}")
    s1 = [set(s) for s in t1.squares]
    for s in t2.squares:
        if any(s1_ & set(s) for s1_ in s1):
            return Zero(ZeroReason.SQUARE_OVERLAP)
    squares = t1.squares + t2.squares
    in_square = {x: i for i, s in enumerate(squares) for x in s}
    rounds = tuple(x for x in range(1, p.n + 1) if x not in in_square)
    round_idx = {x: j for j, x in enumerate(rounds)}

    def retarget(t: Forest, offset: int):
        def ref(r):
            kind, i = r
            if kind == "s":
                return ("s", i + offset)
            x = t.rounds[i]
            return ("s", in_square[x]) if x in in_square else ("r", round_idx[x])
        return tuple((ref(u), ref(v)) for u, v in t.edges)

    edges = retarget(t1, 0) + retarget(t2, len(t1.squares))
    ns1, ne1 = len(t1.squares), len(t1.edges)
    order = t1.order + tuple(
        ("s", i + ns1) if kind == "s" else ("e", i + ne1) for kind, i in t2.order)
    g = Forest(squares, rounds, edges, order)

    def vnum(r):
        return r[1] if r[0] == "s" else len(squares) + r[1]
    if _has_cycle(len(squares) + len(rounds), [(vnum(u), vnum(v)) for u, v in edges]):
        return Zero(ZeroReason.UNORIENTED_CYCLE)
    if _bare_squares(g):
        return Zero(ZeroReason.BARE_SQUARE)
    return Graph(g)


def _round_valencies(g: Forest):
    val: dict = {}
    for t, (u, v) in enumerate(g.edges):
        for r in (u, v):
            if r[0] == "r":
                val.setdefault(r[1], []).append(t)
    return val


def expand_relation_R(g: Forest, p: Parameters, choose=None) -> FormalSum:
    """Rewrite every valency-2 round vertex with the product relation.

    A round vertex between squares A and B, with both edges pointing away
    from it and the edge to A earlier in the orientation order, equals
    (round->A, A->B) + (B->A, round->B), each new edge in the slot of the
    edge it replaces.  Summands with a square left without round neighbours
    vanish.  ``choose`` picks which valency-2 round to rewrite next (default:
    smallest member).
    """
    for r, ts in _round_valencies(g).items():
        if len(ts) > 2:
            raise ContractError(f"round vertex {g.rounds[r]} has valency {len(ts)} > 2")
    flip = -1 if p.d % 2 else 1
    out = FormalSum()
    work = [(1, g)]
    while work:
        coef, h = work.pop()
        twos = [r for r, ts in _round_valencies(h).items() if len(ts) == 2]
        if not twos:
            report = validate_forest(h, p)
            if not report.valid:
                raise ContractError("product expansion left an invalid forest: "
                                    + "; ".join(m for _, m in report.violations))
            sign, c = canonical_sign_form(h, p)
            out.add(c, coef * sign)
            continue
        r = choose(h, twos) if choose else min(twos, key=lambda j: h.rounds[j])
        rref = ("r", r)
        pos = {ref: q for q, ref in enumerate(h.order)}
        t1, t2 = sorted(_round_valencies(h)[r], key=lambda t: pos[("e", t)])
        sign = 1
        ends = []
        for t in (t1, t2):
            u, v = h.edges[t]
            if v == rref:
                sign *= flip
                ends.append(u)
            else:
                ends.append(v)
        A, B = ends
        for new1, new2 in (((rref, A), (A, B)), ((B, A), (rref, B))):
            edges = list(h.edges)
            edges[t1], edges[t2] = new1, new2
            term = Forest(h.squares, h.rounds, tuple(edges), h.order)
            if _bare_squares(term):
                continue
            work.append((coef * sign, term))
    return out


def _check_pair(c1: CohomologyClass, c2: CohomologyClass, p: Parameters):
    for c in (c1, c2):
        if c.params != p:
            raise ContractError(f"parameter mismatch: {c.params} vs {p}")
    if c1.ring != c2.ring:
        raise ContractError(f"coefficient ring mismatch: {c1.ring} vs {c2.ring}")


_PRODUCT_CACHE: dict = {}
_PRODUCT_LOCK = threading.Lock()


def forest_product(f1: Forest, f2: Forest, p: Parameters) -> FormalSum:
    """Product of two canonical forests as a formal sum of canonical forests."""
    key = (p, f1, f2)
    hit = _PRODUCT_CACHE.get(key)
    if hit is not None:
        return hit
    out = superpose(f1, f2, p)
    result = FormalSum() if isinstance(out, Zero) else expand_relation_R(out.graph, p)
    with _PRODUCT_LOCK:
        _PRODUCT_CACHE[key] = result
    return result


def multiply(c1: CohomologyClass, c2: CohomologyClass, p: Parameters | None = None) -> CohomologyClass:
    p = p or c1.params
    _check_pair(c1, c2, p)
    total = FormalSum()
    for f1, a in c1.terms:
        for f2, b in c2.terms:
            for f, c in forest_product(f1, f2, p).items():
                total.add(f, a * b * c)
    return straighten(total, p, c1.ring)


def product(classes, p: Parameters | None = None) -> CohomologyClass:
    classes = list(classes)
    out = classes[0]
    for c in classes[1:]:
        out = multiply(out, c, p)
    return out

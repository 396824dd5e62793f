"""Oriented k-forests: validation, degree, signed canonical form and basic-forest test.

A forest stores its vertices positionally.  References into a forest are
pairs ``("s", i)`` (square ``i``), ``("r", j)`` (round ``j``) and ``("e", t)``
(edge ``t``).  Internally every vertex is also identified by its smallest
member, which is unique because vertex contents partition ``{1..n}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .params import Parameters

Ref = tuple  # ("s", i) | ("r", j) | ("e", t)


class ContractError(ValueError):
    """An operation was handed an input that breaks its precondition."""


@dataclass(frozen=True)
class Forest:
    """An oriented k-forest (or a forest-like graph during superposition).

    ``squares[i]`` lists the members of square ``i`` in their orientation order,
    ``rounds[j]`` is the member of round ``j``, ``edges[t] = (tail, head)`` and
    ``order`` is the orientation-set ordering of squares and edges.
    """

    squares: tuple
    rounds: tuple
    edges: tuple
    order: tuple

    @property
    def n(self) -> int:
        return sum(len(s) for s in self.squares) + len(self.rounds)

    def sort_key(self):
        return (len(self.squares), self.squares, self.edges)

    def __lt__(self, other: "Forest"):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Forest({describe(self)})"


class SignedForest(NamedTuple):
    sign: int
    forest: Forest


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def rules(self):
        return [rule for rule, _ in self.violations]


def describe(f: Forest) -> str:
    """Compact human-readable rendering, e.g. ``[1 2]->3 [4 5]->6 (1<2<e0<e1)``."""
    def name(ref):
        kind, i = ref
        if kind == "s":
            return "[" + " ".join(map(str, f.squares[i])) + "]"
        return str(f.rounds[i])
    edges = ", ".join(f"{name(t)}->{name(h)}" for t, h in f.edges)
    order = "<".join(f"{kind}{i}" for kind, i in f.order)
    iso = [r for j, r in enumerate(f.rounds) if not any(("r", j) in e for e in f.edges)]
    sq = " ".join(name(("s", i)) for i in range(len(f.squares)))
    return f"squares {sq or '-'}; edges {edges or '-'}; order {order or '-'}; isolated {iso}"


# -- validation ---------------------------------------------------------------

def validate_forest(f: Forest, p: Parameters) -> ValidationReport:
    """Report every violated clause of the k-forest definition."""
    bad = []
    members = [x for s in f.squares for x in s] + list(f.rounds)
    if sorted(members) != list(range(1, p.n + 1)):
        seen = set()
        dup = sorted({x for x in members if x in seen or seen.add(x)})
        missing = sorted(set(range(1, p.n + 1)) - set(members))
        extra = sorted(x for x in set(members) if not 1 <= x <= p.n)
        bad.append(("partition", f"vertex contents must partition 1..{p.n}: "
                    f"repeated {dup}, missing {missing}, out of range {extra}"))
    for i, s in enumerate(f.squares):
        if len(s) != p.k - 1:
            bad.append(("square_size", f"square s{i} has {len(s)} members, needs k-1={p.k - 1}"))

    def exists(ref):
        kind, i = ref
        pool = f.squares if kind == "s" else f.rounds if kind == "r" else None
        return pool is not None and isinstance(i, int) and 0 <= i < len(pool)

    adj = {("s", i): [] for i in range(len(f.squares))}
    adj.update({("r", j): [] for j in range(len(f.rounds))})
    good_edges = []
    for t, (u, v) in enumerate(f.edges):
        if not (exists(u) and exists(v)):
            bad.append(("edge_ref", f"edge e{t} references a missing vertex"))
        elif u == v:
            bad.append(("acyclic", f"edge e{t} is a loop"))
        else:
            adj[u].append(v)
            adj[v].append(u)
            good_edges.append((u, v))

    # union-find for cycles (multi-edges included)
    parent = {v: v for v in adj}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v
    for u, v in good_edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            bad.append(("acyclic", "underlying graph has a cycle"))
            break
        parent[ru] = rv

    for j in range(len(f.rounds)):
        nbrs = adj[("r", j)]
        if len(nbrs) > 1:
            bad.append(("round_valency", f"round r{j} has valency {len(nbrs)}"))
        elif nbrs and nbrs[0][0] != "s":
            bad.append(("round_valency", f"round r{j} is attached to a round vertex"))
    for i in range(len(f.squares)):
        if not any(v[0] == "r" for v in adj[("s", i)]):
            bad.append(("square_round_neighbor",
                        f"square s{i}: the immediate neighbors of a square vertex "
                        "must contain a round vertex"))

    expected = {("s", i) for i in range(len(f.squares))} | {("e", t) for t in range(len(f.edges))}
    if len(f.order) != len(expected) or set(f.order) != expected:
        bad.append(("orientation_order", "orientation order must be a permutation of "
                    "all square and edge identifiers"))
    return ValidationReport(tuple(bad))


def require_valid(f: Forest, p: Parameters):
    report = validate_forest(f, p)
    if not report.valid:
        raise ContractError("invalid forest: " + "; ".join(m for _, m in report.violations))


def degree(f: Forest, p: Parameters) -> int:
    require_valid(f, p)
    return len(f.squares) * p.square_degree + len(f.edges) * p.edge_degree


# -- construction helpers -----------------------------------------------------

def build_forest(n: int, squares, links, order=None) -> Forest:
    """Build a forest from member-level data.

    ``links`` are directed pairs ``(u, v)`` of members; each member stands for
    the vertex containing it.  ``order`` lists ``("s", i)``/``("e", t)`` with
    indices into ``squares``/``links``; default is squares then edges.
    """
    squares = tuple(tuple(s) for s in squares)
    in_square = {x: i for i, s in enumerate(squares) for x in s}
    rounds = tuple(x for x in range(1, n + 1) if x not in in_square)
    round_idx = {x: j for j, x in enumerate(rounds)}

    def ref(x):
        if x in in_square:
            return ("s", in_square[x])
        return ("r", round_idx[x])
    edges = tuple((ref(u), ref(v)) for u, v in links)
    if order is None:
        order = [("s", i) for i in range(len(squares))] + [("e", t) for t in range(len(edges))]
    return Forest(squares, rounds, edges, tuple(order))


def _vid(f: Forest, ref) -> int:
    kind, i = ref
    return min(f.squares[i]) if kind == "s" else f.rounds[i]


class _Canon(NamedTuple):
    forest: Forest
    square_of: dict   # vid -> canonical square index
    edge_of: dict     # frozenset{vid, vid} -> (canonical edge index, tail vid)


def _canonicalize_graph(n: int, squares: dict, adjacency: dict) -> _Canon:
    """Canonical orientation of an undirected forest.

    ``squares`` maps vid -> members, ``adjacency`` maps vid -> set of vids.
    Each positive-degree component is rooted at the square containing (or
    adjacent to the round containing) its smallest member and traversed
    depth first; round children precede square children, both in increasing
    smallest-member order.
    """
    seen = set()
    comps = []
    for sv in sorted(squares):
        if sv in seen:
            continue
        stack, comp = [sv], []
        seen.add(sv)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adjacency.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)

    sq_order, edge_list, order = [], [], []
    for comp in sorted(comps, key=min):
        low = min(comp)
        if low in squares:
            root = low
        else:
            root = next(iter(adjacency[low]))
        comp_squares, comp_edges = [], []
        stack = [(root, None)]
        while stack:
            v, parent = stack.pop()
            comp_squares.append(v)
            kids = sorted(w for w in adjacency.get(v, ()) if w != parent)
            rkids = [w for w in kids if w not in squares]
            skids = [w for w in kids if w in squares]
            comp_edges.extend((v, w) for w in rkids)
            comp_edges.extend((v, w) for w in skids)
            stack.extend((w, v) for w in reversed(skids))
        # preorder requires edges grouped by tail in preorder; the stack pops
        # children in increasing order, so comp_squares is already preorder.
        pos = {v: i for i, v in enumerate(comp_squares)}
        comp_edges.sort(key=lambda e: pos[e[0]])  # stable: keeps round-then-square
        for v in comp_squares:
            order.append(("s", len(sq_order)))
            sq_order.append(v)
        for e in comp_edges:
            order.append(("e", len(edge_list)))
            edge_list.append(e)

    square_of = {v: i for i, v in enumerate(sq_order)}
    square_members = {x for v in sq_order for x in squares[v]}
    rounds = tuple(x for x in range(1, n + 1) if x not in square_members)
    round_idx = {x: j for j, x in enumerate(rounds)}

    def ref(v):
        return ("s", square_of[v]) if v in squares else ("r", round_idx[v])
    edges = tuple((ref(u), ref(v)) for u, v in edge_list)
    edge_of = {frozenset(e): (t, e[0]) for t, e in enumerate(edge_list)}
    forest = Forest(tuple(tuple(sorted(squares[v])) for v in sq_order), rounds, edges, tuple(order))
    return _Canon(forest, square_of, edge_of)


def canonical_from_graph(n: int, squares: Iterable, links: Iterable) -> Forest:
    """Canonical forest with the given squares (member sets) and undirected member links."""
    sq = {min(s): tuple(s) for s in squares}
    vid = {x: v for v, s in sq.items() for x in s}
    adj = {}
    for u, w in links:
        a, b = vid.get(u, u), vid.get(w, w)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return _canonicalize_graph(n, sq, adj).forest


def _perm_parity(seq) -> int:
    """Parity of the permutation sorting ``seq`` (distinct items)."""
    inv = 0
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return inv & 1


def koszul_sign(positions, odd) -> int:
    """Sign of reordering items into increasing ``positions``.

    Only swaps of two odd-degree items contribute; ``odd[i]`` flags item i.
    """
    odd_positions = [q for q, o in zip(positions, odd) if o]
    return -1 if _perm_parity(odd_positions) else 1


def canonical_sign_form(f: Forest, p: Parameters) -> SignedForest:
    """Return ``(sign, c)`` with ``f = sign * c`` under the orientation relations."""
    require_valid(f, p)
    return signed_canonical(f, p)


def signed_canonical(f: Forest, p: Parameters) -> SignedForest:
    """``canonical_sign_form`` without validation, for internally built forests."""
    squares = {min(s): s for s in f.squares}
    adj = {}
    for u, v in f.edges:
        a, b = _vid(f, u), _vid(f, v)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    canon = _canonicalize_graph(p.n, squares, adj)
    c = canon.forest

    sign = 1
    if p.d % 2:
        for s in f.squares:
            if _perm_parity(s):
                sign = -sign
        for u, v in f.edges:
            _, tail = canon.edge_of[frozenset((_vid(f, u), _vid(f, v)))]
            if tail != _vid(f, u):
                sign = -sign

    cpos = {ref: q for q, ref in enumerate(c.order)}
    positions, odd = [], []
    sq_odd = p.square_degree % 2 == 1
    edge_odd = p.edge_degree % 2 == 1
    for kind, i in f.order:
        if kind == "s":
            positions.append(cpos[("s", canon.square_of[min(f.squares[i])])])
            odd.append(sq_odd)
        else:
            u, v = f.edges[i]
            t, _ = canon.edge_of[frozenset((_vid(f, u), _vid(f, v)))]
            positions.append(cpos[("e", t)])
            odd.append(edge_odd)
    sign *= koszul_sign(positions, odd)
    return SignedForest(sign, c)


def is_canonical(f: Forest, p: Parameters) -> bool:
    s, c = canonical_sign_form(f, p)
    return s == 1 and c == f


# -- basic forests ------------------------------------------------------------

def _basic_shape(f: Forest) -> bool:
    """Basic-forest conditions for a forest already in canonical orientation."""
    nbrs = {("s", i): [] for i in range(len(f.squares))}
    for u, v in f.edges:
        if u[0] == "s":
            nbrs[u].append(v)
        if v[0] == "s":
            nbrs[v].append(u)
    first_of_component = set()
    seen = set()
    for kind, i in f.order:
        if kind != "s" or ("s", i) in seen:
            continue
        # walk this component to mark it and record its first square
        first_of_component.add(i)
        stack = [("s", i)]
        seen.add(("s", i))
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if w[0] == "s" and w not in seen:
                    seen.add(w)
                    stack.append(w)
    for i, members in enumerate(f.squares):
        ref = ("s", i)
        sq_nbrs = [w for w in nbrs[ref] if w[0] == "s"]
        rnd = [f.rounds[w[1]] for w in nbrs[ref] if w[0] == "r"]
        if len(sq_nbrs) > 2:
            return False
        if i in first_of_component and len(sq_nbrs) > 1:
            return False
        if not rnd or max(rnd) < max(members):
            return False
    return True


def is_basic(f: Forest, p: Parameters) -> bool:
    if not is_canonical(f, p):
        raise ContractError("is_basic requires a forest in canonical orientation")
    return _basic_shape(f)


# -- enumeration --------------------------------------------------------------

def _square_collections(avail, count, size):
    """Unordered collections of ``count`` disjoint ``size``-subsets of ``avail``."""
    from itertools import combinations
    if count == 0:
        yield ()
        return
    avail = sorted(avail)
    # the collection's square with the smallest minimum starts at avail[i]
    for i in range(len(avail) - count * size + 1):
        head = avail[i]
        for rest in combinations(avail[i + 1:], size - 1):
            sq = (head,) + rest
            left = [x for x in avail[i + 1:] if x not in rest]
            for more in _square_collections(left, count - 1, size):
                yield (sq,) + more


def _forests_on(count, nedges):
    """Edge sets of acyclic graphs on ``count`` labelled vertices."""
    from itertools import combinations
    pairs = list(combinations(range(count), 2))
    for chosen in combinations(pairs, nedges):
        parent = list(range(count))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x
        ok = True
        for u, v in chosen:
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            yield chosen


def _surjections(items, count):
    """All maps from ``items`` onto ``range(count)``."""
    from itertools import product
    for assign in product(range(count), repeat=len(items)):
        if len(set(assign)) == count:
            yield assign


_ALL_CACHE: dict = {}


def enumerate_all(p: Parameters, deg: int) -> tuple:
    """All canonical forests of degree ``deg`` in deterministic order."""
    key = (p, deg)
    if key in _ALL_CACHE:
        return _ALL_CACHE[key]
    from itertools import combinations
    p.check_cap()
    out = []
    sd, ed = p.square_degree, p.edge_degree
    if deg >= 0:
        for alpha in range(0, p.n // p.k + 1):
            rest = deg - alpha * sd
            if rest < 0:
                break
            if rest % ed:
                continue
            total_edges = rest // ed
            if alpha == 0:
                if total_edges == 0:
                    out.append(canonical_from_graph(p.n, (), ()))
                continue
            for sqs in _square_collections(range(1, p.n + 1), alpha, p.k - 1):
                used = {x for s in sqs for x in s}
                free = [x for x in range(1, p.n + 1) if x not in used]
                for n_ss in range(0, min(alpha - 1, total_edges) + 1):
                    n_r = total_edges - n_ss
                    if n_r < alpha or n_r > len(free):
                        continue
                    for ss in _forests_on(alpha, n_ss):
                        ss_links = [(sqs[u][0], sqs[v][0]) for u, v in ss]
                        for attached in combinations(free, n_r):
                            for assign in _surjections(attached, alpha):
                                links = ss_links + [(sqs[q][0], x) for x, q in zip(attached, assign)]
                                out.append(canonical_from_graph(p.n, sqs, links))
    out.sort(key=Forest.sort_key)
    result = tuple(out)
    _ALL_CACHE[key] = result
    return result


@dataclass(frozen=True)
class DegreeBasis:
    params: Parameters
    degree: int
    forests: tuple
    index: dict = field(compare=False, repr=False, hash=False)

    def __len__(self):
        return len(self.forests)

    def __iter__(self):
        return iter(self.forests)

    def __getitem__(self, i):
        return self.forests[i]

    def index_of(self, f: Forest) -> int:
        return self.index[f]

    def __contains__(self, f):
        return f in self.index


_BASIC_CACHE: dict = {}


def enumerate_basic(p: Parameters, deg: int) -> DegreeBasis:
    key = (p, deg)
    if key not in _BASIC_CACHE:
        forests = tuple(f for f in enumerate_all(p, deg) if _basic_shape(f))
        _BASIC_CACHE[key] = DegreeBasis(p, deg, forests, {f: i for i, f in enumerate(forests)})
    return _BASIC_CACHE[key]


def feasible_degrees(p: Parameters):
    """Degrees that admit at least one forest, in increasing order."""
    out = set()
    for alpha in range(0, p.n // p.k + 1):
        free = p.n - alpha * (p.k - 1)
        lo = alpha  # one round per square
        hi = (alpha - 1 if alpha else 0) + free if alpha else 0
        for e in range(lo, hi + 1):
            out.add(alpha * p.square_degree + e * p.edge_degree)
    return sorted(out)

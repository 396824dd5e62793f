"""Betti numbers, cup-lengths with certificates, and cat/TC_s bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .forest import ContractError, build_forest, canonical_sign_form, enumerate_all, enumerate_basic, feasible_degrees
from .params import Parameters
from .ring import Z, Z2, CohomologyClass, FormalSum, forest_degree, multiply, product, straighten, unit
from .linalg import rank_mod2

DEFAULT_EXHAUSTIVE_CAP = 500


class SearchTooLarge(RuntimeError):
    pass


# -- Betti numbers ------------------------------------------------------------

def betti(p: Parameters, ring: str = Z) -> dict:
    """degree -> rank, positive ranks only.

    The basic forests are a basis over both Z and Z2, so ``ring`` only
    selects the cross-check used by ``betti_from_relations``.
    """
    table = {}
    for deg in feasible_degrees(p):
        r = len(enumerate_basic(p, deg))
        if r:
            table[deg] = r
    return table


def betti_from_relations(p: Parameters, ring: str = Z) -> dict:
    """Ranks as (#forests - rank of relations), over Z or GF(2)."""
    from .ring import relation_space
    table = {}
    for deg in feasible_degrees(p):
        rel = relation_space(p, deg)
        rank = rel.rank() if ring == Z else rank_mod2(rel.rows)
        r = len(rel.columns) - rank
        if r:
            table[deg] = r
    return table


def conn_plus_one(p: Parameters) -> int:
    return p.a


def hdim(p: Parameters) -> int:
    return p.hdim


# -- generators and tensors ---------------------------------------------------

def elementary_generator(square, round_, p: Parameters, ring: str = Z) -> CohomologyClass:
    """Class of the elementary forest ``square -> round_`` (others isolated)."""
    square = tuple(sorted(square))
    if len(square) != p.k - 1 or len(set(square)) != p.k - 1:
        raise ContractError(f"square needs k-1={p.k - 1} distinct members, got {square}")
    if round_ in square:
        raise ContractError(f"round {round_} overlaps the square {square}")
    if not all(1 <= x <= p.n for x in square + (round_,)):
        raise ContractError(f"members must lie in 1..{p.n}")
    sign, c = canonical_sign_form(build_forest(p.n, [square], [(square[0], round_)]), p)
    return straighten(FormalSum({c: sign}), p, ring)


def x_gen(i: int, p: Parameters, ring: str = Z) -> CohomologyClass:
    """Square {i-k+1, ..., i-1} with round i."""
    return elementary_generator(range(i - p.k + 1, i), i, p, ring)


def x_tilde(i: int, p: Parameters, ring: str = Z) -> CohomologyClass:
    """Square {1, i-k+2, ..., i-1} with round i."""
    return elementary_generator((1,) + tuple(range(i - p.k + 2, i)), i, p, ring)


@dataclass(frozen=True, eq=False)
class TensorClass:
    """Element of the s-fold tensor power, keyed by tuples of basic forests."""

    params: Parameters
    ring: str
    s: int
    terms: dict = field(default_factory=dict)

    @classmethod
    def pure(cls, factors) -> "TensorClass":
        factors = list(factors)
        p, ring = factors[0].params, factors[0].ring
        terms = {(): 1}
        for c in factors:
            nxt = {}
            for key, a in terms.items():
                for f, b in c.terms:
                    nxt[key + (f,)] = nxt.get(key + (f,), 0) + a * b
            terms = nxt
        return cls(p, ring, len(factors), _clean(terms, ring))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorClass(self.params, self.ring, self.s, _clean(out, self.ring))

    def scale(self, c):
        return TensorClass(self.params, self.ring, self.s,
                           _clean({k: c * v for k, v in self.terms.items()}, self.ring))

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self):
        return not self.terms

    def degree(self):
        degs = {sum(forest_degree(f, self.params) for f in key) for key in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def __mul__(self, other: "TensorClass") -> "TensorClass":
        """(a_1 x ... x a_s)(b_1 x ... x b_s) = sign * (a_1 b_1) x ... x (a_s b_s)."""
        p = self.params
        out: dict = {}
        for ka, ca in self.terms.items():
            da = [forest_degree(f, p) for f in ka]
            for kb, cb in other.terms.items():
                db = [forest_degree(f, p) for f in kb]
                # b_i moves past a_j for every j > i
                swaps = sum(db[i] * da[j] for i in range(self.s) for j in range(i + 1, self.s))
                sign = -1 if swaps % 2 else 1
                parts = [{(): sign * ca * cb}]
                for fa, fb in zip(ka, kb):
                    prod = multiply(CohomologyClass(p, self.ring, ((fa, 1),)),
                                    CohomologyClass(p, self.ring, ((fb, 1),)), p)
                    if prod.is_zero():
                        parts = None
                        break
                    parts = [{key + (f,): v * c for key, v in part.items() for f, c in prod.terms}
                             for part in parts]
                if parts is None:
                    continue
                for key, v in parts[0].items():
                    out[key] = out.get(key, 0) + v
        return TensorClass(p, self.ring, self.s, _clean(out, self.ring))


def _clean(terms, ring):
    out = {}
    for k, v in terms.items():
        if ring == Z2:
            v %= 2
        if v:
            out[k] = v
    return out


def zero_divisor(gen: CohomologyClass, slot: int, s: int) -> TensorClass:
    """1 x .. x gen (at ``slot``) x .. x 1 minus gen x 1 x .. x 1 (plus over Z2)."""
    one = unit(gen.params, gen.ring)
    at_slot = TensorClass.pure([gen if q == slot else one for q in range(s)])
    at_first = TensorClass.pure([gen] + [one] * (s - 1))
    return at_slot + at_first if gen.ring == Z2 else at_slot - at_first


# -- certificates -------------------------------------------------------------

@dataclass
class WitnessCertificate:
    factors: list
    product: object
    product_degree: int | None
    verified: bool
    upper_bound: dict


def _positive_basis(p: Parameters):
    out = []
    for deg in feasible_degrees(p):
        if deg > 0:
            out.extend(enumerate_basic(p, deg))
    return out


def longest_nonzero_product(p: Parameters, ring: str = Z, cap: int = DEFAULT_EXHAUSTIVE_CAP):
    """Exhaustive search over multisets of positive-degree basis forests.

    Returns the maximal length of a nonzero product; multilinearity makes
    basis elements sufficient.
    """
    basis = _positive_basis(p)
    if len(basis) > cap:
        raise SearchTooLarge(f"{len(basis)} positive-degree basis forests exceed the cap {cap}")
    degs = [forest_degree(f, p) for f in basis]
    gens = [CohomologyClass(p, ring, ((f, 1),)) for f in basis]
    # frontier: (last index used, degree, nonzero product)
    frontier = [(i, degs[i], g) for i, g in enumerate(gens)]
    length = 1 if frontier else 0
    while frontier:
        nxt = []
        for last, deg, c in frontier:
            for j in range(last, len(gens)):
                if deg + degs[j] > p.hdim:
                    continue
                prod = multiply(c, gens[j], p)
                if not prod.is_zero():
                    nxt.append((j, deg + degs[j], prod))
        if nxt:
            length += 1
        frontier = nxt
    return length


def _structural_cl_bound(p: Parameters) -> dict:
    # every positive-degree basis forest has a square; each square needs k
    # integers (itself plus a round), so m+1 squares do not fit into n
    return {"m": p.m, "argument": "(m+1)*k > n", "holds": (p.m + 1) * p.k > p.n}


def cup_length(p: Parameters, mode: str = "witness", ring: str = Z,
               cap: int = DEFAULT_EXHAUSTIVE_CAP):
    factors = [x_gen(i * p.k, p, ring) for i in range(1, p.m + 1)]
    prod = product(factors, p)
    upper = _structural_cl_bound(p)
    if mode == "exhaustive":
        upper["exhaustive_max_length"] = longest_nonzero_product(p, ring, cap)
        upper["holds"] = upper["holds"] and upper["exhaustive_max_length"] == p.m
    elif mode != "witness":
        raise ValueError(f"unknown mode {mode!r}")
    verified = not prod.is_zero() and upper["holds"]
    cert = WitnessCertificate(factors, prod, prod.degree, verified, upper)
    return p.m, cert


def zcl_factors(p: Parameters, s: int, ring: str = Z):
    """The zero-divisors z_{i,j}, i = 1..m, j = 1..s, in product order."""
    m, k = p.m, p.k
    out = []
    for i in range(1, m + 1):
        for j in range(1, s + 1):
            if j == 1:
                if i < m:
                    gen = x_gen(i * k + 1, p, ring)
                elif m == 1:
                    gen = x_gen(k + 1, p, ring)
                else:
                    gen = x_tilde(m * k, p, ring)
                slot = 1
            else:
                gen = x_gen(i * k, p, ring)
                slot = j - 1
            out.append(zero_divisor(gen, slot, s))
    return out


def zcl(p: Parameters, s: int, mode: str = "witness", ring: str = Z,
        cap: int = DEFAULT_EXHAUSTIVE_CAP):
    if s < 2:
        raise ContractError(f"zcl needs s >= 2 (got s={s}); use cup_length for s=1")
    factors = zcl_factors(p, s, ring)
    prod = factors[0]
    for z in factors[1:]:
        prod = prod * z
    cl_value, cl_cert = cup_length(p, mode, ring, cap)
    # s*m+1 tensors each with a positive-degree slot put m+1 factors in one slot
    per_slot = -(-(s * p.m + 1) // s)
    upper = {"argument": "pigeonhole over tensor slots", "factors": s * p.m + 1,
             "forced_in_one_slot": per_slot, "cup_length": cl_value,
             "holds": per_slot > cl_value and cl_cert.upper_bound["holds"]}
    verified = not prod.is_zero() and upper["holds"]
    cert = WitnessCertificate(factors, prod, prod.degree(), verified, upper)
    return s * p.m, cert


# -- cat / TC_s ---------------------------------------------------------------

@dataclass(frozen=True)
class TcBoundsReport:
    s: int
    lower: int
    upperPlain: int
    upperImproved: int
    determined: bool
    source: str
    value: int | None

    def as_dict(self):
        return {"s": self.s, "lower": self.lower, "upperPlain": self.upperPlain,
                "upperImproved": self.upperImproved, "determined": self.determined,
                "source": self.source, "value": self.value}


def improved_quotient(x: int, a: int) -> int:
    """floor(x/a), lowered by one when a divides x with quotient >= 1."""
    q, r = divmod(x, a)
    return q - 1 if r == 0 and q >= 1 else q


def tc_bounds(p: Parameters, s: int) -> TcBoundsReport:
    if s < 1:
        raise ContractError(f"s must be >= 1 (got {s})")
    m, b, a, d = p.m, p.b, p.a, p.d
    x = (m + b - 1) * (d - 1)
    assert x > 0, "m + b - 1 = 0 would force n = k"
    plain = s * (m + x // a)
    improved = s * (m + improved_quotient(x, a))
    lower = s * m
    determined = lower == improved
    if x % a == 0:
        source = "obstruction"      # primary obstruction (m+1)-st power vanishes
    else:
        source = "dimension"        # hdim / (conn + 1) bound
    return TcBoundsReport(s, lower, plain, improved, determined, source,
                          lower if determined else None)


def omnibus_holds(p: Parameters) -> bool:
    return (p.n - (p.k - 1) * p.m) * (p.d - 1) <= p.d * p.k - 2


def determination_predicates(p: Parameters) -> dict:
    miller = None
    if p.d == 2:
        miller = p.n + p.m * (p.k - 2) < 6 * p.k - 9
    return {"omnibus": omnibus_holds(p), "millerFormality": miller}


def top_degree_shapes(p: Parameters):
    """(components, squares, rounds in the component) for each top-degree basis forest."""
    out = []
    for f in enumerate_basic(p, p.hdim):
        attached = {e[1][1] for e in f.edges if e[1][0] == "r"}
        out.append((_component_count(f), len(f.squares), len(attached)))
    return out


def _component_count(f) -> int:
    from .relations import _square_components
    return len(set(_square_components(f).values()))

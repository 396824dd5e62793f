"""JSON encoding of forests and cohomology classes."""

from __future__ import annotations

import json

from .forest import Forest, canonical_sign_form, validate_forest
from .params import ParameterError, Parameters
from .ring import RINGS, CohomologyClass, FormalSum, straighten


class ParseError(ValueError):
    """Schema violation; ``path`` is a JSON pointer into the offending document."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path
        self.message = message


def _ref(kind: str, i: int) -> str:
    return f"{kind}{i}"


def forest_to_json(f: Forest, p: Parameters) -> dict:
    attached = {}
    for u, v in f.edges:
        if u[0] == "s" and v[0] == "r":
            attached[v[1]] = u[1]
        elif v[0] == "s" and u[0] == "r":
            attached[u[1]] = v[1]
    rounds = []
    for j, x in enumerate(f.rounds):
        entry = {"member": x}
        if j in attached:
            entry["attached"] = attached[j]
        rounds.append(entry)
    return {
        "d": p.d, "k": p.k, "n": p.n,
        "squares": [list(s) for s in f.squares],
        "rounds": rounds,
        "edges": [{"tail": _ref(*u), "head": _ref(*v)} for u, v in f.edges],
        "orientationOrder": [_ref(*r) for r in f.order],
    }


def _int(obj, path):
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ParseError(path, f"expected an integer, got {obj!r}")
    return obj


def _list(obj, path):
    if not isinstance(obj, list):
        raise ParseError(path, f"expected an array, got {type(obj).__name__}")
    return obj


def _parse_ref(text, kinds, path):
    if not isinstance(text, str) or len(text) < 2 or text[0] not in kinds or not text[1:].isdigit():
        raise ParseError(path, f"expected an identifier like {kinds[0]}0, got {text!r}")
    return (text[0], int(text[1:]))


def forest_from_json(obj, path: str = "", check: bool = True):
    """Decode a forest document into ``(Forest, Parameters)``.

    With ``check`` the forest must also satisfy every k-forest rule; the
    first violated rule is reported by name.
    """
    if not isinstance(obj, dict):
        raise ParseError(path, "forest must be an object")
    for key in ("d", "k", "n", "squares", "rounds", "edges", "orientationOrder"):
        if key not in obj:
            raise ParseError(f"{path}/{key}", "missing field")
    try:
        p = Parameters(_int(obj["d"], f"{path}/d"), _int(obj["k"], f"{path}/k"),
                       _int(obj["n"], f"{path}/n"))
    except ParameterError as exc:
        raise ParseError(path, str(exc)) from None
    squares = []
    for i, s in enumerate(_list(obj["squares"], f"{path}/squares")):
        members = _list(s, f"{path}/squares/{i}")
        squares.append(tuple(_int(x, f"{path}/squares/{i}/{q}") for q, x in enumerate(members)))
    rounds, claimed = [], {}
    for j, r in enumerate(_list(obj["rounds"], f"{path}/rounds")):
        if not isinstance(r, dict) or "member" not in r:
            raise ParseError(f"{path}/rounds/{j}", "round must be an object with a member")
        rounds.append(_int(r["member"], f"{path}/rounds/{j}/member"))
        if "attached" in r:
            claimed[j] = _int(r["attached"], f"{path}/rounds/{j}/attached")
    edges = []
    for t, e in enumerate(_list(obj["edges"], f"{path}/edges")):
        if not isinstance(e, dict) or "tail" not in e or "head" not in e:
            raise ParseError(f"{path}/edges/{t}", "edge must have tail and head")
        edges.append((_parse_ref(e["tail"], "sr", f"{path}/edges/{t}/tail"),
                      _parse_ref(e["head"], "sr", f"{path}/edges/{t}/head")))
    order = tuple(_parse_ref(x, "se", f"{path}/orientationOrder/{q}")
                  for q, x in enumerate(_list(obj["orientationOrder"], f"{path}/orientationOrder")))
    f = Forest(tuple(squares), tuple(rounds), tuple(edges), order)
    if check:
        report = validate_forest(f, p)
        if not report.valid:
            rule, message = report.violations[0]
            raise ParseError(path, f"rule {rule}: {message}")
        for j, i in claimed.items():
            if not any({u, v} == {("r", j), ("s", i)} for u, v in edges):
                raise ParseError(f"{path}/rounds/{j}/attached",
                                 f"round r{j} claims square s{i} but no such edge exists")
    return f, p


def class_to_json(c: CohomologyClass) -> dict:
    p = c.params
    return {
        "ring": c.ring, "d": p.d, "k": p.k, "n": p.n,
        "terms": [{"coeff": v, "forest": forest_to_json(f, p)} for f, v in c.terms],
    }


def class_from_json(obj) -> CohomologyClass:
    if not isinstance(obj, dict):
        raise ParseError("", "class must be an object")
    ring = obj.get("ring")
    if ring not in RINGS:
        raise ParseError("/ring", f"ring must be one of {list(RINGS)}, got {ring!r}")
    terms = _list(obj.get("terms"), "/terms")
    p = None
    if all(key in obj for key in ("d", "k", "n")):
        try:
            p = Parameters(_int(obj["d"], "/d"), _int(obj["k"], "/k"), _int(obj["n"], "/n"))
        except ParameterError as exc:
            raise ParseError("", str(exc)) from None
    total = FormalSum()
    for q, term in enumerate(terms):
        if not isinstance(term, dict) or "coeff" not in term or "forest" not in term:
            raise ParseError(f"/terms/{q}", "term must have coeff and forest")
        coeff = _int(term["coeff"], f"/terms/{q}/coeff")
        f, fp = forest_from_json(term["forest"], f"/terms/{q}/forest")
        if p is None:
            p = fp
        elif fp != p:
            raise ParseError(f"/terms/{q}/forest", f"parameters {fp.as_tuple()} differ from {p.as_tuple()}")
        sign, canon = canonical_sign_form(f, p)
        total.add(canon, sign * coeff)
    if p is None:
        raise ParseError("", "cannot infer (d, k, n): give them at top level or via a term")
    return straighten(total, p, ring)


def parse_class(text: str) -> CohomologyClass:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return class_from_json(obj)


def emit_class(c: CohomologyClass) -> str:
    return json.dumps(class_to_json(c), sort_keys=True)


def parse_forest(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return forest_from_json(obj)


def emit_forest(f: Forest, p: Parameters) -> str:
    return json.dumps(forest_to_json(f, p), sort_keys=True)

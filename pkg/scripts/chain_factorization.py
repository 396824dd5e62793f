"""Factor degree-top chain forests as products of elementary forests.

n=6 runs instantly.  n=9 (three squares in a chain) straightens degree-11
forests and takes a few minutes; set NOKE_CACHE_DIR to keep the tables.
"""

import argparse
import time

from nokequal import Parameters
from nokequal.forest import build_forest, canonical_sign_form, enumerate_basic, is_basic
from nokequal.ring import FormalSum, multiply, straighten


def elementary(p, square, rounds):
    links = [(square[0], r) for r in rounds]
    sign, f = canonical_sign_form(build_forest(p.n, [square], links), p)
    return straighten(FormalSum({f: sign}), p)


def chain(p, length):
    """Squares {3i+1, 3i+2}; round 3 sits on the first square, 3i+3 on square i (i >= 1)."""
    squares = [(3 * i + 1, 3 * i + 2) for i in range(length)]
    links = [(1, 3)]
    for i in range(1, length):
        links += [(squares[i - 1][0], squares[i][0]), (squares[i][0], 3 * i + 3)]
    return build_forest(p.n, squares, links)


def run(length):
    p = Parameters(2, 3, 3 * length)
    factors = [elementary(p, (1, 2), [3])]
    factors += [elementary(p, (3 * i + 1, 3 * i + 2), [3 * i, 3 * i + 3]) for i in range(1, length)]
    t0 = time.perf_counter()
    prod = factors[0]
    for x in factors[1:]:
        prod = multiply(prod, x)
    sign, target = canonical_sign_form(chain(p, length), p)
    print(f"n={p.n}: product degree {prod.degree}, {len(prod.terms)} term(s), "
          f"{time.perf_counter() - t0:.1f}s")
    for f, c in prod.terms:
        print(f"  {c:+d} * {f!r}  basic={is_basic(f, p)}")
    if prod.terms == ((target, prod.terms[0][1]),):
        print(f"  = {prod.terms[0][1] * sign:+d} * chain forest as drawn (squares, then edges)")
    print(f"  top degree {p.hdim}, {len(enumerate_basic(p, p.hdim))} basic forests there")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, nargs="+", default=[2, 3])
    for length in ap.parse_args().length:
        run(length)


if __name__ == "__main__":
    main()

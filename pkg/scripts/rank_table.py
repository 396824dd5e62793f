"""Betti ranks from basic-forest counts, cross-checked against the relation quotient.

    python3 scripts/rank_table.py --params 2,3,6 3,3,5 2,4,8
"""

import argparse
import time
from dataclasses import dataclass, field

from nokequal import Parameters
from nokequal.forest import enumerate_all, enumerate_basic, feasible_degrees
from nokequal.linalg import rank_mod2
from nokequal.ring import relation_space


@dataclass
class Config:
    params: list = field(default_factory=lambda: [(2, 3, 6)])
    mod2: bool = True       # also compute the GF(2) rank
    smith: bool = True      # also compute Smith invariant factors


def run(cfg: Config):
    for t in cfg.params:
        p = Parameters(*t)
        print(f"M_{p.d}^({p.k})({p.n}):  a={p.a}  hdim={p.hdim}")
        print(f"  {'deg':>4} {'forests':>8} {'basic':>6} {'quot Z':>7} {'quot F2':>8}  smith")
        for deg in feasible_degrees(p):
            t0 = time.perf_counter()
            rel = relation_space(p, deg)
            total = len(enumerate_all(p, deg))
            quot = total - rel.rank()
            q2 = total - rank_mod2(rel.rows) if cfg.mod2 else "-"
            inv = rel.invariant_factors() if cfg.smith else []
            smith = "all 1" if all(x == 1 for x in inv) else sorted(set(inv))
            print(f"  {deg:>4} {total:>8} {len(enumerate_basic(p, deg)):>6} {quot:>7} {q2:>8}  "
                  f"{smith}  ({time.perf_counter() - t0:.2f}s)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--params", nargs="+", default=["2,3,6"], help="d,k,n triples")
    ap.add_argument("--no-mod2", action="store_true")
    ap.add_argument("--no-smith", action="store_true")
    args = ap.parse_args()
    params = [tuple(int(x) for x in s.split(",")) for s in args.params]
    run(Config(params, not args.no_mod2, not args.no_smith))


if __name__ == "__main__":
    main()

"""cat / TC_s determination tables and the improved-bound sweep.

Writes one CSV per d into --out and prints the ASCII tables.
"""

import argparse
import contextlib
import io
from dataclasses import dataclass
from pathlib import Path

from nokequal import Parameters
from nokequal.cli import main as cli_main
from nokequal.invariants import tc_bounds


@dataclass
class Config:
    dims: tuple = (2, 3, 4)
    s: int = 1
    k_min: int = 3
    k_max: int = 10
    n_max: int = 40
    out: Path = Path("tc_tables")


def sweep(d_max=10, k_max=12, s_max=5):
    """Count cases where the divisibility improvement applies, and check it lowers by s."""
    hits = bad = 0
    for d in range(2, d_max + 1):
        for k in range(3, k_max + 1):
            for n in range(k + 1, 3 * k + 1):
                p = Parameters(d, k, n)
                if ((p.m + p.b - 1) * (d - 1)) % p.a:
                    continue
                for s in range(1, s_max + 1):
                    r = tc_bounds(p, s)
                    hits += 1
                    bad += r.upperImproved != r.upperPlain - s
    return hits, bad


def undetermined(d, k, n_max):
    return [n for n in range(k + 1, n_max + 1) if not tc_bounds(Parameters(d, k, n), 1).determined]


def run(cfg: Config):
    cfg.out.mkdir(parents=True, exist_ok=True)
    for d in cfg.dims:
        base = ["table", "--d", str(d), "--s", str(cfg.s), "--k-min", str(cfg.k_min),
                "--k-max", str(cfg.k_max), "--n-min", "4", "--n-max", str(cfg.n_max)]
        print(f"\nd = {d}, s = {cfg.s}")
        cli_main(base + ["--format", "ascii"])
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            cli_main(base + ["--format", "csv"])
        (cfg.out / f"table_d{d}_s{cfg.s}.csv").write_text(buf.getvalue())
    print()
    for k in range(3, 7):
        print(f"d=2 k={k}: undetermined n <= {k * k + 2 * k}: {undetermined(2, k, k * k + 2 * k)}")
    hits, bad = sweep()
    print(f"improved-bound sweep: {hits} divisible cases, {bad} mismatches")
    r = tc_bounds(Parameters(2, 8, 40), 2)
    print(f"TC(M_2^(8)(40)): lower {r.lower}, upper {r.upperImproved}, determined {r.determined}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--s", type=int, default=1)
    ap.add_argument("--k-max", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=40)
    ap.add_argument("--out", type=Path, default=Path("tc_tables"))
    a = ap.parse_args()
    run(Config(tuple(a.dims), a.s, 3, a.k_max, a.n_max, a.out))


if __name__ == "__main__":
    main()

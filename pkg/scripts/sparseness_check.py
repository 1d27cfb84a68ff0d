"""Compute homology pages over F_p and report every differential d_r.

For each r the report says whether the sparseness rule permits a nonzero
d_r (r - 1 a multiple of (d-1)(p-1)) and the total rank actually found.

    python3 scripts/sparseness_check.py                 # d=3, F_3 and F_2, s<=6, q<=8
    python3 scripts/sparseness_check.py --primes 5 --smax 5 --qmax 6 --rmax 9
"""

import argparse
import time
from dataclasses import dataclass, field

from gwss.fields import Fp
from gwss.homology import Region, compute_page, thmD_allowed


@dataclass
class Config:
    d: int = 3
    primes: list[int] = field(default_factory=lambda: [3, 2])
    s_max: int = 6
    q_max: int = 8
    r_max: int = 4


def parse_args() -> Config:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=Config.d)
    ap.add_argument("--primes", type=int, nargs="+", default=Config().primes)
    ap.add_argument("--smax", type=int, default=Config.s_max)
    ap.add_argument("--qmax", type=int, default=Config.q_max)
    ap.add_argument("--rmax", type=int, default=Config.r_max)
    a = ap.parse_args()
    return Config(a.d, a.primes, a.smax, a.qmax, a.rmax)


def main() -> int:
    cfg = parse_args()
    bad = 0
    for p in cfg.primes:
        t0 = time.time()
        comp = compute_page(cfg.d, Fp(p), cfg.r_max, Region(cfg.s_max, cfg.q_max))
        print(f"F_{p}, d={cfg.d}, s<={cfg.s_max}, q<={cfg.q_max} ({time.time() - t0:.1f}s)")
        for r in range(1, cfg.r_max + 1):
            allowed = thmD_allowed(p, cfg.d, r)
            total = sum(comp.ranks[r].values())
            nonempty = sum(1 for M in comp.matrices[r].values() if M and M[0])
            flag = "" if allowed or total == 0 else "  <-- violates sparseness"
            bad += bool(flag)
            print(f"  d_{r}: {'allowed' if allowed else 'forbidden'}, total rank {total}, "
                  f"{nonempty} nonempty maps{flag}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())

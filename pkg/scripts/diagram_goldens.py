"""Print the tree groups in every supported degree, with presentation sizes.

    python3 scripts/diagram_goldens.py              # degrees 1..6
    python3 scripts/diagram_goldens.py --max 4 --prime 5
"""

import argparse
import time
from dataclasses import dataclass

from gwss.abelian import localize
from gwss.diagrams import MAX_DEGREE, compute_AI, relation_rows


@dataclass
class Config:
    max_degree: int = MAX_DEGREE
    prime: int | None = None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=Config.max_degree, dest="max_degree")
    ap.add_argument("--prime", type=int, default=None, help="also print the p-localization")
    cfg = Config(**vars(ap.parse_args()))
    for s in range(1, cfg.max_degree + 1):
        t0 = time.time()
        M = relation_rows(s)
        G = compute_AI(s)
        extra = f"  localized at {cfg.prime}: {localize(G, cfg.prime)}" if cfg.prime else ""
        print(f"degree {s}: {M.cols} trees, {M.rows} relations -> {G}"
              f"  ({time.time() - t0:.1f}s){extra}")


if __name__ == "__main__":
    main()

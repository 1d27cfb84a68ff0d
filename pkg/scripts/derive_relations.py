"""Regenerate the leg-relation data file consumed by the diagram module.

Each row is an integer relation among left-normed comb trees that follows
from expanding trees into chord diagrams (STU) modulo 4T and the framing
relation.  Rows form an HNF basis of the full relation lattice in each degree.

    python3 scripts/derive_relations.py            # degrees 1..6
    python3 scripts/derive_relations.py --max 4 --out /tmp/rel.txt
"""

import argparse
import time

from gwss.chords import derive_leg_relations
from gwss.diagrams import MAX_DEGREE, RELATIONS_VERSION, relations_path, write_relations

HEADER = f"""leg relations {RELATIONS_VERSION}: integer relations among degree-s trees on a line
generated by scripts/derive_relations.py
source: STU expansion into chord diagrams modulo 4T and isolated-chord (framing) relations
format: DEGREE s : c1*code1 + c2*code2 + ... = 0   (codes rooted at the leg in position 1)"""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=MAX_DEGREE, help="largest degree")
    ap.add_argument("--out", default=None, help="output path (default: packaged data file)")
    args = ap.parse_args()
    rows = {}
    for s in range(1, args.max + 1):
        t0 = time.time()
        rows[s] = derive_leg_relations(s)
        print(f"degree {s}: {len(rows[s])} relations ({time.time() - t0:.1f}s)")
    path = args.out or relations_path()
    with open(path, "w") as fh:
        fh.write(write_relations(rows, HEADER))
    print(f"wrote {path}")


if __name__ == "__main__":
    main()

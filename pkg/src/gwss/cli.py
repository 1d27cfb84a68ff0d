"""Command-line front end.

    gwss e1 homotopy --d 3 --smax 6 --tmax 12 --json
    gwss e1 homology --d 3 --smax 5 --qmax 8 --ring Z
    gwss page homology --d 3 --ring Fp:3 --rmax 4 --smax 6 --qmax 8
    gwss diagrams --degree 4 --relations as,ihx,stu2
    gwss collapse --p 5 --d 3 --r 2 --s 4 --t 4
    gwss collapse --p 5 --d 3 --region --n 7
    gwss pi0 --p 5 --n 6

Exit codes: 0 success, 2 invalid parameters, 3 parameters outside the range
where the underlying statement applies (the bound is named on stderr).
Results are cached on disk; see ``gwss.cache``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Callable

from . import __version__
from .abelian import cokernel
from .cache import Cache, cache_key
from .collapse import VARIANTS, collapse_region, thmA_report, thmB_vanishes
from .diagrams import MAX_DEGREE, RELATIONS_VERSION, relation_rows, relations_path
from .fields import Ring
from .homology import Region, compute_page
from .homotopy import TOWERS, e1_page
from .pages import BigradedPage

EXIT_OK, EXIT_USAGE, EXIT_BOUND = 0, 2, 3


class BoundViolation(Exception):
    pass


def _data_version() -> str:
    digest = hashlib.sha256(relations_path().read_bytes()).hexdigest()[:16]
    return f"{RELATIONS_VERSION}:{digest}"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False)


# --- subcommand bodies: each returns a JSON-ready object ------------------

def _ring(text: str) -> Ring:
    try:
        return Ring.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _nonneg(name, value):
    if value < 0:
        raise ValueError(f"--{name} must be non-negative")


def run_e1_homotopy(a) -> dict:
    _nonneg("smax", a.smax)
    _nonneg("tmax", a.tmax)
    return e1_page(a.d, a.smax, a.tmax, a.ring, a.tower).to_json()


def run_e1_homology(a) -> dict:
    return compute_page(a.d, a.ring, 1, Region(a.smax, a.qmax)).to_json()


def run_page_homology(a) -> dict:
    if not a.ring.is_field:
        raise ValueError("page homology needs a field: Q or Fp:P")
    return compute_page(a.d, a.ring, a.rmax, Region(a.smax, a.qmax)).to_json()


def run_diagrams(a) -> dict:
    if a.degree < 1:
        raise ValueError("--degree must be >= 1")
    if a.degree > MAX_DEGREE:
        raise BoundViolation(f"degree ≤ {MAX_DEGREE} (relation data covers degrees 1..{MAX_DEGREE})")
    kinds = [k for k in a.relations.split(",") if k]
    M = relation_rows(a.degree, kinds)
    G = cokernel(M, relations_are_rows=True)
    return {"degree": a.degree, "relations": sorted(k.upper() for k in kinds),
            "relations_version": RELATIONS_VERSION, "generators": M.cols,
            "relation_rows": M.rows, "group": G.to_json(), "group_str": str(G)}


def run_collapse(a) -> dict:
    if a.region:
        if a.n is None:
            raise ValueError("--region needs --n")
        return {"region": collapse_region(a.p, a.d, a.n, a.variant).to_json()}
    if None in (a.r, a.s, a.t):
        raise ValueError("give --r, --s and --t, or --region --n")
    return {"certificate": thmB_vanishes(a.p, a.d, a.r, a.s, a.t, a.variant).to_json()}


def run_pi0(a) -> dict:
    return thmA_report(a.p, a.n).to_json()


def _violation(obj: dict) -> str | None:
    for part in (obj, obj.get("region") or {}):
        if part.get("valid") is False:
            return part.get("violated") or "bound violated"
    return None


# --- rendering -----------------------------------------------------------

def _meta_line(obj: dict, skip: set) -> str:
    return "# " + " ".join(f"{k}={json.dumps(obj[k], ensure_ascii=False)}"
                           for k in sorted(obj) if k not in skip)


def _page_table(obj: dict) -> str:
    page = BigradedPage.from_json(obj)
    index = "q" if obj.get("kind") == "homology" else "t"
    out = [f"E^{page.page} over {page.ring}, d={page.d}", _meta_line(obj, {"entries"}), page.table(index)]
    notes = []
    for row in obj["entries"]:
        extra = {k: v for k, v in row.items() if k not in ("s", "t", "rank", "torsion")}
        if extra:
            kv = " ".join(f"{k}={json.dumps(v)}" for k, v in sorted(extra.items()))
            notes.append(f"  ({-row['s']},{row['t']}) {kv}")
    if notes:
        out.append("notes:\n" + "\n".join(notes) + "\n")
    return "\n".join(out)


def _flat(obj, prefix="") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out.extend(_flat(obj[k], f"{prefix}.{k}" if prefix else k))
        return out
    if isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        out = []
        for i, x in enumerate(obj):
            out.extend(_flat(x, f"{prefix}[{i}]"))
        return out
    return [(prefix, json.dumps(obj, ensure_ascii=False))]


def render_table(obj: dict) -> str:
    if "entries" in obj:
        return _page_table(obj)
    if "pages" in obj:
        parts = [_meta_line(obj, {"pages", "differentials"})] + [_page_table(p) for p in obj["pages"]]
        if obj.get("differentials"):
            lines = [f"  d_{x['r']} from ({-x['from'][0]},{x['from'][1]}): rank {x['rank']}"
                     for x in obj["differentials"]]
            parts.append("differentials:\n" + "\n".join(lines) + "\n")
        return "\n".join(parts)
    rows = _flat(obj)
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


# --- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help="JSON output (default)")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table",
                     help="aligned text table")
    common.add_argument("--cache-dir", help="cache directory (default: $GWSS_CACHE_DIR or ~/.cache/gwss)")
    common.add_argument("--no-cache", action="store_true", help="always recompute")
    common.add_argument("-v", "--verbose", action="store_true", help="report cache use and timing on stderr")

    parser = argparse.ArgumentParser(prog="gwss", description="Exact computations for the knot tower spectral sequences.")
    parser.add_argument("--version", action="version", version=f"gwss {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    e1 = sub.add_parser("e1", help="E^1 pages")
    e1sub = e1.add_subparsers(dest="which", required=True)
    p = e1sub.add_parser("homotopy", parents=[common], help="rational homotopy E^1")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--ring", type=_ring, default=Ring("Q"), help="Q or Z(P)")
    p.add_argument("--tower", choices=TOWERS, default="T")
    p.set_defaults(func=run_e1_homotopy, name="e1 homotopy")

    p = e1sub.add_parser("homology", parents=[common], help="homology E^1 with d_1 ranks")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--ring", type=_ring, default=Ring("Z"), help="Z, Q or Fp:P")
    p.set_defaults(func=run_e1_homology, name="e1 homology")

    pg = sub.add_parser("page", help="higher pages")
    pgsub = pg.add_subparsers(dest="which", required=True)
    p = pgsub.add_parser("homology", parents=[common], help="homology pages E^1..E^R over a field")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ring", type=_ring, required=True, help="Q or Fp:P")
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.set_defaults(func=run_page_homology, name="page homology")

    p = sub.add_parser("diagrams", parents=[common], help="tree group of a given degree")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--relations", default="as,ihx,stu2", help="comma list from as,ihx,stu2")
    p.set_defaults(func=run_diagrams, name="diagrams")

    p = sub.add_parser("collapse", parents=[common], help="vanishing certificate or collapse region")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--region", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--variant", choices=VARIANTS, default="conservative")
    p.set_defaults(func=run_collapse, name="collapse")

    p = sub.add_parser("pi0", parents=[common], help="pi_0 of a tower stage for knots in R^3")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=run_pi0, name="pi0")
    return parser


_SKIP = {"func", "name", "fmt", "cache_dir", "no_cache", "verbose", "command", "which"}


def _params(a) -> dict:
    return {k: str(v) if isinstance(v, Ring) else v for k, v in sorted(vars(a).items()) if k not in _SKIP}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    compute: Callable[[], str] = lambda: dumps(a.func(a))
    try:
        if a.no_cache:
            payload = compute()
        else:
            key = cache_key(a.name, _params(a), __version__, _data_version())
            res = Cache(a.cache_dir).get(key, compute)
            payload = res.payload
            if a.verbose:
                print(f"gwss: {'cache hit' if res.hit else 'computed'} {key[:12]} in {res.seconds:.3f}s", file=err)
    except BoundViolation as exc:
        print(f"gwss: outside the valid range: {exc}", file=err)
        return EXIT_BOUND
    except ValueError as exc:
        print(f"gwss: invalid parameters: {exc}", file=err)
        return EXIT_USAGE

    obj = json.loads(payload)
    out.write(render_table(obj) if a.fmt == "table" else payload + "\n")
    bad = _violation(obj)
    if bad:
        print(f"gwss: outside the valid range: {bad}", file=err)
        return EXIT_BOUND
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

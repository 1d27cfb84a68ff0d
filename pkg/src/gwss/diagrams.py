"""Unitrivalent tree diagrams with legs on a line, and the groups they present.

A degree-s tree has s+1 legs, placed at positions 1..s+1 of the line, and
s-1 trivalent vertices, each with a cyclic order of its three edges.
Rooting at the leg in position 1 turns the cyclic orders into left/right
children, so a tree is a planar binary tree with leaves 2..s+1.  Its
canonical code is that nested expression, e.g. ``((2,4),3)``; the degree-1
strut has code ``2``.

The generators keep both orientations at every vertex: antisymmetry is a
relation, not a quotient taken during enumeration.  The relations on legs
are read from a versioned data file, one line per relation:

    DEGREE s : c1*code1 + c2*code2 + ... = 0
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import permutations
from pathlib import Path

from .abelian import AbelianGroup, IntMatrix, cokernel

MAX_DEGREE = 6
RELATIONS_VERSION = "v1"
RELATION_KINDS = ("AS", "IHX", "STU2")

Nested = "int | tuple"


def _check_degree(s: int) -> None:
    if not 1 <= s <= MAX_DEGREE:
        raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {s}")


# --- codes -------------------------------------------------------------

def parse_code(code: str):
    """Nested tuple form of a code: leaf -> int, vertex -> (left, right)."""
    tokens = re.findall(r"\d+|[(),]", code.replace(" ", ""))
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"truncated code {code!r}")
        tok = tokens[pos]
        pos += 1
        if tok.isdigit():
            return int(tok)
        if tok != "(":
            raise ValueError(f"bad token {tok!r} in {code!r}")
        left = node()
        if tokens[pos:pos + 1] != [","]:
            raise ValueError(f"expected ',' in {code!r}")
        pos += 1
        right = node()
        if tokens[pos:pos + 1] != [")"]:
            raise ValueError(f"expected ')' in {code!r}")
        pos += 1
        return (left, right)

    tree = node()
    if pos != len(tokens):
        raise ValueError(f"trailing characters in {code!r}")
    return tree


def format_code(tree) -> str:
    if isinstance(tree, int):
        return str(tree)
    return f"({format_code(tree[0])},{format_code(tree[1])})"


def _leaves(tree) -> list[int]:
    if isinstance(tree, int):
        return [tree]
    return _leaves(tree[0]) + _leaves(tree[1])


def adjacency(tree) -> dict[int, tuple]:
    """Unrooted form: leaves are positive (their positions), vertices negative.

    The leg at position 1 is attached to the root of the nested form; each
    vertex lists (parent, left, right) as its cyclic order.
    """
    adj: dict[int, tuple] = {}
    counter = [0]

    def build(t, parent):
        if isinstance(t, int):
            adj[t] = (parent,)
            return t
        counter[0] -= 1
        v = counter[0]
        left = build(t[0], v)
        right = build(t[1], v)
        adj[v] = (parent, left, right)
        return v

    root = build(tree, 1)
    adj[1] = (root,)
    return adj


def canonical_code(adj: dict[int, tuple]) -> str:
    """Code of an unrooted oriented tree (any vertex ids), rooted at leg 1."""
    def rec(node, parent):
        if node > 0:
            return str(node)
        cyc = adj[node]
        k = cyc.index(parent)
        _, a, b = cyc[k:] + cyc[:k]
        return f"({rec(a, node)},{rec(b, node)})"

    (first,) = adj[1]
    return rec(first, 1)


@dataclass(frozen=True, order=True)
class UniTrivalentTree:
    degree: int
    code: str

    def __post_init__(self):
        leaves = sorted(_leaves(parse_code(self.code)))
        if leaves != list(range(2, self.degree + 2)):
            raise ValueError(f"code {self.code!r} is not a degree-{self.degree} tree")

    @classmethod
    def from_adjacency(cls, adj: dict[int, tuple]) -> "UniTrivalentTree":
        legs = sum(1 for x in adj if x > 0)
        return cls(legs - 1, canonical_code(adj))

    @property
    def nested(self):
        return parse_code(self.code)

    @property
    def legs(self) -> int:
        return self.degree + 1

    @property
    def internal_vertices(self) -> int:
        return self.degree - 1

    def adjacency(self) -> dict[int, tuple]:
        return adjacency(self.nested)


# --- enumeration -------------------------------------------------------

def _planar_trees(labels: tuple[int, ...]):
    if len(labels) == 1:
        yield labels[0]
        return
    n = len(labels)
    for mask in range(1, (1 << n) - 1):
        left = tuple(x for i, x in enumerate(labels) if mask >> i & 1)
        right = tuple(x for i, x in enumerate(labels) if not mask >> i & 1)
        for a in _planar_trees(left):
            for b in _planar_trees(right):
                yield (a, b)


@lru_cache(maxsize=None)
def _codes(s: int) -> tuple[str, ...]:
    return tuple(sorted(format_code(t) for t in _planar_trees(tuple(range(2, s + 2)))))


def enumerate_trees(s: int) -> list[UniTrivalentTree]:
    """All degree-s generators (both orientations at each vertex), sorted by code."""
    _check_degree(s)
    return [UniTrivalentTree(s, c) for c in _codes(s)]


# --- local relations ---------------------------------------------------

def _internal_vertices(adj):
    return sorted(v for v in adj if v < 0)


def as_rows(tree: UniTrivalentTree) -> list[dict[str, int]]:
    """T + (T with one vertex orientation reversed), one per vertex."""
    adj = tree.adjacency()
    out = []
    for v in _internal_vertices(adj):
        flipped = dict(adj)
        flipped[v] = tuple(reversed(adj[v]))
        row: dict[str, int] = {}
        for c in (tree.code, canonical_code(flipped)):
            row[c] = row.get(c, 0) + 1
        out.append(row)
    return out


def _replace(adj, node, old, new):
    adj[node] = tuple(new if x == old else x for x in adj[node])


def ihx_rows(tree: UniTrivalentTree) -> list[dict[str, int]]:
    """One three-term row per internal edge.

    For an edge u-v with cyclic orders u:(A,B,v), v:(u,C,D) the row is
    T + T[u:(A,C,v), v:(u,D,B)] + T[u:(A,D,v), v:(u,B,C)]; u is the end
    nearer to the leg in position 1.
    """
    adj = tree.adjacency()
    out = []
    # in the built adjacency, a vertex's first neighbour is its parent
    for v in _internal_vertices(adj):
        u = adj[v][0]
        if u > 0:
            continue
        cu, cv = adj[u], adj[v]
        k = cu.index(v)
        A, B, _ = cu[k + 1:] + cu[:k + 1]
        k = cv.index(u)
        _, C, D = cv[k:] + cv[:k]
        row: dict[str, int] = {tree.code: 1}
        for (x, y), (z, w) in (((A, C), (D, B)), ((A, D), (B, C))):
            new = dict(adj)
            new[u] = (x, y, v)
            new[v] = (u, z, w)
            # y moved from v to u, and B from u to v
            _replace(new, y, v, u)
            _replace(new, B, u, v)
            code = canonical_code(new)
            row[code] = row.get(code, 0) + 1
        out.append({c: n for c, n in row.items() if n})
    return out


# --- relation data file --------------------------------------------------

_LINE = re.compile(r"^DEGREE\s+(\d+)\s*:\s*(.+?)\s*=\s*0\s*$")
_TERM = re.compile(r"^([+-]?\d+)\s*[*·]\s*(\S+)$")


def parse_relation_line(line: str) -> tuple[int, dict[str, int]]:
    m = _LINE.match(line.strip())
    if not m:
        raise ValueError(f"not a relation line: {line!r}")
    s = int(m.group(1))
    row: dict[str, int] = {}
    body = m.group(2).replace(" - ", " + -")
    for term in body.split(" + "):
        t = _TERM.match(term.strip())
        if not t:
            raise ValueError(f"bad term {term!r}")
        c, code = int(t.group(1)), t.group(2)
        UniTrivalentTree(s, code)  # validates
        row[code] = row.get(code, 0) + c
    return s, {c: v for c, v in row.items() if v}


def format_relation_line(s: int, row: dict[str, int]) -> str:
    terms = [f"{c}*{code}" for code, c in sorted(row.items())]
    return f"DEGREE {s} : " + " + ".join(terms) + " = 0"


def read_relations(text: str) -> dict[int, list[dict[str, int]]]:
    out: dict[int, list[dict[str, int]]] = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        s, row = parse_relation_line(line)
        out.setdefault(s, []).append(row)
    return out


def write_relations(rows: dict[int, list[dict[str, int]]], header: str = "") -> str:
    lines = [f"# {h}" if h else "#" for h in header.splitlines()]
    for s in sorted(rows):
        lines.extend(format_relation_line(s, r) for r in rows[s])
    return "\n".join(lines) + "\n"


def relations_path(version: str = RELATIONS_VERSION) -> Path:
    return Path(str(resources.files("gwss") / "data" / f"relations_{version}.txt"))


@lru_cache(maxsize=None)
def leg_relations(version: str = RELATIONS_VERSION) -> dict[int, list[dict[str, int]]]:
    return read_relations(relations_path(version).read_text())


# --- assembling the presentation ----------------------------------------

def _normalize_flags(rels) -> tuple[str, ...]:
    out = []
    for r in rels:
        key = r.upper().replace("²", "2")
        if key not in RELATION_KINDS:
            raise ValueError(f"unknown relation kind {r!r}; expected {RELATION_KINDS}")
        if key not in out:
            out.append(key)
    return tuple(k for k in RELATION_KINDS if k in out)


def relation_rows(s: int, rels=RELATION_KINDS, version: str = RELATIONS_VERSION,
                  generators: list[UniTrivalentTree] | None = None) -> IntMatrix:
    """Relation matrix: one row per relation instance, one column per generator."""
    _check_degree(s)
    kinds = _normalize_flags(rels)
    gens = generators if generators is not None else enumerate_trees(s)
    index = {g.code: j for j, g in enumerate(gens)}
    rows: list[dict[str, int]] = []
    if "AS" in kinds:
        for g in gens:
            rows.extend(as_rows(g))
    if "IHX" in kinds:
        for g in gens:
            rows.extend(ihx_rows(g))
    if "STU2" in kinds:
        rows.extend(leg_relations(version).get(s, []))
    ent = {}
    for i, row in enumerate(rows):
        for code, c in row.items():
            ent[(i, index[code])] = c
    return IntMatrix(len(rows), len(gens), ent)


@lru_cache(maxsize=None)
def compute_AI(s: int, version: str = RELATIONS_VERSION) -> AbelianGroup:
    """Free abelian group on degree-s trees modulo AS, IHX and the leg relations."""
    return cokernel(relation_rows(s, RELATION_KINDS, version), relations_are_rows=True)


def AI_rational_dim(s: int) -> int:
    return compute_AI(s).free_rank


# --- Lie coordinates -----------------------------------------------------

def _tensor(tree) -> dict[tuple[int, ...], int]:
    if isinstance(tree, int):
        return {(tree,): 1}
    a, b = _tensor(tree[0]), _tensor(tree[1])
    out: dict[tuple[int, ...], int] = {}
    for u, x in a.items():
        for w, y in b.items():
            out[u + w] = out.get(u + w, 0) + x * y
            out[w + u] = out.get(w + u, 0) - x * y
    return {k: v for k, v in out.items() if v}


def comb_codes(s: int) -> list[str]:
    """Left-normed combs ((2,a),b)... : a Z-basis of trees modulo AS and IHX."""
    _check_degree(s)
    out = []
    for perm in permutations(range(3, s + 2)):
        t = 2
        for x in perm:
            t = (t, x)
        out.append(format_code(t))
    return out


def lie_coordinates(tree: UniTrivalentTree) -> dict[str, int]:
    """Coordinates of a tree, read as a Lie bracket, on the comb basis.

    The comb starting with 2 and continuing a, b, ... is the only comb whose
    expansion contains the word 2ab...; its coefficient is read off there.
    """
    words = _tensor(tree.nested)
    out = {}
    for code in comb_codes(tree.degree):
        w = tuple(_leaves(parse_code(code)))
        c = words.get(w, 0)
        if c:
            out[code] = c
    return out

"""Chord diagrams on an oriented line and STU expansion of tree diagrams.

A Jacobi diagram on the line is stored as a list of feet in line order plus
an adjacency map: a foot has one neighbour, an internal vertex a cyclically
ordered triple.  STU at a vertex v touching the line through foot f, with
cyclic order (f, e1, e2), reads

    U = [e2 left, e1 right] - [e1 left, e2 right],

so repeated expansion turns any tree on the line into chord diagrams.  The
derivation of tree relations then works modulo 4T (generated by the three
expansions of a tripod) and the framing relation (isolated chords vanish).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

from .abelian import UnitReducer, hermite_normal_form, kernel_basis, IntMatrix

Matching = tuple[tuple[int, int], ...]


def matchings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    """All perfect matchings of the given points (pairs sorted)."""
    if not points:
        yield []
        return
    a = points[0]
    for k in range(1, len(points)):
        b = points[k]
        rest = points[1:k] + points[k + 1:]
        for m in matchings(rest):
            yield [(a, b)] + m


def chord_diagrams(s: int) -> list[Matching]:
    """Degree-s chord diagrams on the line: matchings of 0..2s-1, sorted."""
    if s < 0:
        raise ValueError("degree must be nonnegative")
    return sorted(tuple(sorted(m)) for m in matchings(list(range(2 * s))))


def has_isolated_chord(cd: Matching) -> bool:
    for i, j in cd:
        if not any(i < k < j < l or k < i < l < j for k, l in cd):
            return True
    return False


class Diagram:
    """Feet in line order and adjacency; internal vertices are negative ids."""

    def __init__(self, line: list[int], adj: dict[int, tuple]):
        self.line = line
        self.adj = adj
        self._next = max([0] + [abs(x) for x in adj]) + 1

    def copy(self) -> "Diagram":
        d = Diagram(list(self.line), dict(self.adj))
        d._next = self._next
        return d

    def fresh(self) -> int:
        self._next += 1
        return self._next

    def vertex_at_foot(self):
        """First (vertex, foot) with the foot attached to an internal vertex."""
        for f in self.line:
            (n,) = self.adj[f]
            if n < 0:
                return n, f
        return None

    def matching(self) -> Matching:
        pos = {f: i for i, f in enumerate(self.line)}
        pairs = set()
        for f in self.line:
            (g,) = self.adj[f]
            if g < 0:
                raise ValueError("diagram still has internal vertices")
            pairs.add(tuple(sorted((pos[f], pos[g]))))
        return tuple(sorted(pairs))

    def stu(self, v: int, f: int) -> list[tuple[int, "Diagram"]]:
        """The two signed diagrams replacing vertex v and its foot f."""
        cyc = self.adj[v]
        k = cyc.index(f)
        _, e1, e2 = cyc[k:] + cyc[:k]
        out = []
        for sign, (left, right) in ((1, (e2, e1)), (-1, (e1, e2))):
            d = self.copy()
            del d.adj[v], d.adj[f]
            gl, gr = d.fresh(), d.fresh()
            for g, e in ((gl, left), (gr, right)):
                d.adj[g] = (e,)
                d.adj[e] = tuple(g if x == v else x for x in d.adj[e])
            i = d.line.index(f)
            d.line[i:i + 1] = [gl, gr]
            out.append((sign, d))
        return out


def expand(diagram: Diagram) -> dict[Matching, int]:
    """Chord-diagram expansion by repeated STU (leftmost foot first)."""
    out: dict[Matching, int] = {}
    stack = [(1, diagram)]
    while stack:
        c, d = stack.pop()
        hit = d.vertex_at_foot()
        if hit is None:
            m = d.matching()
            out[m] = out.get(m, 0) + c
            continue
        for sign, nd in d.stu(*hit):
            stack.append((c * sign, nd))
    return {m: c for m, c in out.items() if c}


def tree_diagram(adj: dict[int, tuple], n_legs: int) -> Diagram:
    """Diagram of a tree whose leaves 1..n_legs are feet at those positions."""
    return Diagram(list(range(1, n_legs + 1)), dict(adj))


def tripod_diagrams(s: int) -> Iterator[Diagram]:
    """Degree-s diagrams made of one tripod and s-2 chords."""
    npts = 2 * s - 1
    for tri in combinations(range(npts), 3):
        rest = [x for x in range(npts) if x not in tri]
        for m in matchings(rest):
            adj: dict[int, tuple] = {}
            feet = list(range(1, npts + 1))
            v = -1
            adj[v] = tuple(feet[i] for i in tri)
            for i in tri:
                adj[feet[i]] = (v,)
            for a, b in m:
                adj[feet[a]] = (feet[b],)
                adj[feet[b]] = (feet[a],)
            yield Diagram(feet, adj)


def four_term_rows(s: int) -> Iterator[dict[Matching, int]]:
    """4T relations: differences of the expansions of a tripod at its three feet."""
    for d in tripod_diagrams(s):
        v = -1
        exps = []
        for f in d.adj[v]:
            e: dict[Matching, int] = {}
            for sign, nd in d.stu(v, f):
                m = nd.matching()
                e[m] = e.get(m, 0) + sign
            exps.append(e)
        for a, b in ((0, 1), (1, 2)):
            row = dict(exps[a])
            for m, c in exps[b].items():
                row[m] = row.get(m, 0) - c
            row = {m: c for m, c in row.items() if c}
            if row:
                yield row


class ChordQuotient:
    """Z[chord diagrams of degree s] / (4T, framing), in reduced coordinates."""

    def __init__(self, s: int, framing: bool = True):
        self.s = s
        self.diagrams = chord_diagrams(s)
        self.index = {m: i for i, m in enumerate(self.diagrams)}
        red = UnitReducer()
        if framing:
            for m in self.diagrams:
                if has_isolated_chord(m):
                    red.add({self.index[m]: 1})
        for row in four_term_rows(s):
            red.add({self.index[m]: c for m, c in row.items()})
        self._red = red
        # leftover rows live on the few surviving diagrams; keep a lattice basis
        rest = red.finish()
        self.survivors = sorted({c for r in rest for c in r})
        pos = {c: k for k, c in enumerate(self.survivors)}
        basis: list[list[int]] = []
        for r in rest:
            v = [0] * len(self.survivors)
            for c, x in r.items():
                v[pos[c]] = x
            basis = hermite_normal_form(basis + [v])
        self.leftover = [{self.survivors[k]: x for k, x in enumerate(v) if x} for v in basis]

    def reduce(self, combo: dict[Matching, int]) -> dict[int, int]:
        return self._red.reduce({self.index[m]: c for m, c in combo.items()})


def relation_lattice(quotient: ChordQuotient, images: list[dict[int, int]]) -> list[list[int]]:
    """HNF basis of {x : sum x_i images_i lies in the span of the leftover relations}."""
    n = len(images)
    cols = sorted({c for im in images for c in im} | {c for r in quotient.leftover for c in r})
    if not cols:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    ci = {c: k for k, c in enumerate(cols)}
    ent = {}
    for j, im in enumerate(images):
        for c, v in im.items():
            ent[(ci[c], j)] = v
    for j, r in enumerate(quotient.leftover):
        for c, v in r.items():
            ent[(ci[c], n + j)] = v
    K = kernel_basis(IntMatrix(len(cols), n + len(quotient.leftover), ent))
    vecs = [K.column(j)[:n] for j in range(K.cols)]
    return hermite_normal_form(vecs)


def derive_leg_relations(s: int, framing: bool = True) -> list[dict[str, int]]:
    """Integer relations among degree-s trees implied by STU, 4T and framing.

    Trees modulo AS and IHX are free on the combs, so it suffices to find the
    lattice of comb combinations whose expansion vanishes in the chord
    quotient.  Rows are returned as {comb code: coefficient}, in HNF order.
    """
    from .diagrams import comb_codes, parse_code, adjacency

    combs = comb_codes(s)
    quotient = ChordQuotient(s, framing)
    images = []
    for code in combs:
        diagram = tree_diagram(adjacency(parse_code(code)), s + 1)
        images.append(quotient.reduce(expand(diagram)))
    basis = relation_lattice(quotient, images)
    return [{combs[j]: c for j, c in enumerate(vec) if c} for vec in basis]

"""Exact linear algebra over the integers.

Matrices are stored sparsely as ``{(row, col): int}`` with Python integers,
so there is no overflow however large the Smith normal form pivots get.
"""

from __future__ import annotations

import heapq

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping

from sympy import isprime

__all__ = [
    "IntMatrix",
    "AbelianGroup",
    "SNFResult",
    "smith_normal_form",
    "invariant_factors",
    "cokernel",
    "kernel_basis",
    "hermite_normal_form",
    "localize",
    "rational_rank",
    "read_triplets",
    "write_triplets",
]


class IntMatrix:
    """Sparse integer matrix; absent entries are zero."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], int] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = int(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "IntMatrix":
        dense = [list(r) for r in rows]
        nrows = len(dense)
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        ent = {}
        for i, row in enumerate(dense):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    ent[(i, j)] = v
        return cls(nrows, ncols, ent)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return IntMatrix(self.rows, other.cols, acc)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, j: int) -> list[int]:
        col = [0] * self.rows
        for (r, c), v in self.entries.items():
            if c == j:
                col[r] = v
        return col

    def permuted(self, row_perm: list[int], col_perm: list[int]) -> "IntMatrix":
        """Entry (r, c) moves to (row_perm[r], col_perm[c])."""
        return IntMatrix(self.rows, self.cols,
                         {(row_perm[r], col_perm[c]): v for (r, c), v in self.entries.items()})

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        ent = dict(self.entries)
        ent.update({(r + self.rows, c): v for (r, c), v in other.entries.items()})
        return IntMatrix(self.rows + other.rows, self.cols, ent)

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_dense()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z/d1 + ... + Z/dk with d1 | d2 | ... | dk, each di >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = tuple(int(x) for x in self.torsion)
        for i, x in enumerate(t):
            if x < 2:
                raise ValueError(f"torsion coefficient {x} < 2")
            if i and x % t[i - 1]:
                raise ValueError(f"torsion {t} is not a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], free_rank: int = 0) -> "AbelianGroup":
        """Group presented by generators killed by the given integers (0 means free)."""
        diag = [abs(int(x)) for x in diagonal]
        free = free_rank + sum(1 for x in diag if x == 0)
        return cls(free, tuple(invariant_factors(x for x in diag if x > 1)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for x in self.torsion:
            out *= x
        return out

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_diagonal(self.torsion + other.torsion,
                                          self.free_rank + other.free_rank)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class SNFResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    diagonal: tuple[int, ...] = field(default=())

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def _factor_prime_powers(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 1) * p
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 1) * n
    return out


def invariant_factors(values: Iterable[int]) -> list[int]:
    """Invariant-factor form of the group sum of Z/v over the given values."""
    by_prime: dict[int, list[int]] = {}
    for v in values:
        v = abs(int(v))
        if v == 0:
            raise ValueError("zero is not a torsion order")
        for p, q in _factor_prime_powers(v).items():
            by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return []
    k = max(len(v) for v in by_prime.values())
    out = [1] * k
    for qs in by_prime.values():
        qs.sort(reverse=True)
        for i, q in enumerate(qs):
            out[k - 1 - i] *= q
    return [x for x in out if x > 1]


def _snf_dense(a: list[list[int]], nrows: int, ncols: int, track_u: bool, track_v: bool):
    """In-place Smith reduction. Returns (diag, U, V) with U*M*V = diag matrix."""
    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if track_u else None
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if track_v else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        rs, rd = a[src], a[dst]
        for j in range(ncols):
            if rs[j]:
                rd[j] += k * rs[j]
        if U is not None:
            us, ud = U[src], U[dst]
            for j in range(nrows):
                if us[j]:
                    ud[j] += k * us[j]

    def add_col(src, dst, k):  # col dst += k * col src
        for row in a:
            if row[src]:
                row[dst] += k * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += k * row[src]

    t = 0
    while t < min(nrows, ncols):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(t, i, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(t, j, -q)
                    if a[t][j]:
                        done = False
            if done:
                # the pivot must divide the whole trailing block
                bad = None
                for i in range(t + 1, nrows):
                    row = a[i]
                    for j in range(t + 1, ncols):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest remaining entry of row/column t onto the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, nrows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, ncols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diag = [a[i][i] for i in range(min(nrows, ncols))]
    return diag, U, V


def smith_normal_form(M: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms, ``U @ M @ V == D``.

    The diagonal is nonnegative and forms a divisibility chain, zeros last.
    """
    a = M.to_dense()
    diag, U, V = _snf_dense(a, M.rows, M.cols, True, True)
    D = IntMatrix(M.rows, M.cols, {(i, i): v for i, v in enumerate(diag) if v})
    return SNFResult(IntMatrix.from_dense(U, M.rows), D,
                     IntMatrix.from_dense(V, M.cols), tuple(diag))


def _sparse_rows(M: IntMatrix) -> list[dict[int, int]]:
    rows: list[dict[int, int]] = [dict() for _ in range(M.rows)]
    for (r, c), v in M.entries.items():
        rows[r][c] = v
    return rows


class UnitReducer:
    """Incremental unit-pivot elimination on relation rows (generators = columns).

    Each added relation with a +-1 entry (after reduction) solves one
    generator in terms of the others; rows without a unit entry are kept as
    leftovers.  ``reduce`` rewrites any vector in the surviving generators,
    so the quotient by all added relations is the quotient of the survivors
    by the reduced leftovers.
    """

    def __init__(self):
        self.solved: dict[int, dict[int, int]] = {}  # col -> expression in other cols
        self.order: dict[int, int] = {}  # col -> creation index of its pivot
        self.leftover: list[dict[int, int]] = []

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        # a solved expression only mentions columns solved later, so
        # substituting in creation order visits each column at most once
        solved, order = self.solved, self.order
        out = {c: v for c, v in row.items() if v}
        heap = [(order[c], c) for c in out if c in solved]
        heapq.heapify(heap)
        while heap:
            _, c = heapq.heappop(heap)
            v = out.pop(c, 0)
            if not v:
                continue
            for c2, w in solved[c].items():
                nv = out.get(c2, 0) + v * w
                if nv:
                    if c2 not in out and c2 in solved:
                        heapq.heappush(heap, (order[c2], c2))
                    out[c2] = nv
                else:
                    out.pop(c2, None)
        return out

    def add(self, row: dict[int, int]) -> None:
        r = self.reduce(row)
        if not r:
            return
        pivot = None
        for c in sorted(r):
            if r[c] in (1, -1):
                pivot = c
                break
        if pivot is None:
            self.leftover.append(r)
            return
        s = r.pop(pivot)
        # pivot*s + sum v*c = 0  =>  pivot = -s * sum v*c
        self.solved[pivot] = {c: -s * v for c, v in r.items()}
        self.order[pivot] = len(self.order)

    def finish(self) -> list[dict[int, int]]:
        """Return the fully reduced nonzero leftover rows."""
        self.leftover = [r for r in (self.reduce(r) for r in self.leftover) if r]
        return self.leftover


def _eliminate_units(rows: Iterable[dict[int, int]], ncols: int):
    """Unit-pivot elimination; returns (remaining reduced rows, surviving columns)."""
    red = UnitReducer()
    for row in rows:
        red.add(row)
    final = red.finish()
    alive = [c for c in range(ncols) if c not in red.solved]
    return final, alive


def cokernel(M: IntMatrix, *, relations_are_rows: bool = False) -> AbelianGroup:
    """Cokernel of M viewed as a map Z^cols -> Z^rows.

    With ``relations_are_rows`` the rows of M are read as relations on the
    columns (i.e. the cokernel of the transpose), which is how relation
    matrices are built elsewhere in the package.
    """
    if not relations_are_rows:
        M = M.transpose()
    rows, alive = _eliminate_units(_sparse_rows(M), M.cols)
    index = {c: i for i, c in enumerate(alive)}
    dense = [[0] * len(alive) for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            dense[i][index[c]] = v
    diag, _, _ = _snf_dense(dense, len(rows), len(alive), False, False)
    free = len(alive) - sum(1 for x in diag if x)
    return AbelianGroup(free, tuple(x for x in diag if x > 1))


def column_blocks(M: IntMatrix) -> list[tuple[list[int], list[int]]]:
    """Split M into independent blocks: (rows, cols) groups sharing no entries.

    Columns are joined when they have a nonzero in a common row.  Zero
    columns form blocks with no rows.
    """
    parent = list(range(M.cols))

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    first_in_row: dict[int, int] = {}
    for (i, j) in M.entries:
        if i in first_in_row:
            a, b = find(first_in_row[i]), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
        else:
            first_in_row[i] = j
    groups: dict[int, list[int]] = {}
    for j in range(M.cols):
        groups.setdefault(find(j), []).append(j)
    rows_of: dict[int, set[int]] = {}
    for i, j in first_in_row.items():
        rows_of.setdefault(find(j), set()).add(i)
    return [(sorted(rows_of.get(root, ())), cols) for root, cols in sorted(groups.items())]


def _kernel_block(M: IntMatrix, rows: list[int], cols: list[int]) -> list[list[int]]:
    if not rows:
        return [[1 if c == j else 0 for c in range(len(cols))] for j in range(len(cols))]
    ri = {r: k for k, r in enumerate(rows)}
    cj = {c: k for k, c in enumerate(cols)}
    a = [[0] * len(cols) for _ in rows]
    for (i, j), v in M.entries.items():
        if j in cj:
            a[ri[i]][cj[j]] = v
    diag, _, V = _snf_dense(a, len(rows), len(cols), False, True)
    r = sum(1 for x in diag if x)
    return [[V[i][j] for i in range(len(cols))] for j in range(r, len(cols))]


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel lattice of M, saturated.

    Columns of V beyond the rank in the Smith form span the kernel, and
    since V is unimodular the quotient by their span is torsion-free.
    The basis is then put in Hermite normal form so it is canonical.
    Independent column blocks are handled separately; their HNF bases
    have disjoint supports, so merging by pivot keeps the result in HNF.
    """
    vecs = []
    for rows, cols in column_blocks(M):
        for k in hermite_normal_form(_kernel_block(M, rows, cols)):
            full = [0] * M.cols
            for c, v in zip(cols, k):
                full[c] = v
            vecs.append(full)
    vecs.sort(key=lambda v: next(i for i, x in enumerate(v) if x))
    ent = {(i, j): v for j, col in enumerate(vecs) for i, v in enumerate(col) if v}
    return IntMatrix(M.cols, len(vecs), ent)


def hermite_normal_form(vectors: list[list[int]]) -> list[list[int]]:
    """Row-style HNF of the lattice spanned by ``vectors`` (nonzero rows only).

    Pivots are positive, strictly increasing in position; entries above a
    pivot are reduced into [0, pivot).
    """
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    n = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(col, n):
                    r[j] -= q * piv[j]
            nz = [r for r in nz if r[col]]
        piv = nz[0]
        if piv[col] < 0:
            for j in range(n):
                piv[j] = -piv[j]
        rows = [r for r in rows if r is not piv and any(r)]
        for r in out:
            q = r[col] // piv[col]
            if q:
                for j in range(col, n):
                    r[j] -= q * piv[j]
        out.append(piv)
        col += 1
    return out


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")


def localize(G: AbelianGroup, p: int) -> AbelianGroup:
    """G tensor Z_(p): keep the free part and the p-primary torsion."""
    _require_prime(p)
    tors = []
    for d in G.torsion:
        q = 1
        while d % p == 0:
            d //= p
            q *= p
        if q > 1:
            tors.append(q)
    return AbelianGroup(G.free_rank, tuple(tors))


def rational_rank(G: AbelianGroup) -> int:
    return G.free_rank


def write_triplets(M: IntMatrix) -> str:
    """``rows cols nnz`` header then one ``r c v`` line per entry, 0-indexed."""
    lines = [f"{M.rows} {M.cols} {M.nnz}"]
    lines += [f"{r} {c} {v}" for (r, c), v in sorted(M.entries.items())]
    return "\n".join(lines) + "\n"


def read_triplets(text: str) -> IntMatrix:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty triplet stream")
    rows, cols, nnz = (int(x) for x in lines[0])
    body = lines[1:]
    if len(body) != nnz:
        raise ValueError(f"header promises {nnz} entries, found {len(body)}")
    ent: dict[tuple[int, int], int] = {}
    for r, c, v in body:
        key = (int(r), int(c))
        if key in ent:
            raise ValueError(f"duplicate entry {key}")
        ent[key] = int(v)
    return IntMatrix(rows, cols, ent)

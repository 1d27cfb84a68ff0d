"""Homology spectral sequence of the cosimplicial Poisson model.

Column s is the arity-s Poisson space, normalized as the joint kernel of
the codegeneracies.  Degree q = n(d-1) for a weight-n basis monomial.  d_1
is the alternating coface sum; the model has no internal differential, so
the double complex is concentrated in the horizontal direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .abelian import AbelianGroup, IntMatrix, column_blocks, kernel_basis
from .fields import Ring, Z, Q, nullspace, rref, solve_in_basis
from .pages import BigradedPage
from .poisson import PoissonElement, coface, codegeneracy, poisson_basis
from .spectral import DoubleComplex, SpectralSequence
from .abelian import _require_prime


@dataclass(frozen=True)
class Region:
    s_max: int
    q_max: int

    def __post_init__(self):
        if self.s_max < 0 or self.q_max < 0:
            raise ValueError("region bounds must be non-negative")

    def contains(self, s: int, q: int) -> bool:
        return 0 <= s <= self.s_max and 0 <= q <= self.q_max


@dataclass
class NormalizedColumn:
    s: int
    d: int
    ring: Ring
    # q -> (monomials of the ambient basis, echelon basis rows, pivot columns)
    monomials: dict[int, list] = field(default_factory=dict)
    basis: dict[int, list[list]] = field(default_factory=dict)
    pivots: dict[int, list[int]] = field(default_factory=dict)

    def dim(self, q: int) -> int:
        return len(self.basis.get(q, []))

    def elements(self, q: int) -> list[PoissonElement]:
        mons = self.monomials.get(q, [])
        return [PoissonElement(self.s, self.d, {m: c for m, c in zip(mons, row) if c}, self.ring)
                for row in self.basis.get(q, [])]


def _check_d(d: int) -> None:
    if d < 3:
        raise ValueError(f"d must be at least 3, got {d}")


def _base_ring(ring: Ring) -> Ring:
    # Q and Z share the saturated integer basis; Z_(p) is not offered here
    if ring.kind in ("Z", "Q"):
        return Z
    if ring.kind == "Fp":
        return ring
    raise ValueError(f"unsupported ring {ring} for homology pages")


@lru_cache(maxsize=None)
def _degeneracy_image(d: int, s: int, mono) -> tuple:
    """((i, monomial, coefficient), ...) for all codegeneracies of one basis monomial."""
    x = PoissonElement.monomial(mono, d)
    out = []
    for i in range(1, s + 1):
        for m, c in codegeneracy(s, i, x).terms.items():
            out.append((i, m, c))
    return tuple(out)


@lru_cache(maxsize=None)
def _alternating_coface(d: int, s: int, mono) -> tuple:
    """Sum_i (-1)^i d^i of one basis monomial, over Z, as sorted (monomial, coefficient)."""
    x = PoissonElement.monomial(mono, d)
    acc: dict = {}
    for i in range(s + 2):
        sign = -1 if i % 2 else 1
        for m, c in coface(s, i, x).terms.items():
            acc[m] = acc.get(m, 0) + sign * c
    return tuple(sorted((m, c) for m, c in acc.items() if c))


def _basis(s: int, d: int, n: int) -> list:
    if n < 0 or (s >= 1 and n > s - 1) or (s == 0 and n > 0):
        return []
    return poisson_basis(s, d, n)


@lru_cache(maxsize=None)
def _column_weight(d: int, s: int, n: int, ring: Ring):
    mons = _basis(s, d, n)
    if not mons:
        return [], [], []
    if s == 0:
        return mons, [[1]], [0]
    lower = {m: j for j, m in enumerate(_basis(s - 1, d, n))}
    nlow = len(lower)
    entries = {}
    for j, m in enumerate(mons):
        for i, mm, c in _degeneracy_image(d, s, m):
            entries[((i - 1) * nlow + lower[mm], j)] = c
    M = IntMatrix(s * nlow, len(mons), entries)
    if ring.kind == "Z":
        K = kernel_basis(M)
        rows = [K.column(j) for j in range(K.cols)]
    else:
        rows = []
        for brows, bcols in column_blocks(M):
            sub = [[ring.normalize(M[r, c]) for c in bcols] for r in brows]
            for k in nullspace(sub, len(bcols), ring):
                full = [0] * len(mons)
                for c, v in zip(bcols, k):
                    full[c] = v
                rows.append(full)
        rows = rref(rows, ring)[0] if rows else []
    pivots = [next(i for i, x in enumerate(r) if x) for r in rows]
    return mons, rows, pivots


def normalized_column(d: int, s: int, q_max: int, ring: Ring = Z) -> NormalizedColumn:
    _check_d(d)
    base = _base_ring(ring)
    col = NormalizedColumn(s, d, base)
    for n in range(0, q_max // (d - 1) + 1):
        mons, rows, piv = _column_weight(d, s, n, base)
        if rows:
            q = n * (d - 1)
            col.monomials[q] = mons
            col.basis[q] = rows
            col.pivots[q] = piv
    return col


def normalized_columns(d: int, s_max: int, q_max: int, ring: Ring = Z) -> list[NormalizedColumn]:
    """Normalized columns N^0..N^{s_max}, degrees up to q_max."""
    return [normalized_column(d, s, q_max, ring) for s in range(s_max + 1)]


def d1_matrix(d: int, s: int, q: int, ring: Ring = Z) -> IntMatrix:
    """Matrix of the alternating coface sum N^s_q -> N^{s+1}_q in the normalized bases.

    Entries are integers (reduced mod p over F_p); rows index the target basis.
    """
    _check_d(d)
    base = _base_ring(ring)
    if q % (d - 1):
        return IntMatrix(0, 0)
    n = q // (d - 1)
    smons, srows, _ = _column_weight(d, s, n, base)
    tmons, trows, tpiv = _column_weight(d, s + 1, n, base)
    tindex = {m: j for j, m in enumerate(tmons)}
    entries = {}
    for j, row in enumerate(srows):
        image = [0] * len(tmons)
        for m, c in zip(smons, row):
            if not c:
                continue
            for mm, cc in _alternating_coface(d, s, m):
                image[tindex[mm]] += c * cc
        image = [base.normalize(x) for x in image]
        coords = solve_in_basis(trows, tpiv, image, base)
        for i, v in enumerate(coords):
            if v:
                entries[(i, j)] = int(v)
    return IntMatrix(len(trows), len(srows), entries)


def thmD_allowed(p: int, d: int, r: int) -> bool:
    """True iff r = 1 + n(d-1)(p-1) for some n >= 0."""
    _require_prime(p)
    _check_d(d)
    if r < 1:
        raise ValueError("r must be >= 1")
    return (r - 1) % ((d - 1) * (p - 1)) == 0


def edge_incomplete(region: Region, s: int, q: int, r: int) -> bool:
    """E_r at (s, q) may be wrong because some earlier d_r' leaves the region."""
    return any(s + rr > region.s_max or q + rr - 1 > region.q_max for rr in range(1, r))


@dataclass
class SSComputation:
    d: int
    ring: Ring
    region: Region
    pages: dict[int, BigradedPage] = field(default_factory=dict)
    # r -> {(s, q): matrix rows}, field entries; r -> {(s, q): rank}
    matrices: dict[int, dict] = field(default_factory=dict)
    ranks: dict[int, dict] = field(default_factory=dict)

    def differentials(self):
        for r in sorted(self.ranks):
            for (s, q), rk in sorted(self.ranks[r].items()):
                yield r, (s, q), rk

    def to_json(self) -> dict:
        out = {"d": self.d, "ring": str(self.ring), "s_max": self.region.s_max,
               "q_max": self.region.q_max,
               "pages": [self.pages[r].to_json() for r in sorted(self.pages)],
               "differentials": [{"r": r, "from": [s, q], "rank": rk}
                                 for r, (s, q), rk in self.differentials()]}
        return out


def compute_page(d: int, ring: Ring, r_max: int, region: Region) -> SSComputation:
    """Pages E^1..E^{r_max} inside the region."""
    _check_d(d)
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if ring.kind == "Z" and r_max >= 2:
        raise ValueError("pages beyond E^1 are computed over fields only; use Q or Fp:P")
    if ring.kind not in ("Z", "Q", "Fp"):
        raise ValueError(f"unsupported ring {ring}")
    comp = SSComputation(d, ring, region)
    cols = normalized_columns(d, region.s_max, region.q_max, ring)
    dims = {(c.s, q): c.dim(q) for c in cols for q in c.basis}

    if ring.kind == "Z":
        page = BigradedPage(ring, 1, d, region.s_max, region.q_max, meta={"kind": "homology"})
        for (s, q), n in sorted(dims.items()):
            page.set(s, q, AbelianGroup(n))
        comp.pages[1] = page
        comp.ranks[1] = {}
        comp.matrices[1] = {}
        for (s, q) in sorted(dims):
            if s < region.s_max:
                M = d1_matrix(d, s, q, ring)
                comp.matrices[1][(s, q)] = M.to_dense()
                comp.ranks[1][(s, q)] = _int_rank(M)
        return comp

    horizontal = {}
    for (s, q) in dims:
        if s < region.s_max and (s + 1, q) in dims:
            horizontal[(s, q)] = d1_matrix(d, s, q, ring).to_dense()
    dc = DoubleComplex(ring, dims, horizontal)
    ss = SpectralSequence(dc, r_max)
    for r in range(1, r_max + 1):
        page = BigradedPage(ring, r, d, region.s_max, region.q_max, meta={"kind": "homology"})
        for (s, q) in sorted(dims):
            flags = {"edge_incomplete": True} if edge_incomplete(region, s, q, r) else {}
            page.set(s, q, AbelianGroup(ss.dims[r].get((s, q), 0)), **flags)
        comp.pages[r] = page
        comp.ranks[r] = dict(ss.ranks[r])
        comp.matrices[r] = dict(ss.matrices[r])
    return comp


def _int_rank(M: IntMatrix) -> int:
    if not M.rows or not M.cols:
        return 0
    return len(rref(M.to_dense(), Q)[1])

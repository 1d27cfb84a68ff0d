"""Spectral sequence of a column-filtered double complex over a field.

Cells C[s, q] carry a horizontal differential C[s, q] -> C[s+1, q] and a
vertical one C[s, q] -> C[s, q-1].  The total complex in degree n = q - s is
filtered by s (F^s = columns >= s), and d_r goes (s, q) -> (s+r, q+r-1).

Pages are computed from the staircase subspaces

    Z_r^s = {x in F^s : Dx in F^{s+r}},
    E_r^s = Z_r^s / (Z_{r-1}^{s+1} + D Z_{r-1}^{s-r+1}),

with exact linear algebra, so no representative is ever guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fields import Ring, rref, nullspace

Cell = tuple[int, int]


@dataclass
class DoubleComplex:
    ring: Ring
    dims: dict[Cell, int]
    # matrices as row lists: target_dim x source_dim
    horizontal: dict[Cell, list[list]] = field(default_factory=dict)
    vertical: dict[Cell, list[list]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.ring.is_field:
            raise ValueError("spectral sequence pages need field coefficients")
        self.dims = {c: n for c, n in self.dims.items() if n}

    def dim(self, s: int, q: int) -> int:
        return self.dims.get((s, q), 0)

    def degrees(self) -> set[int]:
        return {q - s for (s, q) in self.dims}


class _TotalDegree:
    """Coordinates and differential of the total complex in one degree."""

    def __init__(self, dc: DoubleComplex, n: int):
        self.n = n
        self.cells = sorted((s, q) for (s, q) in dc.dims if q - s == n)
        self.offset: dict[Cell, int] = {}
        pos = 0
        for c in self.cells:
            self.offset[c] = pos
            pos += dc.dims[c]
        self.size = pos
        self._dims = dc.dims

    def columns_from(self, s: int) -> list[int]:
        """Coordinate indices lying in F^s."""
        out = []
        for c in self.cells:
            if c[0] >= s:
                o = self.offset[c]
                out.extend(range(o, o + self._dims[c]))
        return out


class SpectralSequence:
    """All pages E_1..E_{r_max} of a double complex, with differential ranks and matrices."""

    def __init__(self, dc: DoubleComplex, r_max: int):
        if r_max < 1:
            raise ValueError("r_max must be >= 1")
        self.dc = dc
        self.ring = dc.ring
        self.r_max = r_max
        self._tot = {}
        self._D = {}
        self._cache_Z: dict = {}
        self._cache_den: dict = {}
        self.dims: dict[int, dict[Cell, int]] = {}
        self.ranks: dict[int, dict[Cell, int]] = {}
        self.matrices: dict[int, dict[Cell, list[list]]] = {}
        self._compute()

    # total complex plumbing

    def tot(self, n: int) -> _TotalDegree:
        if n not in self._tot:
            self._tot[n] = _TotalDegree(self.dc, n)
        return self._tot[n]

    def D(self, n: int) -> list[list]:
        """Total differential C^n -> C^{n-1} as rows (target) x cols (source)."""
        if n in self._D:
            return self._D[n]
        src, tgt = self.tot(n), self.tot(n - 1)
        zero = self.ring.convert(0)
        M = [[zero] * src.size for _ in range(tgt.size)]
        for (s, q) in src.cells:
            so = src.offset[(s, q)]
            for target, maps in (((s + 1, q), self.dc.horizontal), ((s, q - 1), self.dc.vertical)):
                if target not in tgt.offset or (s, q) not in maps:
                    continue
                A = maps[(s, q)]
                to = tgt.offset[target]
                for i, row in enumerate(A):
                    for j, v in enumerate(row):
                        if v:
                            M[to + i][so + j] = self.ring.normalize(M[to + i][so + j] + self.ring.convert(v))
        self._D[n] = M
        return M

    def _filtration_index(self, n: int, s: int) -> list[int]:
        return self.tot(n).columns_from(s)

    def _apply(self, M: list[list], v: list) -> list:
        zero = self.ring.convert(0)
        out = []
        for row in M:
            acc = zero
            for a, b in zip(row, v):
                if a and b:
                    acc += a * b
            out.append(self.ring.normalize(acc))
        return out

    # staircase subspaces, as lists of full-length vectors in C^n

    def Z(self, r: int, n: int, s: int) -> list[list]:
        key = (r, n, s)
        if key in self._cache_Z:
            return self._cache_Z[key]
        t = self.tot(n)
        free = self._filtration_index(n, s)
        if not free:
            self._cache_Z[key] = []
            return []
        Dn = self.D(n)
        low = set(range(self.tot(n - 1).size)) - set(self._filtration_index(n - 1, s + r))
        rows = [[Dn[i][j] for j in free] for i in sorted(low)]
        ker = nullspace(rows, len(free), self.ring)
        zero = self.ring.convert(0)
        out = []
        for k in ker:
            v = [zero] * t.size
            for j, c in zip(free, k):
                v[j] = c
            out.append(v)
        self._cache_Z[key] = out
        return out

    def denominator(self, r: int, n: int, s: int) -> list[list]:
        """Z_{r-1}^{s+1} + D Z_{r-1}^{s-r+1}, reduced to a basis."""
        key = (r, n, s)
        if key in self._cache_den:
            return self._cache_den[key]
        vecs = list(self.Z(r - 1, n, s + 1))
        if self.tot(n + 1).size and self.tot(n).size:
            Dn1 = self.D(n + 1)
            for y in self.Z(r - 1, n + 1, s - r + 1):
                vecs.append(self._apply(Dn1, y))
        basis = rref(vecs, self.ring)[0] if vecs else []
        self._cache_den[key] = basis
        return basis

    def _reduce(self, v: list, basis: list[list], pivots: list[int]) -> list:
        """v minus its components along an RREF basis."""
        v = list(v)
        for row, pc in zip(basis, pivots):
            c = v[pc]
            if c:
                v = [self.ring.normalize(x - c * y) for x, y in zip(v, row)]
        return v

    def _quotient(self, r: int, n: int, s: int):
        """Representatives of E_r^s in RREF, reduced against the RREF denominator.

        Returns (reps, rep_pivots, den, den_pivots).  Reps vanish on the
        denominator pivots, which makes coordinates readable off pivots.
        """
        den = self.denominator(r, n, s)
        dpiv = [next(i for i, x in enumerate(row) if x) for row in den]
        rem = [self._reduce(z, den, dpiv) for z in self.Z(r, n, s)]
        rem = [v for v in rem if any(v)]
        reps, rpiv = rref(rem, self.ring) if rem else ([], [])
        return reps, rpiv, den, dpiv

    def _coords_mod(self, v: list, reps, rpiv, den, dpiv) -> list:
        """Coordinates of v on reps modulo span(den); v must lie in span(den + reps)."""
        w = self._reduce(v, den, dpiv)
        coeffs = [w[pc] for pc in rpiv]
        if any(self._reduce(w, reps, rpiv)):
            raise ValueError("vector outside the expected subspace")
        return coeffs

    def _compute(self) -> None:
        cells = sorted(self.dc.dims)
        for r in range(1, self.r_max + 1):
            dims: dict[Cell, int] = {}
            reps_by_cell = {}
            for (s, q) in cells:
                n = q - s
                quo = self._quotient(r, n, s)
                if quo[0]:
                    dims[(s, q)] = len(quo[0])
                reps_by_cell[(s, q)] = quo
            self.dims[r] = dims
            ranks: dict[Cell, int] = {}
            mats: dict[Cell, list[list]] = {}
            for (s, q), (reps, *_rest) in reps_by_cell.items():
                target = (s + r, q + r - 1)
                if not reps or target not in reps_by_cell:
                    continue
                Dn = self.D(q - s)
                cols = [self._coords_mod(self._apply(Dn, z), *reps_by_cell[target]) for z in reps]
                M = [[cols[j][i] for j in range(len(reps))] for i in range(len(reps_by_cell[target][0]))]
                mats[(s, q)] = M
                rk = len(rref(M, self.ring)[1]) if M else 0
                ranks[(s, q)] = rk
            self.ranks[r] = ranks
            self.matrices[r] = mats

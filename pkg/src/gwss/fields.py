"""Coefficient rings and dense linear algebra over prime fields and Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime


@dataclass(frozen=True)
class Ring:
    """Coefficient ring tag: ``Z``, ``Q``, ``Fp`` (with p) or ``Z(p)``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp", "Z(p)"):
            raise ValueError(f"unknown ring {self.kind!r}")
        if self.kind in ("Fp", "Z(p)"):
            if self.p is None or not isprime(self.p):
                raise ValueError(f"{self.kind} needs a prime, got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"{self.kind} takes no prime")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip()
        if t in ("Z", "Q"):
            return cls(t)
        for prefix in ("Fp:", "F"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls("Fp", int(t[len(prefix):]))
        if t.startswith("Z(") and t.endswith(")") and t[2:-1].isdigit():
            return cls("Z(p)", int(t[2:-1]))
        raise ValueError(f"cannot parse ring {text!r}; expected Z, Q, Fp:P or Z(P)")

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "Fp")

    def __str__(self) -> str:
        if self.kind == "Fp":
            return f"F{self.p}"
        if self.kind == "Z(p)":
            return f"Z({self.p})"
        return self.kind

    def convert(self, x: int):
        if self.kind == "Fp":
            return x % self.p
        if self.kind == "Q":
            return Fraction(x)
        return x

    def inv(self, x):
        if self.kind == "Fp":
            return pow(x, -1, self.p)
        if self.kind == "Q":
            return 1 / Fraction(x)
        raise ValueError(f"{self} is not a field")

    def normalize(self, x):
        return x % self.p if self.kind == "Fp" else x


Q = Ring("Q")
Z = Ring("Z")


def Fp(p: int) -> Ring:
    return Ring("Fp", p)


def rref(rows: list[list], ring: Ring) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field. Returns (nonzero rows, pivot columns)."""
    if not ring.is_field:
        raise ValueError("rref needs a field")
    a = [[ring.convert(int(x)) if not isinstance(x, Fraction) else x for x in r] for r in rows]
    if ring.kind == "Fp":
        a = [[x % ring.p for x in r] for r in a]
    if not a:
        return [], []
    n = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(a)):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ring.inv(a[r][c])
        a[r] = [ring.normalize(x * inv) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [ring.normalize(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: list[list], ring: Ring) -> int:
    return len(rref(rows, ring)[1])


def nullspace(rows: list[list], ncols: int, ring: Ring) -> list[list]:
    """Basis of {x : A x = 0} in canonical (RREF of the kernel) form."""
    red, piv = rref(rows, ring) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ring.convert(0)] * ncols
        v[f] = ring.convert(1)
        for row, pc in zip(red, piv):
            v[pc] = ring.normalize(-row[f])
        basis.append(v)
    if not basis:
        return []
    return rref(basis, ring)[0]


def solve_in_basis(basis: list[list], pivots: list[int], v: list, ring: Ring) -> list:
    """Coordinates of v in an echelon basis (rows, pivots as from rref/HNF).

    Raises ValueError if v is not in the span.
    """
    v = list(v)
    coords = []
    for row, pc in zip(basis, pivots):
        lead = row[pc]
        c = v[pc]
        if ring.kind == "Z":
            if c % lead:
                raise ValueError("vector not in the integer span")
            c //= lead
        else:
            c = ring.normalize(c * ring.inv(lead))
        coords.append(c)
        if c:
            v = [ring.normalize(x - c * y) for x, y in zip(v, row)]
    if any(v):
        raise ValueError("vector not in the span")
    return coords

"""Vanishing criteria for differentials and the assembly statements they yield.

Every check here is a pure predicate on small integers.  A certificate
either proves that a differential vanishes or says the criterion does not
apply; it never asserts that a differential is nonzero.

Two values of the "slope" constant appear: c = d-2 (the proven vanishing
criterion, the default) and c = d-1 (the constant printed in the collapse
corollaries).  Reports record which one produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sympy import primerange

from .abelian import AbelianGroup, _require_prime, localize
from .diagrams import MAX_DEGREE, compute_AI
from .homotopy import cyclotomic_weight, e1_rational_dim

RULES = ("ThmB", "ThmD", "WeightParity")
VARIANTS = ("conservative", "corollary")
VANISHES = "vanishes"
INAPPLICABLE = "inapplicable"


def _check_d(d: int) -> None:
    if d < 3:
        raise ValueError(f"d must be at least 3, got {d}")


def slope(d: int, variant: str = "conservative") -> int:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return d - 2 if variant == "conservative" else d - 1


@dataclass(frozen=True)
class VanishingCertificate:
    rule: str
    p: int
    d: int
    r: int
    s: int
    t: int
    verdict: str
    variant: str = "conservative"

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.verdict not in (VANISHES, INAPPLICABLE):
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def vanishes(self) -> bool:
        return self.verdict == VANISHES

    def recheck(self) -> bool:
        """Re-evaluate the rule's inequalities from the stored parameters."""
        if self.rule == "ThmB":
            return _thmB_holds(self.p, self.d, self.r, self.s, self.t, self.variant)
        if self.rule == "ThmD":
            return (self.r - 1) % ((self.d - 1) * (self.p - 1)) != 0
        m = cyclotomic_weight(self.d, self.t)
        n = cyclotomic_weight(self.d, self.t + self.r - 1)
        return m is not None and n is not None and (m - n) % (self.p - 1) != 0

    def to_json(self) -> dict:
        return {"rule": self.rule, "variant": self.variant,
                "params": {"p": self.p, "d": self.d, "r": self.r, "s": self.s, "t": self.t},
                "verdict": self.verdict}


def _thmB_holds(p: int, d: int, r: int, s: int, t: int, variant: str = "conservative") -> bool:
    c = slope(d, variant)
    return (r - 1) % ((p - 1) * c) != 0 and t < 2 * p - 2 + (s - 1) * c


def thmB_vanishes(p: int, d: int, r: int, s: int, t: int,
                  variant: str = "conservative") -> VanishingCertificate:
    """Does d^r out of (-s, t) vanish p-locally by the sparseness criterion?"""
    _require_prime(p)
    _check_d(d)
    if r < 1:
        raise ValueError("r must be >= 1")
    ok = _thmB_holds(p, d, r, s, t, variant)
    return VanishingCertificate("ThmB", p, d, r, s, t, VANISHES if ok else INAPPLICABLE, variant)


def thmD_vanishes(p: int, d: int, r: int, s: int = 0, t: int = 0) -> VanishingCertificate:
    """Homology-side criterion: d_r vanishes unless r - 1 is a multiple of (d-1)(p-1)."""
    _require_prime(p)
    _check_d(d)
    if r < 1:
        raise ValueError("r must be >= 1")
    ok = (r - 1) % ((d - 1) * (p - 1)) != 0
    return VanishingCertificate("ThmD", p, d, r, s, t, VANISHES if ok else INAPPLICABLE)


def weight_obstruction(m: int, n: int, p: int) -> bool:
    """True when an equivariant map between weights m and n must be zero."""
    _require_prime(p)
    return (m - n) % (p - 1) != 0


def weight_certificate(p: int, d: int, r: int, s: int, t: int) -> VanishingCertificate:
    """d^r from (-s, t) to (-s-r, t+r-1) compared through cyclotomic weights.

    Source and target weights come from t = n(d-2)+1; if either side has no
    weight the group is rationally zero and nothing is claimed here.
    """
    _require_prime(p)
    _check_d(d)
    m = cyclotomic_weight(d, t)
    n = cyclotomic_weight(d, t + r - 1)
    ok = m is not None and n is not None and weight_obstruction(m, n, p)
    return VanishingCertificate("WeightParity", p, d, r, s, t, VANISHES if ok else INAPPLICABLE)


def rational_witness(d: int, r: int, s: int, t: int, bound: int = 200,
                     variant: str = "conservative") -> int | None:
    """Smallest prime p <= bound for which the criterion kills d^r at (-s, t)."""
    _check_d(d)
    for p in primerange(2, bound + 1):
        if _thmB_holds(int(p), d, r, s, t, variant):
            return int(p)
    return None


def witness_prime_bound(d: int, r: int, s: int, t: int, variant: str = "conservative") -> int:
    """A number beyond which every prime is a witness (used to size searches)."""
    c = slope(d, variant)
    # (p-1)c > r-1 makes r-1 a non-multiple as soon as r > 1; t < 2p-2 is enough
    return max((r - 1) // c + 2, t // 2 + 2, 2)


@dataclass
class CollapseRegion:
    p: int
    d: int
    n: int
    variant: str
    valid: bool
    bound: int
    violated: str | None = None

    @property
    def slope(self) -> int:
        return slope(self.d, self.variant)

    def threshold(self, s: int) -> int:
        return 2 * self.p - 2 + (s - 1) * self.slope

    def contains(self, s: int, t: int) -> bool:
        return t < self.threshold(s)

    def describe(self) -> str:
        return f"t < {2 * self.p - 2}+(s-1)*{self.slope}"

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "n": self.n, "variant": self.variant,
                "valid": self.valid, "bound": self.bound, "violated": self.violated,
                "region": self.describe()}


def collapse_region(p: int, d: int, n: int, variant: str = "conservative") -> CollapseRegion:
    """Region where the tower-T_n spectral sequence collapses at E^2."""
    _require_prime(p)
    _check_d(d)
    if n < 2:
        raise ValueError("n must be >= 2")
    slope(d, variant)
    bound = (p - 1) * (d - 2) + 3
    valid = n <= bound
    return CollapseRegion(p, d, n, variant, valid, bound,
                          None if valid else f"n ≤ (p-1)(d-2)+3 = {bound}")


def extensions_split(weights: list[int], p: int) -> bool:
    """A tower whose layers carry these weights splits when their spread is < p-1."""
    _require_prime(p)
    if not weights:
        raise ValueError("weights must be nonempty")
    return max(weights) - min(weights) < p - 1


@dataclass
class Contribution:
    s: int
    t: int
    weight: int | None
    e1_dim: int
    group: AbelianGroup | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"bidegree": [-self.s, self.t], "weight": self.weight, "e1_rational_dim": self.e1_dim}
        if self.group is not None:
            out["group"] = self.group.to_json()
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class AssemblyReport:
    kind: str
    params: dict
    valid: bool
    violated: str | None = None
    contributions: list[Contribution] = field(default_factory=list)
    variant: str = "conservative"

    @property
    def empty(self) -> bool:
        return not self.contributions

    def total(self) -> AbelianGroup | None:
        """Direct sum of the resolved groups, or None if any summand is symbolic."""
        acc = AbelianGroup()
        for c in self.contributions:
            if c.group is None:
                return None
            acc = acc + c.group
        return acc

    def to_json(self) -> dict:
        out = {"kind": self.kind, "params": self.params, "valid": self.valid,
               "violated": self.violated, "variant": self.variant, "empty": self.empty,
               "contributions": [c.to_json() for c in self.contributions]}
        tot = self.total()
        if self.valid and tot is not None and self.contributions:
            out["total"] = tot.to_json()
        return out


def _antidiagonal_group(s: int, p: int) -> AbelianGroup | None:
    # E^2 at (-s, s) for knots in R^3 is the degree s-1 tree group
    k = s - 1
    if 1 <= k <= MAX_DEGREE:
        return localize(compute_AI(k), p)
    return None


def thmC_assembly(p: int, d: int, n: int, i: int) -> AssemblyReport:
    """Bidegrees whose E^2 groups assemble pi_i of the n-th stage, p-locally."""
    _require_prime(p)
    _check_d(d)
    n_bound = (p - 1) * (d - 2) + 3
    i_bound = 2 * p - 6 + 2 * (d - 2)
    params = {"p": p, "d": d, "n": n, "i": i}
    violated = []
    if n > n_bound:
        violated.append(f"n ≤ (p-1)(d-2)+3 = {n_bound}")
    if i > i_bound:
        violated.append(f"i ≤ 2p-6+2(d-2) = {i_bound}")
    report = AssemblyReport("thmC", params, not violated, "; ".join(violated) or None)
    for s in range(3, n + 1):
        t = s + i
        if t < 1:
            continue
        dim = e1_rational_dim(d, s, t)
        if not dim:
            continue
        c = Contribution(s, t, cyclotomic_weight(d, t), dim)
        if d == 3 and i == 0:
            c.group = _antidiagonal_group(s, p)
            if c.group is None:
                c.note = "symbolic: tree group beyond the computed range"
        else:
            c.note = f"rational dimension <= {dim}"
        report.contributions.append(c)
    return report


def thmA_report(p: int, n: int) -> AssemblyReport:
    """pi_0 of stage n+1 for knots in R^3 as a sum of tree groups, p-locally."""
    _require_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    params = {"p": p, "d": 3, "n": n}
    if n > p + 1:
        return AssemblyReport("thmA", params, False, f"n ≤ p+1 = {p + 1}")
    report = AssemblyReport("thmA", params, True)
    for s in range(1, n + 1):
        c = Contribution(s + 1, s + 1, s, 0)
        c.e1_dim = e1_rational_dim(3, s + 1, s + 1)
        if s <= MAX_DEGREE:
            c.group = localize(compute_AI(s), p)
        else:
            c.note = f"symbolic: tree group of degree {s} not computed"
        report.contributions.append(c)
    return report

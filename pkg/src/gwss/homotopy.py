"""Rational E^1 page of the homotopy spectral sequence of the Goodwillie-Weiss
tower for long knots in R^d, with cyclotomic weights and the Serre range.

Layer s (s >= 3) is the total homotopy fiber of an (s-1)-cube of wedges of
(d-1)-spheres.  Its loop space splits as a weak product of Omega S^m over the
Lyndon words using all s-1 letters, m = |w|(d-2)+1.  Rationally S^m has
homotopy in degree m, and also in 2m-1 when m is even.
"""

from __future__ import annotations

from .abelian import AbelianGroup, _require_prime
from .fields import Q, Ring
from .lie import full_support_count, sphere_dim
from .pages import BigradedPage

TOWERS = ("T", "Tbar")


def _check_d(d: int) -> None:
    if d < 3:
        raise ValueError(f"d must be at least 3, got {d}")


def cyclotomic_weight(d: int, t: int) -> int | None:
    """n with t = n(d-2)+1, or None."""
    _check_d(d)
    if (t - 1) % (d - 2):
        return None
    n = (t - 1) // (d - 2)
    return n if n >= 0 else None


def _first_live_column(tower: str) -> int:
    if tower not in TOWERS:
        raise ValueError(f"tower must be one of {TOWERS}")
    # T has vanishing layers for s <= 2; Tbar differs only in column 2
    return 3 if tower == "T" else 2


def e1_rational_dim(d: int, s: int, t: int, tower: str = "T") -> int:
    """dim_Q E^1_{-s,t}."""
    _check_d(d)
    if s < _first_live_column(tower):
        return 0
    n = cyclotomic_weight(d, t)
    if n is None or n < s - 1:
        return 0
    letters = s - 1
    dim = full_support_count(letters, n)
    if n % 2 == 0:
        ell = n // 2
        if sphere_dim(ell, d) % 2 == 0:
            # Whitehead square of the bottom class of S^m, m even
            dim += full_support_count(letters, ell)
    return dim


def torsion_free_bound(d: int, s: int, p: int) -> int:
    """N = (s-1)(d-2) + 2p - 3; below it layer s has no p-torsion."""
    _check_d(d)
    _require_prime(p)
    if s < 3:
        raise ValueError("the bound needs s >= 3")
    return (s - 1) * (d - 2) + 2 * p - 3


def e1_page(d: int, s_max: int, t_max: int, ring: Ring = Q, tower: str = "T") -> BigradedPage:
    """E^1 over Q, or over Z_(p) inside the p-torsion-free range.

    Over Z_(p) the free rank is the rational dimension; entries with
    t <= N are flagged ``torsion_free: true``, the rest ``false`` (their
    torsion is not computed).
    """
    _check_d(d)
    if ring.kind not in ("Q", "Z(p)"):
        raise ValueError("homotopy E^1 is available over Q or Z_(p)")
    page = BigradedPage(ring, 1, d, s_max, t_max, meta={"tower": tower, "kind": "homotopy"})
    for s in range(s_max + 1):
        for t in range(t_max + 1):
            dim = e1_rational_dim(d, s, t, tower) if t >= 1 else 0
            flags = {}
            w = cyclotomic_weight(d, t) if t >= 1 else None
            if dim:
                flags["weight"] = w
            if ring.kind == "Z(p)":
                if s < _first_live_column(tower):
                    flags["torsion_free"] = True  # zero layer
                elif s >= 3:
                    flags["torsion_free"] = t <= torsion_free_bound(d, s, ring.p)
                else:
                    flags["torsion_free"] = False
            page.set(s, t, AbelianGroup(dim), **flags)
    return page


def e1_rational_page(d: int, s_max: int, t_max: int, tower: str = "T") -> BigradedPage:
    return e1_page(d, s_max, t_max, Q, tower)

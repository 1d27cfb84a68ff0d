"""Lyndon words, Witt's necklace formula and Hilton-Milnor sphere summands."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

LyndonWord = tuple[int, ...]


def is_lyndon(word) -> bool:
    """Strictly smaller than every proper rotation."""
    w = tuple(word)
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def _duval(k: int, n: int) -> Iterator[LyndonWord]:
    # Duval's algorithm yields Lyndon words of length <= n in lexicographic order
    w = [0]
    while w:
        if len(w) == n:
            yield tuple(x + 1 for x in w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
        if w:
            w[-1] += 1


def lyndon_words(k: int, n: int) -> list[LyndonWord]:
    """Lyndon words of length n over letters 1..k, lexicographically sorted."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    if k == 0:
        return []
    return list(_duval(k, n))


def witt_count(k: int, n: int) -> int:
    """(1/n) * sum_{e | n} mu(e) k^(n/e): dimension of the length-n part of the free Lie algebra."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    total = sum(int(mobius(e)) * k ** (n // e) for e in divisors(n))
    return total // n


def full_support_count(k: int, n: int) -> int:
    """Lyndon words of length n on k letters that use every letter."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    return sum((-1) ** (k - j) * comb(k, j) * witt_count(j, n) for j in range(k + 1))


@dataclass(frozen=True)
class SphereSummand:
    """One factor Omega S^m of the Hilton-Milnor splitting, m = |w|(d-2)+1."""

    word: LyndonWord
    sphere_dim: int


def sphere_dim(length: int, d: int) -> int:
    return length * (d - 2) + 1


def hilton_milnor_spheres(k: int, d: int, t_max: int, full_support: bool = False) -> dict[int, int]:
    """Number of Hilton-Milnor summands per word length that can reach degree t_max.

    A summand S^m contributes rational homotopy in degree m and, when m is even,
    also in degree 2m-1; a word length is listed when either degree is <= t_max.
    Returns {word length: number of summands}.
    """
    if d < 3:
        raise ValueError("d must be at least 3")
    if t_max < 1:
        raise ValueError("t_max must be positive")
    out: dict[int, int] = {}
    n = 1
    while sphere_dim(n, d) <= t_max or 2 * sphere_dim(n, d) - 1 <= t_max:
        c = full_support_count(k, n) if full_support else witt_count(k, n)
        if c:
            out[n] = c
        n += 1
    return out


def hilton_milnor_summands(k: int, d: int, max_length: int, full_support: bool = False) -> list[SphereSummand]:
    """Explicit summand list, one per basic (Lyndon) word of length <= max_length."""
    if d < 3:
        raise ValueError("d must be at least 3")
    out = []
    for n in range(1, max_length + 1):
        for w in lyndon_words(k, n):
            if full_support and len(set(w)) != k:
                continue
            out.append(SphereSummand(w, sphere_dim(n, d)))
    return out

"""The graded d-Poisson operad on its canonical basis.

Arity-k elements are multilinear expressions in x_1..x_k (each of degree 0)
built from a commutative product of degree 0 and a bracket of degree
b = d-1.  Sign conventions, fixed here and used everywhere:

* ``a*c = (-1)^{|a||c|} c*a``
* ``[a,c] = -(-1)^{(|a|+b)(|c|+b)} [c,a]``
* ``[a, c*e] = [a,c]*e + (-1)^{(|a|+b)|c|} c*[a,e]``

so only the parity of d matters.  Lie blocks are computed inside the tensor
algebra with letters of parity b: a left-normed word ``[[x_m, y2], ..., yj]``
with m the smallest label is the only basis bracket whose expansion contains
the word ``x_m y2 ... yj``, so coordinates are read off from words starting
with the smallest label.

A basis monomial is a product of such left-normed blocks, one per block of a
set partition of {1..k}, blocks ordered by smallest label.  It is stored as a
tuple of label tuples, e.g. ``((1, 3), (2,))`` for ``[x1,x3]*x2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator

from .fields import Ring, Z

Block = tuple[int, ...]
Monomial = tuple[Block, ...]
Terms = dict  # Monomial -> nonzero coefficient

UNIT: Monomial = ()


# --- set partitions and the canonical basis --------------------------------

def set_partitions(labels: tuple[int, ...]) -> Iterator[list[list[int]]]:
    if not labels:
        yield []
        return
    first, rest = labels[0], labels[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def lie_basis_words(labels: Iterable[int]) -> list[Block]:
    """Left-normed Lie basis on the given labels: smallest first, rest in any order."""
    labels = sorted(labels)
    m, rest = labels[0], labels[1:]
    return sorted((m,) + p for p in permutations(rest))


def poisson_basis(k: int, d: int, n: int | None = None) -> list[Monomial]:
    """Canonical basis of H_*(E_d(k)); restricted to weight n (bracket count) if given."""
    if k < 0:
        raise ValueError("arity must be nonnegative")
    if n is not None and k >= 1 and not 0 <= n <= k - 1:
        raise ValueError(f"weight {n} out of range for arity {k}")
    if k == 0:
        return [UNIT] if n in (None, 0) else []
    out = []
    for part in set_partitions(tuple(range(1, k + 1))):
        if n is not None and k - len(part) != n:
            continue
        blocks = sorted(part)
        choices = [lie_basis_words(b) for b in blocks]
        out.extend(_product_choices(choices))
    return sorted(out, key=_mono_key)


def _product_choices(choices: list[list[Block]]) -> Iterator[Monomial]:
    if not choices:
        yield ()
        return
    for w in choices[0]:
        for rest in _product_choices(choices[1:]):
            yield (w,) + rest


def _mono_key(m: Monomial):
    return (sum(len(b) - 1 for b in m), tuple(len(b) for b in m), m)


def weight(m: Monomial) -> int:
    return sum(len(b) - 1 for b in m)


def conf_poincare(k: int, d: int) -> list[int]:
    """Coefficients c_q of sum c_q t^q = Poincare polynomial of Conf_k(R^d), from the basis census."""
    if k < 0 or d < 2:
        raise ValueError("need k >= 0, d >= 2")
    top = max(k - 1, 0) * (d - 1)
    coeffs = [0] * (top + 1)
    for m in poisson_basis(k, d):
        coeffs[weight(m) * (d - 1)] += 1
    return coeffs


def conf_poincare_product(k: int, d: int) -> list[int]:
    """prod_{j=1}^{k-1} (1 + j t^{d-1}) expanded."""
    coeffs = [1]
    for j in range(1, k):
        new = coeffs + [0] * (d - 1)
        for i, c in enumerate(coeffs):
            new[i + d - 1] += j * c
        coeffs = new
    return coeffs


# --- sign-aware algebra on term dictionaries (integer coefficients) --------

class _Algebra:
    """Product and bracket of the free d-Poisson algebra on degree-0 letters."""

    def __init__(self, d: int):
        if d < 2:
            raise ValueError("d must be at least 2")
        self.d = d
        self.b = d - 1
        self.pb = self.b % 2  # parity of a letter in the shifted (Lie) grading
        self._tensor = lru_cache(maxsize=None)(self._tensor_impl)
        self._lie = lru_cache(maxsize=None)(self._lie_impl)

    def block_deg(self, w: Block) -> int:
        return (len(w) - 1) * self.b

    def mono_deg(self, m: Monomial) -> int:
        return sum(self.block_deg(w) for w in m)

    # Lie blocks

    def _tensor_impl(self, w: Block) -> dict[tuple[int, ...], int]:
        if len(w) == 1:
            return {w: 1}
        head, y = w[:-1], w[-1]
        sign = -1 if (len(head) * self.pb) % 2 else 1
        out: dict[tuple[int, ...], int] = {}
        for word, c in self._tensor(head).items():
            out[word + (y,)] = out.get(word + (y,), 0) + c
            out[(y,) + word] = out.get((y,) + word, 0) - sign * c
        return {k: v for k, v in out.items() if v}

    def _lie_impl(self, u: Block, v: Block) -> tuple[tuple[Block, int], ...]:
        """[u, v] in the left-normed basis on the union of labels."""
        tu, tv = self._tensor(u), self._tensor(v)
        sign = -1 if (len(u) * len(v) * self.pb) % 2 else 1
        m = min(min(u), min(v))
        out: dict[Block, int] = {}
        # only words starting with the smallest label matter
        if m in u:
            for a, ca in tu.items():
                if a[0] != m:
                    continue
                for c, cc in tv.items():
                    out[a + c] = out.get(a + c, 0) + ca * cc
        else:
            for c, cc in tv.items():
                if c[0] != m:
                    continue
                for a, ca in tu.items():
                    out[c + a] = out.get(c + a, 0) - sign * cc * ca
        return tuple(sorted((w, c) for w, c in out.items() if c))

    def lie_bracket(self, u: Block, v: Block) -> tuple[tuple[Block, int], ...]:
        return self._lie(u, v)

    # products

    def ordered_product(self, blocks: Iterable[Block]) -> tuple[int, Monomial]:
        """Sort a product of blocks into canonical order; return (sign, monomial)."""
        blocks = list(blocks)
        odd = [self.block_deg(w) % 2 for w in blocks]
        sign = 1
        # insertion sort, tracking swaps of two odd blocks
        for i in range(1, len(blocks)):
            j = i
            while j > 0 and blocks[j - 1][0] > blocks[j][0]:
                if odd[j - 1] and odd[j]:
                    sign = -sign
                blocks[j - 1], blocks[j] = blocks[j], blocks[j - 1]
                odd[j - 1], odd[j] = odd[j], odd[j - 1]
                j -= 1
        return sign, tuple(blocks)

    def mul(self, A: Terms, B: Terms) -> Terms:
        out: Terms = {}
        for ma, ca in A.items():
            for mb, cb in B.items():
                s, m = self.ordered_product(ma + mb)
                out[m] = out.get(m, 0) + s * ca * cb
        return {m: c for m, c in out.items() if c}

    # brackets

    def _br_block_mono(self, q: Block, P: Monomial) -> Terms:
        """[q, P] for a single Lie block q, by the derivation rule in P."""
        out: Terms = {}
        shift = self.block_deg(q) + self.b
        prefix = 0
        for idx, p in enumerate(P):
            sign = -1 if (shift * prefix) % 2 else 1
            for w, c in self.lie_bracket(q, p):
                s2, m = self.ordered_product(P[:idx] + (w,) + P[idx + 1:])
                out[m] = out.get(m, 0) + sign * s2 * c
            prefix += self.block_deg(p)
        return out

    def _br_mono(self, P: Monomial, Qm: Monomial) -> Terms:
        out: Terms = {}
        shift_p = self.mono_deg(P) + self.b
        prefix = 0
        for j, q in enumerate(Qm):
            sign = -1 if (shift_p * prefix) % 2 else 1
            # [P, q] = -(-1)^{(|P|+b)(|q|+b)} [q, P]
            swap = 1 if (shift_p * (self.block_deg(q) + self.b)) % 2 else -1
            for mono, c in self._br_block_mono(q, P).items():
                s2, m = self.ordered_product(Qm[:j] + mono + Qm[j + 1:])
                out[m] = out.get(m, 0) + sign * swap * s2 * c
            prefix += self.block_deg(q)
        return out

    def bracket(self, A: Terms, B: Terms) -> Terms:
        out: Terms = {}
        for ma, ca in A.items():
            for mb, cb in B.items():
                for m, c in self._br_mono(ma, mb).items():
                    out[m] = out.get(m, 0) + ca * cb * c
        return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def _algebra(d: int) -> _Algebra:
    return _Algebra(d)


# --- expressions -----------------------------------------------------------
# ('v', i) variable, ('1',) unit, ('m', e1, e2, ...) product, ('b', e1, e2) bracket,
# ('+', [(coef, e), ...]) linear combination

def _eval(expr, alg: _Algebra, env) -> Terms:
    kind = expr[0]
    if kind == "v":
        return env(expr[1])
    if kind == "1":
        return {UNIT: 1}
    if kind == "m":
        acc = {UNIT: 1}
        for sub in expr[1:]:
            acc = alg.mul(acc, _eval(sub, alg, env))
        return acc
    if kind == "b":
        left = _eval(expr[1], alg, env)
        for sub in expr[2:]:
            left = alg.bracket(left, _eval(sub, alg, env))
        return left
    if kind == "+":
        out: Terms = {}
        for coef, sub in expr[1]:
            for m, c in _eval(sub, alg, env).items():
                out[m] = out.get(m, 0) + coef * c
        return {m: c for m, c in out.items() if c}
    raise ValueError(f"bad expression node {kind!r}")


def _labels(expr) -> list[int]:
    kind = expr[0]
    if kind == "v":
        return [expr[1]]
    if kind == "1":
        return []
    if kind == "+":
        raise ValueError("nested sums are not allowed inside a term")
    out = []
    for sub in expr[1:]:
        out += _labels(sub)
    return out


_TOKEN = re.compile(r"\s*(\d+|[\[\],*+\-()])")


def parse(text: str):
    """Parse the fixture syntax: ``[1,2]*3``, ``[[1,2],3]``, ``[1,[2,3]]``.

    ``[a,b,c]`` is left-normed ``[[a,b],c]``; ``*`` is the product; terms may be
    combined with ``+``/``-`` and carry an integer coefficient in parentheses,
    e.g. ``(2)[1,2]*3 - [1,3]*2``.  ``1`` on its own with no other labels is the
    arity-1 variable; the empty string is the unit.
    """
    toks = _TOKEN.findall(text)
    if "".join(toks) != re.sub(r"\s+", "", text):
        raise ValueError(f"unexpected characters in {text!r}")
    if not toks:
        return ("1",)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected!r} at token {pos} in {text!r}")
        pos += 1
        return tok

    def atom():
        tok = peek()
        if tok == "[":
            take("[")
            items = [product()]
            while peek() == ",":
                take(",")
                items.append(product())
            take("]")
            if len(items) < 2:
                raise ValueError("a bracket needs at least two entries")
            node = ("b", items[0], items[1])
            for it in items[2:]:
                node = ("b", node, it)
            return node
        if tok is not None and tok.isdigit():
            take()
            return ("v", int(tok))
        raise ValueError(f"unexpected token {tok!r} in {text!r}")

    def product():
        items = [atom()]
        while peek() == "*":
            take("*")
            items.append(atom())
        return items[0] if len(items) == 1 else ("m", *items)

    def term():
        coef = 1
        if peek() == "(":
            take("(")
            sign = -1 if peek() == "-" else 1
            if peek() == "-":
                take("-")
            coef = sign * int(take())
            take(")")
        return coef, product()

    terms = []
    sign = 1
    if peek() == "-":
        take("-")
        sign = -1
    c, e = term()
    terms.append((sign * c, e))
    while peek() in ("+", "-"):
        sign = 1 if take() == "+" else -1
        c, e = term()
        terms.append((sign * c, e))
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return ("+", terms)


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for w in m:
        parts.append(str(w[0]) if len(w) == 1 else "[" + ",".join(map(str, w)) + "]")
    return "*".join(parts)


# --- elements --------------------------------------------------------------

def _reduce(value, ring: Ring):
    if ring.kind == "Fp":
        return value % ring.p
    if ring.kind == "Q":
        return Fraction(value)
    return value


@dataclass
class PoissonElement:
    k: int
    d: int
    terms: dict = field(default_factory=dict)
    ring: Ring = Z

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            c = _reduce(c, self.ring)
            if c:
                labels = sorted(x for w in m for x in w)
                if labels != list(range(1, self.k + 1)):
                    raise ValueError(f"monomial {m} is not multilinear in arity {self.k}")
                clean[m] = c
        self.terms = clean

    @classmethod
    def monomial(cls, m: Monomial, d: int, ring: Ring = Z, coef: int = 1) -> "PoissonElement":
        k = sum(len(w) for w in m)
        return cls(k, d, {m: coef}, ring)

    @classmethod
    def unit(cls, d: int, ring: Ring = Z) -> "PoissonElement":
        return cls(0, d, {UNIT: 1}, ring)

    @classmethod
    def product_of_variables(cls, k: int, d: int, ring: Ring = Z) -> "PoissonElement":
        return cls(k, d, {tuple((i,) for i in range(1, k + 1)): 1}, ring)

    def _compatible(self, other: "PoissonElement") -> None:
        if (self.k, self.d, self.ring) != (other.k, other.d, other.ring):
            raise ValueError("elements live in different spaces")

    def __add__(self, other: "PoissonElement") -> "PoissonElement":
        self._compatible(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return PoissonElement(self.k, self.d, out, self.ring)

    def __neg__(self) -> "PoissonElement":
        return PoissonElement(self.k, self.d, {m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other: "PoissonElement") -> "PoissonElement":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "PoissonElement":
        return PoissonElement(self.k, self.d, {m: scalar * c for m, c in self.terms.items()}, self.ring)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PoissonElement):
            return NotImplemented
        return (self.k, self.d, self.ring, self.terms) == (other.k, other.d, other.ring, other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> set[int]:
        return {weight(m) for m in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_key):
            c = self.terms[m]
            parts.append(("" if c == 1 else "-" if c == -1 else f"({c})") + format_monomial(m))
        return " + ".join(parts).replace("+ -", "- ")

    def vector(self, index: dict[Monomial, int]) -> list:
        v = [0] * len(index)
        for m, c in self.terms.items():
            v[index[m]] = c
        return v


def normalize(expr, d: int, ring: Ring = Z) -> PoissonElement:
    """Rewrite a raw expression (string or parsed tree) in the canonical basis."""
    if isinstance(expr, str):
        expr = parse(expr)
    terms = expr[1] if expr[0] == "+" else [(1, expr)]
    k = None
    for _, sub in terms:
        labels = sorted(_labels(sub))
        if len(set(labels)) != len(labels):
            raise ValueError(f"expression is not multilinear: repeated label in {labels}")
        kk = len(labels)
        if labels != list(range(1, kk + 1)):
            raise ValueError(f"labels {labels} are not 1..{kk}")
        if k is None:
            k = kk
        elif k != kk:
            raise ValueError("terms have different arities")
    alg = _algebra(d)
    out = _eval(expr, alg, lambda i: {((i,),): 1})
    return PoissonElement(k or 0, d, out, ring)


def _monomial_tree(m: Monomial):
    """Canonical operation tree of a basis monomial: left-nested products of left-normed brackets."""
    blocks = []
    for w in m:
        node = ("v", w[0])
        for y in w[1:]:
            node = ("b", node, ("v", y))
        blocks.append(node)
    if not blocks:
        return ("1",)
    node = blocks[0]
    for b in blocks[1:]:
        node = ("m", node, b)
    return node


def _koszul_exponent(tree, alg: _Algebra, slot: int) -> int:
    """Sum over nodes with `slot` in the left subtree of (degree of the right subtree + b if bracket).

    Substituting an element of degree e into `slot` contributes (-1)^(e * this).
    """
    kind = tree[0]
    if kind in ("v", "1"):
        return 0
    left, right = tree[1], tree[2]
    if slot in _labels(left):
        right_deg = _tree_brackets(right) * alg.b
        extra = right_deg + (alg.b if kind == "b" else 0)
        return extra + _koszul_exponent(left, alg, slot)
    return _koszul_exponent(right, alg, slot)


def _tree_brackets(tree) -> int:
    kind = tree[0]
    if kind in ("v", "1"):
        return 0
    return (1 if kind == "b" else 0) + _tree_brackets(tree[1]) + _tree_brackets(tree[2])


def _compose_terms(x_terms: Terms, k: int, i: int, y_terms: Terms, m: int, alg: _Algebra) -> Terms:
    shift = m - 1

    def relabel_y(mono: Monomial) -> Monomial:
        return tuple(tuple(a + i - 1 for a in w) for w in mono)

    y_shifted: dict[int, Terms] = {}
    for mono, c in y_terms.items():
        e = alg.mono_deg(mono) % 2
        y_shifted.setdefault(e, {})
        ym = relabel_y(mono)
        y_shifted[e][ym] = y_shifted[e].get(ym, 0) + c

    out: Terms = {}
    for mono, c in x_terms.items():
        tree = _monomial_tree(mono)
        exp = _koszul_exponent(tree, alg, i)
        for e, ypart in y_shifted.items():
            sign = -1 if (e * exp) % 2 else 1

            def env(j, ypart=ypart):
                if j == i:
                    return ypart
                return {(((j if j < i else j + shift),),): 1}

            for mm, cc in _eval(tree, alg, env).items():
                out[mm] = out.get(mm, 0) + sign * c * cc
    return {mm: cc for mm, cc in out.items() if cc}


def compose(x: PoissonElement, i: int, y: PoissonElement) -> PoissonElement:
    """Operadic x o_i y (arity k+m-1), order-preserving relabelling."""
    if x.ring != y.ring or x.d != y.d:
        raise ValueError("compose needs equal rings and d")
    if not 1 <= i <= x.k:
        raise IndexError(f"slot {i} out of range 1..{x.k}")
    alg = _algebra(x.d)
    terms = _compose_terms(x.terms, x.k, i, y.terms, y.k, alg)
    return PoissonElement(x.k + y.k - 1, x.d, terms, x.ring)


def coface(q: int, i: int, x: PoissonElement) -> PoissonElement:
    """Cosimplicial coface d^i : P(q) -> P(q+1).

    d^0 prepends a new first point, d^{q+1} appends a last one, and the inner
    d^i doubles point i into the product x_i x_{i+1}.
    """
    if x.k != q:
        raise ValueError(f"element has arity {x.k}, expected {q}")
    if not 0 <= i <= q + 1:
        raise IndexError(f"coface index {i} out of range 0..{q + 1}")
    m = PoissonElement.product_of_variables(2, x.d, x.ring)
    if i == 0:
        return compose(m, 2, x)
    if i == q + 1:
        return compose(m, 1, x)
    return compose(x, i, m)


def codegeneracy(q: int, i: int, x: PoissonElement) -> PoissonElement:
    """s^i : P(q) -> P(q-1), x o_i u with i in 1..q."""
    if x.k != q:
        raise ValueError(f"element has arity {x.k}, expected {q}")
    if not 1 <= i <= q:
        raise IndexError(f"codegeneracy index {i} out of range 1..{q}")
    return compose(x, i, PoissonElement.unit(x.d, x.ring))

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gwss.fields import Fp, Q, Z, rref
from gwss.spectral import DoubleComplex, SpectralSequence


def test_rejects_non_field():
    with pytest.raises(ValueError):
        DoubleComplex(Z, {(0, 0): 1})


def test_single_zigzag_gives_d2():
    dims = {(0, 0): 1, (1, 0): 1, (1, 1): 1, (2, 1): 1}
    h = {(0, 0): [[1]], (1, 1): [[1]]}
    v = {(1, 1): [[1]]}
    ss = SpectralSequence(DoubleComplex(Q, dims, h, v), 3)
    assert ss.dims[1] == {(0, 0): 1, (2, 1): 1}
    assert ss.ranks[1].get((0, 0), 0) == 0
    assert ss.dims[2] == {(0, 0): 1, (2, 1): 1}
    assert ss.ranks[2][(0, 0)] == 1
    assert ss.dims[3] == {}


# --- random sums of staircases, scrambled by cellwise changes of basis ---

def _staircase(s, q, r):
    """Cells and maps of a staircase whose only surviving pair is linked by d_r."""
    cells = [("a", (s, q))]
    h, v = [], []  # (source index, target index)
    if r == 1:
        cells.append(("e", (s + 1, q)))
        h.append((0, 1))
        return cells, h, v
    # a -> b1 ; c_k -> b_k (vertical), c_k -> b_{k+1} (horizontal), c_{r-1} -> e
    idx = {}
    for k in range(1, r):
        idx[("b", k)] = len(cells)
        cells.append(("b", (s + k, q + k - 1)))
        idx[("c", k)] = len(cells)
        cells.append(("c", (s + k, q + k)))
    idx["e"] = len(cells)
    cells.append(("e", (s + r, q + r - 1)))
    h.append((0, idx[("b", 1)]))
    for k in range(1, r):
        v.append((idx[("c", k)], idx[("b", k)]))
        h.append((idx[("c", k)], idx[("b", k + 1)] if k < r - 1 else idx["e"]))
    return cells, h, v


def _invertible(draw, n, p):
    while True:
        M = [[draw(st.integers(0, p - 1)) for _ in range(n)] for _ in range(n)]
        if len(rref(M, Fp(p))[1]) == n:
            return M


def _inverse(M, p):
    n = len(M)
    aug = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    R, _ = rref(aug, Fp(p))
    return [row[n:] for row in R]


def _mul(A, B, p):
    return [[sum(a * b for a, b in zip(row, col)) % p for col in zip(*B)] for row in A]


@st.composite
def staircase_sums(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    pieces = draw(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(1, 4)),
                           min_size=1, max_size=4))
    basis = {}  # cell -> list of (piece, local index)
    gens = []
    for pi, (s, q, r) in enumerate(pieces):
        cells, h, v = _staircase(s, q, r)
        gens.append((cells, h, v))
        for li, (_, cell) in enumerate(cells):
            basis.setdefault(cell, []).append((pi, li))
    pos = {cell: {g: i for i, g in enumerate(lst)} for cell, lst in basis.items()}
    dims = {cell: len(lst) for cell, lst in basis.items()}

    def block(src, tgt):
        return [[0] * dims[src] for _ in range(dims[tgt])]

    H, V = {}, {}
    for pi, (cells, h, v) in enumerate(gens):
        for maps, pairs in ((H, h), (V, v)):
            for a, b in pairs:
                src, tgt = cells[a][1], cells[b][1]
                M = maps.setdefault(src, block(src, tgt))
                M[pos[tgt][(pi, b)]][pos[src][(pi, a)]] = 1
    # scramble every cell by a random basis change P_cell
    P = {cell: _invertible(draw, n, p) for cell, n in dims.items()}
    Pinv = {cell: _inverse(M, p) for cell, M in P.items()}
    for maps, step in ((H, (1, 0)), (V, (0, -1))):
        for src in list(maps):
            tgt = (src[0] + step[0], src[1] + step[1])
            maps[src] = _mul(_mul(P[tgt], maps[src], p), Pinv[src], p)
    return p, dims, H, V, pieces


@settings(suppress_health_check=[HealthCheck.large_base_example, HealthCheck.too_slow])
@given(staircase_sums())
def test_pages_of_staircase_sums(case):
    p, dims, H, V, pieces = case
    r_max = 5
    ss = SpectralSequence(DoubleComplex(Fp(p), dims, H, V), r_max)
    for r in range(1, r_max + 1):
        want: dict = {}
        rank_want: dict = {}
        for s, q, length in pieces:
            if r <= length:
                for cell in ((s, q), (s + length, q + length - 1)):
                    want[cell] = want.get(cell, 0) + 1
            if r == length:
                rank_want[(s, q)] = rank_want.get((s, q), 0) + 1
        assert ss.dims[r] == want, r
        got_ranks = {c: k for c, k in ss.ranks[r].items() if k}
        assert got_ranks == rank_want, r


@settings(suppress_health_check=[HealthCheck.large_base_example, HealthCheck.too_slow])
@given(staircase_sums())
def test_differentials_square_to_zero(case):
    p, dims, H, V, _ = case
    ss = SpectralSequence(DoubleComplex(Fp(p), dims, H, V), 4)
    for r in range(1, 5):
        for (s, q), M in ss.matrices[r].items():
            nxt = ss.matrices[r].get((s + r, q + r - 1))
            if nxt and M:
                prod = _mul(nxt, M, p)
                assert all(x == 0 for row in prod for x in row)

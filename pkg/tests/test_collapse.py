import pytest
from hypothesis import given, strategies as st
from sympy import isprime, primerange

from gwss.abelian import AbelianGroup, localize
from gwss.collapse import (VanishingCertificate, collapse_region, extensions_split, rational_witness,
                           thmA_report, thmB_vanishes, thmC_assembly, thmD_vanishes, weight_certificate,
                           weight_obstruction, witness_prime_bound)
from gwss.diagrams import compute_AI
from gwss.homotopy import cyclotomic_weight, e1_rational_dim

primes = st.sampled_from([2, 3, 5, 7, 11, 13])


# --- examples ---

def test_thmB_examples():
    assert thmB_vanishes(5, 3, 2, 4, 4).vanishes
    assert not thmB_vanishes(3, 3, 2, 3, 10).vanishes
    for p in (2, 3, 5, 7):
        for d in (3, 4, 5):
            assert not thmB_vanishes(p, d, 1 + (p - 1) * (d - 2), 3, 0).vanishes
    with pytest.raises(ValueError):
        thmB_vanishes(4, 3, 2, 4, 4)
    with pytest.raises(ValueError):
        thmB_vanishes(5, 3, 0, 4, 4)


def test_variant_changes_the_constant():
    # (d-1) makes the modulus 8 and the bound 2p-2+(s-1)*2
    assert thmB_vanishes(5, 3, 5, 2, 9, "corollary").vanishes
    assert not thmB_vanishes(5, 3, 5, 2, 9).vanishes
    assert thmB_vanishes(5, 3, 2, 4, 4, "corollary").to_json()["variant"] == "corollary"
    with pytest.raises(ValueError):
        thmB_vanishes(5, 3, 2, 4, 4, "bogus")


def test_weight_obstruction_examples():
    assert weight_obstruction(3, 1, 5)
    for p in (2, 3, 5, 7):
        assert not weight_obstruction(4, 4, p)
        assert not weight_obstruction(p, 1, p)
    with pytest.raises(ValueError):
        weight_obstruction(3, 1, 6)


def test_collapse_region_examples():
    reg = collapse_region(5, 3, 7)
    assert reg.valid and reg.describe() == "t < 8+(s-1)*1"
    assert reg.contains(3, 9) and not reg.contains(3, 10)
    bad = collapse_region(2, 3, 5)
    assert not bad.valid and "4" in bad.violated
    assert collapse_region(2, 3, 4).valid
    for p in (2, 3, 5):
        for d in (3, 4):
            assert collapse_region(p, d, 2).valid
    assert collapse_region(5, 3, 7, "corollary").describe() == "t < 8+(s-1)*2"


def test_extensions_split_examples():
    assert extensions_split([2, 3, 4], 5)
    for p in (2, 3, 5, 7):
        assert not extensions_split([0, p - 1], p)
        assert extensions_split([6], p)
    with pytest.raises(ValueError):
        extensions_split([], 5)


def test_thmC_examples():
    rep = thmC_assembly(5, 3, 7, 0)
    assert rep.valid
    assert [c.s for c in rep.contributions] == [3, 4, 5, 6, 7]
    assert all(c.t == c.s for c in rep.contributions)
    # antidiagonal groups come from the diagram groups one degree down
    for c in rep.contributions:
        assert c.group == localize(compute_AI(c.s - 1), 5)
    assert rep.total() == AbelianGroup(12)

    bad = thmC_assembly(5, 3, 9, 0)
    assert not bad.valid and "7" in bad.violated

    low = thmC_assembly(5, 3, 7, -3)
    assert low.valid and low.empty and low.contributions == []


def test_thmA_examples():
    rep = thmA_report(5, 6)
    assert rep.valid
    # the degree-s summand sits at bidegree (-(s+1), s+1)
    assert [(c.s, c.t) for c in rep.contributions] == [(s + 1, s + 1) for s in range(1, 7)]
    assert [c.group for c in rep.contributions] == [localize(compute_AI(s), 5) for s in range(1, 7)]
    assert rep.total() == AbelianGroup(12)
    bad = thmA_report(2, 4)
    assert not bad.valid and "3" in bad.violated
    one = thmA_report(3, 1)
    assert one.valid and len(one.contributions) == 1


# --- properties ---

@given(primes, st.integers(3, 6), st.integers(1, 12), st.integers(0, 8), st.integers(0, 30))
def test_certificate_recheck(p, d, r, s, t):
    for cert in (thmB_vanishes(p, d, r, s, t), thmB_vanishes(p, d, r, s, t, "corollary"),
                 thmD_vanishes(p, d, r, s, t), weight_certificate(p, d, r, s, t)):
        assert cert.recheck() == cert.vanishes
        again = VanishingCertificate(**{k: getattr(cert, k) for k in
                                        ("rule", "p", "d", "r", "s", "t", "verdict", "variant")})
        assert again == cert


def test_monotone_in_the_prime():
    ps = list(primerange(2, 40))
    for d in (3, 4, 5):
        for r in range(2, 10):
            for s in range(0, 8):
                for t in range(0, 30):
                    for i, p in enumerate(ps):
                        if not thmB_vanishes(p, d, r, s, t).vanishes:
                            continue
                        for q in ps[i + 1:]:
                            if r - 1 < (q - 1) * (d - 2) and t < 2 * q - 2 + (s - 1) * (d - 2):
                                assert thmB_vanishes(q, d, r, s, t).vanishes


def test_rational_witness_always_found():
    for d in (3, 4, 5):
        for r in range(3, 12):
            for s in range(0, 10):
                for t in range(0, 40):
                    bound = witness_prime_bound(d, r, s, t)
                    p = rational_witness(d, r, s, t, bound=max(2 * bound + 10, 20))
                    assert p is not None and isprime(p)
                    assert thmB_vanishes(p, d, r, s, t).vanishes


@given(st.integers(-20, 20), st.integers(-20, 20), primes)
def test_weight_obstruction_symmetric(m, n, p):
    assert weight_obstruction(m, n, p) == weight_obstruction(n, m, p)


@given(primes, st.integers(3, 5), st.integers(2, 9), st.integers(-4, 8))
def test_thmC_contributions(p, d, n, i):
    rep = thmC_assembly(p, d, n, i)
    for c in rep.contributions:
        assert 3 <= c.s <= n and c.t - c.s == i
        assert c.weight is not None and cyclotomic_weight(d, c.t) == c.weight
        assert c.e1_dim > 0 and e1_rational_dim(d, c.s, c.t) == c.e1_dim
    assert rep.empty == (not rep.contributions)
    assert rep.to_json()["params"] == {"p": p, "d": d, "n": n, "i": i}

"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Tolerances are exact equality throughout; the time limits below are the
required ones.  The verdict lines appear in the "acceptance criteria"
section of the pytest terminal summary.
"""

import io
import random

import pytest

from gwss import cli
from gwss.abelian import AbelianGroup, IntMatrix, cokernel, kernel_basis, smith_normal_form
from gwss.collapse import rational_witness, thmB_vanishes
from gwss.diagrams import compute_AI, enumerate_trees, leg_relations, relation_rows
from gwss.fields import Fp, Ring
from gwss.homology import Region, compute_page, d1_matrix, thmD_allowed
from gwss.homotopy import e1_page, e1_rational_dim, torsion_free_bound
from gwss.poisson import PoissonElement, coface, conf_poincare, poisson_basis
from oracles import brute_homotopy_e1, brute_tree_group, full_support_words
from poisson_oracle import cosimplicial_failures

LIMITS = {1: 10, 2: 60, 3: 600, 4: 30, 5: 10, 6: 60, 7: 300, 8: 1, 9: 30}


def test_criterion_1_configuration_homology(criterion):
    with criterion(1, "Poincare polynomial = basis census, k<=7, d in {3,4,5}", LIMITS[1]) as c:
        checked = 0
        for d in (3, 4, 5):
            for k in range(0, 8):
                poly = conf_poincare(k, d)
                census = [0] * len(poly)
                for n in range(max(k, 1)):
                    census[n * (d - 1)] += len(poisson_basis(k, d, n))
                assert poly == census, (k, d)
                checked += 1
        c.note = f"{checked} (k,d) pairs"


def test_criterion_2_operad_structure(criterion):
    with criterion(2, "cosimplicial identities and d1^2 = 0, s<=5, d in {3,4}", LIMITS[2]) as c:
        for d in (3, 4):
            for q in range(0, 6):
                assert cosimplicial_failures(d, q) == [], (d, q)
            # unnormalized: alternating coface twice, every basis monomial of arity <= 5
            for q in range(0, 6):
                for m in poisson_basis(q, d):
                    x = PoissonElement.monomial(m, d)
                    once = sum((((-1) ** i) * coface(q, i, x) for i in range(1, q + 2)),
                               coface(q, 0, x))
                    twice = sum((((-1) ** i) * coface(q + 1, i, once) for i in range(1, q + 3)),
                                coface(q + 1, 0, once))
                    assert twice.is_zero(), (d, m)
            # normalized complex over Z
            for s in range(0, 6):
                for n in range(0, s + 2):
                    A, B = d1_matrix(d, s, n * (d - 1)), d1_matrix(d, s + 1, n * (d - 1))
                    if A.rows and A.cols and B.cols:
                        assert (B @ A).is_zero(), (d, s, n)
        c.note = "arity <= 5 sources"


def _forbidden_ranks(p):
    comp = compute_page(3, Fp(p), 4, Region(6, 8))
    out = {}
    for r in (2, 3, 4):
        if not thmD_allowed(p, 3, r):
            out[r] = sum(comp.ranks[r].values()), sum(1 for M in comp.matrices[r].values() if M and M[0])
    return out


def test_criterion_3_sparseness_of_homology_differentials(criterion):
    with criterion(3, "forbidden d_r vanish over F3 (r=2,3,4) and F2 (r=2,4), d=3, s<=6, q<=8",
                   LIMITS[3]) as c:
        f3 = _forbidden_ranks(3)
        assert sorted(f3) == [2, 3, 4]
        f2 = _forbidden_ranks(2)
        assert sorted(f2) == [2, 4]
        for r, (rank, _) in list(f3.items()) + list(f2.items()):
            assert rank == 0, r
        maps = sum(n for _, n in f3.values()) + sum(n for _, n in f2.values())
        # the model carries no internal differential, so this is a consistency check only
        c.note = f"{maps} nonempty differential matrices, all zero; vacuous for a formal model"


def test_criterion_4_homotopy_e1_oracle(criterion):
    budget = 300_000
    with criterion(4, "rational E^1 = Hilton-Milnor count, s<=5, t<=20, d in {3,4}", LIMITS[4]) as c:
        cells = 0
        for d in (3, 4):
            for s in range(0, 6):
                for t in range(0, 21):
                    assert e1_rational_dim(d, s, t) == brute_homotopy_e1(d, s, t, budget), (d, s, t)
                    cells += 1
        # how much of the range the explicit lists covered
        skipped = 0
        for d in (3, 4):
            for s in range(3, 6):
                n = 1
                while n * (d - 2) + 1 <= 20:
                    if not full_support_words(s - 1, n, budget)[1]:
                        skipped += (s - 1) ** n
                    n += 1
        c.note = f"{cells} cells agree"
        if skipped:
            c.unattainable(f"explicit word lists would need ~{skipped:.2e} words; "
                           f"lists used up to {budget} words per (k,n), exact per-content Lyndon counts beyond")
    if skipped:
        pytest.xfail("explicit enumeration of every word is out of reach in the time limit")


def test_criterion_5_rational_collapse_witness(criterion):
    with criterion(5, "a prime p<=200 kills d^r for 3<=r<=12, 3<=s<=10, t<=40, d in {3,4}",
                   LIMITS[5]) as c:
        worst = 0
        for d in (3, 4):
            for r in range(3, 13):
                for s in range(3, 11):
                    for t in range(0, 41):
                        p = rational_witness(d, r, s, t, bound=200)
                        assert p is not None, (d, r, s, t)
                        assert thmB_vanishes(p, d, r, s, t).vanishes
                        worst = max(worst, p)
        c.note = f"largest witness {worst}"


def test_criterion_6_exact_linear_algebra(criterion):
    rnd = random.Random(20240601)
    with criterion(6, "SNF and saturated kernel on 500 random sparse matrices <=40x40", LIMITS[6]) as c:
        for _ in range(500):
            r, k = rnd.randint(1, 40), rnd.randint(1, 40)
            density = rnd.choice([0.05, 0.1, 0.2])
            ent = {(i, j): rnd.randint(-100, 100) for i in range(r) for j in range(k)
                   if rnd.random() < density}
            M = IntMatrix(r, k, ent)
            res = smith_normal_form(M)
            assert res.U @ M @ res.V == res.D
            assert abs(res.U.determinant()) == 1 and abs(res.V.determinant()) == 1
            diag = [res.D[i, i] for i in range(min(r, k))]
            assert set(res.D.entries) <= {(i, i) for i in range(min(r, k))}
            nz = [x for x in diag if x]
            assert all(x > 0 for x in nz) and diag[:len(nz)] == nz
            assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
            K = kernel_basis(M)
            assert (M @ K).is_zero() and K.cols == k - len(nz)
            if K.cols:
                assert set(smith_normal_form(K).diagonal) <= {1}
        c.note = "500 matrices"


def test_criterion_7_diagram_algebra(criterion):
    rnd = random.Random(7)
    with criterion(7, "tree group = brute-force oracle for s<=4, order-invariant", LIMITS[7]) as c:
        groups = []
        for s in range(1, 5):
            n, (free, torsion) = brute_tree_group(s, leg_relations().get(s, []))
            G = compute_AI(s)
            assert G == AbelianGroup(free, torsion), s
            for _ in range(5):
                gens = enumerate_trees(s)
                rnd.shuffle(gens)
                M = relation_rows(s, generators=gens)
                rows = list(range(M.rows))
                rnd.shuffle(rows)
                assert cokernel(M.permuted(rows, list(range(M.cols))), relations_are_rows=True) == G
            groups.append(str(G))
        c.note = "groups " + ", ".join(groups)


def test_criterion_8_torsion_free_range(criterion):
    with criterion(8, "torsion-free bound and flags, s<=6, p in {3,5,7}", LIMITS[8]) as c:
        flagged = 0
        for d in (3, 4, 5, 6):
            for p in (3, 5, 7):
                page = e1_page(d, 6, 40, Ring("Z(p)", p))
                for s in range(3, 7):
                    N = torsion_free_bound(d, s, p)
                    assert N == (s - 1) * (d - 2) + 2 * p - 3
                    for t in range(0, 41):
                        assert page.flags[(s, t)]["torsion_free"] == (t <= N), (d, p, s, t)
                        flagged += t <= N
        c.note = f"{flagged} flagged entries"


COMMANDS = [
    ["e1", "homotopy", "--d", "3", "--smax", "5", "--tmax", "12"],
    ["e1", "homology", "--d", "3", "--smax", "4", "--qmax", "6", "--ring", "Z"],
    ["page", "homology", "--d", "3", "--ring", "Fp:3", "--rmax", "3", "--smax", "5", "--qmax", "6"],
    ["diagrams", "--degree", "4"],
    ["collapse", "--p", "5", "--d", "3", "--r", "2", "--s", "4", "--t", "4"],
    ["collapse", "--p", "5", "--d", "3", "--region", "--n", "7"],
    ["pi0", "--p", "5", "--n", "5"],
]


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_criterion_9_cli_determinism(criterion, cache_dir):
    with criterion(9, "every subcommand twice gives identical JSON; cache hits", LIMITS[9]) as c:
        for argv in COMMANDS:
            first = _run(argv + ["--json", "-v"])
            second = _run(argv + ["--json", "-v"])
            fresh = _run(argv + ["--json", "--no-cache"])
            assert first[0] == second[0] == fresh[0] == 0, argv
            assert first[1] == second[1] == fresh[1], argv
            assert "computed" in first[2] and "cache hit" in second[2], argv
        c.note = f"{len(COMMANDS)} subcommand invocations"

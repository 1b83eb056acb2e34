"""Tests for families of subgroups and splitting coefficients.

The coefficient solver is checked against an independent oracle that
recounts fixed cosets from scratch and solves the linear system by
generic Gaussian elimination over Fraction (no triangularity assumed).
"""

from fractions import Fraction

import pytest

import equisplit.burnside as br
import equisplit.families as fam
import equisplit.groups as gr
import equisplit.mackey as mk


def d6():
    return gr.dihedral(6)


def d2p(p):
    return gr.dihedral(2 * p)


def c3_on_c7():
    # 2 has order 3 mod 7, so x -> 2x generates a faithful C3-action on C7.
    return gr.semidirect_product(
        gr.cyclic(7), gr.cyclic(3),
        [tuple((2 ** k * x) % 7 for x in range(7)) for k in range(3)])


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def oracle_closure(G, seed_subgroups):
    """Close a set of subgroups under conjugation and passing to subgroups,
    using nothing but the raw group operations."""
    lattice = gr.subgroup_lattice(G)
    allsubs = [s.elements for s in lattice.subgroups]
    members = set()
    frontier = [tuple(sorted(s)) for s in seed_subgroups]
    while frontier:
        cur = frontier.pop()
        if cur in members:
            continue
        members.add(cur)
        for g in range(G.order):
            frontier.append(G.conjugate_subset(g, cur))
        for other in allsubs:
            if set(other) <= set(cur):
                frontier.append(other)
    return members


def oracle_mark(G, H, K):
    """|(G/H)^K| by direct inspection of cosets."""
    Hset = set(H)
    seen = set()
    count = 0
    for g in range(G.order):
        coset = tuple(sorted(G.mul(g, h) for h in Hset))
        if coset in seen:
            continue
        seen.add(coset)
        # K fixes gH iff g^-1 K g lies in H
        gi = G.inv(g)
        if all(G.mul(G.mul(gi, k), g) in Hset for k in K):
            count += 1
    return count


def oracle_coefficients(G, family_reps):
    """Solve sum_H c_H |(G/H)^K| = 1 over the family's classes by plain
    Gaussian elimination, returning {rep: Fraction} or None if singular."""
    n = len(family_reps)
    A = [[Fraction(oracle_mark(G, H, K)) for H in family_reps]
         for K in family_reps]
    b = [Fraction(1)] * n
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * p for a, p in zip(A[r], A[col])]
                b[r] = b[r] - f * b[col]
    return {family_reps[i]: b[i] / A[i][i] for i in range(n)}


# ---------------------------------------------------------------------------
# family construction
# ---------------------------------------------------------------------------

def test_closure_d6_reflection_seed():
    G = d6()
    f = fam.family_closure(G, [[0, 3]])
    # trivial group plus all three reflection subgroups
    assert len(f.members) == 4
    lat = gr.subgroup_lattice(G)
    assert sorted(len(lat.subgroups[i].elements) for i in f.members) == [1, 2, 2, 2]


def test_closure_d6_rotation_seed():
    G = d6()
    lat = gr.subgroup_lattice(G)
    f = fam.family_closure(G, [[0, 1, 2]])
    assert sorted(len(lat.subgroups[i].elements) for i in f.members) == [1, 3]


@pytest.mark.parametrize("G", [gr.dihedral(8), gr.alternating(4), gr.quaternion()])
def test_closure_matches_bruteforce(G):
    lat = gr.subgroup_lattice(G)
    for rep in lat.classReps:
        seed = lat.subgroups[rep].elements
        f = fam.family_closure(G, [seed])
        got = {lat.subgroups[i].elements for i in f.members}
        assert got == oracle_closure(G, [seed])


def test_closure_empty_seed_is_empty_family():
    f = fam.family_closure(d6(), [])
    assert f.is_empty()
    assert f.members == frozenset()


def test_all_families_d6():
    fams = fam.all_families(gr.subgroup_lattice(d6()))
    assert len(fams) == 6
    sizes = sorted(len(f.classIndices) for f in fams)
    assert sizes == [0, 1, 2, 2, 3, 4]
    # every one closed under conjugation and subgroups
    G = d6()
    for f in fams:
        lat = f.lattice
        got = {lat.subgroups[i].elements for i in f.members}
        if f.members:
            assert got == oracle_closure(G, list(got))


def test_all_families_trivial_group():
    fams = fam.all_families(gr.subgroup_lattice(gr.cyclic(1)))
    # the empty family and the full one
    assert len(fams) == 2
    assert fams[0].is_empty() and not fams[1].is_empty()


def test_all_families_cap():
    # C2 x C2 x C2 x C2 has 67 subgroups, all normal: way too many classes
    G = gr.direct_product(gr.direct_product(gr.cyclic(2), gr.cyclic(2)),
                          gr.direct_product(gr.cyclic(2), gr.cyclic(2)))
    with pytest.raises(fam.TooManyFamilies):
        fam.all_families(gr.subgroup_lattice(G))


# ---------------------------------------------------------------------------
# splitting coefficients
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p", [3, 5, 7])
def test_dihedral_reflection_family_coefficients(p):
    G = d2p(p)
    lat = gr.subgroup_lattice(G)
    f = fam.family_closure(lat, [[0, p]])
    sc = fam.splitting_coefficients(f.lattice, f)
    reps = sorted(sc.cH, key=len)
    assert len(reps) == 2
    c_triv, c_refl = sc.cH[reps[0]], sc.cH[reps[1]]
    assert c_triv.value == Fraction(1 - p, 2 * p)
    assert c_refl.value == 1
    # (1-p)/2p always reduces: the even numerator cancels the 2
    assert sc.denominatorPrimes == frozenset({p})


@pytest.mark.parametrize("p", [3, 5, 7])
def test_dihedral_rotation_family_coefficients(p):
    G = d2p(p)
    f = fam.family_closure(G, [list(range(p))])
    sc = fam.splitting_coefficients(f.lattice, f)
    reps = sorted(sc.cH, key=len)
    assert sc.cH[reps[0]].value == 0
    assert sc.cH[reps[1]].value == Fraction(1, 2)
    assert sc.denominatorPrimes == frozenset({2})


def test_full_family_coefficients_d6():
    G = d6()
    f = fam.family_closure(G, [list(range(6))])
    sc = fam.splitting_coefficients(f.lattice, f)
    for rep, c in sc.cH.items():
        assert c.value == (1 if len(rep) == 6 else 0)
    assert sc.denominatorPrimes == frozenset()


def test_empty_family_rejected():
    with pytest.raises(fam.FamilyError):
        fam.splitting_coefficients(d6(), fam.family_closure(d6(), []))


@pytest.mark.parametrize("G", [
    gr.cyclic(8), gr.cyclic(12), gr.dihedral(8), gr.dihedral(10),
    gr.dihedral(12), gr.alternating(4), gr.quaternion(), gr.symmetric(4),
])
def test_coefficients_match_oracle_all_families(G):
    lat = gr.subgroup_lattice(G)
    for f in fam.all_families(lat):
        if f.is_empty():
            continue
        sc = fam.splitting_coefficients(f.lattice, f)
        reps = tuple(sorted(f.classReps, key=lambda r: (len(r), r)))
        expected = oracle_coefficients(G, reps)
        assert expected is not None
        for rep in reps:
            assert sc.cH[rep].value == expected[rep]
        # and the defining identity, recomputed from raw cosets
        for K in reps:
            total = sum(sc.cH[H].value * oracle_mark(G, H, K) for H in reps)
            assert total == 1


def test_coefficient_lookup_by_any_conjugate():
    G = d6()
    f = fam.family_closure(G, [[0, 3]])
    sc = fam.splitting_coefficients(f.lattice, f)
    # [0,4] generates a reflection subgroup conjugate to [0,3]
    assert sc.coefficient([0, 4]).value == 1
    assert sc.coefficient([0, 3]).value == 1


# ---------------------------------------------------------------------------
# required primes
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p", [3, 5, 7])
def test_primes_dihedral_reflections(p):
    G = d2p(p)
    rep = fam.splitting_primes(G, fam.family_closure(G, [[0, p]]))
    assert rep.requiredPrimes == frozenset({p})
    assert rep.theoremApplied == "twosplit"


@pytest.mark.parametrize("p", [3, 5, 7])
def test_primes_dihedral_rotations(p):
    G = d2p(p)
    rep = fam.splitting_primes(G, fam.family_closure(G, [list(range(p))]))
    assert rep.requiredPrimes == frozenset({2})
    assert rep.theoremApplied == "twosplit"


def test_primes_s3_as_symmetric_group():
    # same group up to isomorphism, different construction
    G = gr.symmetric(3)
    lat = gr.subgroup_lattice(G)
    refl = next(s.elements for s in lat.subgroups if len(s.elements) == 2)
    rep = fam.splitting_primes(G, fam.family_closure(lat, [refl]))
    assert rep.theoremApplied == "twosplit"
    assert rep.requiredPrimes == frozenset({3})


def test_primes_s3xc5_normal_part_family():
    G = gr.direct_product(gr.symmetric(3), gr.cyclic(5))
    # C5 sits at indices 0..4 of the product
    f = fam.family_closure(G, [[0, 1, 2, 3, 4]])
    rep = fam.splitting_primes(G, f)
    assert rep.theoremApplied == "bigtwosplit"
    assert rep.requiredPrimes == frozenset({2, 3})
    reps = sorted(rep.coefficients.cH, key=len)
    assert rep.coefficients.cH[reps[1]].value == Fraction(1, 6)
    assert rep.coefficients.cH[reps[0]].value == 0


def test_primes_a4_both_split_families():
    G = gr.alternating(4)
    lat = gr.subgroup_lattice(G)
    c3 = next(s.elements for s in lat.subgroups if len(s.elements) == 3)
    v4 = next(s.elements for s in lat.subgroups if len(s.elements) == 4)
    r1 = fam.splitting_primes(G, fam.family_closure(lat, [c3]))
    assert r1.theoremApplied == "bigtwosplit"
    assert r1.requiredPrimes == frozenset({2})
    r2 = fam.splitting_primes(G, fam.family_closure(lat, [v4]))
    assert r2.theoremApplied == "bigtwosplit"
    assert r2.requiredPrimes == frozenset({3})


def test_primes_fallback_inverts_group_order():
    G = d6()
    rep = fam.splitting_primes(G, fam.family_closure(G, [list(range(6))]))
    assert rep.theoremApplied == "orderinvert"
    assert rep.requiredPrimes == frozenset({2, 3})


# ---------------------------------------------------------------------------
# semidirect certificates
# ---------------------------------------------------------------------------

CERT_NAMES = ("onlydecent", "finalrelation", "divide", "gen22")


def check_report(G, D, coprime):
    rep = fam.semidirect_report(G, D)
    names = [n for n, _ in rep.certificates]
    for want in CERT_NAMES:
        assert want in names
    if coprime:
        assert "gen12" in names and "gen21" in names
    else:
        assert "gen12" not in names and "gen21" not in names
    return rep


@pytest.mark.parametrize("p", [3, 5, 7])
def test_certificates_dihedral(p):
    G = d2p(p)
    D = gr.make_decomposition(G, tuple(range(p)), (0, p))
    rep = check_report(G, D, True)
    # rotations are decent, so both generation bounds are sharp here
    assert rep.reportF2.coefficients.cH[tuple(range(p))].value == Fraction(1, 2)


def test_certificates_a4():
    G = gr.alternating(4)
    lat = gr.subgroup_lattice(G)
    v4 = next(s.elements for s in lat.subgroups if len(s.elements) == 4)
    comp = gr.schur_zassenhaus(G, v4)
    D = gr.make_decomposition(G, v4, comp.complements[0])
    rep = check_report(G, D, True)
    assert rep.reportF2.coefficients.cH[v4].value == Fraction(1, 3)


def test_certificates_s3xc5():
    G = gr.direct_product(gr.symmetric(3), gr.cyclic(5))
    D = gr.standard_semidirect_decomposition(G, 5)
    rep = check_report(G, D, True)
    # only the whole complement is good in a direct product
    assert len(rep.commutants.good) == 1


def test_certificates_c3_on_c7():
    G = c3_on_c7()
    D = gr.standard_semidirect_decomposition(G, 7)
    rep = check_report(G, D, True)
    c = rep.reportF1.coefficients.cH
    triv = min(c, key=len)
    assert c[triv].value == Fraction(-2, 7)


def test_certificates_s4_noncoprime():
    # S4 = S3 |x V4 with gcd(6,4) = 2: the coprime-only certificates
    # must be skipped but everything else still holds
    G = gr.symmetric(4)
    lat = gr.subgroup_lattice(G)
    v4 = next(s.elements for s in lat.subgroups
              if len(s.elements) == 4 and len(lat.conjClasses[lat.class_of(lat.index_of(s.elements))]) == 1)
    comp = gr.schur_zassenhaus(G, v4, strict=False)
    D = gr.make_decomposition(G, v4, comp.complements[0])
    rep = check_report(G, D, False)
    triv = min(rep.reportF1.coefficients.cH, key=len)
    assert rep.reportF1.coefficients.cH[triv].value == Fraction(1, 8)


# ---------------------------------------------------------------------------
# lambda classifier
# ---------------------------------------------------------------------------

def test_lambda_d6():
    G = d6()
    lc = fam.lambda_classifier(G)
    assert len(lc.families) == 6
    assert len(lc.assignments) == 4
    assert len(set(lc.assignments.values())) == 4
    f1 = fam.family_closure(lc.lattice, [[0, 3]])
    f2 = fam.family_closure(lc.lattice, [[0, 1, 2]])
    refl = next(r for r in lc.assignments if len(r) == 2)
    assert lc.token(refl, f1) == fam.PLUS
    assert lc.token(refl, f2) == fam.TILDE
    rot = next(r for r in lc.assignments if len(r) == 3)
    assert lc.token(rot, f1) == fam.TILDE
    assert lc.token(rot, f2) == fam.PLUS


def test_lambda_trivial_group():
    lc = fam.lambda_classifier(gr.cyclic(1))
    (rep,) = lc.assignments
    nonempty = [f for f in lc.families if not f.is_empty()]
    assert len(nonempty) == 1
    assert lc.token(rep, nonempty[0]) == fam.PLUS
    empty = next(f for f in lc.families if f.is_empty())
    assert lc.token(rep, empty) == fam.TILDE


@pytest.mark.parametrize("G", [gr.cyclic(6), gr.dihedral(10), gr.quaternion()])
def test_lambda_assignments_distinct(G):
    lc = fam.lambda_classifier(G)
    assert len(set(lc.assignments.values())) == len(lc.assignments)


# ---------------------------------------------------------------------------
# interplay with Mackey-side constructions
# ---------------------------------------------------------------------------

def test_family_object_feeds_sub_functors():
    G = d6()
    lat = gr.subgroup_lattice(G)
    f2 = fam.family_closure(lat, [[0, 1, 2]])
    M, N = mk.sub_functors(lat, f2, allowed_primes={2})
    top = lat.full_group_index()
    assert M.levels[top].rank == 2
    assert N.levels[top].rank == 2


def test_coefficients_live_in_burnside_ring():
    # the c_H assemble to an idempotent-like element: its marks are 1 on
    # family classes (that is the defining identity)
    G = d6()
    lat = gr.subgroup_lattice(G)
    f = fam.family_closure(lat, [[0, 3]])
    sc = fam.splitting_coefficients(f.lattice, f)
    S = frozenset({2, 3})
    top = lat.full_group_index()
    x = br.zero(lat, top, S)
    for rep, c in sc.cH.items():
        term = br.transfer(br.unit(lat, lat.index_of(rep), S), top)
        x = x + c.value * term
    lv = br.level_data(lat, top)
    marks = br.marks_vector(x)
    for ci in range(lv.nclasses()):
        if lat.class_of(lat.index_of(lv.repElements[ci])) in f.classIndices:
            assert marks[ci].value == 1

"""Group core: constructors, lattices, commutants, complements.

The subgroup-count oracle here is deliberately a different algorithm from
the library's lattice enumeration: close every generating subset of size
<= 2, then extend each known subgroup by single elements until nothing new
appears.  Counts are also frozen against classical values where those are
textbook facts.
"""

import itertools
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from equisplit import groups as gr


# ---------------------------------------------------------------------------
# independent oracle
# ---------------------------------------------------------------------------

def oracle_subgroups(G):
    """All subgroups of G, enumerated independently of subgroup_lattice."""
    found = set()
    for a in range(G.order):
        for b in range(a, G.order):
            found.add(G.closure([a, b]))
    while True:
        fresh = set()
        for H in found:
            for g in range(G.order):
                if g in H:
                    continue
                J = G.closure(H + (g,))
                if J not in found:
                    fresh.add(J)
        if not fresh:
            return found
        found |= fresh


CONSTRUCTOR_GROUPS = [
    gr.cyclic(1), gr.cyclic(2), gr.cyclic(7), gr.cyclic(12), gr.cyclic(24),
    gr.dihedral(6), gr.dihedral(8), gr.dihedral(10), gr.dihedral(24),
    gr.symmetric(3), gr.symmetric(4), gr.alternating(4), gr.quaternion(),
    gr.direct_product(gr.cyclic(2), gr.cyclic(2)),
    gr.direct_product(gr.cyclic(2), gr.cyclic(12)),
    gr.direct_product(gr.symmetric(3), gr.cyclic(2)),
    gr.direct_product(gr.cyclic(2), gr.direct_product(gr.cyclic(2), gr.cyclic(2))),
    gr.semidirect_product(gr.cyclic(3), gr.cyclic(2),
                          gr.inversion_action(gr.cyclic(3))),
    gr.semidirect_product(gr.cyclic(7), gr.cyclic(3),
                          [tuple((2 ** k * x) % 7 for x in range(7))
                           for k in range(3)]),
]


@pytest.mark.parametrize("G", CONSTRUCTOR_GROUPS, ids=lambda g: g.label)
def test_lattice_matches_oracle(G):
    lat = gr.subgroup_lattice(G)
    got = {s.elements for s in lat.subgroups}
    assert got == oracle_subgroups(G)


def test_constructor_tables_are_groups():
    # re-validate every constructor output through the full table checks
    for G in CONSTRUCTOR_GROUPS:
        gr.FiniteGroup(G.table, validate=True)


# frozen classical subgroup counts (Dummit–Foote style bookkeeping)
KNOWN_COUNTS = [
    (gr.dihedral(6), 6),
    (gr.dihedral(8), 10),
    (gr.dihedral(10), 8),
    (gr.alternating(4), 10),
    (gr.symmetric(4), 30),
    (gr.quaternion(), 6),
    (gr.cyclic(12), 6),          # one per divisor
    (gr.direct_product(gr.cyclic(2), gr.direct_product(gr.cyclic(2), gr.cyclic(2))), 16),
]


@pytest.mark.parametrize("G,count", KNOWN_COUNTS, ids=lambda x: getattr(x, "label", x))
def test_frozen_subgroup_counts(G, count):
    assert len(gr.subgroup_lattice(G).subgroups) == count


def test_dihedral6_lattice_shape():
    G = gr.dihedral(6)
    lat = gr.subgroup_lattice(G)
    assert len(lat.subgroups) == 6
    assert len(lat.conjClasses) == 4
    orders = [len(lat.subgroups[r]) for r in lat.classReps]
    assert orders == [1, 2, 3, 6]
    weyl = [lat.weylOrder[r] for r in lat.classReps]
    assert weyl == [6, 1, 2, 1]
    # the three reflections are one class
    two = [c for c in lat.conjClasses if len(lat.subgroups[c[0]]) == 2]
    assert len(two) == 1 and len(two[0]) == 3


def test_dihedral10_lattice_shape():
    lat = gr.subgroup_lattice(gr.dihedral(10))
    assert len(lat.conjClasses) == 4
    rep_orders = {len(lat.subgroups[r]): lat.weylOrder[r] for r in lat.classReps}
    assert rep_orders == {1: 10, 2: 1, 5: 2, 10: 1}


def test_cyclic1_lattice():
    lat = gr.subgroup_lattice(gr.cyclic(1))
    assert len(lat.subgroups) == 1 and len(lat.conjClasses) == 1


def test_subconjugacy_poset():
    lat = gr.subgroup_lattice(gr.symmetric(4))
    n = len(lat.conjClasses)
    sc = lat.subconjugacy
    for i in range(n):
        assert sc[i][i] == 1
    for i, j, k in itertools.product(range(n), repeat=3):
        if sc[i][j] and sc[j][k]:
            assert sc[i][k]
    # antisymmetry except on the diagonal (it's a partial order on classes)
    for i in range(n):
        for j in range(n):
            if i != j and sc[i][j]:
                assert not sc[j][i]


def test_normalizer_and_weyl():
    G = gr.dihedral(6)
    lat = gr.subgroup_lattice(G)
    for i, s in enumerate(lat.subgroups):
        nz = lat.normalizer[i]
        assert G.is_subgroup(nz.elements)
        for g in nz:
            assert G.conjugate_subset(g, s.elements) == s.elements
        assert lat.weylOrder[i] * len(s) == len(nz)


# ---------------------------------------------------------------------------
# constructors: presentations and error paths
# ---------------------------------------------------------------------------

def test_dihedral_presentation():
    for order in (2, 4, 6, 10, 14):
        m = order // 2
        G = gr.dihedral(order)
        z, t = 1 % m, m      # rotation and reflection generators
        if m > 1:
            assert G.element_order(1) == m
        assert G.element_order(t) in (1, 2)
        # z t = t z^-1
        assert G.mul(1 % G.order, t) == G.mul(t, G.inv(1 % G.order))


def test_dihedral6_matches_semidirect():
    D6 = gr.dihedral(6)
    S = gr.semidirect_product(gr.cyclic(3), gr.cyclic(2),
                              gr.inversion_action(gr.cyclic(3)))
    assert _isomorphic(D6, S)


def _isomorphic(A, B):
    """Exhaustive table-isomorphism search, small orders only."""
    if A.order != B.order:
        return False
    n = A.order
    # match order profiles first to prune
    ordA = [A.element_order(a) for a in range(n)]
    ordB = [B.element_order(b) for b in range(n)]
    if sorted(ordA) != sorted(ordB):
        return False
    # pick a small generating set of A
    gens = []
    span = A.closure([])
    for a in range(n):
        if a not in span:
            gens.append(a)
            span = A.closure(gens)
            if len(span) == n:
                break
    candidates = [[b for b in range(n) if ordB[b] == ordA[g]] for g in gens]
    for images in itertools.product(*candidates):
        phi = {0: 0}
        ok = True
        frontier = dict(zip(gens, images))
        phi.update(frontier)
        # close the partial map under multiplication
        work = list(phi.items())
        while work and ok:
            a, b = work.pop()
            for g, h in list(phi.items()):
                pa, pb = A.mul(a, g), B.mul(b, h)
                if pa in phi:
                    if phi[pa] != pb:
                        ok = False
                        break
                else:
                    phi[pa] = pb
                    work.append((pa, pb))
        if ok and len(phi) == n and len(set(phi.values())) == n:
            return True
    return False


def test_symmetric_and_alternating_orders():
    assert gr.symmetric(3).order == 6
    assert gr.symmetric(4).order == 24
    assert gr.alternating(4).order == 12
    assert gr.alternating(5).order == 60
    assert not gr.alternating(4).is_abelian()


def test_nonassociative_rejected():
    # tweak one entry of C_4's table
    tab = [list(r) for r in gr.cyclic(4).table]
    tab[3][3] = 3
    with pytest.raises((gr.NonAssociative, gr.NoInverse)):
        gr.FiniteGroup(tab)


def test_no_identity_rejected():
    tab = [[1, 0], [0, 1]]
    with pytest.raises(gr.NoIdentity):
        gr.FiniteGroup(tab)


def test_bad_action_rejected():
    C3 = gr.cyclic(3)
    # order-2 "action" by a non-automorphism permutation
    with pytest.raises(gr.BadAction):
        gr.semidirect_product(C3, gr.cyclic(2),
                              [(0, 1, 2), (0, 2, 1) if False else (1, 0, 2)])
    # a valid permutation of elements that is not a homomorphism from H
    with pytest.raises(gr.BadAction):
        gr.semidirect_product(C3, gr.cyclic(3),
                              [(0, 1, 2), (0, 2, 1), (0, 1, 2)])


def test_order_cap():
    with pytest.raises(gr.OrderCapExceeded):
        gr.cyclic(600)
    with pytest.raises(gr.OrderCapExceeded):
        gr.direct_product(gr.cyclic(30), gr.cyclic(30))


def test_build_group_json_roundtrip():
    G = gr.build_group({"constructor": "dihedral", "args": [10]})
    H = gr.build_group(G.to_json())
    assert G.table == H.table
    P = gr.build_group({"permutations": [[1, 0, 2], [1, 2, 0]], "degree": 3})
    assert P.order == 6
    assert _isomorphic(P, gr.symmetric(3))


def test_parse_group_shorthand():
    assert gr.parse_group_shorthand("dihedral:6").order == 6
    assert gr.parse_group_shorthand("D6").order == 6
    assert gr.parse_group_shorthand("C2").order == 2
    assert gr.parse_group_shorthand("A:4").order == 12
    with pytest.raises(gr.GroupError):
        gr.parse_group_shorthand("nonsense")


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=30), st.data())
def test_cyclic_axioms_random(n, data):
    G = gr.cyclic(n)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    c = data.draw(st.integers(0, n - 1))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == 0
    assert G.element_order(a) == (n // gcd(n, a) if a else 1)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([6, 8, 10, 12]), st.data())
def test_dihedral_axioms_random(order, data):
    G = gr.dihedral(order)
    a = data.draw(st.integers(0, order - 1))
    b = data.draw(st.integers(0, order - 1))
    assert G.inv(G.mul(a, b)) == G.mul(G.inv(b), G.inv(a))
    assert G.conj(a, 0) == 0


# ---------------------------------------------------------------------------
# quotients, cosets, subgroup relabeling
# ---------------------------------------------------------------------------

def test_subgroup_as_group_roundtrip():
    G = gr.dihedral(12)
    lat = gr.subgroup_lattice(G)
    for s in lat.subgroups:
        H, emb = G.subgroup_as_group(s.elements)
        assert H.order == len(s)
        for a in range(H.order):
            for b in range(H.order):
                assert emb[H.mul(a, b)] == G.mul(emb[a], emb[b])


def test_quotient_group():
    G = gr.dihedral(12)
    rot = G.closure([1])
    Q, cosets, proj = G.quotient_group(rot)
    assert Q.order == 2
    for g in range(G.order):
        for h in range(G.order):
            assert proj[G.mul(g, h)] == Q.mul(proj[g], proj[h])
    with pytest.raises(gr.NotNormal):
        gr.dihedral(6).quotient_group((0, 3))


# ---------------------------------------------------------------------------
# commutant data
# ---------------------------------------------------------------------------

def _d6_decomposition():
    G = gr.dihedral(6)
    return G, gr.make_decomposition(G, G.closure([1]), (0, 3))


def test_commutant_d6():
    G, D = _d6_decomposition()
    cd = gr.commutant_data(G, D)
    C3 = G.closure([1])
    assert cd.P[(0,)] == C3
    assert cd.P[(0, 3)] == (0,)
    assert set(cd.good) == {(0,), (0, 3)}


def test_commutant_direct_product_trivial_action():
    S3 = gr.symmetric(3)
    C5 = gr.cyclic(5)
    G = gr.direct_product(S3, C5)
    # S3 x C5 with G_1 = C5 (indices where S3-part is identity), G_2 = S3-part
    G1 = tuple(range(5))
    G2 = tuple(range(0, 30, 5))
    D = gr.make_decomposition(G, G1, G2)
    cd = gr.commutant_data(G, D)
    for K in cd.subgroupsG2:
        assert cd.P[K] == G1        # everything commutes across a direct product
    assert cd.good == (G2,)


def test_commutant_trivial_K():
    G, D = _d6_decomposition()
    cd = gr.commutant_data(G, D)
    assert cd.P[(0,)] == tuple(D.normalPart.elements)


def test_good_set_closed_under_G2_conjugation():
    for G, D in _commutant_cases():
        cd = gr.commutant_data(G, D)
        goods = set(cd.good)
        for K in cd.good:
            for g in D.complement:
                assert G.conjugate_subset(g, K) in goods


def _commutant_cases():
    out = [_d6_decomposition()]
    D10 = gr.dihedral(10)
    out.append((D10, gr.make_decomposition(D10, D10.closure([1]), (0, 5))))
    A4 = gr.alternating(4)
    latA = gr.subgroup_lattice(A4)
    v4 = next(s.elements for s in latA.subgroups
              if len(s) == 4)
    c3 = next(s.elements for s in latA.subgroups
              if len(s) == 3)
    out.append((A4, gr.make_decomposition(A4, v4, c3)))
    S3, C5 = gr.symmetric(3), gr.cyclic(5)
    P = gr.direct_product(S3, C5)
    out.append((P, gr.make_decomposition(P, tuple(range(5)),
                                         tuple(range(0, 30, 5)))))
    return out


@pytest.mark.parametrize("case", range(4))
def test_complete_commutation_criterion(case):
    # gKg^-1 inside G_2  iff  g commutes with K elementwise, for g in G_1
    G, D = _commutant_cases()[case]
    cd = gr.commutant_data(G, D)
    g2 = set(D.complement.elements)
    for K in cd.subgroupsG2:
        PK = set(cd.P[K])
        for g in D.normalPart:
            moved_in = all(G.conj(g, k) in g2 for k in K)
            assert moved_in == (g in PK)


def test_normalizer_action_permutes_PS():
    # conjugation by h in N_{G_2}(K) permutes the commutant pieces
    G, D = _d6_decomposition()
    cd = gr.commutant_data(G, D)
    for K in cd.good:
        Ps, table = cd.divide_data(K)
        nzK = [h for h in D.complement if G.conjugate_subset(h, K) == K]
        all_PS = {ps for ps, _ in table.values()}
        for h in nzK:
            for PS in all_PS:
                assert G.conjugate_subset(h, PS) in all_PS


def test_divide_data_d6():
    G, D = _d6_decomposition()
    cd = gr.commutant_data(G, D)
    Ps, table = cd.divide_data((0,))
    # P_{1} = C_3 = G_1; the only proper good subgroup of G_1 side is {1}
    assert Ps == ((0,),)
    assert table[()] == (tuple(G.closure([1])), (0,))
    assert table[(0,)] == ((0,), (0, 3))


def test_bad_decomposition_rejected():
    G = gr.dihedral(6)
    with pytest.raises(gr.BadDecomposition):
        gr.make_decomposition(G, (0, 3), G.closure([1]))  # (0,3) not normal
    with pytest.raises(gr.BadDecomposition):
        gr.make_decomposition(G, G.closure([1]), (0, 1))  # overlapping


# ---------------------------------------------------------------------------
# Schur–Zassenhaus
# ---------------------------------------------------------------------------

def test_sz_dihedral6():
    G = gr.dihedral(6)
    rep = gr.schur_zassenhaus(G, G.closure([1]))
    assert len(rep.complements) == 3
    assert all(len(c) == 2 for c in rep.complements)
    assert rep.allConjugate is True


def test_sz_cyclic6():
    G = gr.cyclic(6)
    rep = gr.schur_zassenhaus(G, G.closure([2]))
    assert len(rep.complements) == 1
    assert rep.allConjugate is True


def test_sz_a4():
    G = gr.alternating(4)
    lat = gr.subgroup_lattice(G)
    v4 = next(s.elements for s in lat.subgroups if len(s) == 4)
    rep = gr.schur_zassenhaus(G, v4)
    assert len(rep.complements) == 4
    assert rep.allConjugate is True


def test_sz_errors_and_nonstrict():
    G = gr.dihedral(6)
    with pytest.raises(gr.NotNormal):
        gr.schur_zassenhaus(G, (0, 3))
    C4 = gr.cyclic(4)
    with pytest.raises(gr.NotCoprime):
        gr.schur_zassenhaus(C4, C4.closure([2]))
    rep = gr.schur_zassenhaus(C4, C4.closure([2]), strict=False)
    assert rep.allConjugate is None
    assert rep.complements == ()   # C_4 has no complement to its C_2

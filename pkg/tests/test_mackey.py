"""Mackey functor tests: A_G, Z-bar, family pieces, box products."""

from fractions import Fraction

import pytest

from equisplit import burnside as br
from equisplit import groups as gr
from equisplit import mackey as mk
from equisplit.intlin import AbelianStructure, Mat


def lat(G):
    return gr.subgroup_lattice(G)


def d6():
    return gr.dihedral(6)


def d10():
    return gr.dihedral(10)


# independent count of L-conjugacy classes of subgroups of L
def oracle_level_classes(G, lattice, L_elements):
    inside = [s.elements for s in lattice.subgroups
              if set(s.elements) <= set(L_elements)]
    classes = []
    seen = set()
    for s in inside:
        if s in seen:
            continue
        orbit = {G.conjugate_subset(g, s) for g in L_elements}
        seen |= orbit
        classes.append(orbit)
    return len(classes)


def check_towers(M):
    """res/tr functoriality along all towers, conj identities and cocycle."""
    lattice = M.lattice
    n = len(lattice.subgroups)
    for H in range(n):
        below = lattice.subgroups_of(H)
        for K in below:
            for L in lattice.subgroups_of(K):
                if not (L != K != H):
                    continue
                assert M.res(K, L).mul(M.res(H, K)) == M.res(H, L)
                assert M.tr(K, H).mul(M.tr(L, K)) == M.tr(L, H)
    G = lattice.group
    for L in range(n):
        ident = Mat.identity(M.level(L).ngens)
        for g in lattice.subgroups[L].elements:
            tgt, mat = M.conj(g, L)
            assert tgt == L
            assert mat == ident, f"conj by own element not identity at {L}"
    for g in range(G.order):
        for h in range(G.order):
            for L in range(n):
                t1, m1 = M.conj(h, L)
                t2, m2 = M.conj(g, t1)
                t3, m3 = M.conj(G.mul(g, h), L)
                assert t2 == t3
                assert m2.mul(m1) == m3


# ---------------------------------------------------------------------------
# A_G
# ---------------------------------------------------------------------------


def test_ag_level_ranks_d6():
    G = d6()
    lattice = lat(G)
    A = mk.burnside_mackey(lattice)
    by_order = {}
    for i, s in enumerate(lattice.subgroups):
        by_order.setdefault(len(s.elements), []).append(i)
    assert A.level(by_order[6][0]).rank == 4
    assert A.level(by_order[3][0]).rank == 2
    assert A.level(by_order[1][0]).rank == 1
    for i in by_order[2]:
        assert A.level(i).rank == 2
    # compare every level against the independent class count
    for i, s in enumerate(lattice.subgroups):
        assert A.level(i).rank == oracle_level_classes(G, lattice, s.elements)


def test_ag_trivial_group_is_constant_z():
    G = gr.cyclic(1)
    A = mk.burnside_mackey(lat(G))
    assert len(A.levels) == 1
    assert A.level(0).rank == 1 and A.level(0).torsion == ()


def test_ag_transfer_matrix_frozen():
    # T_{C_3}^{D_6} sends {C_3/1} to {D_6/1} and {C_3/C_3} to {D_6/C_3}
    G = d6()
    lattice = lat(G)
    A = mk.burnside_mackey(lattice)
    c3 = next(i for i, s in enumerate(lattice.subgroups)
              if len(s.elements) == 3)
    top = lattice.full_group_index()
    T = A.tr(c3, top)
    assert T == Mat([[1, 0], [0, 0], [0, 1], [0, 0]])


@pytest.mark.parametrize("G", [d6(), gr.cyclic(12), d10()],
                         ids=["D6", "C12", "D10"])
def test_ag_functorial(G):
    check_towers(mk.burnside_mackey(lat(G)))


def test_ag_res_tr_composite_matches_element_ops():
    # matrix composites = the same operations done on Burnside elements
    G = d6()
    lattice = lat(G)
    A = mk.burnside_mackey(lattice)
    top = lattice.full_group_index()
    for L in range(len(lattice.subgroups)):
        lvL = br.level_data(lattice, L)
        down = A.res(top, L) if L != top else Mat.identity(4)
        for k, rep in enumerate(br.level_data(lattice, top).repElements):
            img = br.restrict(br.basis_element(lattice, top, rep), lvL.level)
            col = [img.coeffs[r] for r in lvL.repElements]
            assert [c.value for c in col] == \
                [Fraction(down.rows[i][k]) for i in range(lvL.nclasses())]


# ---------------------------------------------------------------------------
# Z-bar
# ---------------------------------------------------------------------------


def test_zbar_c2_transfer_is_times_two():
    G = gr.cyclic(2)
    Z = mk.constant_mackey(lat(G))
    assert Z.tr(0, 1) == Mat([[2]])
    assert Z.res(1, 0) == Mat([[1]])


@pytest.mark.parametrize("p", [3, 5])
def test_zbar_cp_transfer_is_times_p(p):
    G = gr.cyclic(p)
    Z = mk.constant_mackey(lat(G))
    assert Z.tr(0, 1) == Mat([[p]])


def test_zbar_d6_all_maps():
    G = d6()
    lattice = lat(G)
    Z = mk.constant_mackey(lattice)
    n = len(lattice.subgroups)
    for K in range(n):
        for L in lattice.subgroups_of(K):
            if L == K:
                continue
            index = len(lattice.subgroups[K]) // len(lattice.subgroups[L])
            assert Z.tr(L, K) == Mat([[index]])
            assert Z.res(K, L) == Mat([[1]])
    for g in range(G.order):
        for L in range(n):
            _, m = Z.conj(g, L)
            assert m == Mat([[1]])
    check_towers(Z)


# ---------------------------------------------------------------------------
# M_F and N_F
# ---------------------------------------------------------------------------


def d6_families():
    """The two proper non-trivial down-closed families of D_6, by reps."""
    G = d6()
    lattice = lat(G)
    c2 = next(s.elements for s in lattice.subgroups if len(s.elements) == 2)
    c3 = next(s.elements for s in lattice.subgroups if len(s.elements) == 3)
    f1 = [(0,), c2]        # trivial + reflections
    f2 = [(0,), c3]        # trivial + rotations
    return G, lattice, f1, f2


def test_sub_functors_f2_shape():
    G, lattice, _, f2 = d6_families()
    MF, NF = mk.sub_functors(lattice, f2, {2})
    for i, s in enumerate(lattice.subgroups):
        o = len(s.elements)
        want_n = {1: 0, 2: 1, 3: 0, 6: 2}[o]
        assert NF.level(i).rank == want_n
        assert MF.level(i).rank + want_n == \
            oracle_level_classes(G, lattice, s.elements)


def test_sub_functors_f2_frozen_basis():
    # over Z[1/2] the complement basis at the top is
    #   {G/C_2} - (1/2){G/1}   and   {G/G} - (1/2){G/C_3}
    G, lattice, _, f2 = d6_families()
    _, NF = mk.sub_functors(lattice, f2, {2})
    top = lattice.full_group_index()
    lv = br.level_data(lattice, top)
    # rebuild the basis elements the same way and pin their coefficients
    labels = NF.level(top).labels
    assert len(labels) == 2
    from equisplit.mackey import _family_reps
    members = _family_reps(lattice, f2)
    flags = [rep in members for rep in lv.repElements]
    elems = []
    for k, rep in enumerate(lv.repElements):
        if flags[k]:
            continue
        x = br.basis_element(lattice, top, rep)
        mx = br.marks_vector(x)
        trimmed = [br.LocalizedRational(0, {2}) if flags[c] else mx[c]
                   for c in range(lv.nclasses())]
        elems.append(br.from_marks(lv, trimmed))
    coeffs = [[e.coeffs[r].value for r in lv.repElements] for e in elems]
    assert coeffs == [
        [Fraction(-1, 2), 1, 0, 0],     # {G/C_2} - 1/2 {G/1}
        [0, 0, Fraction(-1, 2), 1],     # {G/G} - 1/2 {G/C_3}
    ]


def test_sub_functors_f1_matches_localized_vanishing():
    # with only 3 inverted: N(G/e) = N(G/C_2) = 0, N(G/G) has rank 2
    G, lattice, f1, _ = d6_families()
    MF, NF = mk.sub_functors(lattice, f1, {3})
    for i, s in enumerate(lattice.subgroups):
        o = len(s.elements)
        assert NF.level(i).rank == {1: 0, 2: 0, 3: 1, 6: 2}[o]
        assert NF.level(i).torsion == ()
    top = lattice.full_group_index()
    assert MF.level(top).rank == 2
    check_towers(MF)
    check_towers(NF)


def test_sub_functors_insufficient_primes():
    _, lattice, f1, f2 = d6_families()
    with pytest.raises(br.InsufficientPrimes):
        mk.sub_functors(lattice, f1, {2})     # projector needs 1/3
    with pytest.raises(br.InsufficientPrimes):
        mk.sub_functors(lattice, f2, {3})     # projector needs 1/2
    with pytest.raises(br.InsufficientPrimes):
        mk.sub_functors(lattice, f1, set())


def test_sub_functors_whole_family_gives_all_and_zero():
    G, lattice, _, _ = d6_families()
    everything = [s.elements for s in lattice.subgroups]
    MF, NF = mk.sub_functors(lattice, everything, set())
    A = mk.burnside_mackey(lattice)
    for i in range(len(lattice.subgroups)):
        assert NF.level(i).rank == 0
        assert MF.level(i).rank == A.level(i).rank
    assert NF.is_zero()
    assert not MF.is_zero()


def test_sub_functors_full_prime_set_both_families():
    G, lattice, f1, f2 = d6_families()
    for fam in (f1, f2):
        MF, NF = mk.sub_functors(lattice, fam, {2, 3})
        A = mk.burnside_mackey(lattice)
        for i in range(len(lattice.subgroups)):
            assert MF.level(i).rank + NF.level(i).rank == A.level(i).rank


def test_sub_functors_d10():
    G = d10()
    lattice = lat(G)
    c2 = next(s.elements for s in lattice.subgroups if len(s.elements) == 2)
    c5 = next(s.elements for s in lattice.subgroups if len(s.elements) == 5)
    MF, NF = mk.sub_functors(lattice, [(0,), c2], {5})
    for i, s in enumerate(lattice.subgroups):
        assert NF.level(i).rank == {1: 0, 2: 0, 5: 1, 10: 2}[len(s.elements)]
    check_towers(NF)
    MF2, NF2 = mk.sub_functors(lattice, [(0,), c5], {2})
    for i, s in enumerate(lattice.subgroups):
        assert NF2.level(i).rank == {1: 0, 2: 1, 5: 0, 10: 2}[len(s.elements)]


def test_sub_functors_m_transfer_frozen():
    # in M_{F_2} the top-level transfer from C_3 carries {C_3/1} to {G/1}
    G, lattice, _, f2 = d6_families()
    MF, _ = mk.sub_functors(lattice, f2, {2})
    c3 = next(i for i, s in enumerate(lattice.subgroups)
              if len(s.elements) == 3)
    top = lattice.full_group_index()
    # level C_3 basis: {C_3/1}, {C_3/C_3}; top basis: {G/1}, {G/C_3}
    assert MF.tr(c3, top) == Mat([[1, 0], [0, 1]])
    # {G/1} restricts to two free C_3-orbits, {G/C_3} to two fixed cosets
    assert MF.res(top, c3) == Mat([[2, 0], [0, 2]])


# ---------------------------------------------------------------------------
# box products
# ---------------------------------------------------------------------------


def zbar(G):
    return mk.constant_mackey(gr.subgroup_lattice(G))


@pytest.mark.parametrize("p", [2, 3])
def test_box_zbar_zbar_cp(p):
    G = gr.cyclic(p)
    Z = zbar(G)
    B = mk.box_product(Z, Z)
    assert B.structure_at(0) == AbelianStructure(1, ())
    assert B.structure_at(1) == AbelianStructure(1, ())
    # composites are basis-independent: R T = p on the bottom, T R = p on top
    assert B.res(1, 0).mul(B.tr(0, 1)) == Mat([[p]])
    assert B.tr(0, 1).mul(B.res(1, 0)) == Mat([[p]])
    assert abs(B.res(1, 0).rows[0][0]) == 1
    assert abs(B.tr(0, 1).rows[0][0]) == p


def test_box_zbar_zbar_d6_is_zbar():
    G = d6()
    Z = zbar(G)
    B = mk.box_product(Z, Z)
    lattice = B.lattice
    for i in range(len(lattice.subgroups)):
        assert B.structure_at(i) == AbelianStructure(1, ())
    for K in range(len(lattice.subgroups)):
        for L in lattice.subgroups_of(K):
            if L == K:
                continue
            index = len(lattice.subgroups[K]) // len(lattice.subgroups[L])
            assert abs(B.res(K, L).rows[0][0]) == 1
            assert abs(B.tr(L, K).rows[0][0]) == index
    check_towers(B)


def test_box_unit_property():
    # A_G is the unit: A_G box Z-bar has the shape of Z-bar
    for G in (gr.cyclic(2), d6()):
        lattice = gr.subgroup_lattice(G)
        A = mk.burnside_mackey(lattice)
        Z = mk.constant_mackey(lattice)
        B = mk.box_product(A, Z)
        for i in range(len(lattice.subgroups)):
            assert B.structure_at(i) == AbelianStructure(1, ())
        for K in range(len(lattice.subgroups)):
            for L in lattice.subgroups_of(K):
                if L == K:
                    continue
                index = len(lattice.subgroups[K]) // len(lattice.subgroups[L])
                assert B.res(K, L).mul(B.tr(L, K)) == Mat([[index]])


@pytest.mark.parametrize("p", [3, 5])
def test_box_zbar_nf_vanishes(p):
    """Z-bar box N_F = 0 over Z[1/p] (reflection family) and Z[1/2]
    (rotation family), for the dihedral groups of order 2p."""
    G = gr.dihedral(2 * p)
    lattice = gr.subgroup_lattice(G)
    c2 = next(s.elements for s in lattice.subgroups if len(s.elements) == 2)
    cp = next(s.elements for s in lattice.subgroups if len(s.elements) == p)
    Z = mk.constant_mackey(lattice)

    _, N1 = mk.sub_functors(lattice, [(0,), c2], {p})
    B1 = mk.box_product(Z, N1)
    assert B1.is_zero()

    _, N2 = mk.sub_functors(lattice, [(0,), cp], {2})
    B2 = mk.box_product(Z, N2)
    assert B2.is_zero()

    # symmetry gives the same answer with the factors swapped
    assert mk.box_product(N1, Z).is_zero()


def test_box_with_zero_functor():
    G = d6()
    lattice = gr.subgroup_lattice(G)
    Z = mk.constant_mackey(lattice)
    O = mk.zero_functor(lattice)
    assert mk.box_product(Z, O).is_zero()
    assert mk.box_product(O, Z).is_zero()


def test_box_symmetric_structures():
    G = gr.cyclic(4)
    lattice = gr.subgroup_lattice(G)
    A = mk.burnside_mackey(lattice)
    Z = mk.constant_mackey(lattice)
    left = mk.box_product(A, Z)
    right = mk.box_product(Z, A)
    for i in range(len(lattice.subgroups)):
        assert left.structure_at(i) == right.structure_at(i)


def test_box_result_is_functorial():
    G = d6()
    Z = zbar(G)
    check_towers(mk.box_product(Z, Z))


def test_zero_functor_is_zero():
    lattice = lat(d6())
    assert mk.zero_functor(lattice).is_zero()
    assert not mk.constant_mackey(lattice).is_zero()

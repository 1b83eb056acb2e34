"""G-CW complexes: builders, Bredon homology, quotient certificates."""

import pytest
from hypothesis import given, settings, strategies as st

from equisplit import families as fam
from equisplit import gcw
from equisplit import groups as gr
from equisplit import mackey as mk
from equisplit.intlin import AbelianStructure, Mat


def S(rank, *torsion):
    return AbelianStructure(rank, tuple(torsion))


Z = S(1)
NUL = S(0)


def d6():
    return gr.dihedral(6)


def same_result(a, b):
    """Degreewise equality, missing degrees counting as zero."""
    top = max(len(a), len(b))
    return all(a.at(d) == b.at(d) for d in range(top))


def trivial_circle(G):
    # one vertex, one loop, every group element acting as the identity
    return gcw.GCWComplex(
        G, {0: ["v"], 1: ["e"]}, {1: Mat([[0]], n=1)},
        {g: {0: [(0, 1)], 1: [(0, 1)]} for g in range(G.order)},
        based=True, basepoint="v")


def mixed_coset_complex(G):
    """D_6 cosets of a reflection as vertices, a free orbit of edges."""
    cos = [(0, 3), (1, 4), (2, 5)]

    def cos_of(x):
        return next(j for j, c in enumerate(cos) if x in c)

    cells = {0: ["v0", "v1", "v2"],
             1: ["e0", "e1", "e2", "e3", "e4", "e5"]}
    action = {}
    for g in range(6):
        action[g] = {0: [(cos_of(G.mul(g, cos[j][0])), 1) for j in range(3)],
                     1: [(G.mul(g, k), 1) for k in range(6)]}
    rows = [[0] * 6 for _ in range(3)]
    for k in range(6):
        rows[cos_of(G.mul(k, 1))][k] += 1
        rows[cos_of(k)][k] -= 1
    return gcw.GCWComplex(G, cells, {1: Mat(rows, n=6)}, action)


def d6_pool():
    G = d6()
    sig = gcw.sphere_sigma_d2p(3, group=G)
    gam = gcw.sphere_gamma_d2p(3, group=G)
    return [
        gcw.point(G),
        gcw.orbit_cells(G, (0,)),
        gcw.orbit_cells(G, (0, 3)),
        gcw.orbit_cells(G, (0, 1, 2)),
        sig,
        gam,
        gcw.join(gcw.point(G), sig),
        gcw.join(sig, sig),
        gcw.smash(sig, sig),
        gcw.eg_skeleton(G, 2),
    ]


# -- builders and plain homology --------------------------------------------


def test_sigma_sphere_is_a_circle():
    for p in (3, 5):
        X = gcw.sphere_sigma_d2p(p)
        assert X.based and X.ncells(0) == 2 and X.ncells(1) == 2
        assert tuple(gcw.underlying_homology(X)) == (Z, Z)


def test_gamma_sphere_is_a_two_sphere():
    for p in (3, 5):
        X = gcw.sphere_gamma_d2p(p)
        assert [X.ncells(d) for d in X.dims()] == [2, 2 * p, 2 * p]
        assert tuple(gcw.underlying_homology(X)) == (Z, NUL, Z)


def test_lambda_spheres():
    for p in (3, 5):
        for n in (1, 2, 3):
            X = gcw.sphere_lambda_cp(n, p)
            H = gcw.underlying_homology(X)
            assert H.at(0) == Z and H.at(2 * n) == Z
            assert all(H.at(d).is_zero() for d in range(1, 2 * n))


def test_zero_sphere_reduced_homology():
    X = gcw.zero_sphere(d6())
    assert tuple(gcw.underlying_homology(X, reduced=True)) == (Z,)


def test_sigma_fixed_points():
    # rotations act trivially, so the C_p-fixed part is the whole circle;
    # a reflection leaves only the two poles
    X = gcw.sphere_sigma_d2p(3, group=d6())
    whole = gcw.fixed_subcomplex(X, (0, 1, 2))
    assert tuple(gcw.underlying_homology(whole)) == (Z, Z)
    poles = gcw.fixed_subcomplex(X, (0, 3))
    assert poles.top == 0 and poles.ncells(0) == 2


def test_gamma_fixed_points():
    X = gcw.sphere_gamma_d2p(3, group=d6())
    poles = gcw.fixed_subcomplex(X, (0, 1, 2))
    assert poles.top == 0 and poles.ncells(0) == 2
    circle = gcw.fixed_subcomplex(X, (0, 3))
    assert tuple(gcw.underlying_homology(circle)) == (Z, Z)


SPHERES = [("s0", 0), ("sigma", 1), ("gamma", 2)]


def _sphere(kind, G):
    if kind == "s0":
        return gcw.zero_sphere(G)
    if kind == "sigma":
        return gcw.sphere_sigma_d2p(3, group=G)
    return gcw.sphere_gamma_d2p(3, group=G)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SPHERES), st.sampled_from(SPHERES))
def test_join_of_spheres_is_a_sphere(a, b):
    G = d6()
    ka, da = a
    kb, db = b
    J = gcw.join(_sphere(ka, G), _sphere(kb, G))
    H = gcw.underlying_homology(J)
    n = da + db + 1
    assert H.at(0) == Z and H.at(n) == Z
    assert all(H.at(d).is_zero() for d in range(1, n))


def test_join_with_a_point_is_contractible():
    G = d6()
    for X in (gcw.sphere_sigma_d2p(3, group=G),
              gcw.sphere_gamma_d2p(3, group=G)):
        H = gcw.underlying_homology(gcw.join(gcw.point(G), X))
        assert H.at(0) == Z
        assert all(H.at(d).is_zero() for d in range(1, len(H)))


def test_smash_of_spheres():
    G = d6()
    sig = gcw.sphere_sigma_d2p(3, group=G)
    gam = gcw.sphere_gamma_d2p(3, group=G)
    assert tuple(gcw.underlying_homology(gcw.smash(sig, sig),
                                         reduced=True)) == (NUL, NUL, Z)
    H = gcw.underlying_homology(gcw.smash(sig, gam), reduced=True)
    assert H.at(3) == Z and all(H.at(d).is_zero() for d in range(3))


def test_smash_requires_basepoints():
    G = d6()
    sig = gcw.sphere_sigma_d2p(3, group=G)
    with pytest.raises(gcw.NotBased):
        gcw.smash(gcw.point(G), sig)


def test_mixed_group_input_rejected():
    sig6 = gcw.sphere_sigma_d2p(3)
    sig10 = gcw.sphere_sigma_d2p(5)
    with pytest.raises(gcw.IncompatibleGroups):
        gcw.join(sig6, sig10)
    lat10 = gr.subgroup_lattice(gr.dihedral(10))
    with pytest.raises(gcw.IncompatibleGroups):
        gcw.bredon_homology(sig6, mk.burnside_mackey(lat10))


# -- Bredon homology against the fixed-point formula ------------------------


def test_point_has_coefficient_homology():
    G = d6()
    lat = gr.subgroup_lattice(G)
    A = mk.burnside_mackey(lat)
    P = gcw.point(G)
    for idx, sub in enumerate(lat.subgroups):
        want = A.level(idx).ngens
        H = gcw.bredon_homology(P, A, level=sub.elements)
        assert H.at(0) == S(want) and len(H) == 1
        assert gcw.bredon_cohomology(P, A, level=sub.elements).at(0) == S(want)


def test_empty_complex_has_no_homology():
    G = d6()
    A = mk.burnside_mackey(gr.subgroup_lattice(G))
    E = gcw.empty_complex(G)
    assert gcw.bredon_homology(E, A).is_zero()
    assert gcw.burnside_homology_formula(E).is_zero()


def test_bredon_matches_marks_formula_on_d6():
    """The two sides of the fixed-point decomposition, all levels."""
    G = d6()
    lat = gr.subgroup_lattice(G)
    A = mk.burnside_mackey(lat)
    for X in d6_pool():
        for sub in lat.subgroups:
            lhs = gcw.bredon_homology(X, A, level=sub.elements)
            rhs = gcw.burnside_homology_formula(X, level=sub.elements)
            assert same_result(lhs, rhs), (X, sub.elements)


def test_bredon_matches_marks_formula_on_c5():
    G = gr.cyclic(5)
    lat = gr.subgroup_lattice(G)
    A = mk.burnside_mackey(lat)
    pool = [gcw.point(G), gcw.orbit_cells(G, (0,)),
            gcw.sphere_lambda_cp(1, 5, group=G),
            gcw.sphere_lambda_cp(2, 5, group=G)]
    for X in pool:
        for sub in lat.subgroups:
            lhs = gcw.bredon_homology(X, A, level=sub.elements)
            rhs = gcw.burnside_homology_formula(X, level=sub.elements)
            assert same_result(lhs, rhs)


def test_lambda_sphere_bredon_pattern():
    # even degrees below the top carry one class of order p each, the top
    # is infinite cyclic, odd degrees vanish
    for p in (3, 5):
        lat = gr.subgroup_lattice(gr.cyclic(p))
        const = mk.constant_mackey(lat)
        for n in (1, 2, 3):
            X = gcw.sphere_lambda_cp(n, p)
            H = gcw.bredon_homology(X, const, reduced=True)
            for j in range(n):
                assert H.at(2 * j) == S(0, p)
            assert H.at(2 * n) == Z
            assert all(H.at(2 * j + 1).is_zero() for j in range(n))


def test_lambda_sphere_bredon_cohomology_top():
    lat = gr.subgroup_lattice(gr.cyclic(3))
    const = mk.constant_mackey(lat)
    X = gcw.sphere_lambda_cp(1, 3)
    H = gcw.bredon_cohomology(X, const, reduced=True)
    assert tuple(H) == (NUL, NUL, Z)


def test_sigma_c2_bredon_value():
    # the one-cell circle over C_2: a single exotic class of order 2
    G = gr.cyclic(2)
    lat = gr.subgroup_lattice(G)
    X = gcw.sphere_sigma_d2p(1, group=G)
    H = gcw.bredon_homology(X, mk.constant_mackey(lat), reduced=True)
    assert tuple(H) == (S(0, 2), NUL)


# -- quotients, residual symmetry, induced maps -----------------------------


def test_lambda_quotient_and_residual_reflection():
    X = gcw.sphere_lambda_cp(1, 3)
    Q = gcw.orbit_complex(X, (0, 1, 2))
    assert [Q.ncells(d) for d in Q.dims()] == [2, 1, 1]
    assert tuple(gcw.underlying_homology(Q, reduced=True)) == (NUL, NUL, Z)
    assert "tau" in Q.companions
    maps = gcw.induced_map_on_homology(Q, Q.companions["tau"])
    assert maps[0].is_identity()
    assert maps[2].is_minus_identity()


def test_residual_reflection_sign_pattern():
    """Sign of the reflection on each surviving degree: minus exactly in
    degrees 2, 3 mod 4."""
    for p in (3, 5):
        for n in (1, 2, 3):
            X = gcw.sphere_lambda_cp(n, p)
            Q = gcw.orbit_complex(X, tuple(range(p)))
            tau = Q.companions["tau"]
            maps = gcw.induced_map_on_homology(Q, tau, reduced=True)
            for t, m in maps.items():
                if m.target.is_zero():
                    continue
                if t % 4 in (2, 3):
                    assert m.is_minus_identity(), (p, n, t)
                else:
                    assert m.is_identity(), (p, n, t)


def test_tau_companion_is_an_involution():
    X = gcw.sphere_lambda_cp(2, 3)
    tau = X.companions["tau"]
    square = tau.compose(tau)
    for d in X.dims():
        assert square.matrix(d) == Mat.identity(X.ncells(d))


def test_identity_map_induces_identity():
    X = gcw.sphere_gamma_d2p(3)
    for reduced in (False, True):
        maps = gcw.induced_map_on_homology(X, gcw.identity_map(X),
                                           reduced=reduced)
        for m in maps.values():
            assert m.is_identity()


def test_restrict_and_induce():
    G = d6()
    gam = gcw.sphere_gamma_d2p(3, group=G)
    R = gcw.restrict_to_subgroup(gam, (0, 1, 2))
    assert R.group.order == 3
    assert tuple(gcw.underlying_homology(R)) == (Z, NUL, Z)
    # inducing a point up from a reflection subgroup gives its coset orbit
    ind = gcw.induce(G, (0, 3), gcw.point(gr.cyclic(2)))
    orb = gcw.orbit_cells(G, (0, 3))
    assert ind.ncells(0) == 3
    lat = gr.subgroup_lattice(G)
    for sub in lat.subgroups:
        assert same_result(
            gcw.burnside_homology_formula(ind, level=sub.elements),
            gcw.burnside_homology_formula(orb, level=sub.elements))


# -- classifying-space skeleta ----------------------------------------------


def test_eg_skeleton_cyclic_quotients():
    for q, want in ((2, S(0, 2)), (3, S(0, 3))):
        G = gr.cyclic(q)
        K = gcw.eg_skeleton(G, 6)
        Q = gcw.orbit_complex(K, tuple(range(q)))
        H = gcw.underlying_homology(Q)
        assert H.at(0) == Z
        for d in (1, 3, 5):
            assert H.at(d) == want
        for d in (2, 4, 6):
            assert H.at(d).is_zero()


def test_eg_skeleton_is_free_and_contractible_below_top():
    for G in (gr.cyclic(2), gr.cyclic(3), gr.symmetric(3)):
        K = gcw.eg_skeleton(G, 4)
        for d in K.dims():
            for i in range(K.ncells(d)):
                assert K.stabilizer(d, i) == (0,)
        H = gcw.underlying_homology(K)
        assert H.at(0) == Z
        for d in range(1, 4):
            assert H.at(d).is_zero(), (G.label, d)


def test_eg_quotient_torsion_annihilated_by_group_order():
    for G in (gr.cyclic(2), gr.cyclic(3), gr.symmetric(3)):
        K = gcw.eg_skeleton(G, 6)
        Q = gcw.orbit_complex(K, tuple(range(G.order)))
        H = gcw.underlying_homology(Q)
        for d in range(1, 6):
            s = H.at(d)
            assert s.rank == 0, (G.label, d)
            assert all(G.order % t == 0 for t in s.torsion), (G.label, d)


def test_symmetric_three_group_homology():
    K = gcw.eg_skeleton(gr.symmetric(3), 6)
    Q = gcw.orbit_complex(K, tuple(range(6)))
    H = gcw.underlying_homology(Q)
    assert [H.at(d) for d in range(6)] == [Z, S(0, 2), NUL, S(0, 6), NUL,
                                           S(0, 2)]


# -- out-of-family homology -------------------------------------------------


def test_out_of_family_gamma_versus_zero_sphere():
    # with the reflection family, the gamma sphere carries the same
    # out-of-family homology as S^0 at every level
    G = d6()
    lat = gr.subgroup_lattice(G)
    F1 = fam.family_closure(lat, [(0, 3)])
    gam = gcw.sphere_gamma_d2p(3, group=G)
    zero = gcw.zero_sphere(G)
    for sub in lat.subgroups:
        a = gcw.n_f_homology(gam, F1, level=sub.elements, invert=(3,),
                             reduced=True)
        b = gcw.n_f_homology(zero, F1, level=sub.elements, invert=(3,),
                             reduced=True)
        assert same_result(a, b), sub.elements


def test_out_of_family_all_subgroups_vanishes():
    G = d6()
    lat = gr.subgroup_lattice(G)
    Fall = fam.family_closure(lat, [tuple(range(6))])
    gam = gcw.sphere_gamma_d2p(3, group=G)
    assert gcw.n_f_homology(gam, Fall).is_zero()


def test_out_of_family_gamma_versus_circle():
    """With the rotation family the gamma sphere looks like a circle at
    every proper level; at the reflection level this is the suspension of
    what the sign sphere carries."""
    G = d6()
    lat = gr.subgroup_lattice(G)
    F2 = fam.family_closure(lat, [(0, 1, 2)])
    gam = gcw.sphere_gamma_d2p(3, group=G)
    circ = trivial_circle(G)
    for level in ((0,), (0, 3), (0, 1, 2)):
        a = gcw.n_f_homology(gam, F2, level=level, invert=(2,), reduced=True)
        b = gcw.n_f_homology(circ, F2, level=level, invert=(2,), reduced=True)
        assert same_result(a, b), level
    sig = gcw.sphere_sigma_d2p(3, group=G)
    at_c2 = gcw.n_f_homology(gam, F2, level=(0, 3), reduced=True)
    shifted = gcw.n_f_homology(sig, F2, level=(0, 3), reduced=True)
    assert all(at_c2.at(d + 1) == shifted.at(d) for d in range(len(shifted)))


# -- orbit-map certificates -------------------------------------------------


def test_orbit_map_certificate_for_gamma():
    G = d6()
    D = gr.make_decomposition(G, (0, 1, 2), (0, 3))
    rep = gcw.orbit_map_checks(gcw.sphere_gamma_d2p(3, group=G), D)
    assert rep.mode == "prime-free" and rep.ok()
    assert rep.torsionPrimes == (3,)
    c2 = rep.level_for((0, 3))
    assert c2.isoAtLevel is True
    triv = rep.level_for((0,))
    assert triv.commutantOrder == 3
    for s in triv.cokernel:
        assert s.rank == 0 and all(t % 3 == 0 for t in s.torsion)


def test_orbit_map_certificate_mixed_cells():
    G = d6()
    D = gr.make_decomposition(G, (0, 1, 2), (0, 3))
    rep = gcw.orbit_map_checks(mixed_coset_complex(G), D)
    assert rep.ok()
    triv = rep.level_for((0,))
    assert [(s.rank, s.torsion) for s in triv.cokernel] == [(0, ()),
                                                            (0, (3,))]


def test_orbit_map_certificate_trivial_normal_action():
    G = d6()
    D = gr.make_decomposition(G, (0, 1, 2), (0, 3))
    rep = gcw.orbit_map_checks(gcw.sphere_sigma_d2p(3, group=G), D)
    assert rep.ok()
    for lv in rep.levels:
        assert all(s.is_zero() for s in lv.cokernel)
        assert lv.isoAtLevel in (True, None)


def test_orbit_map_rejects_intermediate_isotropy():
    D8 = gr.dihedral(8)
    D = gr.make_decomposition(D8, (0, 1, 2, 3), (0, 4))
    X = gcw.orbit_cells(D8, (0, 2))
    with pytest.raises(gcw.HypothesisViolated):
        gcw.orbit_map_checks(X, D)


def test_orbit_map_rejects_foreign_decomposition():
    G = d6()
    other = gr.make_decomposition(gr.dihedral(10), (0, 1, 2, 3, 4), (0, 5))
    with pytest.raises(gcw.IncompatibleGroups):
        gcw.orbit_map_checks(gcw.sphere_gamma_d2p(3, group=G), other)


# -- validation and round trips ---------------------------------------------


def test_orientation_reversal_blocks_bredon():
    G = gr.cyclic(2)
    cells = {0: ["n", "s"], 1: ["e", "f"]}
    bnd = {1: Mat([[-1, -1], [1, 1]], n=2)}
    action = {0: {0: [(0, 1), (1, 1)], 1: [(0, 1), (1, 1)]},
              1: {0: [(1, 1), (0, 1)], 1: [(0, -1), (1, -1)]}}
    X = gcw.GCWComplex(G, cells, bnd, action)
    assert not X.genuine
    A = mk.burnside_mackey(gr.subgroup_lattice(G))
    with pytest.raises(gcw.NonGenuineAction):
        gcw.bredon_homology(X, A)
    with pytest.raises(gcw.NonGenuineAction):
        gcw.burnside_homology_formula(X)


def test_open_isotropy_blocks_bredon():
    # a fixed edge whose endpoints are swapped: stabilizers do not close up
    G = gr.cyclic(2)
    cells = {0: ["a", "b"], 1: ["e"]}
    bnd = {1: Mat([[1], [1]], n=1)}
    action = {0: {0: [(0, 1), (1, 1)], 1: [(0, 1)]},
              1: {0: [(1, 1), (0, 1)], 1: [(0, 1)]}}
    X = gcw.GCWComplex(G, cells, bnd, action)
    assert X.genuine and not X.isotropyClosed
    with pytest.raises(gcw.NonGenuineAction):
        gcw.bredon_homology(X, mk.constant_mackey(gr.subgroup_lattice(G)))


def test_bad_chain_map_rejected():
    X = gcw.sphere_sigma_d2p(3)
    mats = {d: Mat.identity(X.ncells(d)) for d in X.dims()}
    mats[1] = mats[1].scale(2)
    with pytest.raises(gcw.NotChainMap):
        gcw.CellularMap(X, X, mats)


def test_json_round_trip():
    for X in (gcw.sphere_sigma_d2p(3), gcw.sphere_lambda_cp(2, 3)):
        Y = gcw.from_json(X.to_json())
        assert Y.cells == X.cells
        assert Y.based == X.based and Y.basepoint == X.basepoint
        for d in X.dims():
            for g in range(X.group.order):
                for i in range(X.ncells(d)):
                    assert Y.act(g, d, i) == X.act(g, d, i)
        assert same_result(gcw.underlying_homology(Y),
                           gcw.underlying_homology(X))

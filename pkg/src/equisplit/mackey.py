"""Mackey functors at the level of finitely generated abelian groups.

A Mackey functor here is stored per *subgroup* (not per conjugacy class):
every subgroup L gets a finitely generated abelian group (free generators
after the torsion ones), every nested pair gets integer restriction and
transfer matrices, and every group element gets a conjugation isomorphism.
The redundancy is deliberate — it makes the box-product coend a plain
integer-matrix quotient.

Functors provided: the Burnside functor A_G (levels A(L)), the constant
functor Z-bar (levels Z, restrictions identity, transfers multiplication by
index — the convention forced by the computation Tr_e^{C_p} = p), the
family sub/quotient pieces M_F and N_F, and box products M box N computed
from the coend presentation

    (M box N)(G/H) = ( sum_{K <= H} M(G/K) (x) N(G/K) ) / ~

with Frobenius reciprocity both ways, conjugation by H, and tensor torsion
as relations, reduced by Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import burnside as br
from .groups import Subgroup
from .intlin import AbelianStructure, FPAbelian, Mat, prime_factors


class MackeyError(Exception):
    pass


@dataclass(frozen=True)
class MackeyLevel:
    """One level M(G/L): Z^rank plus cyclic torsion, with generator labels.

    Generator order: torsion generators first (orders in ``torsion``), then
    ``rank`` free generators.  Elements are integer coordinate vectors of
    length ``ngens``.
    """
    rank: int
    torsion: tuple
    labels: tuple

    @property
    def ngens(self):
        return self.rank + len(self.torsion)

    @property
    def structure(self):
        return AbelianStructure(rank=self.rank, torsion=self.torsion)

    def reduce_vector(self, v):
        out = list(v)
        for i, t in enumerate(self.torsion):
            out[i] %= t
        return tuple(out)


class MackeyFunctor:
    """Levels, restrictions, transfers and conjugations over a fixed lattice.

    ``res[(K, L)]`` maps M(G/K) -> M(G/L) for L <= K; ``tr[(L, K)]`` goes up;
    ``conj[(g, L)]`` maps M(G/L) -> M(G/gLg^-1).  Indices are lattice
    subgroup indices; matrices act on generator coordinate columns.
    """

    def __init__(self, lattice, levels, res, tr, conj, allowed_primes=(),
                 label="M"):
        self.lattice = lattice
        self.group = lattice.group
        self.levels = dict(levels)
        self._res = dict(res)
        self._tr = dict(tr)
        self._conj = dict(conj)
        self.allowedPrimes = frozenset(int(p) for p in allowed_primes)
        self.label = label

    # -- lookups ------------------------------------------------------------

    def level(self, idx):
        return self.levels[idx]

    def res(self, K, L):
        if K == L:
            return Mat.identity(self.levels[K].ngens)
        try:
            return self._res[(K, L)]
        except KeyError:
            raise MackeyError(f"no restriction {K} -> {L} recorded") from None

    def tr(self, L, K):
        if K == L:
            return Mat.identity(self.levels[K].ngens)
        try:
            return self._tr[(L, K)]
        except KeyError:
            raise MackeyError(f"no transfer {L} -> {K} recorded") from None

    def conj(self, g, L):
        """Returns (target level index, matrix)."""
        tgt = self.lattice.conj_subgroup(g, L)
        if g == 0:
            return tgt, Mat.identity(self.levels[L].ngens)
        return tgt, self._conj[(g, L)]

    def structure_at(self, idx):
        return self.levels[idx].structure

    def is_zero(self):
        return all(lv.structure.is_zero() for lv in self.levels.values())

    def level_structures(self):
        return {idx: lv.structure for idx, lv in self.levels.items()}

    def to_json(self):
        lat = self.lattice
        return {
            "label": self.label,
            "allowedPrimes": sorted(self.allowedPrimes),
            "levels": [
                {"subgroup": list(lat.subgroups[i].elements),
                 "rank": lv.rank,
                 "torsion": list(lv.torsion),
                 "labels": list(map(str, lv.labels))}
                for i, lv in sorted(self.levels.items())],
        }

    def __repr__(self):
        return f"MackeyFunctor({self.label!r}, {len(self.levels)} levels)"


# ---------------------------------------------------------------------------
# A_G and Z-bar
# ---------------------------------------------------------------------------


def burnside_mackey(lattice, allowed_primes=()):
    """The Burnside-ring Mackey functor: level L is A(L) (tensor Z[S^-1])."""
    levels = {}
    lvdata = {}
    for i, sub in enumerate(lattice.subgroups):
        lv = br.level_data(lattice, sub)
        lvdata[i] = lv
        labels = tuple(f"[{_short(rep)}]" for rep in lv.repElements)
        levels[i] = MackeyLevel(rank=lv.nclasses(), torsion=(), labels=labels)

    def as_matrix(images, target_lv):
        cols = []
        for img in images:
            vec = [img.coeffs[rep] for rep in target_lv.repElements]
            col = []
            for v in vec:
                if v.denominator != 1:
                    raise MackeyError("non-integral structure coefficient")
                col.append(v.numerator)
            cols.append(col)
        return (Mat.from_cols(cols, m=target_lv.nclasses()) if cols
                else Mat.zero(target_lv.nclasses(), 0))

    res, tr, conj = {}, {}, {}
    n = len(lattice.subgroups)
    for K in range(n):
        for L in lattice.subgroups_of(K):
            if L == K:
                continue
            lvK, lvL = lvdata[K], lvdata[L]
            res[(K, L)] = as_matrix(
                [br.restrict(br.basis_element(lattice, lvK.level, rep),
                             lvL.level) for rep in lvK.repElements], lvL)
            tr[(L, K)] = as_matrix(
                [br.transfer(br.basis_element(lattice, lvL.level, rep),
                             lvK.level) for rep in lvL.repElements], lvK)
    for g in range(1, lattice.group.order):
        for L in range(n):
            tgt = lattice.conj_subgroup(g, L)
            conj[(g, L)] = as_matrix(
                [br.conjugate(br.basis_element(lattice, lvdata[L].level, rep), g)
                 for rep in lvdata[L].repElements], lvdata[tgt])
    return MackeyFunctor(lattice, levels, res, tr, conj,
                         allowed_primes=allowed_primes, label="A_G")


def _short(elements):
    return ",".join(map(str, elements)) if len(elements) <= 4 else \
        f"{len(elements)} elts"


def constant_mackey(lattice, allowed_primes=()):
    """The constant functor Z-bar: identity restrictions, index transfers."""
    levels = {i: MackeyLevel(rank=1, torsion=(), labels=("1",))
              for i in range(len(lattice.subgroups))}
    res, tr, conj = {}, {}, {}
    for K in range(len(lattice.subgroups)):
        for L in lattice.subgroups_of(K):
            if L == K:
                continue
            index = len(lattice.subgroups[K]) // len(lattice.subgroups[L])
            res[(K, L)] = Mat([[1]])
            tr[(L, K)] = Mat([[index]])
    for g in range(1, lattice.group.order):
        for L in range(len(lattice.subgroups)):
            conj[(g, L)] = Mat([[1]])
    return MackeyFunctor(lattice, levels, res, tr, conj,
                         allowed_primes=allowed_primes, label="ZBar")


# ---------------------------------------------------------------------------
# family sub-functors M_F and N_F
# ---------------------------------------------------------------------------


def _family_reps(lattice, F):
    """Normalize a family to the set of member subgroup element tuples.

    Accepts an object with ``classReps`` (the families module's type), or
    any iterable of subgroups/element tuples.  Returns the set of element
    tuples of *all* member subgroups (closed under conjugation).
    """
    if hasattr(F, "classReps"):
        seeds = [tuple(r) for r in F.classReps]
    else:
        seeds = []
        for x in F:
            if isinstance(x, Subgroup):
                seeds.append(tuple(x.elements))
            elif isinstance(x, int):
                seeds.append(tuple(lattice.subgroups[x].elements))
            else:
                seeds.append(tuple(sorted(x)))
    G = lattice.group
    out = set()
    for s in seeds:
        for g in range(G.order):
            out.add(G.conjugate_subset(g, s))
    return out


def sub_functors(lattice, F, allowed_primes):
    """(M_F, N_F): the orbit-family span and its idempotent complement.

    M_F(G/L) is spanned by the basis orbits {L/K} with K in the family.
    N_F(G/L) is the submodule of A(L)[S^-1] whose marks vanish at every
    family class — after inverting enough primes this is the span of the
    idempotents e_K^L with K outside the family, but it can exist over a
    smaller prime set than the individual idempotents need.  Its basis
    vectors are pi * {L/K} for K outside F, where pi is the summed
    idempotent; each equals {L/K} plus corrections supported on family
    classes, so every structure matrix comes out integral.

    Raises InsufficientPrimes when the projector pi needs a denominator
    outside S.  Closure of every structure map and the direct-sum
    decomposition M_F + N_F = A(L)[S^-1] are verified exactly.
    """
    S = frozenset(int(p) for p in allowed_primes)
    members = _family_reps(lattice, F)
    n = len(lattice.subgroups)
    lvdata = {i: br.level_data(lattice, s)
              for i, s in enumerate(lattice.subgroups)}

    in_family = {}
    for i in range(n):
        lv = lvdata[i]
        in_family[i] = [rep in members for rep in lv.repElements]

    m_basis = {i: [k for k, keep in enumerate(in_family[i]) if keep]
               for i in range(n)}
    n_basis = {i: [k for k, keep in enumerate(in_family[i]) if not keep]
               for i in range(n)}

    def s_local(elem, what, level_idx):
        for rep, v in elem.coeffs.items():
            if not set(prime_factors(v.denominator)) <= S:
                raise br.InsufficientPrimes(
                    f"{what} at level {level_idx} needs 1/{v.denominator}, "
                    f"S = {sorted(S)}")
        return br.from_coeffs(lattice, lvdata[level_idx].level,
                              {rep: v.value for rep, v in elem.coeffs.items()},
                              S)

    # basis of N_F per level: zero out the family marks of each non-family
    # basis orbit; the result is {L/K} + family-class corrections.
    n_elem = {}
    for i in range(n):
        lv = lvdata[i]
        pi_marks = [br.LocalizedRational(0 if flag else 1, S)
                    for flag in in_family[i]]
        s_local(br.from_marks(lv, pi_marks), "family projector", i)
        n_elem[i] = {}
        for k in n_basis[i]:
            x = br.basis_element(lattice, lv.level, lv.repElements[k], S)
            mx = br.marks_vector(x)
            trimmed = [br.LocalizedRational(0, S) if in_family[i][c] else mx[c]
                       for c in range(lv.nclasses())]
            n_elem[i][k] = s_local(br.from_marks(lv, trimmed),
                                   "complement basis", i)
            for kk in n_basis[i]:
                want = 1 if kk == k else 0
                if n_elem[i][k].coeffs[lv.repElements[kk]] != \
                        br.LocalizedRational(want, S):
                    raise MackeyError("complement basis is not unitriangular")

    # direct-sum sanity: the mixed basis matrix is unitriangular by the
    # check above, so its determinant is +-1 — a unit over Z[S^-1].

    def project_m(elem, level_idx):
        """Coordinates of an A(L) element in the {L/K}, K in F basis."""
        lv = lvdata[level_idx]
        coords = []
        for k in m_basis[level_idx]:
            coords.append(elem.coeffs[lv.repElements[k]])
        # residual must vanish
        for k in n_basis[level_idx]:
            if elem.coeffs[lv.repElements[k]]:
                raise MackeyError("image left the family span")
        return _int_coords(coords)

    def project_n(elem, level_idx):
        """Coordinates in the complement basis: the non-family coefficients."""
        lv = lvdata[level_idx]
        coords = _int_coords([elem.coeffs[lv.repElements[k]]
                              for k in n_basis[level_idx]])
        rebuilt = br.zero(lattice, lv.level, S)
        for c, k in zip(coords, n_basis[level_idx]):
            rebuilt = rebuilt + c * n_elem[level_idx][k]
        if not (elem - rebuilt).is_zero():
            raise MackeyError("image left the mark-vanishing submodule")
        return coords

    def build(basis_map, make_elem, project, label):
        levels = {}
        for i in range(n):
            lv = lvdata[i]
            labels = tuple(lv.repElements[k] for k in basis_map[i])
            levels[i] = MackeyLevel(rank=len(basis_map[i]), torsion=(),
                                    labels=tuple(map(_short, labels)))
        res, tr, conj = {}, {}, {}
        for K in range(n):
            for L in lattice.subgroups_of(K):
                if L == K:
                    continue
                res[(K, L)] = _cols(
                    [project(br.restrict(make_elem(K, k), lvdata[L].level), L)
                     for k in basis_map[K]], len(basis_map[L]))
                tr[(L, K)] = _cols(
                    [project(br.transfer(make_elem(L, k), lvdata[K].level), K)
                     for k in basis_map[L]], len(basis_map[K]))
        for g in range(1, lattice.group.order):
            for L in range(n):
                tgt = lattice.conj_subgroup(g, L)
                conj[(g, L)] = _cols(
                    [project(br.conjugate(make_elem(L, k), g), tgt)
                     for k in basis_map[L]], len(basis_map[tgt]))
        return MackeyFunctor(lattice, levels, res, tr, conj,
                             allowed_primes=S, label=label)

    MF = build(m_basis,
               lambda i, k: br.basis_element(lattice, lvdata[i].level,
                                             lvdata[i].repElements[k], S),
               project_m, "M_F")
    NF = build(n_basis, lambda i, k: n_elem[i][k], project_n, "N_F")
    return MF, NF


def _int_coords(coords):
    out = []
    for c in coords:
        v = c.value if isinstance(c, br.LocalizedRational) else c
        if v.denominator != 1:
            raise MackeyError(f"non-integral coordinate {v} in structure map")
        out.append(v.numerator)
    return out


def _cols(cols, height):
    return Mat.from_cols(cols, m=height) if cols else Mat.zero(height, 0)


# ---------------------------------------------------------------------------
# box products
# ---------------------------------------------------------------------------


def strip_primes(t, S):
    """Remove all S-prime factors from a positive integer."""
    for p in S:
        while t % p == 0:
            t //= p
    return t


class _BoxLevel:
    """Presentation of one box-product level, before and after S-stripping."""

    def __init__(self, gens, relations, S):
        # gens: list of (K_idx, i, j) labels
        self.gens = gens
        self.pos = {g: k for k, g in enumerate(gens)}
        self.fp = FPAbelian(len(gens),
                            Mat.from_cols(relations, m=len(gens)) if relations
                            else Mat.zero(len(gens), 0))
        # stripped view: localized torsion orders; keep coords with order
        # that stays > 1, plus all free coords
        keep = []
        torsion = []
        for k, i in enumerate(self.fp.torsion_coords):
            t = strip_primes(self.fp.structure.torsion[k], S)
            if t > 1:
                keep.append(k)
                torsion.append(t)
        self.keep_torsion = tuple(keep)
        self.torsion = tuple(torsion)
        self.rank = self.fp.structure.rank

    @property
    def nred(self):
        return len(self.torsion) + self.rank

    def reduce(self, genvec):
        """Generator-coordinate vector -> stripped reduced coordinates."""
        full = self.fp.reduce(genvec)
        ntor = len(self.fp.torsion_coords)
        out = [full[self.keep_torsion[k]] % self.torsion[k]
               for k in range(len(self.keep_torsion))]
        out += list(full[ntor:])
        return tuple(out)

    def lift(self, coords):
        """Stripped reduced coordinates -> a generator-coordinate vector."""
        ntor = len(self.fp.torsion_coords)
        full = [0] * (ntor + len(self.fp.free_coords))
        for k, c in enumerate(coords[:len(self.keep_torsion)]):
            full[self.keep_torsion[k]] = c
        for k, c in enumerate(coords[len(self.keep_torsion):]):
            full[ntor + k] = c
        return self.fp.lift(full)


def box_product(M, N):
    """The box product M box N as a MackeyFunctor.

    Levels come from the coend presentation; the reported (rank, torsion)
    at each level is the Z[S^-1]-structure where S is the union of the two
    factors' allowed primes.  Transfers are index-set inclusions,
    conjugation relabels, and restriction follows the double-coset formula
    — all transported through the Smith reduction of the presentation.
    """
    if M.lattice is not N.lattice and M.lattice.group.table != N.lattice.group.table:
        raise MackeyError("box product needs both functors on the same group")
    lattice = M.lattice
    G = lattice.group
    S = M.allowedPrimes | N.allowedPrimes
    nsub = len(lattice.subgroups)

    def gens_for(H):
        out = []
        for K in lattice.subgroups_of(H):
            m, nn = M.level(K).ngens, N.level(K).ngens
            for i in range(m):
                for j in range(nn):
                    out.append((K, i, j))
        return out

    # build levels
    box_levels = {}
    for H in range(nsub):
        gens = gens_for(H)
        pos = {g: k for k, g in enumerate(gens)}
        rel = []

        def col_of_pairs(pairs):
            v = [0] * len(gens)
            for g, c in pairs:
                v[pos[g]] += c
            return v

        Helems = lattice.subgroups[H].elements
        subsH = lattice.subgroups_of(H)
        for K in subsH:
            mlv, nlv = M.level(K), N.level(K)
            # tensor torsion
            for i, t in enumerate(mlv.torsion):
                for j in range(nlv.ngens):
                    rel.append(col_of_pairs([((K, i, j), t)]))
            for j, t in enumerate(nlv.torsion):
                for i in range(mlv.ngens):
                    rel.append(col_of_pairs([((K, i, j), t)]))
        # Frobenius reciprocity, both ways, all nested pairs inside H
        for K2 in subsH:
            for K1 in lattice.subgroups_of(K2):
                if K1 == K2:
                    continue
                resM = M.res(K2, K1)
                trN = N.tr(K1, K2)
                resN = N.res(K2, K1)
                trM = M.tr(K1, K2)
                m2, n2 = M.level(K2).ngens, N.level(K2).ngens
                m1, n1 = M.level(K1).ngens, N.level(K1).ngens
                # a (x) Tr(b) ~ Res(a) (x) b   (a at K2, b at K1)
                for i in range(m2):
                    for j in range(n1):
                        pairs = [((K2, i, jj), trN.rows[jj][j])
                                 for jj in range(n2) if trN.rows[jj][j]]
                        pairs += [((K1, ii, j), -resM.rows[ii][i])
                                  for ii in range(m1) if resM.rows[ii][i]]
                        rel.append(col_of_pairs(pairs))
                # Tr(a) (x) b ~ a (x) Res(b)   (a at K1, b at K2)
                for i in range(m1):
                    for j in range(n2):
                        pairs = [((K2, ii, j), trM.rows[ii][i])
                                 for ii in range(m2) if trM.rows[ii][i]]
                        pairs += [((K1, i, jj), -resN.rows[jj][j])
                                  for jj in range(n1) if resN.rows[jj][j]]
                        rel.append(col_of_pairs(pairs))
        # conjugation by elements of H
        for g in Helems:
            if g == 0:
                continue
            for K in subsH:
                tgt, cm = M.conj(g, K)
                _, cn = N.conj(g, K)
                mlv, nlv = M.level(K), N.level(K)
                for i in range(mlv.ngens):
                    for j in range(nlv.ngens):
                        pairs = [((K, i, j), 1)]
                        for ii in range(M.level(tgt).ngens):
                            a = cm.rows[ii][i]
                            if not a:
                                continue
                            for jj in range(N.level(tgt).ngens):
                                b = cn.rows[jj][j]
                                if b:
                                    pairs.append(((tgt, ii, jj), -a * b))
                        rel.append(col_of_pairs(pairs))
        box_levels[H] = _BoxLevel(gens, rel, S)

    levels = {H: MackeyLevel(rank=bl.rank, torsion=bl.torsion,
                             labels=tuple(f"t{k}" for k in range(len(bl.torsion)))
                             + tuple(f"x{k}" for k in range(bl.rank)))
              for H, bl in box_levels.items()}

    def genvec_image(H_src, genvec, image_of_gen, H_tgt):
        """Push a generator vector through a map given on generators."""
        tgt = box_levels[H_tgt]
        out = [0] * len(tgt.gens)
        for k, c in enumerate(genvec):
            if not c:
                continue
            for g2, c2 in image_of_gen(box_levels[H_src].gens[k]):
                out[tgt.pos[g2]] += c * c2
        return out

    def reduced_matrix(H_src, H_tgt, image_of_gen):
        src, tgt = box_levels[H_src], box_levels[H_tgt]
        cols = []
        for k in range(src.nred):
            coords = tuple(int(i == k) for i in range(src.nred))
            gv = src.lift(coords)
            iv = genvec_image(H_src, gv, image_of_gen, H_tgt)
            cols.append(tgt.reduce(iv))
        return _cols(cols, tgt.nred)

    res, tr, conj = {}, {}, {}
    for K in range(nsub):
        for L in lattice.subgroups_of(K):
            if L == K:
                continue
            # transfer: index-set inclusion
            tr[(L, K)] = reduced_matrix(L, K, lambda g: [(g, 1)])
            # restriction: double-coset formula on generators
            res[(K, L)] = reduced_matrix(
                K, L, lambda g, _K=K, _L=L: _box_res_gen(M, N, lattice, _K, _L, g))
    for g in range(1, G.order):
        for L in range(nsub):
            tgt = lattice.conj_subgroup(g, L)
            conj[(g, L)] = reduced_matrix(
                L, tgt, lambda gen, _g=g: _box_conj_gen(M, N, lattice, _g, gen))

    label = f"{M.label} box {N.label}"
    return MackeyFunctor(lattice, levels, res, tr, conj,
                         allowed_primes=S, label=label)


def _box_conj_gen(M, N, lattice, g, gen):
    K, i, j = gen
    tgt, cm = M.conj(g, K)
    _, cn = N.conj(g, K)
    out = []
    for ii in range(M.level(tgt).ngens):
        a = cm.rows[ii][i]
        if not a:
            continue
        for jj in range(N.level(tgt).ngens):
            b = cn.rows[jj][j]
            if b:
                out.append(((tgt, ii, jj), a * b))
    return out


def _box_res_gen(M, N, lattice, H2, H1, gen):
    """Res^{H2}_{H1} of the generator (K, i, j) at level H2.

    The generator is Tr^{H2}_K of an element at level K, so the Mackey
    double-coset formula gives, over H1 g K cosets,
    Tr^{H1}_{H1 meet gK} c_g Res^K_{...}; with box transfers being index-set
    inclusions the transfer part is just a relabeling to the subgroup
    H1 meet g K g^-1 of H1.
    """
    K, i, j = gen
    G = lattice.group
    H1e = set(lattice.subgroups[H1].elements)
    Ke = list(lattice.subgroups[K].elements)
    H2e = lattice.subgroups[H2].elements
    seen = set()
    out = []
    for g in H2e:
        # double coset H1 g K
        dc = frozenset(G.table[h][G.table[g][k]] for h in H1e for k in Ke)
        if dc in seen:
            continue
        seen.add(dc)
        gK = G.conjugate_subset(g, tuple(sorted(Ke)))
        inter = tuple(sorted(set(gK) & H1e))
        inter_idx = lattice.index_of(inter)
        # Res^{gK}_{inter} c_g on both factors
        Kg_idx = lattice.index_of(gK)
        _, cm = M.conj(g, K)
        _, cn = N.conj(g, K)
        rm = M.res(Kg_idx, inter_idx).mul(cm)
        rn = N.res(Kg_idx, inter_idx).mul(cn)
        for ii in range(M.level(inter_idx).ngens):
            a = rm.rows[ii][i]
            if not a:
                continue
            for jj in range(N.level(inter_idx).ngens):
                b = rn.rows[jj][j]
                if b:
                    out.append(((inter_idx, ii, jj), a * b))
    return out


def zero_functor(lattice, allowed_primes=()):
    levels = {i: MackeyLevel(rank=0, torsion=(), labels=())
              for i in range(len(lattice.subgroups))}
    res, tr, conj = {}, {}, {}
    for K in range(len(lattice.subgroups)):
        for L in lattice.subgroups_of(K):
            if L != K:
                res[(K, L)] = Mat.zero(0, 0)
                tr[(L, K)] = Mat.zero(0, 0)
    for g in range(1, lattice.group.order):
        for L in range(len(lattice.subgroups)):
            conj[(g, L)] = Mat.zero(0, 0)
    return MackeyFunctor(lattice, levels, res, tr, conj,
                         allowed_primes=allowed_primes, label="0")

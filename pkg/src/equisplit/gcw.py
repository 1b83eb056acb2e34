"""Finite G-CW complexes with signed cellular actions.

A complex stores its cells per dimension, one integer boundary matrix per
dimension, and for every group element a signed permutation of each cell
layer.  The sign bookkeeping is what lets one honest cell structure serve
for a representation sphere and its orientation-reversing symmetries at
once.  Construction always validates the chain-level axioms (boundary
squares to zero, the action is by chain maps and respects the group law);
the *genuine* flag records whether every setwise-fixed cell is fixed with
sign +1 — the condition all the fixed-point, orbit, and Bredon machinery
needs, so those operations refuse to run without it.

Homology comes in three flavours:

* ordinary integer homology of the underlying complex (Smith normal form);
* Bredon homology and cohomology with coefficients in a Mackey functor,
  assembled orbit-by-orbit with one coefficient level per isotropy group
  and differentials built from transfers (homology) or restrictions
  (cohomology) composed with conjugations;
* the marks-style direct sum over conjugacy classes of subgroups,
  H_*(X^K / W_L K), which for Burnside coefficients must agree with the
  Bredon answer — the module's main internal cross-check — and its
  out-of-family variant used for the splitting summands.

The builders cover the representation-sphere models (the sign sphere and
the rotation plane over a dihedral group, the lens-type model of the free
plane over a cyclic group, with its reflection companion map), skeleta of
the standard free resolution model of EG, joins, smashes, induction, and
restriction.  ``orbit_map_checks`` certifies the quotient-map homology
statements used for the splitting comparisons: a cellular section summing
commutant translates, its chain-map property, the scalar composite, and
cokernel annihilation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import burnside as br
from .groups import GroupError, Subgroup, subgroup_lattice
from .intlin import (AbelianStructure, FPAbelian, HomologyData, IntSolver,
                     Mat, homology_structure, kernel_basis, prime_factors)


class GCWError(Exception):
    pass


class NonGenuineAction(GCWError):
    """Some cell is setwise fixed with sign -1 (or isotropy shrinks along
    the boundary), so fixed-point and orbit constructions are unavailable."""


class IncompatibleGroups(GCWError):
    pass


class NotBased(GCWError):
    pass


class NotChainMap(GCWError):
    pass


class HypothesisViolated(GCWError):
    """An isotropy hypothesis of the orbit-map lemmas fails on this input."""


# ---------------------------------------------------------------------------
# the complex
# ---------------------------------------------------------------------------


def _np_mat(mat):
    if mat.m == 0 or mat.n == 0:
        return np.zeros((mat.m, mat.n), dtype=np.int64)
    return np.array(mat.rows, dtype=np.int64)


def _generating_set(group):
    """A small generating set, greedily extended until closure is full."""
    order = group.order
    gens = []
    closure = {0}
    for g in range(1, order):
        if g in closure:
            continue
        gens.append(g)
        frontier = list(closure | {g})
        closure.add(g)
        while frontier:
            a = frontier.pop()
            for b in list(closure):
                for c in (group.mul(a, b), group.mul(b, a)):
                    if c not in closure:
                        closure.add(c)
                        frontier.append(c)
        if len(closure) == order:
            break
    return gens


class GCWComplex:
    """A finite G-CW complex with signed action, validated on construction.

    ``cells[d]`` is a tuple of string ids; ``boundary[d]`` an integer Mat
    with rows indexed by the (d-1)-cells and columns by the d-cells;
    ``action[g][d][i] = (j, s)`` says g carries cell i to cell j with sign
    s.  A based complex names one G-fixed 0-cell as ``basepoint``.
    Companion (non-equivariant) cellular self-maps can be attached to
    ``companions`` after construction.
    """

    def __init__(self, group, cells, boundary, action, based=False,
                 basepoint=None, validate=True):
        self.group = group
        dims = sorted(d for d, ids in cells.items() if ids)
        self.cells = {d: tuple(cells[d]) for d in dims}
        self.top = dims[-1] if dims else -1
        if dims and (dims[0] != 0 or dims != list(range(len(dims)))):
            raise GCWError("cell dimensions must be contiguous from 0")
        self._pos = {}
        where = {}
        for d in dims:
            ids = self.cells[d]
            self._pos[d] = {cid: i for i, cid in enumerate(ids)}
            if len(self._pos[d]) != len(ids):
                raise GCWError(f"duplicate cell ids in dimension {d}")
            for cid in ids:
                if cid in where:
                    raise GCWError(f"cell id {cid!r} used in two dimensions")
                where[cid] = d
        self._where = where
        self.boundary = {}
        for d, mat in boundary.items():
            if d in self.cells and not mat.is_zero():
                self.boundary[d] = mat
        self.action = {g: {d: tuple(action[g][d]) for d in dims}
                       for g in action}
        self.based = bool(based)
        self.basepoint = basepoint
        if self.based:
            if basepoint is None or where.get(basepoint) != 0:
                raise NotBased("basepoint must name a 0-cell")
        self.companions = {}
        self._np_bnd = {}
        if validate:
            self._validate()
        else:
            self.genuine = self._compute_genuine()
            self.isotropyClosed = self._compute_closure()

    # -- basic access -------------------------------------------------------

    def dims(self):
        return range(self.top + 1)

    def ncells(self, d):
        return len(self.cells.get(d, ()))

    def ids(self, d):
        return self.cells.get(d, ())

    def index(self, d, cid):
        return self._pos[d][cid]

    def act(self, g, d, i):
        return self.action[g][d][i]

    def boundary_of(self, d):
        if d in self.boundary:
            return self.boundary[d]
        return Mat.zero(self.ncells(d - 1) if d - 1 >= 0 else 0,
                        self.ncells(d))

    def np_boundary(self, d):
        if d not in self._np_bnd:
            self._np_bnd[d] = _np_mat(self.boundary_of(d))
        return self._np_bnd[d]

    def basepoint_index(self):
        if not self.based:
            raise NotBased("complex has no basepoint")
        return self._pos[0][self.basepoint]

    def stabilizer(self, d, i, elements=None):
        """Elements fixing the cell pointwise (setwise with sign +1)."""
        pool = range(self.group.order) if elements is None else elements
        return tuple(g for g in pool if self.action[g][d][i] == (i, 1))

    def total_cells(self):
        return sum(self.ncells(d) for d in self.dims())

    # -- validation ---------------------------------------------------------

    def _perm_arrays(self, g, d):
        pairs = self.action[g][d]
        img = np.array([p[0] for p in pairs], dtype=np.int64)
        sgn = np.array([p[1] for p in pairs], dtype=np.int64)
        return img, sgn

    def _validate(self):
        order = self.group.order
        if set(self.action) != set(range(order)):
            raise GCWError("action must cover every group element")
        for d in self.dims():
            n = self.ncells(d)
            for g in range(order):
                pairs = self.action[g][d]
                if len(pairs) != n:
                    raise GCWError(f"action of {g} wrong length in dim {d}")
                seen = set()
                for (j, s) in pairs:
                    if not (0 <= j < n) or s not in (1, -1) or j in seen:
                        raise GCWError(f"action of {g} is not a signed "
                                       f"permutation in dim {d}")
                    seen.add(j)
            if any(p != (i, 1) for i, p in enumerate(self.action[0][d])):
                raise GCWError("identity element must act trivially")

        # boundary shapes and d^2 = 0
        for d in self.dims():
            mat = self.boundary_of(d)
            rows = self.ncells(d - 1) if d > 0 else 0
            if (mat.m, mat.n) != (rows, self.ncells(d)):
                raise GCWError(f"boundary matrix shape mismatch in dim {d}")
        for d in self.dims():
            if d >= 2:
                prod = self.np_boundary(d - 1) @ self.np_boundary(d)
                if prod.size and np.any(prod):
                    raise GCWError(f"boundary does not square to zero "
                                   f"at dim {d}")
            if d == 1 and self.ncells(0) == 0 and self.ncells(1):
                raise GCWError("1-cells with no 0-cells")

        # the action respects the group law (all pairs)...
        for d in self.dims():
            table = {g: self.action[g][d] for g in range(order)}
            for a in range(order):
                pa = table[a]
                for b in range(order):
                    pb = table[b]
                    pc = table[self.group.mul(a, b)]
                    for i in range(self.ncells(d)):
                        j, s = pb[i]
                        k, t = pa[j]
                        if pc[i] != (k, s * t):
                            raise GCWError(
                                f"action violates the group law at "
                                f"({a},{b}) on dim-{d} cell {i}")

        # ...and is by chain maps; generators suffice once the law holds
        for g in _generating_set(self.group):
            for d in self.dims():
                if d == 0:
                    continue
                bnd = self.np_boundary(d)
                if not bnd.size:
                    continue
                img_d, sgn_d = self._perm_arrays(g, d)
                img_p, sgn_p = self._perm_arrays(g, d - 1)
                # g . (boundary e_i) : permute rows
                moved = np.zeros_like(bnd)
                moved[img_p, :] = bnd * sgn_p[:, None]
                # boundary(g . e_i) : permute and sign columns
                target = bnd[:, img_d] * sgn_d[None, :]
                if np.any(moved != target):
                    raise GCWError(f"element {g} does not act by a chain "
                                   f"map in dim {d}")

        if self.based:
            bp = self.basepoint_index()
            for g in range(order):
                if self.action[g][0][bp] != (bp, 1):
                    raise NotBased("basepoint must be fixed by the action")

        self.genuine = self._compute_genuine()
        self.isotropyClosed = self._compute_closure()

    def _compute_genuine(self):
        for g in range(self.group.order):
            for d in self.dims():
                for i, (j, s) in enumerate(self.action[g][d]):
                    if i == j and s == -1:
                        return False
        return True

    def _compute_closure(self):
        """Does isotropy grow (weakly) along the boundary?"""
        for d in self.dims():
            if d == 0:
                continue
            mat = self.boundary_of(d)
            stab_lo = [frozenset(self.stabilizer(d - 1, i))
                       for i in range(self.ncells(d - 1))]
            for j in range(self.ncells(d)):
                stab = frozenset(self.stabilizer(d, j))
                for i in range(mat.m):
                    if mat.rows[i][j] and not stab <= stab_lo[i]:
                        return False
        return True

    # -- serialization ------------------------------------------------------

    def to_json(self):
        order = []
        for d in self.dims():
            for cid in self.ids(d):
                order.append({"id": cid, "dim": d})
        offset = {}
        k = 0
        for d in self.dims():
            offset[d] = k
            k += self.ncells(d)
        action = {}
        for g in range(self.group.order):
            rows = []
            for d in self.dims():
                for (j, s) in self.action[g][d]:
                    rows.append([offset[d] + j, s])
            action[str(g)] = rows
        boundary = {str(d): [list(r) for r in self.boundary_of(d).rows]
                    for d in self.dims() if d > 0}
        out = {"group": self.group.to_json(), "cells": order,
               "action": action, "boundary": boundary, "based": self.based}
        if self.based:
            out["basepoint"] = self.basepoint
        return out

    def __repr__(self):
        sizes = ",".join(str(self.ncells(d)) for d in self.dims())
        return (f"GCWComplex({self.group.label!r}, cells=[{sizes}], "
                f"genuine={self.genuine})")


def from_json(data):
    """Rebuild a complex from the ``to_json`` format."""
    from .groups import build_group
    group = build_group(data["group"])
    cells = {}
    dim_of = []
    for entry in data["cells"]:
        cells.setdefault(entry["dim"], []).append(entry["id"])
        dim_of.append(entry["dim"])
    dims = sorted(cells)
    offset = {}
    k = 0
    for d in dims:
        offset[d] = k
        k += len(cells[d])
    action = {}
    for g_str, rows in data["action"].items():
        g = int(g_str)
        per_dim = {d: [None] * len(cells[d]) for d in dims}
        for i, (j, s) in enumerate(rows):
            d = dim_of[i]
            per_dim[d][i - offset[d]] = (j - offset[d], int(s))
        action[g] = per_dim
    boundary = {}
    for d_str, rows in data.get("boundary", {}).items():
        d = int(d_str)
        boundary[d] = Mat(rows, n=len(cells[d]))
    return GCWComplex(group, cells, boundary, action,
                      based=data.get("based", False),
                      basepoint=data.get("basepoint"))


# ---------------------------------------------------------------------------
# cellular maps
# ---------------------------------------------------------------------------


class CellularMap:
    """A degree-preserving chain map between complexes, checked to commute
    with the boundary.  No equivariance is demanded — the point is to carry
    symmetries *outside* the acting group (a reflection companion on a
    rotation-only complex) as well as quotient and section maps."""

    def __init__(self, source, target, matrices, name="f", validate=True):
        self.source = source
        self.target = target
        self.name = name
        self.matrices = {}
        top = max(source.top, target.top)
        for d in range(top + 1):
            mat = matrices.get(d)
            if mat is None:
                mat = Mat.zero(target.ncells(d), source.ncells(d))
            if (mat.m, mat.n) != (target.ncells(d), source.ncells(d)):
                raise NotChainMap(f"matrix shape mismatch in dim {d}")
            self.matrices[d] = mat
        if validate:
            self._check()

    def matrix(self, d):
        return self.matrices.get(
            d, Mat.zero(self.target.ncells(d), self.source.ncells(d)))

    def _check(self):
        top = max(self.source.top, self.target.top)
        for d in range(1, top + 1):
            lhs = _np_mat(self.target.boundary_of(d)) @ _np_mat(self.matrix(d))
            rhs = _np_mat(self.matrix(d - 1)) @ _np_mat(self.source.boundary_of(d))
            if lhs.size != rhs.size or (lhs.size and np.any(lhs != rhs)):
                raise NotChainMap(
                    f"{self.name} fails boundary commutation in dim {d}")

    def compose(self, other):
        """self after other (other.target must be self.source)."""
        if other.target is not self.source:
            raise NotChainMap("composition endpoints do not match")
        mats = {d: self.matrix(d).mul(other.matrix(d))
                for d in range(max(self.source.top, other.source.top) + 1)}
        return CellularMap(other.source, self.target, mats,
                           name=f"{self.name}*{other.name}", validate=False)

    def __repr__(self):
        return f"CellularMap({self.name!r})"


def identity_map(X):
    return CellularMap(X, X, {d: Mat.identity(X.ncells(d))
                              for d in X.dims()}, name="id", validate=False)


# ---------------------------------------------------------------------------
# homology results
# ---------------------------------------------------------------------------

_ZERO = AbelianStructure(rank=0, torsion=())


@dataclass(frozen=True)
class HomologyResult:
    """Per-degree isomorphism types, degree 0 first."""

    structures: tuple

    def at(self, d):
        if 0 <= d < len(self.structures):
            return self.structures[d]
        return _ZERO

    def __getitem__(self, d):
        return self.at(d)

    def __len__(self):
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    def is_zero(self):
        return all(s.is_zero() for s in self.structures)

    def to_json(self):
        return [{"degree": d, "rank": s.rank, "torsion": list(s.torsion)}
                for d, s in enumerate(self.structures)]

    def __str__(self):
        return " | ".join(f"H_{d}={s}" for d, s in enumerate(self.structures))


def _factorize(n):
    out = {}
    for p in prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def _direct_sum(structures):
    """Invariant factors of a direct sum, via primary decomposition."""
    rank = sum(s.rank for s in structures)
    primary = {}
    for s in structures:
        for t in s.torsion:
            for p, e in _factorize(t).items():
                primary.setdefault(p, []).append(e)
    depth = max((len(v) for v in primary.values()), default=0)
    factors = []
    for k in range(depth):
        f = 1
        for p, exps in primary.items():
            exps.sort(reverse=True)
            if k < len(exps):
                f *= p ** exps[k]
        factors.append(f)
    factors.reverse()
    return AbelianStructure(rank=rank, torsion=tuple(factors))


def _strip_primes(structure, primes):
    """The structure after inverting the given primes (drop their torsion)."""
    tor = []
    for t in structure.torsion:
        for p in primes:
            while t % p == 0:
                t //= p
        if t > 1:
            tor.append(t)
    return AbelianStructure(rank=structure.rank, torsion=tuple(tor))


# ---------------------------------------------------------------------------
# orbits, fixed points, quotients
# ---------------------------------------------------------------------------


def _subgroup_elements(group, H):
    if H is None:
        return tuple(range(group.order))
    if isinstance(H, Subgroup):
        H = H.elements
    elems = tuple(sorted(set(H)))
    if not group.is_subgroup(elems):
        raise GroupError(f"{elems} is not a subgroup")
    return elems


def _orbit_data(X, d, elements):
    """Orbits of the d-cells under a subgroup.

    Returns ``(reps, transversal, orbit_of)`` where ``transversal[i] =
    (g, s)`` writes cell i as g.rep with sign s, and ``orbit_of[i]`` is the
    position of i's orbit in ``reps``.  Sign inconsistencies (an element
    fixing a cell setwise with -1) raise NonGenuineAction.
    """
    n = X.ncells(d)
    reps = []
    transversal = [None] * n
    orbit_of = [None] * n
    for i in range(n):
        if transversal[i] is not None:
            continue
        o = len(reps)
        reps.append(i)
        transversal[i] = (0, 1)
        orbit_of[i] = o
        queue = [i]
        while queue:
            j = queue.pop()
            gj, sj = transversal[j]
            for g in elements:
                k, s = X.act(g, d, j)
                total = (X.group.mul(g, gj), s * sj)
                if transversal[k] is None:
                    transversal[k] = total
                    orbit_of[k] = o
                    queue.append(k)
                elif transversal[k][1] != total[1] and orbit_of[k] == o:
                    raise NonGenuineAction(
                        f"orientation-reversing self-symmetry on a dim-{d} "
                        f"cell orbit")
    return reps, transversal, orbit_of


def _require_genuine(X, what):
    if not X.genuine:
        raise NonGenuineAction(f"{what} needs a genuine action "
                               f"(setwise-fixed cells with sign +1)")
    if not X.isotropyClosed:
        raise NonGenuineAction(f"{what} needs isotropy groups that grow "
                               f"along the boundary")


def fixed_subcomplex(X, H):
    """The pointwise H-fixed cells, as a complex over N(H) (relabeled).

    Returns the new complex; its group is the normalizer of H in X's group,
    repackaged as a standalone group (the embedding is recoverable from
    ``group.subgroup_as_group``).  Cells keep their ids.
    """
    G = X.group
    helems = _subgroup_elements(G, H)
    fixed = {}
    for d in X.dims():
        keep = []
        for i in range(X.ncells(d)):
            imgs = [X.act(h, d, i) for h in helems]
            if all(p == (i, 1) for p in imgs):
                keep.append(i)
            elif any(p == (i, -1) for p in imgs):
                raise NonGenuineAction(
                    f"a dim-{d} cell is H-fixed only up to orientation")
        fixed[d] = keep
    # boundaries may not leak out of the fixed part
    for d in X.dims():
        if d == 0:
            continue
        mat = X.boundary_of(d)
        keep_lo = set(fixed[d - 1])
        for j in fixed[d]:
            for i in range(mat.m):
                if mat.rows[i][j] and i not in keep_lo:
                    raise NonGenuineAction(
                        "fixed cells have boundary outside the fixed part")
    norm = G.normalizer_of(helems)
    W, embed = G.subgroup_as_group(norm)
    cells = {d: [X.ids(d)[i] for i in fixed[d]] for d in X.dims()}
    pos = {d: {i: k for k, i in enumerate(fixed[d])} for d in X.dims()}
    boundary = {}
    for d in X.dims():
        if d == 0 or not fixed[d]:
            continue
        mat = X.boundary_of(d)
        rows = [[mat.rows[i][j] for j in fixed[d]] for i in fixed[d - 1]]
        boundary[d] = Mat(rows, n=len(fixed[d]))
    action = {}
    for w in range(W.order):
        g = embed[w]
        per_dim = {}
        for d in X.dims():
            pairs = []
            for i in fixed[d]:
                j, s = X.act(g, d, i)
                pairs.append((pos[d][j], s))
            per_dim[d] = pairs
        action[w] = per_dim
    based = X.based and X.basepoint_index() in fixed.get(0, [])
    return GCWComplex(W, cells, boundary, action, based=based,
                      basepoint=X.basepoint if based else None)


def orbit_complex(X, K):
    """The quotient complex X/K.  When K is normal in the acting group the
    residual G/K-action is carried along; otherwise the result lives over
    the trivial group."""
    G = X.group
    kelems = _subgroup_elements(G, K)
    per_dim = {d: _orbit_data(X, d, kelems) for d in X.dims()}
    cells = {d: [X.ids(d)[i] for i in per_dim[d][0]] for d in X.dims()}
    boundary = {}
    for d in X.dims():
        if d == 0:
            continue
        reps, transversal, orbit_of = per_dim[d]
        reps_lo, trans_lo, orbit_lo = per_dim[d - 1]
        mat = X.boundary_of(d)
        rows = [[0] * len(reps) for _ in reps_lo]
        for c, rep in enumerate(reps):
            for i in range(mat.m):
                a = mat.rows[i][rep]
                if a:
                    rows[orbit_lo[i]][c] += a * trans_lo[i][1]
        boundary[d] = Mat(rows, n=len(reps))
    if G.is_normal(kelems):
        Q, _cosets, proj = G.quotient_group(kelems)
        coset_rep = {}
        for g in range(G.order):
            coset_rep.setdefault(proj[g], g)
        reps_by_coset = [coset_rep[q] for q in range(Q.order)]
    else:
        from .groups import cyclic
        Q = cyclic(1, label="1")
        reps_by_coset = [0]
    action = {}
    for q in range(Q.order):
        g = reps_by_coset[q]
        per = {}
        for d in X.dims():
            reps, transversal, orbit_of = per_dim[d]
            pairs = []
            for rep in reps:
                c, s = X.act(g, d, rep)
                gs, ss = transversal[c]
                pairs.append((orbit_of[c], s * ss))
            per[d] = pairs
        action[q] = per
    based = X.based
    bp = X.basepoint if based else None
    out = GCWComplex(Q, cells, boundary, action, based=based, basepoint=bp)
    # transport companion maps through the quotient when they descend
    for name, f in X.companions.items():
        if f.source is not X or f.target is not X:
            continue
        mats = {}
        for d in X.dims():
            reps, transversal, orbit_of = per_dim[d]
            fm = f.matrix(d)
            cols = []
            for rep in reps:
                img = [0] * len(reps)
                for i in range(fm.m):
                    a = fm.rows[i][rep]
                    if a:
                        img[orbit_of[i]] += a * transversal[i][1]
                cols.append(img)
            mats[d] = Mat.from_cols(cols, m=len(reps)) if cols else \
                Mat.zero(0, 0)
        try:
            out.companions[name] = CellularMap(out, out, mats, name=name)
        except NotChainMap:
            pass        # the map does not descend; drop it silently
    return out


def restrict_to_subgroup(X, H):
    """The same cells viewed as a complex over a subgroup (relabeled)."""
    G = X.group
    helems = _subgroup_elements(G, H)
    Hgrp, embed = G.subgroup_as_group(helems)
    action = {h: {d: list(X.action[embed[h]][d]) for d in X.dims()}
              for h in range(Hgrp.order)}
    return GCWComplex(Hgrp, dict(X.cells), dict(X.boundary), action,
                      based=X.based, basepoint=X.basepoint)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def point(group):
    """A single fixed 0-cell."""
    action = {g: {0: [(0, 1)]} for g in range(group.order)}
    return GCWComplex(group, {0: ["pt"]}, {}, action)


def empty_complex(group):
    return GCWComplex(group, {}, {}, {g: {} for g in range(group.order)})


def zero_sphere(group):
    """Two fixed 0-cells, based at one of them."""
    action = {g: {0: [(0, 1), (1, 1)]} for g in range(group.order)}
    return GCWComplex(group, {0: ["pt", "x"]}, {}, action,
                      based=True, basepoint="pt")


def orbit_cells(group, H):
    """The discrete orbit G/H as a complex of 0-cells."""
    helems = _subgroup_elements(group, H)
    cosets = group.left_cosets(helems)
    cosets.sort(key=lambda c: c[0])
    pos = {}
    for i, c in enumerate(cosets):
        for e in c:
            pos[e] = i
    cells = {0: [f"c{c[0]}" for c in cosets]}
    action = {}
    for g in range(group.order):
        action[g] = {0: [(pos[group.mul(g, c[0])], 1) for c in cosets]}
    return GCWComplex(group, cells, {}, action)


def _dihedral_action(group, p):
    """Sanity: the group passed to the dihedral sphere builders must have
    the dihedral(2p) multiplication table (index i<p rotation, p+j
    reflection)."""
    from .groups import dihedral
    if group.table != dihedral(2 * p).table:
        raise IncompatibleGroups("expected the standard dihedral table")


def sphere_sigma_d2p(p, group=None):
    """The sign-representation sphere over the dihedral group of order 2p.

    Two fixed 0-cells (origin and infinity) joined by two arcs; every
    reflection swaps the arcs, rotations act trivially (they lie in the
    commutator subgroup, so the sign character cannot see them).  p = 1 is
    allowed and gives the order-2 model.  Based at the origin.
    """
    from .groups import dihedral
    if group is None:
        group = dihedral(2 * p)
    else:
        _dihedral_action(group, p)
    cells = {0: ["zero", "inf"], 1: ["up", "dn"]}
    boundary = {1: Mat([[-1, -1], [1, 1]])}
    action = {}
    for g in range(2 * p):
        if g < p:                      # rotation
            one = [(0, 1), (1, 1)]
        else:                          # reflection
            one = [(1, 1), (0, 1)]
        action[g] = {0: [(0, 1), (1, 1)], 1: one}
    return GCWComplex(group, cells, boundary, action,
                      based=True, basepoint="zero")


def sphere_gamma_d2p(p, group=None):
    """The rotation-plane sphere over the dihedral group of order 2p.

    One-point compactified plane on which the rotation acts by angle
    2*pi/p: 0-cells at the origin and infinity, 2p rays, 2p sectors
    forming a free orbit.  Reflections reverse sector orientation, which
    is exactly why the action is still genuine: no reflection fixes a
    sector setwise.  Based at the origin.
    """
    from .groups import dihedral
    if group is None:
        group = dihedral(2 * p)
    else:
        _dihedral_action(group, p)
    m = 2 * p
    cells = {0: ["zero", "inf"],
             1: [f"ray{k}" for k in range(m)],
             2: [f"sec{k}" for k in range(m)]}
    b1 = [[-1] * m, [1] * m]                       # each ray: inf - zero
    b2 = [[0] * m for _ in range(m)]
    for k in range(m):                             # sector k: ray(k+1) - ray(k)
        b2[(k + 1) % m][k] += 1
        b2[k][k] -= 1
    action = {}
    for g in range(2 * p):
        zero_inf = [(0, 1), (1, 1)]
        if g < p:
            rays = [((k + 2 * g) % m, 1) for k in range(m)]
            secs = [((k + 2 * g) % m, 1) for k in range(m)]
        else:
            j = g - p
            rays = [((2 * j - k) % m, 1) for k in range(m)]
            secs = [((2 * j - 1 - k) % m, -1) for k in range(m)]
        action[g] = {0: zero_inf, 1: rays, 2: secs}
    return GCWComplex(group, cells, {1: Mat(b1), 2: Mat(b2, n=m)}, action,
                      based=True, basepoint="zero")


def sphere_lambda_cp(n, p, group=None):
    """The 2n-sphere built from n copies of the rotation plane, over the
    cyclic group of odd prime order p.

    One free orbit of cells in each dimension 1..2n over a fixed 0-cell
    and the basepoint; odd boundaries alternate between the augmentation
    and the norm, even ones between consecutive-difference maps.  The
    ``tau`` companion map realizes the reflection that conjugates the
    rotation to its inverse — it is a chain map on this complex but not
    equivariant, and its quotient signs give the (-1)^j pattern on the
    orbit complex.  Based.
    """
    from .groups import cyclic
    if group is None:
        group = cyclic(p)
    elif group.table != cyclic(p).table:
        raise IncompatibleGroups("expected the standard cyclic table")
    if n < 1:
        raise GCWError("the model needs at least one plane")
    cells = {0: ["pt", "fix"]}
    for m in range(1, 2 * n + 1):
        cells[m] = [f"c{m}i{i}" for i in range(p)]
    boundary = {}
    boundary[1] = Mat([[-1] * p, [1] * p])          # each 1-cell: fix - pt
    for m in range(2, 2 * n + 1):
        rows = [[0] * p for _ in range(p)]
        if m % 2 == 0:                              # difference: c_i - c_{i-1}
            for i in range(p):
                rows[i][i] += 1
                rows[(i - 1) % p][i] -= 1
        else:                                       # norm
            for i in range(p):
                for k in range(p):
                    rows[k][i] += 1
        boundary[m] = Mat(rows, n=p)
    action = {}
    for g in range(p):
        per = {0: [(0, 1), (1, 1)]}
        for m in range(1, 2 * n + 1):
            per[m] = [((i + g) % p, 1) for i in range(p)]
        action[g] = per
    X = GCWComplex(group, cells, boundary, action,
                   based=True, basepoint="pt")
    # reflection companion: dim 2j+1 sends i -> -i with sign (-1)^j,
    # dim 2j+2 sends i -> 1-i with sign (-1)^(j+1)
    mats = {0: Mat.identity(2)}
    for m in range(1, 2 * n + 1):
        rows = [[0] * p for _ in range(p)]
        if m % 2 == 1:
            j = (m - 1) // 2
            sign = (-1) ** j
            for i in range(p):
                rows[(-i) % p][i] = sign
        else:
            j = (m - 2) // 2
            sign = (-1) ** (j + 1)
            for i in range(p):
                rows[(1 - i) % p][i] = sign
        mats[m] = Mat(rows, n=p)
    X.companions["tau"] = CellularMap(X, X, mats, name="tau")
    return X


def eg_skeleton(group, N):
    """The N-skeleton of a free contractible-through-dimension model.

    Cyclic groups get the standard lens-type complex (alternating
    difference and norm boundaries; for order 2 this is the chain of
    1-tau and 1+tau maps).  Other groups get a computed resolution: free
    orbits are added dimension by dimension, with new-generator chains
    chosen greedily from an integer kernel basis until their translates
    span the whole kernel.
    """
    if N < 0:
        raise GCWError("skeleton dimension must be nonnegative")
    order = group.order
    gen = next((g for g in range(order)
                if _element_order(group, g) == order), None)
    if gen is not None and order > 1:
        return _eg_cyclic(group, gen, N)
    return _eg_generic(group, N)


def _element_order(group, g):
    k, x = 1, g
    while x != 0:
        x = group.mul(x, g)
        k += 1
    return k


def _eg_cyclic(group, gen, N):
    order = group.order
    cells = {m: [f"e{m}g{g}" for g in range(order)] for m in range(N + 1)}
    boundary = {}
    for m in range(1, N + 1):
        rows = [[0] * order for _ in range(order)]
        for g in range(order):
            if m % 2 == 1:             # right multiplication by gen, minus id
                rows[group.mul(g, gen)][g] += 1
                rows[g][g] -= 1
            else:                      # norm
                for k in range(order):
                    rows[k][g] += 1
        boundary[m] = Mat(rows, n=order)
    action = {}
    for h in range(order):
        action[h] = {m: [(group.mul(h, g), 1) for g in range(order)]
                     for m in range(N + 1)}
    return GCWComplex(group, cells, boundary, action)


def _eg_generic(group, N):
    order = group.order
    # dimension 0: one free orbit of points
    layer_cells = [[f"e0k0g{g}" for g in range(order)]]
    layer_orbits = [1]
    boundaries = []
    perm = lambda h, width, norbits: [
        (t * order + group.mul(h, g), 1)
        for t in range(norbits) for g in range(order)]
    for m in range(1, N + 1):
        width = layer_orbits[m - 1] * order
        if m == 1:
            target = Mat([[1] * width])          # augmentation
        else:
            target = boundaries[m - 2]
        kern = kernel_basis(target)
        # greedy Z[G]-generating set of the kernel
        gens = []
        span_cols = []
        solver = None
        for j in range(kern.n):
            v = kern.col(j)
            if solver is not None and solver.solve(v) is not None:
                continue
            gens.append(v)
            for h in range(order):
                img = [0] * width
                for t in range(layer_orbits[m - 1]):
                    for g in range(order):
                        a = v[t * order + g]
                        if a:
                            img[t * order + group.mul(h, g)] += a
                span_cols.append(img)
            solver = IntSolver(Mat.from_cols(span_cols, m=width))
        norbits = len(gens)
        layer_orbits.append(norbits)
        layer_cells.append([f"e{m}k{t}g{g}"
                            for t in range(norbits) for g in range(order)])
        cols = []
        for t, v in enumerate(gens):
            for g in range(order):
                img = [0] * width
                for tt in range(layer_orbits[m - 1]):
                    for gg in range(order):
                        a = v[tt * order + gg]
                        if a:
                            img[tt * order + group.mul(g, gg)] += a
                cols.append(img)
        boundaries.append(Mat.from_cols(cols, m=width) if cols
                          else Mat.zero(width, 0))
    cells = {m: layer_cells[m] for m in range(N + 1)}
    boundary = {m: boundaries[m - 1] for m in range(1, N + 1)}
    action = {}
    for h in range(order):
        action[h] = {m: perm(h, layer_orbits[m] * order, layer_orbits[m])
                     for m in range(N + 1)}
    return GCWComplex(group, cells, boundary, action)


def join(X, Y):
    """The join X * Y: both complexes plus one joined cell per pair, of
    dimension dim x + dim y + 1."""
    if X.group != Y.group:
        raise IncompatibleGroups("join needs a common acting group")
    G = X.group
    cells = {}
    for d in X.dims():
        cells.setdefault(d, []).extend(f"L|{c}" for c in X.ids(d))
    for d in Y.dims():
        cells.setdefault(d, []).extend(f"R|{c}" for c in Y.ids(d))
    # Pair cells carry positional ids (dim.index twice) so that nothing
    # ever has to re-parse an input complex's own id strings; nested
    # joins and smashes would make those ambiguous.
    comp = {}
    for a in X.dims():
        for b in Y.dims():
            d = a + b + 1
            for ix in range(X.ncells(a)):
                for iy in range(Y.ncells(b)):
                    cid = f"J|{a}.{ix}|{b}.{iy}"
                    cells.setdefault(d, []).append(cid)
                    comp[cid] = (a, ix, b, iy)
    pos = {d: {cid: i for i, cid in enumerate(cells[d])} for d in cells}

    def _col(d):
        return [0] * len(cells.get(d - 1, []))

    boundary = {}
    for d in sorted(cells):
        if d == 0:
            continue
        cols = []
        for cid in cells[d]:
            col = _col(d)
            if cid.startswith("L|"):
                x = cid[2:]
                mat = X.boundary_of(d)
                j = X.index(d, x)
                for i in range(mat.m):
                    if mat.rows[i][j]:
                        col[pos[d - 1][f"L|{X.ids(d - 1)[i]}"]] += mat.rows[i][j]
            elif cid.startswith("R|"):
                y = cid[2:]
                mat = Y.boundary_of(d)
                j = Y.index(d, y)
                for i in range(mat.m):
                    if mat.rows[i][j]:
                        col[pos[d - 1][f"R|{Y.ids(d - 1)[i]}"]] += mat.rows[i][j]
            else:
                a, ix, b, iy = comp[cid]
                if a > 0:
                    mat = X.boundary_of(a)
                    for i in range(mat.m):
                        if mat.rows[i][ix]:
                            col[pos[d - 1][f"J|{a - 1}.{i}|{b}.{iy}"]] += \
                                mat.rows[i][ix]
                if b > 0:
                    mat = Y.boundary_of(b)
                    sgn = (-1) ** a
                    for i in range(mat.m):
                        if mat.rows[i][iy]:
                            col[pos[d - 1][f"J|{a}.{ix}|{b - 1}.{i}"]] += \
                                sgn * mat.rows[i][iy]
                end = (-1) ** (a + b)
                if a == 0:
                    col[pos[d - 1][f"R|{Y.ids(b)[iy]}"]] += end
                if b == 0:
                    col[pos[d - 1][f"L|{X.ids(a)[ix]}"]] -= end
            cols.append(col)
        boundary[d] = Mat.from_cols(cols, m=len(cells[d - 1])) if cols else \
            Mat.zero(len(cells.get(d - 1, [])), 0)
    action = {}
    for g in range(G.order):
        per = {}
        for d in sorted(cells):
            out = []
            for cid in cells[d]:
                if cid.startswith("L|"):
                    x = cid[2:]
                    dx = X._where[x]
                    j, s = X.act(g, dx, X.index(dx, x))
                    out.append((pos[d][f"L|{X.ids(dx)[j]}"], s))
                elif cid.startswith("R|"):
                    y = cid[2:]
                    dy = Y._where[y]
                    j, s = Y.act(g, dy, Y.index(dy, y))
                    out.append((pos[d][f"R|{Y.ids(dy)[j]}"], s))
                else:
                    a, ix, b, iy = comp[cid]
                    jx, sx = X.act(g, a, ix)
                    jy, sy = Y.act(g, b, iy)
                    out.append((pos[d][f"J|{a}.{jx}|{b}.{jy}"], sx * sy))
            per[d] = out
        action[g] = per
    return GCWComplex(G, cells, boundary, action)


def smash(X, Y):
    """The smash product of based complexes: non-basepoint cell pairs over
    a single basepoint, with boundary terms through either basepoint
    collapsed."""
    if X.group != Y.group:
        raise IncompatibleGroups("smash needs a common acting group")
    if not (X.based and Y.based):
        raise NotBased("smash needs based complexes")
    G = X.group
    bx, by = X.basepoint, Y.basepoint
    cells = {0: ["pt"]}
    comp = {}
    for a in X.dims():
        for ix, x in enumerate(X.ids(a)):
            if a == 0 and x == bx:
                continue
            for b in Y.dims():
                for iy, y in enumerate(Y.ids(b)):
                    if b == 0 and y == by:
                        continue
                    cid = f"S|{a}.{ix}|{b}.{iy}"
                    cells.setdefault(a + b, []).append(cid)
                    comp[cid] = (a, ix, b, iy)
    pos = {d: {cid: i for i, cid in enumerate(cells[d])} for d in cells}
    boundary = {}
    for d in sorted(cells):
        if d == 0:
            continue
        cols = []
        for cid in cells[d]:
            a, ix, b, iy = comp[cid]
            col = [0] * len(cells.get(d - 1, []))
            if a > 0:
                mat = X.boundary_of(a)
                for i in range(mat.m):
                    c = mat.rows[i][ix]
                    if not c:
                        continue
                    if a - 1 == 0 and X.ids(0)[i] == bx:
                        if b == 0:
                            col[pos[0]["pt"]] += c
                        continue
                    col[pos[d - 1][f"S|{a - 1}.{i}|{b}.{iy}"]] += c
            if b > 0:
                mat = Y.boundary_of(b)
                sgn = (-1) ** a
                for i in range(mat.m):
                    c = mat.rows[i][iy]
                    if not c:
                        continue
                    if b - 1 == 0 and Y.ids(0)[i] == by:
                        if a == 0:
                            col[pos[0]["pt"]] += sgn * c
                        continue
                    col[pos[d - 1][f"S|{a}.{ix}|{b - 1}.{i}"]] += sgn * c
            cols.append(col)
        boundary[d] = Mat.from_cols(cols, m=len(cells.get(d - 1, []))) \
            if cols else Mat.zero(len(cells.get(d - 1, [])), 0)
    action = {}
    for g in range(G.order):
        per = {}
        for d in sorted(cells):
            out = []
            for cid in cells[d]:
                if cid == "pt":
                    out.append((pos[0]["pt"], 1))
                    continue
                a, ix, b, iy = comp[cid]
                jx, sx = X.act(g, a, ix)
                jy, sy = Y.act(g, b, iy)
                out.append((pos[d][f"S|{a}.{jx}|{b}.{jy}"], sx * sy))
            per[d] = out
        action[g] = per
    return GCWComplex(G, cells, boundary, action, based=True,
                      basepoint="pt")


def induce(G, subgroup_elements, X):
    """G x_N X for a complex X over the subgroup N of G.

    ``subgroup_elements`` names N inside G; X must be the complex over the
    standalone copy produced by ``G.subgroup_as_group`` (same table).
    """
    nelems = _subgroup_elements(G, subgroup_elements)
    Ngrp, embed = G.subgroup_as_group(nelems)
    if X.group.table != Ngrp.table:
        raise IncompatibleGroups("complex is not over the named subgroup")
    local = {amb: i for i, amb in enumerate(embed)}
    cosets = G.left_cosets(nelems)
    cosets.sort(key=lambda c: c[0])
    reps = [c[0] for c in cosets]
    coset_of = {}
    for i, c in enumerate(cosets):
        for e in c:
            coset_of[e] = i
    k = len(reps)
    cells = {d: [f"t{j}|{c}" for j in range(k) for c in X.ids(d)]
             for d in X.dims()}
    boundary = {}
    for d in X.dims():
        if d == 0:
            continue
        mat = X.boundary_of(d)
        n = X.ncells(d)
        m = X.ncells(d - 1)
        rows = [[0] * (k * n) for _ in range(k * m)]
        for j in range(k):
            for c in range(n):
                for r in range(m):
                    if mat.rows[r][c]:
                        rows[j * m + r][j * n + c] = mat.rows[r][c]
        boundary[d] = Mat(rows, n=k * n)
    action = {}
    for g in range(G.order):
        per = {}
        for d in X.dims():
            n = X.ncells(d)
            out = [None] * (k * n)
            for j in range(k):
                z = G.mul(g, reps[j])
                jj = coset_of[z]
                nloc = local[G.mul(G.inv(reps[jj]), z)]
                for c in range(n):
                    img, s = X.act(nloc, d, c)
                    out[j * n + c] = (jj * n + img, s)
            per[d] = out
        action[g] = per
    return GCWComplex(G, cells, boundary, action)


# ---------------------------------------------------------------------------
# ordinary homology
# ---------------------------------------------------------------------------


def _drop_basepoint(sizes, boundaries, bp_index):
    """Remove the basepoint 0-cell from a raw chain complex."""
    sizes = dict(sizes)
    boundaries = dict(boundaries)
    sizes[0] -= 1
    if 1 in boundaries:
        mat = boundaries[1]
        rows = [r for i, r in enumerate(mat.rows) if i != bp_index]
        boundaries[1] = Mat(rows, n=mat.n) if rows else Mat.zero(0, mat.n)
    return sizes, boundaries


def _raw_homology(sizes, boundaries, top):
    out = []
    for d in range(top + 1):
        n = sizes.get(d, 0)
        d_out = boundaries.get(d, Mat.zero(sizes.get(d - 1, 0) if d else 0, n))
        d_in = boundaries.get(d + 1, Mat.zero(n, sizes.get(d + 1, 0)))
        if n == 0:
            out.append(_ZERO)
            continue
        out.append(homology_structure(d_out, d_in))
    return HomologyResult(tuple(out))


def underlying_homology(X, reduced=False):
    """Ordinary integer homology of the underlying complex."""
    sizes = {d: X.ncells(d) for d in X.dims()}
    boundaries = {d: X.boundary_of(d) for d in X.dims() if d > 0}
    if reduced:
        bp = X.basepoint_index()
        sizes, boundaries = _drop_basepoint(sizes, boundaries, bp)
    return _raw_homology(sizes, boundaries, X.top)


# ---------------------------------------------------------------------------
# Bredon homology and cohomology
# ---------------------------------------------------------------------------


def _fp_homology_at(n, rels_here, d_out, rels_out, d_in):
    """ker(d_out mod rels_out) / (im d_in + rels_here) for integer data.

    Presents homology of a complex of finitely presented abelian groups:
    each chain group is Z^n modulo torsion relation columns.
    """
    if n == 0:
        return _ZERO
    window = d_out if rels_out.n == 0 else d_out.hstack(rels_out)
    kern = kernel_basis(window)
    cycle_cols = [kern.col(j)[:n] for j in range(kern.n)]
    cycles = (Mat.from_cols(cycle_cols, m=n) if cycle_cols
              else Mat.zero(n, 0))
    solver = IntSolver(cycles)
    rel_cols = []
    for j in range(d_in.n):
        y = solver.solve(d_in.col(j))
        if y is None:
            raise GCWError("differential image escapes the cycle lattice")
        rel_cols.append(y)
    for j in range(rels_here.n):
        y = solver.solve(rels_here.col(j))
        if y is None:
            raise GCWError("torsion relation escapes the cycle lattice")
        rel_cols.append(y)
    rel = (Mat.from_cols(rel_cols, m=cycles.n) if rel_cols
           else Mat.zero(cycles.n, 0))
    return FPAbelian(cycles.n, rel).structure


def _assemble_bredon(X, M, level, reduced):
    lat = M.lattice
    if X.group != lat.group:
        raise IncompatibleGroups("complex and coefficients disagree on G")
    _require_genuine(X, "Bredon (co)homology")
    elements = _subgroup_elements(X.group, level)
    if reduced and not X.based:
        raise NotBased("reduced homology needs a based complex")
    summands = []       # per degree: list of (rep, stab_idx, offset)
    orbit_info = []     # per degree: (reps, transversal, orbit_of)
    for d in X.dims():
        reps, transversal, orbit_of = _orbit_data(X, d, elements)
        keep = list(range(len(reps)))
        if reduced and d == 0:
            # the basepoint is fixed, so its orbit is a singleton
            keep = [o for o in keep if o != orbit_of[X.basepoint_index()]]
        degree = []
        offset = 0
        for o in keep:
            rep = reps[o]
            stab = X.stabilizer(d, rep, elements)
            idx = lat.index_of(stab)
            degree.append((rep, o, idx, offset))
            offset += M.level(idx).ngens
        summands.append(degree)
        orbit_info.append((reps, transversal, orbit_of))
    ngens = [sum(M.level(idx).ngens for (_r, _o, idx, _off) in deg)
             for deg in summands]
    rels = []
    for deg in summands:
        cols = []
        width = sum(M.level(idx).ngens for (_r, _o, idx, _off) in deg)
        for (_rep, _o, idx, off) in deg:
            lv = M.level(idx)
            for t_i, t in enumerate(lv.torsion):
                col = [0] * width
                col[off + t_i] = t
                cols.append(col)
        rels.append(Mat.from_cols(cols, m=width) if cols
                    else Mat.zero(width, 0))
    return summands, orbit_info, ngens, rels, elements


def _bredon_diff(X, M, summands, orbit_info, ngens, elements):
    """Block differentials between assembled degrees (homology side)."""
    G = X.group
    lat = M.lattice
    diffs = [Mat.zero(0, ngens[0] if ngens else 0)]
    for d in range(1, len(summands)):
        rows_n = ngens[d - 1]
        cols_n = ngens[d]
        reps_lo, trans_lo, orbit_lo = orbit_info[d - 1]
        lower = {o: (idx, off) for (_rep, o, idx, off) in summands[d - 1]}
        mat = X.boundary_of(d)
        block = [[0] * cols_n for _ in range(rows_n)]
        for (rep, _o, s_idx, col_off) in summands[d]:
            for i in range(mat.m):
                a = mat.rows[i][rep]
                if not a:
                    continue
                o_lo = orbit_lo[i]
                if o_lo not in lower:
                    continue            # basepoint summand dropped
                g_i, s_i = trans_lo[i]
                f_idx = lat.index_of(X.stabilizer(d - 1, i, elements))
                up = M.tr(s_idx, f_idx)
                _tgt, cmat = M.conj(G.inv(g_i), f_idx)
                piece = cmat.mul(up)
                row_off = lower[o_lo][1]
                coef = a * s_i
                for r in range(piece.m):
                    prow = piece.rows[r]
                    brow = block[row_off + r]
                    for c in range(piece.n):
                        if prow[c]:
                            brow[col_off + c] += coef * prow[c]
        diffs.append(Mat(block, n=cols_n))
    return diffs


def bredon_homology(X, M, level=None, reduced=False):
    """Bredon homology with Mackey coefficients at the given level.

    One copy of M(G/S) per orbit of cells (S the stabilizer inside the
    level subgroup); the differential composes the geometric boundary with
    transfers up the isotropy inclusion and conjugation back to the orbit
    representative.
    """
    summands, orbit_info, ngens, rels, elements = \
        _assemble_bredon(X, M, level, reduced)
    if not summands:
        return HomologyResult(())
    diffs = _bredon_diff(X, M, summands, orbit_info, ngens, elements)
    out = []
    top = len(summands) - 1
    for d in range(top + 1):
        d_out = diffs[d] if d > 0 else Mat.zero(0, ngens[0])
        rels_out = rels[d - 1] if d > 0 else Mat.zero(0, 0)
        d_in = diffs[d + 1] if d < top else Mat.zero(ngens[d], 0)
        out.append(_fp_homology_at(ngens[d], rels[d], d_out, rels_out, d_in))
    return HomologyResult(tuple(out))


def bredon_cohomology(X, M, level=None, reduced=False):
    """Bredon cohomology: same summands, restriction maps, arrows up."""
    summands, orbit_info, ngens, rels, elements = \
        _assemble_bredon(X, M, level, reduced)
    if not summands:
        return HomologyResult(())
    G = X.group
    lat = M.lattice
    top = len(summands) - 1
    codiffs = {}        # codiffs[d]: degree d -> d+1
    for d in range(1, top + 1):
        rows_n = ngens[d]
        cols_n = ngens[d - 1]
        reps_lo, trans_lo, orbit_lo = orbit_info[d - 1]
        lower = {o: (idx, off) for (_rep, o, idx, off) in summands[d - 1]}
        mat = X.boundary_of(d)
        block = [[0] * cols_n for _ in range(rows_n)]
        for (rep, _o, s_idx, row_off) in summands[d]:
            for i in range(mat.m):
                a = mat.rows[i][rep]
                if not a:
                    continue
                o_lo = orbit_lo[i]
                if o_lo not in lower:
                    continue
                g_i, s_i = trans_lo[i]
                f_idx = lat.index_of(X.stabilizer(d - 1, i, elements))
                src_idx, col_off = lower[o_lo]
                _tgt, cmat = M.conj(g_i, src_idx)
                piece = M.res(f_idx, s_idx).mul(cmat)
                coef = a * s_i
                for r in range(piece.m):
                    prow = piece.rows[r]
                    brow = block[row_off + r]
                    for c in range(piece.n):
                        if prow[c]:
                            brow[col_off + c] += coef * prow[c]
        codiffs[d - 1] = Mat(block, n=cols_n)
    out = []
    for d in range(top + 1):
        d_out = codiffs.get(d, Mat.zero(0, ngens[d]))          # d -> d+1
        rels_out = rels[d + 1] if d < top else Mat.zero(0, 0)
        d_in = codiffs.get(d - 1, Mat.zero(ngens[d], 0))       # d-1 -> d
        out.append(_fp_homology_at(ngens[d], rels[d], d_out, rels_out, d_in))
    return HomologyResult(tuple(out))


# ---------------------------------------------------------------------------
# marks-style homology formulas
# ---------------------------------------------------------------------------

_LATTICE_CACHE = {}


def _lattice_for(group):
    key = group.table
    if key not in _LATTICE_CACHE:
        _LATTICE_CACHE[key] = subgroup_lattice(group)
    return _LATTICE_CACHE[key]


def _fixed_raw(X, kelems):
    """Index lists and boundaries of the pointwise K-fixed subcomplex."""
    fixed = {}
    for d in X.dims():
        keep = []
        for i in range(X.ncells(d)):
            imgs = [X.act(k, d, i) for k in kelems]
            if all(p == (i, 1) for p in imgs):
                keep.append(i)
            elif any(p == (i, -1) for p in imgs):
                raise NonGenuineAction("fixed-cell scan hit a sign -1 "
                                       "self-image")
        fixed[d] = keep
    return fixed


def _quotient_of_fixed(X, fixed, nelems):
    """Chain data of X^K / N, for N normalizing the fixed structure."""
    sizes = {}
    boundaries = {}
    orbit_maps = {}
    for d in X.dims():
        keep = fixed[d]
        pos = {i: k for k, i in enumerate(keep)}
        reps = []
        trans = [None] * len(keep)
        orb = [None] * len(keep)
        for k, i in enumerate(keep):
            if trans[k] is not None:
                continue
            o = len(reps)
            reps.append(i)
            trans[k] = (0, 1)
            orb[k] = o
            queue = [i]
            while queue:
                j = queue.pop()
                gj, sj = trans[pos[j]]
                for g in nelems:
                    c, s = X.act(g, d, j)
                    if c not in pos:
                        raise NonGenuineAction("normalizer moves fixed "
                                               "cells off the fixed part")
                    kk = pos[c]
                    tot = (X.group.mul(g, gj), s * sj)
                    if trans[kk] is None:
                        trans[kk] = tot
                        orb[kk] = o
                        queue.append(c)
                    elif trans[kk][1] != tot[1]:
                        raise NonGenuineAction(
                            "orientation-reversing symmetry in the Weyl "
                            "quotient")
        sizes[d] = len(reps)
        orbit_maps[d] = (pos, trans, orb, reps)
    for d in X.dims():
        if d == 0:
            continue
        mat = X.boundary_of(d)
        pos_lo, trans_lo, orb_lo, reps_lo = orbit_maps[d - 1]
        _pos, _trans, _orb, reps = orbit_maps[d]
        rows = [[0] * len(reps) for _ in reps_lo]
        for c, rep in enumerate(reps):
            for i in range(mat.m):
                a = mat.rows[i][rep]
                if a:
                    k = pos_lo[i]
                    rows[orb_lo[k]][c] += a * trans_lo[k][1]
        boundaries[d] = Mat(rows, n=len(reps))
    return sizes, boundaries, orbit_maps


def burnside_homology_formula(X, level=None, reduced=False):
    """Direct sum over subgroup classes K of H_*(X^K / W_L K).

    The marks-style formula for Bredon homology with Burnside-functor
    coefficients; computing it independently of the orbit-category
    assembly is the module's main cross-check.
    """
    _require_genuine(X, "the subgroup-classes homology formula")
    lat = _lattice_for(X.group)
    elements = _subgroup_elements(X.group, level)
    lv = br.level_data(lat, lat.index_of(elements))
    parts = [[] for _ in range(X.top + 1)]
    for k_idx in lv.reps:
        kelems = lat.subgroups[k_idx].elements
        fixed = _fixed_raw(X, kelems)
        norm = tuple(g for g in elements
                     if X.group.conjugate_subset(g, kelems) == kelems)
        sizes, boundaries, _maps = _quotient_of_fixed(X, fixed, norm)
        if reduced:
            bp = X.basepoint_index()
            _pos, _trans, orb, reps = _maps[0]
            bpos = _pos[bp]
            sizes, boundaries = _drop_basepoint(sizes, boundaries, orb[bpos])
        res = _raw_homology(sizes, boundaries, X.top)
        for d in range(X.top + 1):
            parts[d].append(res.at(d))
    return HomologyResult(tuple(_direct_sum(p) for p in parts))


def n_f_homology(X, family, level=None, invert=(), reduced=False):
    """The out-of-family part: sum of H_*(X^K / W_L K) over class
    representatives K *not* in the family, optionally with some primes
    inverted (their torsion dropped)."""
    _require_genuine(X, "the out-of-family homology formula")
    lat = family.lattice
    if lat.group != X.group:
        raise IncompatibleGroups("family and complex disagree on the group")
    elements = _subgroup_elements(X.group, level)
    lv = br.level_data(lat, lat.index_of(elements))
    member_classes = set(family.classIndices)
    parts = [[] for _ in range(X.top + 1)]
    for k_idx in lv.reps:
        if lat.class_of(k_idx) in member_classes:
            continue
        kelems = lat.subgroups[k_idx].elements
        fixed = _fixed_raw(X, kelems)
        norm = tuple(g for g in elements
                     if X.group.conjugate_subset(g, kelems) == kelems)
        sizes, boundaries, _maps = _quotient_of_fixed(X, fixed, norm)
        if reduced:
            bp = X.basepoint_index()
            _pos, _trans, orb, reps = _maps[0]
            sizes, boundaries = _drop_basepoint(sizes, boundaries,
                                                orb[_pos[bp]])
        res = _raw_homology(sizes, boundaries, X.top)
        for d in range(X.top + 1):
            parts[d].append(res.at(d))
    total = [_direct_sum(p) for p in parts]
    if invert:
        total = [_strip_primes(s, tuple(invert)) for s in total]
    return HomologyResult(tuple(total))


# ---------------------------------------------------------------------------
# induced maps on homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InducedHomologyMap:
    """One degree of an induced map, in reduced homology coordinates
    (torsion coordinates first, then free ones, on each side)."""

    degree: int
    source: AbelianStructure
    target: AbelianStructure
    matrix: Mat

    def is_identity(self):
        return (self.source == self.target
                and self.matrix == Mat.identity(self.matrix.n))

    def is_minus_identity(self):
        if self.source != self.target or self.matrix.m != self.matrix.n:
            return False
        minus = Mat.identity(self.matrix.n).scale(-1)
        # compare entrywise modulo torsion orders on torsion coordinates
        tor = self.target.torsion
        k = len(tor)
        for i in range(self.matrix.m):
            for j in range(self.matrix.n):
                a = self.matrix.rows[i][j]
                b = minus.rows[i][j]
                if i < k and (a - b) % tor[i] == 0:
                    continue
                if a == b:
                    continue
                return False
        return True


def _chain_data(X, reduced):
    sizes = {d: X.ncells(d) for d in X.dims()}
    boundaries = {d: X.boundary_of(d) for d in X.dims() if d > 0}
    drop = None
    if reduced:
        drop = X.basepoint_index()
        sizes, boundaries = _drop_basepoint(sizes, boundaries, drop)
    return sizes, boundaries, drop


def induced_map_on_homology(X, cmap, reduced=False):
    """Matrices of the map a cellular self- (or cross-) map induces on
    each integer homology group, in Smith-form coordinates."""
    if cmap.source is not X:
        raise NotChainMap("the map's source is not the given complex")
    Y = cmap.target
    s_sizes, s_bnd, s_drop = _chain_data(X, reduced)
    t_sizes, t_bnd, t_drop = _chain_data(Y, reduced)
    out = {}
    top = max(X.top, Y.top)
    for d in range(top + 1):
        ns = s_sizes.get(d, 0)
        nt = t_sizes.get(d, 0)
        s_out = s_bnd.get(d, Mat.zero(s_sizes.get(d - 1, 0) if d else 0, ns))
        s_in = s_bnd.get(d + 1, Mat.zero(ns, 0))
        t_out = t_bnd.get(d, Mat.zero(t_sizes.get(d - 1, 0) if d else 0, nt))
        t_in = t_bnd.get(d + 1, Mat.zero(nt, 0))
        if ns == 0 and nt == 0:
            out[d] = InducedHomologyMap(d, _ZERO, _ZERO, Mat.zero(0, 0))
            continue
        hs = HomologyData(s_out, s_in)
        ht = HomologyData(t_out, t_in)
        fmat = cmap.matrix(d)
        if reduced:
            rows = [r for i, r in enumerate(fmat.rows)
                    if not (d == 0 and i == t_drop)]
            cols_keep = [j for j in range(fmat.n)
                         if not (d == 0 and j == s_drop)]
            fmat = Mat([[r[j] for j in cols_keep] for r in rows],
                       n=len(cols_keep))
        width = (len(hs.group.torsion_coords)
                 + len(hs.group.free_coords))
        cols = []
        for k in range(width):
            coords = [0] * width
            coords[k] = 1
            z = hs.representative(coords)
            img = fmat.apply(z)
            cols.append(ht.class_of(img))
        height = len(ht.group.torsion_coords) + len(ht.group.free_coords)
        mat = Mat.from_cols(cols, m=height) if cols else Mat.zero(height, 0)
        out[d] = InducedHomologyMap(d, hs.structure, ht.structure, mat)
    return out


# ---------------------------------------------------------------------------
# orbit-map certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitLevelCheck:
    subgroup: tuple
    commutantOrder: int
    sectionIsChainMap: bool
    compositeIsScalar: bool
    cokernel: tuple                 # AbelianStructure per degree
    cokernelAnnihilated: bool
    isoAtLevel: object              # True/False, or None when not asserted

    def ok(self):
        return (self.sectionIsChainMap and self.compositeIsScalar
                and self.cokernelAnnihilated
                and self.isoAtLevel is not False)


@dataclass(frozen=True)
class OrbitMapReport:
    mode: str                       # "prime-free" or "subconjugate"
    normalOrder: int
    torsionPrimes: tuple
    levels: tuple

    def ok(self):
        return all(lv.ok() for lv in self.levels)

    def level_for(self, subgroup_elements):
        key = tuple(sorted(subgroup_elements))
        for lv in self.levels:
            if lv.subgroup == key:
                return lv
        raise KeyError(key)

    def to_json(self):
        return {
            "mode": self.mode,
            "normalOrder": self.normalOrder,
            "torsionPrimes": list(self.torsionPrimes),
            "ok": self.ok(),
            "levels": [{
                "subgroup": list(lv.subgroup),
                "commutantOrder": lv.commutantOrder,
                "sectionIsChainMap": lv.sectionIsChainMap,
                "compositeIsScalar": lv.compositeIsScalar,
                "cokernel": [{"rank": s.rank, "torsion": list(s.torsion)}
                             for s in lv.cokernel],
                "cokernelAnnihilated": lv.cokernelAnnihilated,
                "isoAtLevel": lv.isoAtLevel,
            } for lv in self.levels],
        }


def _structure_quotient(target_data, image_cols):
    """Cokernel structure of a subgroup generated by reduced coordinates."""
    group = target_data.group
    width = len(group.torsion_coords) + len(group.free_coords)
    cols = []
    for k, t in enumerate(group.structure.torsion):
        col = [0] * width
        col[k] = t
        cols.append(col)
    cols.extend(image_cols)
    rel = Mat.from_cols(cols, m=width) if cols else Mat.zero(width, 0)
    return FPAbelian(width, rel).structure


def orbit_map_checks(X, decomposition):
    """Certify the homology behaviour of X -> X/G1 for G = G2 |x G1.

    Checks, per subgroup H of the complement: the cellular section that
    sums the commutant translates of an H-fixed preimage cell is a chain
    map; composing with the projection multiplies chains by the commutant
    order; the cokernel of the induced map on homology is annihilated by
    the primes of |G1|.  When G1 has prime order and acts freely on cells,
    the fixed-level maps for nontrivial H are certified to be
    isomorphisms.  Isotropy hypotheses are checked, not assumed.
    """
    G = X.group
    g1 = tuple(sorted(decomposition.normalPart.elements))
    g2 = tuple(sorted(decomposition.complement.elements))
    if (not G.is_subgroup(g1) or not G.is_subgroup(g2)
            or not G.is_normal(g1)
            or len(g1) * len(g2) != G.order
            or set(g1) & set(g2) != {0}):
        raise IncompatibleGroups(
            "the decomposition does not describe the acting group")
    _require_genuine(X, "orbit-map certificates")
    lat = _lattice_for(G)
    g2_class = lat.class_of(lat.index_of(g2))
    for d in X.dims():
        for i in range(X.ncells(d)):
            stab = X.stabilizer(d, i)
            inter = set(stab) & set(g1)
            if len(inter) == len(g1):
                continue        # the normal part fixes this cell: 1:1 below
            if len(inter) > 1:
                raise HypothesisViolated(
                    f"a dim-{d} cell has intermediate isotropy in the "
                    f"normal part")
            s_class = lat.class_of(lat.index_of(stab))
            if not lat.is_subconjugate(s_class, g2_class):
                raise HypothesisViolated(
                    f"a dim-{d} cell has isotropy not subconjugate to the "
                    f"complement")
    primes = prime_factors(len(g1))
    prime_free = len(g1) in primes
    mode = "prime-free" if prime_free else "subconjugate"

    # quotient by G1, remembering projections
    per_dim = {d: _orbit_data(X, d, g1) for d in X.dims()}
    q_sizes = {d: len(per_dim[d][0]) for d in X.dims()}
    q_bnd = {}
    for d in X.dims():
        if d == 0:
            continue
        reps, transversal, orbit_of = per_dim[d]
        reps_lo, trans_lo, orbit_lo = per_dim[d - 1]
        mat = X.boundary_of(d)
        rows = [[0] * len(reps) for _ in reps_lo]
        for c, rep in enumerate(reps):
            for i in range(mat.m):
                a = mat.rows[i][rep]
                if a:
                    rows[orbit_lo[i]][c] += a * trans_lo[i][1]
        q_bnd[d] = Mat(rows, n=len(reps))

    levels = []
    for h_idx in lat.subgroups_of(lat.index_of(g2)):
        helems = lat.subgroups[h_idx].elements
        fixed = _fixed_raw(X, helems)
        # H-fixed orbit cells in the quotient (residual action)
        q_fixed = {}
        for d in X.dims():
            reps, transversal, orbit_of = per_dim[d]
            keep = []
            for o, rep in enumerate(reps):
                good = True
                for h in helems:
                    c, s = X.act(h, d, rep)
                    oo = orbit_of[c]
                    sign = s * transversal[c][1]
                    if oo != o:
                        good = False
                        break
                    if sign != 1:
                        raise NonGenuineAction(
                            "residual symmetry reverses a quotient cell")
                if good:
                    keep.append(o)
            q_fixed[d] = keep
        commutant = tuple(g for g in g1
                          if all(G.mul(g, h) == G.mul(h, g)
                                 for h in helems))
        ph = len(commutant)
        # chain data of both fixed complexes
        fx_pos = {d: {i: k for k, i in enumerate(fixed[d])}
                  for d in X.dims()}
        qx_pos = {d: {o: k for k, o in enumerate(q_fixed[d])}
                  for d in X.dims()}
        fx_bnd = {}
        qx_bnd = {}
        for d in X.dims():
            if d == 0:
                continue
            mat = X.boundary_of(d)
            rows = [[mat.rows[i][j] for j in fixed[d]]
                    for i in fixed[d - 1]]
            fx_bnd[d] = Mat(rows, n=len(fixed[d])) if rows else \
                Mat.zero(0, len(fixed[d]))
            qm = q_bnd.get(d)
            rows_q = [[qm.rows[o][j] for j in q_fixed[d]]
                      for o in q_fixed[d - 1]] if qm is not None else []
            qx_bnd[d] = Mat(rows_q, n=len(q_fixed[d])) if rows_q else \
                Mat.zero(0, len(q_fixed[d]))
        # projection matrices restricted to the fixed parts
        proj = {}
        for d in X.dims():
            reps, transversal, orbit_of = per_dim[d]
            rows = [[0] * len(fixed[d]) for _ in q_fixed[d]]
            for k, i in enumerate(fixed[d]):
                o = orbit_of[i]
                if o in qx_pos[d]:
                    rows[qx_pos[d][o]][k] += transversal[i][1]
            proj[d] = Mat(rows, n=len(fixed[d])) if rows else \
                Mat.zero(0, len(fixed[d]))
        # the section: sum of commutant translates of an H-fixed orbit rep
        section = {}
        section_ok = True
        for d in X.dims():
            reps, transversal, orbit_of = per_dim[d]
            cols = []
            for o in q_fixed[d]:
                member = None
                for i, oo in enumerate(orbit_of):
                    if oo == o and i in fx_pos[d]:
                        member = i
                        break
                if member is None:
                    raise HypothesisViolated(
                        f"an H-fixed quotient cell in dim {d} has no "
                        f"H-fixed preimage")
                col = [0] * len(fixed[d])
                for g in commutant:
                    c, s = X.act(g, d, member)
                    col[fx_pos[d][c]] += s
                cols.append(col)
            section[d] = Mat.from_cols(cols, m=len(fixed[d])) if cols \
                else Mat.zero(len(fixed[d]), 0)
        for d in X.dims():
            if d == 0:
                continue
            lhs = fx_bnd[d].mul(section[d])
            rhs = section[d - 1].mul(qx_bnd[d])
            if lhs != rhs:
                section_ok = False
        composite_ok = True
        for d in X.dims():
            comp = proj[d].mul(section[d])
            if comp != Mat.identity(len(q_fixed[d])).scale(ph):
                composite_ok = False
        # induced map on homology, cokernel per degree
        coker = []
        iso = None
        iso_flags = []
        for d in X.dims():
            ns = len(fixed[d])
            nt = len(q_fixed[d])
            s_out = fx_bnd.get(d, Mat.zero(len(fixed.get(d - 1, []))
                                           if d else 0, ns))
            s_in = fx_bnd.get(d + 1, Mat.zero(ns, 0))
            t_out = qx_bnd.get(d, Mat.zero(len(q_fixed.get(d - 1, []))
                                           if d else 0, nt))
            t_in = qx_bnd.get(d + 1, Mat.zero(nt, 0))
            hs = HomologyData(s_out, s_in)
            ht = HomologyData(t_out, t_in)
            width = (len(hs.group.torsion_coords)
                     + len(hs.group.free_coords))
            image_cols = []
            for k in range(width):
                coords = [0] * width
                coords[k] = 1
                z = hs.representative(coords)
                image_cols.append(ht.class_of(proj[d].apply(z)))
            cok = _structure_quotient(ht, image_cols)
            coker.append(cok)
            iso_flags.append(cok.is_zero()
                             and hs.structure == ht.structure)
        annihilated = all(
            s.rank == 0 and all(set(prime_factors(t)) <= set(primes)
                                for t in s.torsion)
            for s in coker)
        if prime_free and helems != (0,):
            iso = all(iso_flags)
        levels.append(OrbitLevelCheck(
            subgroup=tuple(helems),
            commutantOrder=ph,
            sectionIsChainMap=section_ok,
            compositeIsScalar=composite_ok,
            cokernel=tuple(coker),
            cokernelAnnihilated=annihilated,
            isoAtLevel=iso))
    return OrbitMapReport(mode=mode, normalOrder=len(g1),
                          torsionPrimes=tuple(primes),
                          levels=tuple(levels))

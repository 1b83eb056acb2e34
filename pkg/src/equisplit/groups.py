"""Finite groups as explicit multiplication tables.

Everything downstream (Burnside rings, Mackey functors, Bredon homology)
works relative to a fixed ambient group G and its poset of subgroups, so the
group theory here is kept deliberately concrete: a group is a full
multiplication table on element indices 0..n-1, a subgroup is a sorted tuple
of indices, and the subgroup lattice is enumerated once with its conjugation
structure.  At the order cap (512) nothing needs to be clever; correctness
and determinism beat asymptotics.

Conventions used throughout the package:

* element 0 is the identity;
* dihedral groups of order 2m are generated by a rotation ``z`` (element 1)
  and a reflection ``t`` (element m), satisfying z^m = t^2 = 1 and
  z*t = t*z^(-1);
* semidirect products N x| H index elements as n + |N|*h, so the normal
  factor occupies the first |N| indices and the complement meets it only
  at the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

DEFAULT_ORDER_CAP = 512


class GroupError(Exception):
    """Base class for errors raised while building or decomposing groups."""


class NonAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    # not in the headline error list but a table can fail this way too
    # (finite monoids exist); kept separate so the message is honest.
    pass


class BadAction(GroupError):
    """Semidirect-product action is not by automorphisms."""


class OrderCapExceeded(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotCoprime(GroupError):
    pass


class BadDecomposition(GroupError):
    pass


# ---------------------------------------------------------------------------
# the group itself
# ---------------------------------------------------------------------------


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[a][b]`` is the index of the product a*b.  Element 0 must be the
    identity.  Validation checks the whole table: Latin-square property,
    two-sided identity, two-sided inverses, and associativity on all n^3
    triples (vectorized; a quarter-billion lookups at the cap is fine for
    numpy, hopeless for a Python loop).

    >>> C2 = cyclic(2)
    >>> C2.mul(1, 1)
    0
    >>> C2.inv(1)
    1
    """

    __slots__ = ("table", "order", "label", "element_names", "_inv", "_np")

    def __init__(self, table, label="G", element_names=None, validate=True,
                 cap=DEFAULT_ORDER_CAP):
        tab = tuple(tuple(int(x) for x in row) for row in table)
        n = len(tab)
        if n == 0:
            raise NoIdentity("empty multiplication table")
        if n > cap:
            raise OrderCapExceeded(f"order {n} exceeds cap {cap}")
        self.table = tab
        self.order = n
        self.label = str(label)
        if element_names is not None:
            element_names = tuple(element_names)
            if len(element_names) != n:
                raise ValueError("element_names length mismatch")
        self.element_names = element_names
        arr = np.array(tab, dtype=np.int32)
        if arr.shape != (n, n) or arr.min() < 0 or arr.max() >= n:
            raise GroupError("table is not a total operation on 0..n-1")
        self._np = arr
        if validate:
            self._validate(arr)
        inv = [None] * n
        for a in range(n):
            b = int(np.where(arr[a] == 0)[0][0])
            if tab[b][a] != 0:
                raise NoInverse(f"element {a} has no two-sided inverse")
            inv[a] = b
        self._inv = tuple(inv)

    def _validate(self, arr):
        n = self.order
        rng = np.arange(n, dtype=np.int32)
        if not (np.array_equal(arr[0], rng) and np.array_equal(arr[:, 0], rng)):
            raise NoIdentity("element 0 is not a two-sided identity")
        # Latin square: every row and column is a permutation.
        if not (np.array_equal(np.sort(arr, axis=1), np.tile(rng, (n, 1)))
                and np.array_equal(np.sort(arr, axis=0), np.tile(rng, (n, 1)).T)):
            raise NoInverse("table rows/columns are not permutations")
        # associativity, one row of 'a' at a time: (a*b)*c == a*(b*c)
        for a in range(n):
            left = arr[arr[a], :]      # [b,c] -> (a*b)*c
            right = arr[a][arr]        # [b,c] -> a*(b*c)
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                raise NonAssociative(
                    f"({a}*{b})*{c} != {a}*({b}*{c})")

    # -- basic arithmetic ---------------------------------------------------

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def conj(self, g, a):
        """g a g^-1."""
        t = self.table
        return t[t[g][a]][self._inv[g]]

    def element_order(self, a):
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def name_of(self, a):
        if self.element_names is not None:
            return self.element_names[a]
        return str(a)

    def is_abelian(self):
        return np.array_equal(self._np, self._np.T)

    # -- subsets ------------------------------------------------------------

    def closure(self, elements):
        """Subgroup generated by ``elements``, as a sorted tuple (contains 0)."""
        t = self.table
        seen = {0}
        work = [0]
        for e in elements:
            if e not in seen:
                seen.add(e)
                work.append(e)
        # product-closure worklist; inverses come for free in a finite group
        i = 0
        while i < len(work):
            a = work[i]
            i += 1
            for b in list(seen):
                for c in (t[a][b], t[b][a]):
                    if c not in seen:
                        seen.add(c)
                        work.append(c)
        return tuple(sorted(seen))

    def is_subgroup(self, elements):
        s = set(elements)
        if 0 not in s:
            return False
        return all(self.table[a][b] in s for a in s for b in s)

    def is_normal(self, elements):
        s = set(elements)
        return all(self.conj(g, a) in s for g in range(self.order) for a in s)

    def conjugate_subset(self, g, elements):
        return tuple(sorted(self.conj(g, a) for a in elements))

    def left_cosets(self, elements):
        """Left cosets gH, each a sorted tuple, ordered by minimal element."""
        t = self.table
        rem = set(range(self.order))
        out = []
        while rem:
            g = min(rem)
            cos = tuple(sorted(t[g][h] for h in elements))
            out.append(cos)
            rem -= set(cos)
        return out

    def centralizer(self, elements):
        t = self.table
        return tuple(g for g in range(self.order)
                     if all(t[g][h] == t[h][g] for h in elements))

    def normalizer_of(self, elements):
        s = tuple(sorted(elements))
        return tuple(g for g in range(self.order)
                     if self.conjugate_subset(g, s) == s)

    # -- derived groups -----------------------------------------------------

    def subgroup_as_group(self, elements, label=None):
        """Relabel a subgroup as a standalone FiniteGroup.

        Returns ``(group, embed)`` where ``embed[i]`` is the ambient index of
        the new group's element i.  Element 0 stays the identity.
        """
        elems = sorted(elements)
        if elems[0] != 0 or not self.is_subgroup(elems):
            raise GroupError("not a subgroup")
        pos = {e: i for i, e in enumerate(elems)}
        tab = [[pos[self.table[a][b]] for b in elems] for a in elems]
        names = None
        if self.element_names is not None:
            names = [self.element_names[e] for e in elems]
        lab = label or f"{self.label}|{{{len(elems)} elts}}"
        g = FiniteGroup(tab, label=lab, element_names=names, validate=False)
        return g, tuple(elems)

    def quotient_group(self, normal_elements, label=None):
        """G/N.  Returns ``(group, cosets, proj)`` with proj[g] the coset index."""
        n = tuple(sorted(normal_elements))
        if not self.is_normal(n):
            raise NotNormal("quotient by a non-normal subgroup")
        cosets = self.left_cosets(n)
        # identity coset must come first for index-0 convention
        cosets.sort(key=lambda c: (0 not in c, c))
        pos = {}
        for i, c in enumerate(cosets):
            for e in c:
                pos[e] = i
        reps = [c[0] if 0 not in c else 0 for c in cosets]
        tab = [[pos[self.table[a][b]] for b in reps] for a in reps]
        lab = label or f"{self.label}/N{len(n)}"
        q = FiniteGroup(tab, label=lab, validate=False)
        return q, cosets, pos

    # -- serialization ------------------------------------------------------

    def to_json(self):
        d = {"label": self.label, "order": self.order,
             "table": [list(r) for r in self.table]}
        if self.element_names is not None:
            d["element_names"] = list(self.element_names)
        return d

    def __repr__(self):
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def from_table(table, label="G", cap=DEFAULT_ORDER_CAP):
    return FiniteGroup(table, label=label, cap=cap)


def cyclic(n, label=None):
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    tab = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["1"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)]
    return FiniteGroup(tab, label=label or f"C{n}",
                       element_names=names, validate=False)


def dihedral(order, label=None):
    """Dihedral group of the given (even) order 2m.

    Element i < m is the rotation z^i; element m+i is z^i * t.  The
    generators satisfy z^m = t^2 = 1 and z*t = t*z^(-1), so conjugating the
    rotation by the reflection inverts it.
    """
    if order % 2 or order < 2:
        raise GroupError("dihedral order must be even and >= 2")
    m = order // 2

    def idx(r, s):
        return r % m + m * s

    tab = [[0] * order for _ in range(order)]
    for r1, s1, r2, s2 in itertools.product(range(m), (0, 1), range(m), (0, 1)):
        # (z^r1 t^s1)(z^r2 t^s2) = z^(r1 + (-1)^s1 r2) t^(s1+s2)
        r = r1 + (r2 if s1 == 0 else -r2)
        tab[idx(r1, s1)][idx(r2, s2)] = idx(r, (s1 + s2) % 2)
    names = []
    for s in (0, 1):
        for r in range(m):
            base = "1" if r == 0 else ("z" if r == 1 else f"z^{r}")
            if s == 0:
                names.append(base)
            else:
                names.append("t" if r == 0 else f"{base}*t")
    return FiniteGroup(tab, label=label or f"D{order}",
                       element_names=names, validate=False)


def _perm_mul(a, b):
    # composition a after b, acting on the left: (a*b)(x) = a(b(x))
    return tuple(a[x] for x in b)


def from_permutations(generators, degree=None, label="G", cap=DEFAULT_ORDER_CAP):
    """Close a set of permutations (images lists) under composition.

    The identity gets index 0; the rest are discovered breadth-first, which
    is deterministic for a fixed generator list.
    """
    gens = [tuple(g) for g in generators]
    if degree is None:
        degree = max((len(g) for g in gens), default=1)
    gens = [g + tuple(range(len(g), degree)) for g in gens]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise GroupError(f"not a permutation of 0..{degree - 1}: {g}")
    ident = tuple(range(degree))
    elems = [ident]
    pos = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _perm_mul(p, g)
                if q not in pos:
                    if len(elems) >= cap:
                        raise OrderCapExceeded(
                            f"permutation closure exceeds cap {cap}")
                    pos[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(elems)
    tab = [[pos[_perm_mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(tab, label=label, validate=False, cap=cap)


def symmetric(n, label=None, cap=DEFAULT_ORDER_CAP):
    if n < 1:
        raise GroupError("symmetric group needs n >= 1")
    if n == 1:
        return cyclic(1, label=label or "S1")
    gens = [tuple([1, 0] + list(range(2, n))),
            tuple(list(range(1, n)) + [0])]
    return from_permutations(gens, degree=n, label=label or f"S{n}", cap=cap)


def alternating(n, label=None, cap=DEFAULT_ORDER_CAP):
    if n < 3:
        return cyclic(1, label=label or f"A{n}")
    three = tuple([1, 2, 0] + list(range(3, n)))
    if n == 3:
        gens = [three]
    elif n % 2 == 1:
        gens = [three, tuple(list(range(1, n)) + [0])]          # n-cycle, even
    else:
        gens = [three, tuple([0] + list(range(2, n)) + [1])]    # (n-1)-cycle
    return from_permutations(gens, degree=n, label=label or f"A{n}", cap=cap)


def quaternion(label="Q8"):
    """The quaternion group of order 8: units {+-1, +-i, +-j, +-k}."""
    # element = (sign, axis), axis 0 means the scalar 1
    units = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    eps = {(1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
           (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}

    def qmul(u, v):
        s, x = u
        t_, y = v
        sign = s * t_
        if x == 0:
            return (sign, y)
        if y == 0:
            return (sign, x)
        if x == y:
            return (-sign, 0)
        e, z = eps[(x, y)]
        return (sign * e, z)

    pos = {u: i for i, u in enumerate(units)}
    tab = [[pos[qmul(u, v)] for v in units] for u in units]
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return FiniteGroup(tab, label=label, element_names=names, validate=False)


def direct_product(A, B, label=None, cap=DEFAULT_ORDER_CAP):
    """A x B, element (a, b) at index a*|B| + b."""
    n, m = A.order, B.order
    if n * m > cap:
        raise OrderCapExceeded(f"product order {n * m} exceeds cap {cap}")
    tab = [[0] * (n * m) for _ in range(n * m)]
    for a1, b1, a2, b2 in itertools.product(range(n), range(m), range(n), range(m)):
        tab[a1 * m + b1][a2 * m + b2] = A.table[a1][a2] * m + B.table[b1][b2]
    names = None
    if A.element_names is not None and B.element_names is not None:
        names = [f"({A.element_names[a]},{B.element_names[b]})"
                 for a in range(n) for b in range(m)]
    return FiniteGroup(tab, label=label or f"{A.label}x{B.label}",
                       element_names=names, validate=False, cap=cap)


def semidirect_product(N, H, action, label=None, cap=DEFAULT_ORDER_CAP):
    """H acting on N: the group N x| H.

    ``action[h]`` is the permutation of N's elements giving the automorphism
    by which h acts.  Element (n, h) sits at index n + |N|*h, so the normal
    factor is the first |N| indices and {(0, h)} is the complement.
    Raises BadAction unless every action[h] is an automorphism of N and
    h -> action[h] is a homomorphism.
    """
    n, m = N.order, H.order
    if n * m > cap:
        raise OrderCapExceeded(f"product order {n * m} exceeds cap {cap}")
    act = [tuple(action[h]) for h in range(m)]
    for h, a in enumerate(act):
        if sorted(a) != list(range(n)) or a[0] != 0:
            raise BadAction(f"action of {h} is not an identity-fixing bijection")
        for x in range(n):
            for y in range(n):
                if a[N.table[x][y]] != N.table[a[x]][a[y]]:
                    raise BadAction(f"action of {h} is not multiplicative")
    for h1 in range(m):
        for h2 in range(m):
            comp = tuple(act[h1][act[h2][x]] for x in range(n))
            if comp != act[H.table[h1][h2]]:
                raise BadAction("action is not a homomorphism from H")
    tab = [[0] * (n * m) for _ in range(n * m)]
    for n1, h1, n2, h2 in itertools.product(range(n), range(m), range(n), range(m)):
        # (n1, h1)(n2, h2) = (n1 * h1.n2, h1 h2)
        tab[n1 + n * h1][n2 + n * h2] = \
            N.table[n1][act[h1][n2]] + n * H.table[h1][h2]
    return FiniteGroup(tab, label=label or f"{N.label}x|{H.label}",
                       validate=False, cap=cap)


def inversion_action(N):
    """The order-2 action n -> n^-1 (an automorphism when N is abelian)."""
    if not N.is_abelian():
        raise BadAction("inversion is only an automorphism of abelian groups")
    return [tuple(range(N.order)), tuple(N.inv(x) for x in range(N.order))]


def build_group(spec, cap=DEFAULT_ORDER_CAP):
    """Build a group from a JSON-style description.

    Accepted shapes::

        {"table": [[...]], "label": "G"}
        {"permutations": [[1,0,2], ...], "degree": 3, "label": "G"}
        {"constructor": "dihedral", "args": [6]}

    Constructor names: cyclic, dihedral, symmetric, alternating, quaternion,
    direct_product (args are nested specs), semidirect_inversion (args:
    [n, m] for C_m acting on C_n by inversion through its order-2 quotient —
    only m = 2 supported here).
    """
    if "table" in spec:
        return FiniteGroup(spec["table"], label=spec.get("label", "G"), cap=cap)
    if "permutations" in spec:
        return from_permutations(spec["permutations"], spec.get("degree"),
                                 label=spec.get("label", "G"), cap=cap)
    if "constructor" in spec:
        name = spec["constructor"]
        args = spec.get("args", [])
        label = spec.get("label")
        if name == "cyclic":
            return cyclic(*args, label=label)
        if name == "dihedral":
            return dihedral(*args, label=label)
        if name == "symmetric":
            return symmetric(*args, label=label, cap=cap)
        if name == "alternating":
            return alternating(*args, label=label, cap=cap)
        if name == "quaternion":
            return quaternion(label=label or "Q8")
        if name == "direct_product":
            a = build_group(args[0], cap=cap)
            b = build_group(args[1], cap=cap)
            return direct_product(a, b, label=label, cap=cap)
        if name == "semidirect_inversion":
            n = args[0]
            return semidirect_product(cyclic(n), cyclic(2),
                                      inversion_action(cyclic(n)),
                                      label=label, cap=cap)
        raise GroupError(f"unknown constructor {name!r}")
    raise GroupError("unrecognized group description")


def parse_group_shorthand(text, cap=DEFAULT_ORDER_CAP):
    """CLI shorthand: 'dihedral:6', 'cyclic:4', 'symmetric:4', 'A:4', 'Q8'."""
    text = text.strip()
    if text in ("Q8", "q8", "quaternion"):
        return quaternion()
    if ":" in text:
        name, _, arg = text.partition(":")
        name = {"C": "cyclic", "D": "dihedral", "S": "symmetric",
                "A": "alternating"}.get(name, name)
        return build_group({"constructor": name, "args": [int(arg)]}, cap=cap)
    # CnX style: C2, D6, S4, A4
    if len(text) >= 2 and text[0] in "CDSA" and text[1:].isdigit():
        name = {"C": "cyclic", "D": "dihedral",
                "S": "symmetric", "A": "alternating"}[text[0]]
        return build_group({"constructor": name, "args": [int(text[1:])]}, cap=cap)
    raise GroupError(f"cannot parse group shorthand {text!r}")


# ---------------------------------------------------------------------------
# subgroup lattice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, e):
        return e in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class SubgroupLattice:
    """All subgroups of G, with conjugation structure.

    ``subgroups`` is in canonical order (by order, then lexicographically by
    element tuple); every index elsewhere refers to this list.  ``conjClasses``
    partitions subgroup indices into conjugacy classes, each sorted, and
    ``classReps`` holds the least index of each class; classes themselves are
    ordered by their representative, which keeps downstream marks matrices
    deterministic.
    """

    group: FiniteGroup
    subgroups: tuple            # tuple[Subgroup]
    conjClasses: tuple          # tuple[tuple[int]]
    classReps: tuple            # tuple[int]
    normalizer: tuple           # tuple[Subgroup]
    weylOrder: tuple            # tuple[int]
    subconjugacy: tuple         # matrix over classes: subconjugacy[i][j] = class i <=_G class j
    _index: dict = field(repr=False, hash=False, compare=False)
    _classOf: tuple = field(repr=False, hash=False, compare=False)

    # -- lookups ------------------------------------------------------------

    def index_of(self, elements):
        key = tuple(sorted(elements))
        try:
            return self._index[key]
        except KeyError:
            raise GroupError(f"not a recorded subgroup: {key}") from None

    def class_of(self, sub_index):
        return self._classOf[sub_index]

    def conj_subgroup(self, g, sub_index):
        moved = self.group.conjugate_subset(g, self.subgroups[sub_index].elements)
        return self._index[moved]

    def contains(self, big, small):
        b = set(self.subgroups[big].elements)
        return all(e in b for e in self.subgroups[small].elements)

    def subgroups_of(self, sub_index):
        """Indices of subgroups contained in the given one, canonical order."""
        return tuple(i for i in range(len(self.subgroups))
                     if self.contains(sub_index, i))

    def full_group_index(self):
        return len(self.subgroups) - 1

    def trivial_index(self):
        return 0

    def is_subconjugate(self, class_small, class_big):
        return bool(self.subconjugacy[class_small][class_big])

    def to_json(self):
        return {
            "group": self.group.label,
            "subgroups": [list(s.elements) for s in self.subgroups],
            "conjClasses": [list(c) for c in self.conjClasses],
            "classReps": list(self.classReps),
            "normalizer": [list(s.elements) for s in self.normalizer],
            "weylOrder": list(self.weylOrder),
            "subconjugacy": [list(r) for r in self.subconjugacy],
        }


def subgroup_lattice(G, cap=DEFAULT_ORDER_CAP):
    """Enumerate all subgroups of G with conjugation data.

    Breadth-first closure over cyclic extensions: seed with all cyclic
    subgroups, then repeatedly join known subgroups with cyclic ones until
    nothing new appears.  Every subgroup is generated by cyclic subgroups,
    so this terminates with the full lattice.
    """
    if G.order > cap:
        raise OrderCapExceeded(f"|G| = {G.order} exceeds cap {cap}")
    cyclics = set()
    for g in range(G.order):
        cyclics.add(G.closure([g]))
    found = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        fresh = set()
        for H in frontier:
            hset = set(H)
            for C in cyclics:
                if set(C) <= hset:
                    continue
                J = G.closure(H + C)
                if J not in found:
                    found.add(J)
                    fresh.add(J)
        frontier = fresh
    subs = sorted(found, key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(subs)}

    # conjugacy classes of subgroups
    class_of = [None] * len(subs)
    classes = []
    for i, s in enumerate(subs):
        if class_of[i] is not None:
            continue
        orbit = set()
        for g in range(G.order):
            orbit.add(index[G.conjugate_subset(g, s)])
        orbit = tuple(sorted(orbit))
        for j in orbit:
            class_of[j] = len(classes)
        classes.append(orbit)
    # classes come out ordered by least member because subs are scanned in order
    reps = tuple(c[0] for c in classes)

    normalizers = []
    weyl = []
    for s in subs:
        nz = G.normalizer_of(s)
        normalizers.append(Subgroup(tuple(sorted(nz))))
        weyl.append(len(nz) // len(s))

    # subconjugacy over class representatives:
    # class i <= class j  iff some member of class i is contained in rep(j)
    nclasses = len(classes)
    subconj = [[0] * nclasses for _ in range(nclasses)]
    for ci, members in enumerate(classes):
        for cj in range(nclasses):
            big = set(subs[reps[cj]])
            if any(set(subs[m]) <= big for m in members):
                subconj[ci][cj] = 1

    return SubgroupLattice(
        group=G,
        subgroups=tuple(Subgroup(s) for s in subs),
        conjClasses=tuple(classes),
        classReps=reps,
        normalizer=tuple(normalizers),
        weylOrder=tuple(weyl),
        subconjugacy=tuple(tuple(r) for r in subconj),
        _index=index,
        _classOf=tuple(class_of),
    )


# ---------------------------------------------------------------------------
# semidirect decompositions and commutants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemidirectDecomposition:
    normalPart: Subgroup        # G_1
    complement: Subgroup        # G_2
    coprime: bool


def make_decomposition(G, normal_elements, complement_elements):
    """Validate and package G = G_2 |x G_1 (G_1 normal)."""
    n = tuple(sorted(normal_elements))
    k = tuple(sorted(complement_elements))
    if not (G.is_subgroup(n) and G.is_subgroup(k)):
        raise BadDecomposition("factors are not subgroups")
    if not G.is_normal(n):
        raise BadDecomposition("normal part is not normal")
    if set(n) & set(k) != {0}:
        raise BadDecomposition("factors intersect nontrivially")
    if len(n) * len(k) != G.order:
        raise BadDecomposition("orders do not multiply to |G|")
    return SemidirectDecomposition(
        normalPart=Subgroup(n), complement=Subgroup(k),
        coprime=gcd(len(n), len(k)) == 1)


def standard_semidirect_decomposition(G, normal_order):
    """The canonical decomposition for groups built by semidirect_product:
    normal part = first ``normal_order`` indices, complement = the multiples."""
    n = tuple(range(normal_order))
    k = tuple(range(0, G.order, normal_order))
    return make_decomposition(G, n, k)


@dataclass(frozen=True)
class CommutantData:
    """Commutant bookkeeping for a semidirect decomposition G = G_2 |x G_1.

    For K a subgroup of G_2, ``P(K)`` is the subgroup of G_1 commuting with
    all of K; dually ``Kp(P)`` for P a subgroup of G_1.  A subgroup K of G_2
    is *good* when K = Kp(P(K)); the set of good subgroups is ``good``
    (element tuples, canonical order).  ``goodP`` is the corresponding list
    on the G_1 side (P with P = P(Kp(P))).
    """

    group: FiniteGroup
    decomposition: SemidirectDecomposition
    subgroupsG2: tuple          # element tuples of all subgroups of G_2
    subgroupsG1: tuple
    P: dict                     # elements(K) -> elements(P_K)
    Kp: dict                    # elements(P) -> elements(K_P)
    good: tuple                 # element tuples: the G_1-good subgroups of G_2
    goodP: tuple                # element tuples: the G_2-good subgroups of G_1

    def divide_data(self, K):
        """For K in ``good``: the maximal proper good subgroups P_1..P_n of
        P_K together with all signed intersections.

        Returns ``(Ps, table)`` where ``Ps`` lists the maximal proper
        G_2-good subgroups of P_K and ``table`` maps each subset S of
        indices into Ps to ``(P_S, K_S)`` with P_S = P_K intersect the P_i,
        and K_S its commutant on the G_2 side.  S = () gives (P_K, K) back.
        """
        K = tuple(sorted(K))
        if K not in set(self.good):
            raise BadDecomposition(f"{K} is not a good subgroup")
        PK = self.P[K]
        inside = [p for p in self.goodP if set(p) < set(PK)]
        maximal = [p for p in inside
                   if not any(set(p) < set(q) for q in inside)]
        table = {}
        for r in range(len(maximal) + 1):
            for S in itertools.combinations(range(len(maximal)), r):
                cut = set(PK)
                for i in S:
                    cut &= set(maximal[i])
                PS = tuple(sorted(cut))
                table[S] = (PS, self.Kp[PS])
        return tuple(maximal), table


def commutant_data(G, D):
    """Compute P_K, K_P and the good-subgroup sets for G = G_2 |x G_1."""
    G1, G2 = D.normalPart, D.complement
    if not (G.is_subgroup(tuple(G1)) and G.is_subgroup(tuple(G2))
            and G.is_normal(tuple(G1))
            and set(G1) & set(G2) == {0}
            and len(G1) * len(G2) == G.order):
        raise BadDecomposition("invalid semidirect decomposition")

    subs2 = _subgroups_inside(G, tuple(G2))
    subs1 = _subgroups_inside(G, tuple(G1))
    t = G.table

    def commutant_in(ambient, K):
        return tuple(sorted(g for g in ambient
                            if all(t[g][h] == t[h][g] for h in K)))

    P = {}
    for K in subs2:
        P[K] = commutant_in(tuple(G1), K)
    Kp = {}
    for Q in subs1:
        Kp[Q] = commutant_in(tuple(G2), Q)
    # P_K is always a subgroup of G_1 (it is G_1 meet the centralizer), and
    # likewise K_P; record any P_K not among subs1 rather than trusting it.
    for K, PK in P.items():
        if PK not in set(subs1):
            raise BadDecomposition("commutant fell outside the subgroup list")
    for Q, KQ in Kp.items():
        if KQ not in set(subs2):
            raise BadDecomposition("commutant fell outside the subgroup list")

    good = tuple(K for K in subs2 if Kp[P[K]] == K)
    goodP = tuple(Q for Q in subs1 if P[Kp[Q]] == Q)
    return CommutantData(group=G, decomposition=D,
                         subgroupsG2=subs2, subgroupsG1=subs1,
                         P=P, Kp=Kp, good=good, goodP=goodP)


def _subgroups_inside(G, ambient_elements):
    """All subgroups of G contained in the given subgroup, canonical order."""
    amb = set(ambient_elements)
    sub, _ = G.subgroup_as_group(sorted(amb))
    lat = subgroup_lattice(sub)
    emb = sorted(amb)
    out = []
    for s in lat.subgroups:
        out.append(tuple(sorted(emb[i] for i in s.elements)))
    return tuple(sorted(set(out), key=lambda s: (len(s), s)))


# ---------------------------------------------------------------------------
# Schur–Zassenhaus complement search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplementReport:
    complements: tuple          # tuple of element tuples
    allConjugate: bool | None   # None = verdict withheld (hypothesis failed)


def schur_zassenhaus(G, N, strict=True, cap=DEFAULT_ORDER_CAP):
    """Find all complements to a normal subgroup, exhaustively.

    With coprime |N| and |G/N| the classical theorem guarantees existence
    and a single conjugacy class; both are verified on the output rather
    than assumed.  When the orders are not coprime: ``strict=True`` raises
    NotCoprime, ``strict=False`` still searches but withholds the
    conjugacy verdict (complements may fall into several classes, or none
    may exist).
    """
    n = tuple(sorted(N))
    if not G.is_subgroup(n):
        raise GroupError("N is not a subgroup")
    if not G.is_normal(n):
        raise NotNormal("complement search needs a normal subgroup")
    q = G.order // len(n)
    coprime = gcd(len(n), q) == 1
    if not coprime and strict:
        raise NotCoprime(f"gcd(|N|, |G/N|) = {gcd(len(n), q)} != 1")
    lat = subgroup_lattice(G, cap=cap)
    nset = set(n)
    comps = [tuple(s.elements) for s in lat.subgroups
             if len(s) == q and set(s.elements) & nset == {0}]
    verdict = None
    if coprime:
        if not comps:
            raise GroupError("no complement found despite coprime orders")
        # pairwise conjugacy, verified directly
        verdict = True
        first = comps[0]
        for other in comps[1:]:
            if not any(G.conjugate_subset(g, first) == other
                       for g in range(G.order)):
                verdict = False
                break
    return ComplementReport(complements=tuple(comps), allConjugate=verdict)

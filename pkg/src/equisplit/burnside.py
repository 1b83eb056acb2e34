"""Burnside rings A(L), tables of marks, and localized idempotents.

For a subgroup L of the ambient group, A(L) is the free Z-module on the
L-conjugacy classes of subgroups of L, with {L/K} multiplying as the
corresponding L-sets.  The mark homomorphism K |-> |(L/H)^K| embeds A(L)
into a product of copies of Z; since the marks matrix is triangular with
Weyl-group orders on the diagonal (tom Dieck, Transformation Groups, §IV.2
is the classical reference), multiplication and the localized idempotent
basis both come down to one triangular back-substitution each.

Exactness discipline: every coefficient is a LocalizedRational — a reduced
fraction together with the set S of primes allowed in denominators.
Operations never widen S silently; a result that would need a new prime
raises InsufficientPrimes instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .groups import GroupError, Subgroup
from .intlin import Mat, prime_factors


class BurnsideError(Exception):
    pass


class InsufficientPrimes(BurnsideError):
    """An exact result would need a denominator prime outside the allowed set."""


class SolveFailure(BurnsideError):
    pass


class NotNested(BurnsideError):
    pass


# ---------------------------------------------------------------------------
# localized rationals
# ---------------------------------------------------------------------------


class LocalizedRational:
    """An exact rational whose denominator may only use primes from S.

    >>> LocalizedRational(Fraction(1, 2), {2})
    LocalizedRational(1/2, S={2})
    >>> LocalizedRational(Fraction(1, 2), set())
    Traceback (most recent call last):
        ...
    equisplit.burnside.InsufficientPrimes: denominator 2 needs primes {2} but S = {}
    """

    __slots__ = ("value", "allowedPrimes")

    def __init__(self, value, allowed_primes=()):
        if isinstance(value, LocalizedRational):
            allowed_primes = set(allowed_primes) | set(value.allowedPrimes)
            value = value.value
        v = Fraction(value)
        S = frozenset(int(p) for p in allowed_primes)
        need = set(prime_factors(v.denominator))
        if not need <= S:
            raise InsufficientPrimes(
                f"denominator {v.denominator} needs primes "
                f"{{{', '.join(map(str, sorted(need)))}}} but "
                f"S = {{{', '.join(map(str, sorted(S)))}}}")
        self.value = v
        self.allowedPrimes = S

    @property
    def numerator(self):
        return self.value.numerator

    @property
    def denominator(self):
        return self.value.denominator

    def _coerce(self, other):
        if isinstance(other, LocalizedRational):
            return other
        if isinstance(other, int):
            return LocalizedRational(other, ())
        if isinstance(other, Fraction):
            return LocalizedRational(other, prime_factors(other.denominator))
        return NotImplemented

    def _binop(self, other, op):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return LocalizedRational(op(self.value, o.value),
                                 self.allowedPrimes | o.allowedPrimes)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError("division by zero in A(L)")
        return LocalizedRational(self.value / o.value,
                                 self.allowedPrimes | o.allowedPrimes)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if self.value == 0:
            raise ZeroDivisionError("division by zero in A(L)")
        return LocalizedRational(o.value / self.value,
                                 self.allowedPrimes | o.allowedPrimes)

    def __neg__(self):
        return LocalizedRational(-self.value, self.allowedPrimes)

    def __eq__(self, other):
        if isinstance(other, LocalizedRational):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        s = ", ".join(map(str, sorted(self.allowedPrimes)))
        return f"LocalizedRational({self.value}, S={{{s}}})"

    def __str__(self):
        return str(self.value)


# ---------------------------------------------------------------------------
# level data: L-classes of subgroups and the marks matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BurnsideLevel:
    """Everything A(L) needs: L-conjugacy classes of subgroups and marks."""

    lattice: object
    level: Subgroup
    classes: tuple              # tuple of tuples of lattice subgroup indices
    reps: tuple                 # lattice subgroup index per class (canonical)
    repElements: tuple          # element tuples, same order
    marks: Mat                  # rows K, cols H; s_(K,H) = |(L/H)^K|
    weyl: tuple                 # s_(H,H) = |W_L H| per class

    def nclasses(self):
        return len(self.reps)

    def class_index(self, subgroup_elements):
        """Class position of a subgroup of L given by its element tuple."""
        idx = self.lattice.index_of(subgroup_elements)
        for c, members in enumerate(self.classes):
            if idx in members:
                return c
        raise GroupError(f"subgroup {tuple(subgroup_elements)} is not inside "
                         f"this level")


def _level_elements(lattice, L):
    if isinstance(L, Subgroup):
        return tuple(L.elements)
    if isinstance(L, int):
        return tuple(lattice.subgroups[L].elements)
    return tuple(sorted(L))


def level_data(lattice, L):
    """Compute the A(L) bookkeeping for a level L of the lattice."""
    G = lattice.group
    elems = _level_elements(lattice, L)
    Lidx = lattice.index_of(elems)
    inside = lattice.subgroups_of(Lidx)
    # L-conjugacy classes (the ambient classes may split inside L)
    seen = {}
    classes = []
    for i in inside:
        if i in seen:
            continue
        orbit = set()
        for g in elems:
            orbit.add(lattice.conj_subgroup(g, i))
        orbit = tuple(sorted(orbit))
        for j in orbit:
            seen[j] = len(classes)
        classes.append(orbit)
    reps = tuple(c[0] for c in classes)
    rep_elements = tuple(tuple(lattice.subgroups[r].elements) for r in reps)

    # marks by direct fixed-coset count: K fixes gH iff K <= gHg^-1
    n = len(reps)
    rows = []
    for K in rep_elements:
        kset = set(K)
        row = []
        for H in rep_elements:
            count = 0
            for coset in _cosets_in(G, elems, H):
                g = coset[0]
                conj = set(G.conjugate_subset(g, H))
                if kset <= conj:
                    count += 1
            row.append(count)
        rows.append(row)
    marks = Mat(rows, n)
    weyl = tuple(marks.rows[i][i] for i in range(n))
    return BurnsideLevel(lattice=lattice, level=Subgroup(elems),
                         classes=tuple(classes), reps=reps,
                         repElements=rep_elements, marks=marks, weyl=weyl)


def _cosets_in(G, level_elements, H):
    """Left cosets of H inside the subgroup with the given elements."""
    t = G.table
    rem = set(level_elements)
    out = []
    hset = list(H)
    while rem:
        g = min(rem)
        cos = tuple(sorted(t[g][h] for h in hset))
        out.append(cos)
        rem -= set(cos)
    return out


@dataclass(frozen=True)
class TableOfMarks:
    level: Subgroup
    classReps: tuple            # element tuples, increasing order
    matrix: Mat


def table_of_marks(lattice, L):
    lv = level_data(lattice, L)
    return TableOfMarks(level=lv.level, classReps=lv.repElements,
                        matrix=lv.marks)


# ---------------------------------------------------------------------------
# Burnside elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BurnsideElement:
    """A linear combination of basis orbits {L/K} with localized coefficients.

    ``coeffs`` maps every canonical class-representative element tuple of
    the level to a LocalizedRational (zeros included, so the key set is
    always the full class list).
    """

    level: Subgroup
    coeffs: dict
    _lv: BurnsideLevel = field(repr=False, compare=False, hash=False)

    @property
    def allowedPrimes(self):
        out = set()
        for v in self.coeffs.values():
            out |= v.allowedPrimes
        return frozenset(out)

    def coefficient(self, subgroup_elements):
        c = self._lv.class_index(tuple(sorted(subgroup_elements)))
        return self.coeffs[self._lv.repElements[c]]

    def _vec(self):
        return [self.coeffs[r] for r in self._lv.repElements]

    def __add__(self, other):
        self._check_same_level(other)
        return _element(self._lv, [a + b for a, b in zip(self._vec(), other._vec())])

    def __sub__(self, other):
        self._check_same_level(other)
        return _element(self._lv, [a - b for a, b in zip(self._vec(), other._vec())])

    def __neg__(self):
        return _element(self._lv, [-a for a in self._vec()])

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, Fraction, LocalizedRational)):
            return _element(self._lv, [a * scalar for a in self._vec()])
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, BurnsideElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction, LocalizedRational)):
            return self.__rmul__(other)
        return NotImplemented

    def _check_same_level(self, other):
        if self.level != other.level:
            raise NotNested("elements live at different levels")

    def is_zero(self):
        return all(not v for v in self.coeffs.values())

    def __eq__(self, other):
        return (isinstance(other, BurnsideElement)
                and self.level == other.level
                and all(self.coeffs[k] == other.coeffs[k] for k in self.coeffs))

    def __hash__(self):
        return hash((self.level, tuple(sorted((k, v.value)
                                              for k, v in self.coeffs.items()))))

    def __str__(self):
        parts = []
        for rep in self._lv.repElements:
            v = self.coeffs[rep]
            if v:
                parts.append(f"{v}*{{L/K{len(rep)}}}")
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {
            "level": list(self.level.elements),
            "coeffs": [{"rep": list(r),
                        "value": [self.coeffs[r].numerator,
                                  self.coeffs[r].denominator],
                        "allowedPrimes": sorted(self.coeffs[r].allowedPrimes)}
                       for r in self._lv.repElements],
        }


def _element(lv, values):
    vals = [v if isinstance(v, LocalizedRational) else LocalizedRational(
        v, prime_factors(Fraction(v).denominator)) for v in values]
    return BurnsideElement(level=lv.level,
                           coeffs=dict(zip(lv.repElements, vals)), _lv=lv)


def basis_element(lattice, L, K, allowed_primes=()):
    """The basis orbit {L/K}."""
    lv = level_data(lattice, L)
    c = lv.class_index(tuple(sorted(_level_elements(lattice, K))))
    vals = [LocalizedRational(int(i == c), allowed_primes)
            for i in range(lv.nclasses())]
    return _element(lv, vals)


def unit(lattice, L, allowed_primes=()):
    """The multiplicative unit {L/L}."""
    return basis_element(lattice, L, _level_elements(lattice, L), allowed_primes)


def zero(lattice, L, allowed_primes=()):
    lv = level_data(lattice, L)
    return _element(lv, [LocalizedRational(0, allowed_primes)] * lv.nclasses())


def from_coeffs(lattice, L, coeff_map, allowed_primes=()):
    """Element from a {subgroup-elements: value} mapping (missing keys = 0)."""
    lv = level_data(lattice, L)
    vals = [LocalizedRational(0, allowed_primes)] * lv.nclasses()
    for key, v in coeff_map.items():
        c = lv.class_index(tuple(sorted(_level_elements(lattice, key))))
        vals[c] = vals[c] + LocalizedRational(v, allowed_primes)
    return _element(lv, vals)


# ---------------------------------------------------------------------------
# marks, multiplication, idempotents
# ---------------------------------------------------------------------------


def marks_vector(x):
    """phi_K(x) for K over the canonical class representatives."""
    lv = x._lv
    vec = x._vec()
    out = []
    for i in range(lv.nclasses()):
        total = LocalizedRational(0, ())
        for j, c in enumerate(vec):
            s = lv.marks.rows[i][j]
            if s and c:
                total = total + c * s
        out.append(total)
    return tuple(out)


def from_marks(lattice_or_level, L_or_marks, marks=None):
    """Solve the triangular marks system phi(x) = v for x.

    Call as from_marks(level_data, vector) or from_marks(lattice, L, vector).
    """
    if marks is None:
        lv, vec = lattice_or_level, list(L_or_marks)
    else:
        lv, vec = level_data(lattice_or_level, L_or_marks), list(marks)
    n = lv.nclasses()
    if len(vec) != n:
        raise SolveFailure("marks vector has wrong length")
    vec = [v if isinstance(v, LocalizedRational)
           else LocalizedRational(v, prime_factors(Fraction(v).denominator))
           for v in vec]
    out = [None] * n
    # marks[i][j] vanishes unless class i is subconjugate to class j, so with
    # classes sorted by increasing order the system is triangular "upward":
    # solve the last class first, then walk down.
    for i in range(n - 1, -1, -1):
        acc = vec[i]
        for j in range(i + 1, n):
            s = lv.marks.rows[i][j]
            if s and out[j]:
                acc = acc - out[j] * s
        d = lv.marks.rows[i][i]
        if d == 0:
            raise SolveFailure("zero diagonal in marks table")
        # exact division; primes stay inside the accumulated allowed set
        # whenever the quotient is S-integral, which it is for ring
        # operations — otherwise the constructor raises.
        out[i] = LocalizedRational(acc.value / d,
                                   acc.allowedPrimes | _needed(acc.value, d))
    return _element(lv, out)


def _needed(value, divisor):
    q = Fraction(value) / divisor
    return set(prime_factors(q.denominator))


def multiply(x, y):
    """Product in A(L): multiply marks pointwise, solve back."""
    if x.level != y.level:
        raise NotNested("multiply needs both elements at the same level")
    lv = x._lv
    mx, my = marks_vector(x), marks_vector(y)
    prod = [a * b for a, b in zip(mx, my)]
    result = from_marks(lv, prod)
    # a ring stays a ring: the result may not need primes beyond the inputs
    allowed = x.allowedPrimes | y.allowedPrimes
    for v in result.coeffs.values():
        if not set(prime_factors(v.denominator)) <= allowed:
            raise SolveFailure("product left the localized ring (bug)")
    return result


def idempotent_basis(lattice, L, allowed_primes):
    """The orthogonal idempotents e_H of A(L)[S^-1], one per class.

    e_H is pinned down by its marks: phi_K(e_H) = 1 when K is L-conjugate
    to H and 0 otherwise.  Solvability needs every |W_L K| invertible,
    hence the prime-set precondition.
    """
    lv = level_data(lattice, L)
    S = frozenset(int(p) for p in allowed_primes)
    for w in lv.weyl:
        need = set(prime_factors(w))
        if not need <= S:
            raise InsufficientPrimes(
                f"|W_L K| = {w} is not invertible with S = {sorted(S)}")
    out = []
    for h in range(lv.nclasses()):
        vec = [LocalizedRational(int(i == h), S) for i in range(lv.nclasses())]
        out.append(from_marks(lv, vec))
    return out


# ---------------------------------------------------------------------------
# restriction, transfer, conjugation
# ---------------------------------------------------------------------------


def transfer(x, target_L):
    """T_L^H: {L/K} |-> {H/K} for L <= H (coefficients carried along)."""
    lv = x._lv
    lattice = lv.lattice
    H = _level_elements(lattice, target_L)
    if not set(lv.level.elements) <= set(H):
        raise NotNested("transfer target must contain the source level")
    target = level_data(lattice, H)
    vals = [LocalizedRational(0, ())] * target.nclasses()
    for rep, c in x.coeffs.items():
        if not c:
            continue
        idx = target.class_index(rep)
        vals[idx] = vals[idx] + c
    return _element(target, vals)


def restrict(x, target_L):
    """R_L^H: view {H/N} as an L-set and decompose into L-orbits."""
    lv = x._lv
    lattice = lv.lattice
    G = lattice.group
    L = _level_elements(lattice, target_L)
    H = tuple(lv.level.elements)
    if not set(L) <= set(H):
        raise NotNested("restriction target must be contained in the level")
    target = level_data(lattice, L)
    vals = [LocalizedRational(0, ())] * target.nclasses()
    for rep, c in x.coeffs.items():
        if not c:
            continue
        for stab, mult in _orbit_decomposition(G, L, _cosets_in(G, H, rep)):
            idx = target.class_index(stab)
            vals[idx] = vals[idx] + c * mult
    return _element(target, vals)


def conjugate(x, g):
    """c_g: A(L) -> A(gLg^-1), relabeling every subgroup."""
    lv = x._lv
    lattice = lv.lattice
    G = lattice.group
    target = level_data(lattice, G.conjugate_subset(g, lv.level.elements))
    vals = [LocalizedRational(0, ())] * target.nclasses()
    for rep, c in x.coeffs.items():
        idx = target.class_index(G.conjugate_subset(g, rep))
        vals[idx] = vals[idx] + c
    return _element(target, vals)


def _orbit_decomposition(G, L, points):
    """Decompose a set of cosets (as element tuples) into L-orbits.

    Yields (stabilizer element tuple, multiplicity 1) per orbit; the
    stabilizer is that of the orbit's least point.  Points are cosets gH
    represented by sorted element tuples; L acts by left multiplication.
    """
    t = G.table
    pts = {p: None for p in points}
    out = []
    for p in pts:
        if pts[p] is not None:
            continue
        orbit = set()
        stack = [p]
        while stack:
            q = stack.pop()
            if q in orbit:
                continue
            orbit.add(q)
            for g in L:
                r = tuple(sorted(t[g][e] for e in q))
                if r not in orbit:
                    stack.append(r)
        for q in orbit:
            pts[q] = True
        base = min(orbit)
        stab = tuple(g for g in L
                     if tuple(sorted(t[g][e] for e in base)) == base)
        out.append((stab, 1))
    return out

"""Families of subgroups and the splitting coefficients they carry.

A *family* is a set of subgroups closed under conjugation and under passing
to subgroups.  Each family has splitting coefficients c_H — one rational
per conjugacy class in the family — solving sum_H c_H s_(K,H) = 1 for
every class K in the family, where s is the table of marks.  The primes
one must invert for the associated splitting are the denominators of the
c_H together with a torsion bound; for semidirect products G_2 acting on a
normal G_1 there are sharper bounds and a battery of exact certificates
(decency, the weighted sum rule, divisibility, denominated bounds) which
this module checks rather than trusts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .burnside import LocalizedRational, level_data
from .groups import (Subgroup, commutant_data, make_decomposition,
                     schur_zassenhaus, subgroup_lattice)
from .intlin import prime_factors


class FamilyError(Exception):
    pass


class TooManyFamilies(FamilyError):
    pass


class CheckFailed(FamilyError):
    """A splitting certificate failed.  ``which`` names the certificate."""

    def __init__(self, which, detail=""):
        self.which = which
        super().__init__(f"certificate {which!r} failed"
                         + (f": {detail}" if detail else ""))


MAX_CLASSES_FOR_ENUMERATION = 16


@dataclass(frozen=True)
class Family:
    """A conjugation- and subgroup-closed set of subgroups of a fixed group.

    ``members`` holds lattice indices of every member subgroup;
    ``classIndices`` the lattice class positions, and ``classReps`` the
    canonical representative element tuples (what most callers want).
    """

    lattice: object = field(repr=False, compare=False)
    members: frozenset
    classIndices: frozenset
    classReps: tuple

    def __contains__(self, sub_index):
        return sub_index in self.members

    def has_class(self, class_index):
        return class_index in self.classIndices

    def is_empty(self):
        return not self.members

    def key(self):
        return tuple(sorted(self.classIndices))

    def to_json(self):
        return {"classReps": [list(r) for r in self.classReps]}

    def __str__(self):
        names = ",".join(f"({len(r)})" for r in self.classReps)
        return f"Family[{names or 'empty'}]"


def _as_family(lattice, F):
    if isinstance(F, Family):
        return F
    return family_closure(lattice, F)


def _family_from_classes(lattice, class_indices):
    cset = frozenset(class_indices)
    members = frozenset(i for c in cset for i in lattice.conjClasses[c])
    reps = tuple(tuple(lattice.subgroups[lattice.classReps[c]].elements)
                 for c in sorted(cset))
    return Family(lattice=lattice, members=members, classIndices=cset,
                  classReps=reps)


def family_closure(lattice_or_group, seeds):
    """Smallest family containing the seed subgroups.

    Seeds may be subgroup indices, Subgroup values, or element iterables;
    an empty seed set gives the empty family (legal — it is vacuously
    closed, and the classifier needs it).
    """
    lattice = (lattice_or_group if hasattr(lattice_or_group, "subgroups")
               else subgroup_lattice(lattice_or_group))
    classes = set()
    for s in seeds:
        if isinstance(s, int):
            idx = s
        elif isinstance(s, Subgroup):
            idx = lattice.index_of(s.elements)
        else:
            idx = lattice.index_of(tuple(sorted(s)))
        c = lattice.class_of(idx)
        for small in range(len(lattice.conjClasses)):
            if lattice.is_subconjugate(small, c):
                classes.add(small)
    return _family_from_classes(lattice, classes)


def all_families(lattice, cap=MAX_CLASSES_FOR_ENUMERATION):
    """Every family of the group, the empty one included, as a tuple.

    Families biject with down-closed sets of subgroup classes; these are
    enumerated directly, so the group must have at most ``cap`` classes.
    """
    n = len(lattice.conjClasses)
    if n > cap:
        raise TooManyFamilies(
            f"{n} subgroup classes exceeds the enumeration cap {cap}")
    down = []
    for c in range(n):
        mask = 0
        for small in range(n):
            if lattice.is_subconjugate(small, c):
                mask |= 1 << small
        down.append(mask)
    out = []
    for bits in range(1 << n):
        ok = True
        for c in range(n):
            if bits >> c & 1 and bits & down[c] != down[c]:
                ok = False
                break
        if ok:
            out.append(_family_from_classes(
                lattice, [c for c in range(n) if bits >> c & 1]))
    out.sort(key=lambda f: (len(f.classIndices), f.key()))
    return tuple(out)


# ---------------------------------------------------------------------------
# splitting coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingCoefficients:
    family: Family
    cH: dict                    # class rep elements -> LocalizedRational
    denominatorPrimes: frozenset

    def coefficient(self, subgroup_elements):
        """c_H for any subgroup in the family, not just the stored reps."""
        key = tuple(sorted(subgroup_elements))
        if key in self.cH:
            return self.cH[key]
        lat = self.family.lattice
        c = lat.class_of(lat.index_of(key))
        rep = tuple(lat.subgroups[lat.classReps[c]].elements)
        return self.cH[rep]

    def to_json(self):
        return {
            "coefficients": [
                {"rep": list(r),
                 "value": [self.cH[r].numerator, self.cH[r].denominator]}
                for r in sorted(self.cH)],
            "denominatorPrimes": sorted(self.denominatorPrimes),
        }


def splitting_coefficients(lattice_or_group, F):
    """Solve sum_H c_H s_(K,H) = 1 over the classes of the family.

    The marks s_(K,H) vanish unless K is subconjugate to H, so ordering
    classes by decreasing subgroup order makes the system triangular with
    the Weyl orders s_(K,K) on the diagonal; it is solved largest class
    first and the defining identity re-checked exactly afterwards.
    """
    lattice = (lattice_or_group if hasattr(lattice_or_group, "subgroups")
               else subgroup_lattice(lattice_or_group))
    fam = _as_family(lattice, F)
    if fam.is_empty():
        raise FamilyError("splitting coefficients need a nonempty family")
    lv = level_data(lattice, lattice.full_group_index())
    # positions of the family's classes inside the top-level class list
    pos = [k for k, rep in enumerate(lv.repElements)
           if lattice.class_of(lattice.index_of(rep)) in fam.classIndices]
    c = {}
    for k in reversed(pos):
        acc = Fraction(1)
        for h in pos:
            if h > k and c.get(h):
                acc -= c[h] * lv.marks.rows[k][h]
        c[k] = acc / lv.marks.rows[k][k]
    # the identity that defines the coefficients, re-checked exactly
    for k in pos:
        total = sum((c[h] * lv.marks.rows[k][h] for h in pos), Fraction(0))
        if total != 1:
            raise CheckFailed("coefficient system",
                              f"sum at class {k} is {total}")
    denom = frozenset(p for k in pos for p in prime_factors(c[k].denominator))
    cH = {lv.repElements[k]: LocalizedRational(c[k],
                                               prime_factors(c[k].denominator))
          for k in pos}
    return SplittingCoefficients(family=fam, cH=cH, denominatorPrimes=denom)


# ---------------------------------------------------------------------------
# prime reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingReport:
    family: Family
    coefficients: SplittingCoefficients
    requiredPrimes: frozenset
    theoremApplied: str         # orderinvert | twosplit | bigtwosplit
    goodSubgroupChecks: tuple = ()

    def to_json(self):
        return {
            "family": self.family.to_json(),
            "coefficients": self.coefficients.to_json(),
            "requiredPrimes": sorted(self.requiredPrimes),
            "theoremApplied": self.theoremApplied,
            "goodSubgroupChecks": [list(x) for x in self.goodSubgroupChecks],
        }


def _dihedral_2p_family_kind(G, lattice, fam):
    """'reflections' / 'rotations' when G is dihedral of order 2p, else None."""
    n = G.order
    p = n // 2
    if n < 6 or n % 2 or not prime_factors(p) == (p,):
        return None
    if G.is_abelian():
        return None
    orders = sorted(len(lattice.subgroups[lattice.classReps[c]].elements)
                    for c in fam.classIndices)
    if orders == [1, 2]:
        return "reflections"
    if orders == [1, p]:
        return "rotations"
    return None


def _normal_subgroup_indices(lattice):
    return [c[0] for c in lattice.conjClasses if len(c) == 1]


def _coprime_decompositions(G, lattice):
    """All coprime semidirect decompositions, one complement each."""
    out = []
    for i in _normal_subgroup_indices(lattice):
        N = lattice.subgroups[i].elements
        if len(N) in (1, G.order):
            continue
        if gcd(len(N), G.order // len(N)) != 1:
            continue
        rep = schur_zassenhaus(G, N)
        if rep.complements:
            out.append(make_decomposition(G, N, rep.complements[0]))
    return out


def splitting_primes(G, F, lattice=None):
    """Which primes must be inverted for the family's splitting to exist.

    requiredPrimes = coefficient denominators + a torsion bound.  The bound
    defaults to the primes of |G|; it sharpens to {p} or {2} for dihedral
    groups of order 2p, and to the primes of the normal part (reflection-
    style family) or of the complement (rotation-style) whenever a coprime
    semidirect decomposition matches the family.
    """
    lattice = lattice or subgroup_lattice(G)
    fam = _as_family(lattice, F)
    coeffs = splitting_coefficients(lattice, fam)

    kind = _dihedral_2p_family_kind(G, lattice, fam)
    if kind == "reflections":
        bound, thm = {G.order // 2}, "twosplit"
    elif kind == "rotations":
        bound, thm = {2}, "twosplit"
    else:
        bound = thm = None
        for D in _coprime_decompositions(G, lattice):
            f1 = family_closure(lattice, [D.complement])
            f2 = family_closure(lattice, [D.normalPart])
            if fam.members == f1.members:
                bound = set(prime_factors(len(D.normalPart)))
                thm = "bigtwosplit"
                break
            if fam.members == f2.members:
                bound = set(prime_factors(len(D.complement)))
                thm = "bigtwosplit"
                break
        if thm is None:
            bound, thm = set(prime_factors(G.order)), "orderinvert"

    return SplittingReport(
        family=fam, coefficients=coeffs,
        requiredPrimes=coeffs.denominatorPrimes | frozenset(bound),
        theoremApplied=thm)


# ---------------------------------------------------------------------------
# semidirect certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemidirectReport:
    decomposition: object
    commutants: object          # CommutantData
    reportF1: SplittingReport
    reportF2: SplittingReport
    decentClasses: tuple        # class reps of the decent classes in F_1
    certificates: tuple         # (name, summary) pairs, all passed

    def to_json(self):
        return {
            "normalPart": list(self.decomposition.normalPart.elements),
            "complement": list(self.decomposition.complement.elements),
            "coprime": self.decomposition.coprime,
            "good": [list(k) for k in self.commutants.good],
            "F1": self.reportF1.to_json(),
            "F2": self.reportF2.to_json(),
            "certificates": [{"name": n, "summary": s}
                             for n, s in self.certificates],
        }


def _weyl_order_in(G, ambient_elements, K):
    kset = tuple(sorted(K))
    n = sum(1 for g in ambient_elements
            if G.conjugate_subset(g, kset) == kset)
    return n // len(K)


def semidirect_report(G, D, lattice=None):
    """Splitting reports for the two canonical families of G = G_2 |x G_1,
    with the full battery of exact certificates.

    Checks, in order: decency (coefficients vanish off the good classes),
    the weighted sum rule sum c_H |P_K| |W_{G_2}H| = 1 for every good K,
    the divisibility bound for nested good pairs, the normal-part
    coefficient c_{G_1} = 1/|G_2| with all others zero, and — when the
    factor orders are coprime — the denominator bounds for both families.
    Raises CheckFailed on the first violated certificate.
    """
    lattice = lattice or subgroup_lattice(G)
    cd = commutant_data(G, D)
    G1, G2 = D.normalPart, D.complement

    f1 = family_closure(lattice, [G2])
    f2 = family_closure(lattice, [G1])
    rep1 = splitting_primes(G, f1, lattice)
    rep2 = splitting_primes(G, f2, lattice)
    c1, c2 = rep1.coefficients, rep2.coefficients

    good = set(cd.good)
    passed = []

    # (i) decency: classes of F_1 with no good member have coefficient 0
    decent_classes = []
    for rep, val in c1.cH.items():
        cls = lattice.conjClasses[lattice.class_of(lattice.index_of(rep))]
        has_good = any(lattice.subgroups[i].elements in good for i in cls)
        if has_good:
            decent_classes.append(rep)
        elif val:
            raise CheckFailed("onlydecent",
                              f"c_{rep} = {val} but the class is not decent")
    passed.append(("onlydecent",
                   f"{len(decent_classes)} decent classes of {len(c1.cH)}"))

    def coeff_of(K):
        cls = lattice.class_of(lattice.index_of(tuple(sorted(K))))
        rep = tuple(lattice.subgroups[lattice.classReps[cls]].elements)
        return c1.cH[rep].value

    # (ii) the weighted sum rule, for every good K
    for K in cd.good:
        PK = cd.P[K]
        total = Fraction(0)
        for H in cd.good:
            if not set(K) <= set(H):
                continue
            total += coeff_of(H) * len(PK) * _weyl_order_in(G, G2.elements, H)
        if total != 1:
            raise CheckFailed("finalrelation",
                              f"sum at K={K} is {total}, expected 1")
    passed.append(("finalrelation", f"verified at {len(cd.good)} subgroups"))

    # (iii) divisibility for nested good pairs
    npairs = 0
    for K in cd.good:
        Ps, table = cd.divide_data(K)
        wK = _weyl_order_in(G, G2.elements, K)
        for H in cd.good:
            if not (set(K) < set(H)):
                continue
            NH = [g for g in G2.elements
                  if G.conjugate_subset(g, tuple(sorted(H))) == tuple(sorted(H))]
            NK = [g for g in G2.elements
                  if G.conjugate_subset(g, tuple(sorted(K))) == tuple(sorted(K))]
            both = set(NH) & set(NK)
            alt = 0
            for S, (PS, KS) in table.items():
                if set(KS) <= set(H):
                    alt += (-1) ** len(S) * len(PS)
            value = (len(NH) // len(H)) * (len(NK) // len(both)) * alt
            if value % wK:
                raise CheckFailed(
                    "divide", f"|W K| = {wK} does not divide {value} "
                    f"for K={K}, H={H}")
            npairs += 1
    passed.append(("divide", f"verified at {npairs} nested pairs"))

    # (iv) normal-part family: c_{G_1} = 1/|G_2|, everything else 0
    for rep, val in c2.cH.items():
        if set(rep) == set(G1.elements):
            if val.value != Fraction(1, len(G2)):
                raise CheckFailed("gen22",
                                  f"c_(G_1) = {val}, expected 1/{len(G2)}")
        elif val:
            raise CheckFailed("gen22", f"nonzero c_{rep} in the normal family")
    passed.append(("gen22", f"c_(G_1) = 1/{len(G2)}"))

    # (v) denominator bounds under coprimality
    if D.coprime:
        if not all(len(G1) % p == 0 for p in c1.denominatorPrimes):
            raise CheckFailed("gen12",
                              f"F_1 denominators {sorted(c1.denominatorPrimes)}"
                              f" exceed the primes of |G_1| = {len(G1)}")
        if not all(len(G2) % p == 0 for p in c2.denominatorPrimes):
            raise CheckFailed("gen21",
                              f"F_2 denominators {sorted(c2.denominatorPrimes)}"
                              f" exceed the primes of |G_2| = {len(G2)}")
        passed.append(("gen12", "F_1 denominators divide |G_1|"))
        passed.append(("gen21", "F_2 denominators divide |G_2|"))

    return SemidirectReport(
        decomposition=D, commutants=cd, reportF1=rep1, reportF2=rep2,
        decentClasses=tuple(decent_classes), certificates=tuple(passed))


# ---------------------------------------------------------------------------
# the family classifier
# ---------------------------------------------------------------------------


PLUS = "PLUS"
TILDE = "TILDE"


@dataclass(frozen=True)
class LambdaClassifier:
    """For each subgroup class, the function families -> {PLUS, TILDE}.

    PLUS marks the families containing the class (the pointed classifying
    space has full fixed points there), TILDE the rest.  Distinct classes
    always get distinct functions — the closure of one class separates it
    from any class not above it.
    """

    lattice: object
    families: tuple
    assignments: dict           # class rep elements -> tuple of tokens

    def token(self, rep_elements, family):
        key = tuple(sorted(rep_elements))
        return self.assignments[key][self.families.index(family)]

    def to_json(self):
        return {
            "families": [f.to_json() for f in self.families],
            "assignments": [{"rep": list(rep), "tokens": list(toks)}
                            for rep, toks in sorted(self.assignments.items())],
        }


def lambda_classifier(G, cap=MAX_CLASSES_FOR_ENUMERATION):
    lattice = subgroup_lattice(G)
    fams = all_families(lattice, cap)
    assignments = {}
    for c, rep_idx in enumerate(lattice.classReps):
        rep = tuple(lattice.subgroups[rep_idx].elements)
        assignments[rep] = tuple(PLUS if f.has_class(c) else TILDE
                                 for f in fams)
    if len(set(assignments.values())) != len(assignments):
        raise FamilyError("classifier assignments collide (bug)")
    return LambdaClassifier(lattice=lattice, families=fams,
                            assignments=assignments)

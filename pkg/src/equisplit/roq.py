"""Representation-graded homotopy of the constant Eilenberg-MacLane spectrum.

For the dihedral group of order 2p (p an odd prime) the homotopy groups of
the Eilenberg-MacLane spectrum of the constant Mackey functor, graded over
virtual combinations  k + m*sigma + n*gamma  of the trivial, sign, and
rotation representations, form a ring that is completely described by a
finite list of summand families.  Each family is a monomial pattern in the
four generators

    u_gs = u_{gamma-sigma}   degree (1, 1, -1)   (orientation class)
    u_2s = u_{2 sigma}       degree (2, -2, 0)
    a_s  = a_sigma           degree (0, -1, 0)    killed by 2
    a_g  = a_gamma           degree (0, 0, -1)    killed by p

together with a single desuspension S^-1 on the negative cone, and an
index multiplier recording that some infinite cyclic summands sit inside
the obvious lattice with index 2, p, or 2p.

This module turns the family list into a queryable table: ``d2p_at`` (and
the one-prime analogues ``c2_at``, ``cp_at``) report the group in a single
degree, ``multiply`` computes products by exponent arithmetic with
projection onto the table, and ``localize_check`` replays the gluing of
the two localized presentations (``d2p_invp_at``, ``d2p_inv2_at``) against
the integral answer.  Everything is exact integer bookkeeping; nothing is
approximated and nothing is guessed (products that cannot be projected
report ``UNDETERMINED`` rather than a default).
"""

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple, Optional, Tuple

from .intlin import AbelianStructure, prime_factors

__all__ = [
    "RODegree", "ClassMonomial", "C2Monomial", "CpMonomial", "GradedGroup",
    "ProductResult", "LocalizeReport", "ReductionDescriptor", "HagrogPiece",
    "HagrogReport", "ZeroInput", "UNDETERMINED",
    "c2_at", "cp_at", "d2p_at", "d2p_invp_at", "d2p_inv2_at",
    "multiply", "tau_sign", "f1_piece_at", "f2_piece_at",
    "localize_check", "reduce_generald2p", "hagrog_at",
    "parse_monomial",
]

UNDETERMINED = "UNDETERMINED"


class ZeroInput(ValueError):
    """A monomial passed to ``multiply`` denotes the zero class."""


def _check_p(p):
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p!r}")
    for q in range(3, int(p ** 0.5) + 1, 2):
        if p % q == 0:
            raise ValueError(f"p must be an odd prime, got {p!r}")


class RODegree(NamedTuple):
    """A virtual-representation degree k + m*sigma + n*gamma."""

    k: int
    m: int
    n: int


def _fmt_power(name, e):
    if e == 1:
        return name
    return f"{name}^{e}"


@dataclass(frozen=True)
class ClassMonomial:
    """A monomial u_gs^a u_2s^b a_s^c a_g^d, possibly desuspended once.

    ``indexMultiplier`` is the index of the class inside the evident
    integral lattice: the generator of a 2Z-summand carries multiplier 2,
    and so on.  Torsion classes always carry multiplier 1; a multiplier
    bigger than 1 on a torsion pattern just means a multiple of the
    generator.
    """

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    suspensionShift: int = 0
    indexMultiplier: int = 1

    def __post_init__(self):
        if self.suspensionShift not in (0, -1):
            raise ValueError("suspension shift must be 0 or -1")
        if self.indexMultiplier < 1:
            raise ValueError("index multiplier must be positive")

    def degree(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        return RODegree(
            a + 2 * b + self.suspensionShift,
            a - 2 * b - c,
            -a - d,
        )

    def exponents(self):
        return (self.a, self.b, self.c, self.d, self.suspensionShift)

    def text(self, include_index=True):
        parts = []
        for name, e in (("u_gs", self.a), ("u_2s", self.b),
                        ("a_s", self.c), ("a_g", self.d)):
            if e:
                parts.append(_fmt_power(name, e))
        if self.suspensionShift:
            parts.append("S^-1")
        if include_index and self.indexMultiplier != 1:
            parts.append(f"{self.indexMultiplier}*")
        return " ".join(parts) if parts else "1"

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class C2Monomial:
    """A monomial u_2s^b a_s^c in the order-2 subquotient table."""

    b: int = 0
    c: int = 0
    suspensionShift: int = 0
    indexMultiplier: int = 1

    def degree(self):
        # (k, m) against the single sign representation
        return (2 * self.b + self.suspensionShift, -2 * self.b - self.c)

    def exponents(self):
        return (self.b, self.c, self.suspensionShift)

    def text(self, include_index=True):
        parts = []
        for name, e in (("u_2s", self.b), ("a_s", self.c)):
            if e:
                parts.append(_fmt_power(name, e))
        if self.suspensionShift:
            parts.append("S^-1")
        if include_index and self.indexMultiplier != 1:
            parts.append(f"{self.indexMultiplier}*")
        return " ".join(parts) if parts else "1"

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class CpMonomial:
    """A monomial u_l^e a_l^f in the odd-prime cyclic table.

    u_l is the Euler-dual orientation class of the faithful 2-dimensional
    representation lambda, degree (2, -1); a_l its Euler class, degree
    (0, -1), killed by p.
    """

    e: int = 0
    f: int = 0
    suspensionShift: int = 0
    indexMultiplier: int = 1

    def degree(self):
        # (k, n) against lambda
        return (2 * self.e + self.suspensionShift, -self.e - self.f)

    def exponents(self):
        return (self.e, self.f, self.suspensionShift)

    def text(self, include_index=True):
        parts = []
        for name, e in (("u_l", self.e), ("a_l", self.f)):
            if e:
                parts.append(_fmt_power(name, e))
        if self.suspensionShift:
            parts.append("S^-1")
        if include_index and self.indexMultiplier != 1:
            parts.append(f"{self.indexMultiplier}*")
        return " ".join(parts) if parts else "1"

    def __str__(self):
        return self.text()


def _invariant_factors(orders):
    primary = {}
    for o in orders:
        for q in prime_factors(o):
            e = 0
            while o % q == 0:
                e += 1
                o //= q
            primary.setdefault(q, []).append(e)
    depth = max((len(v) for v in primary.values()), default=0)
    invs = []
    for i in range(depth):
        f = 1
        for q, es in primary.items():
            ordered = sorted(es, reverse=True)
            if i < len(ordered):
                f *= q ** ordered[i]
        invs.append(f)
    return tuple(sorted(invs))


@dataclass(frozen=True)
class GradedGroup:
    """The homotopy group in one degree: a list of (monomial, order) pairs.

    Order 0 stands for an infinite cyclic summand whose generator is the
    monomial (including its index multiplier); a positive order is the
    additive order of the torsion generator.
    """

    degree: tuple
    summands: tuple

    def is_zero(self):
        return not self.summands

    def structure(self):
        """The underlying abelian group, forgetting generator names."""
        rank = sum(1 for _, o in self.summands if o == 0)
        torsion = [o for _, o in self.summands if o]
        return AbelianStructure(rank, _invariant_factors(torsion))

    def find(self, exponents):
        for mono, order in self.summands:
            if mono.exponents() == exponents:
                return mono, order
        return None

    def text(self):
        if not self.summands:
            return "0"
        parts = []
        for mono, order in self.summands:
            if order == 0:
                idx = mono.indexMultiplier
                head = "Z" if idx == 1 else f"{idx}Z"
            else:
                head = f"Z/{order}"
            body = mono.text(include_index=False)
            parts.append(head if body == "1" else f"{head}<{body}>")
        return " + ".join(parts)

    def to_json(self):
        return {
            "degree": list(self.degree),
            "summands": [
                {"monomial": mono.text(), "order": order,
                 "index": mono.indexMultiplier}
                for mono, order in self.summands
            ],
        }

    def __str__(self):
        return self.text()


# --------------------------------------------------------------------------
# family enumeration
#
# Writing the degree equations out for a monomial with exponents
# (a, b, c, d) and shift s:
#
#     k = a + 2b + s,   m = a - 2b - c,   n = -a - d
#
# so a = -n - d,  2b = k - s + n + d,  c = -k - m - 2n + s - 2d.  Each
# family either pins d = 0 (and reads off c) or pins c = 0 (determining d
# by parity); in both cases the remaining exponents are forced, and the
# family's sign constraints decide whether the candidate survives.

def _solve(k, m, n, shift, d):
    a = -n - d
    two_b = k - shift + n + d
    if two_b % 2:
        return None
    b = two_b // 2
    c = -k - m - 2 * n + shift - 2 * d
    return a, b, c


def _d2p_summands(k, m, n, p):
    out = []
    # shift 0, no a_g factor: the sign pattern of (a, b) picks the family
    sol = _solve(k, m, n, 0, 0)
    if sol is not None:
        a, b, c = sol
        if c == 0:
            if a >= 0 and b >= 0:
                out.append((ClassMonomial(a, b), 0))
            elif a >= 0:
                out.append((ClassMonomial(a, b, indexMultiplier=2), 0))
            elif b >= 0:
                out.append((ClassMonomial(a, b, indexMultiplier=p), 0))
            else:
                out.append((ClassMonomial(a, b, indexMultiplier=2 * p), 0))
        elif c > 0 and b >= 0:
            # a_s-multiples exist on both sides of the u_gs cone
            out.append((ClassMonomial(a, b, c), 2))
    # shift 0, a_g present, no a_s: d is determined by c = 0
    num = -k - m - 2 * n
    if num % 2 == 0 and num // 2 > 0:
        sol = _solve(k, m, n, 0, num // 2)
        if sol is not None:
            a, b, c = sol
            if a >= 0:
                # b >= 0 is the polynomial part, b < 0 the u_2s cone
                out.append((ClassMonomial(a, b, 0, num // 2), p))
    # negative cone, desuspended once: a_s^-j against the u_2s cone ...
    sol = _solve(k, m, n, -1, 0)
    if sol is not None:
        a, b, c = sol
        if c < 0 and b < 0:
            out.append((ClassMonomial(a, b, c, suspensionShift=-1), 2))
    # ... and a_g^-j against the u_gs cone
    num = -k - m - 2 * n - 1
    if num % 2 == 0 and num // 2 < 0:
        d = num // 2
        sol = _solve(k, m, n, -1, d)
        if sol is not None:
            a, b, c = sol
            if a < 0:
                out.append((ClassMonomial(a, b, 0, d, suspensionShift=-1), p))
    return tuple(out)


def _d2p_invp_summands(k, m, n, p):
    # u_gs inverted: a ranges over all of Z, a_g-classes die, the p-part
    # of every index multiplier becomes a unit.
    out = []
    sol = _solve(k, m, n, 0, 0)
    if sol is not None:
        a, b, c = sol
        if c == 0:
            if b >= 0:
                out.append((ClassMonomial(a, b), 0))
            else:
                out.append((ClassMonomial(a, b, indexMultiplier=2), 0))
        elif c > 0 and b >= 0:
            out.append((ClassMonomial(a, b, c), 2))
    sol = _solve(k, m, n, -1, 0)
    if sol is not None:
        a, b, c = sol
        if c < 0 and b < 0:
            out.append((ClassMonomial(a, b, c, suspensionShift=-1), 2))
    return tuple(out)


def _d2p_inv2_summands(k, m, n, p):
    # u_2s inverted: b ranges over all of Z, a_s-classes die.
    out = []
    num = -k - m - 2 * n
    if num % 2 == 0:
        d = num // 2
        sol = _solve(k, m, n, 0, d)
        if sol is not None:
            a, b, c = sol
            if d == 0 and a >= 0:
                out.append((ClassMonomial(a, b), 0))
            elif d == 0 and a < 0:
                out.append((ClassMonomial(a, b, indexMultiplier=p), 0))
            elif d > 0 and a >= 0:
                out.append((ClassMonomial(a, b, 0, d), p))
    num = -k - m - 2 * n - 1
    if num % 2 == 0 and num // 2 < 0:
        d = num // 2
        sol = _solve(k, m, n, -1, d)
        if sol is not None:
            a, b, c = sol
            if a < 0:
                out.append((ClassMonomial(a, b, 0, d, suspensionShift=-1), p))
    return tuple(out)


def _c2_summands(k, m):
    # k = 2b + s, m = -2b - c
    out = []
    if k % 2 == 0:
        b, c = k // 2, -k - m
        if c == 0 and b >= 0:
            out.append((C2Monomial(b, 0), 0))
        elif c == 0:
            out.append((C2Monomial(b, 0, indexMultiplier=2), 0))
        elif c > 0 and b >= 0:
            out.append((C2Monomial(b, c), 2))
    else:
        b, c = (k + 1) // 2, -k - m - 1
        if b < 0 and c < 0:
            out.append((C2Monomial(b, c, suspensionShift=-1), 2))
    return tuple(out)


def _cp_summands(k, n, p):
    # k = 2e + s, n = -e - f
    out = []
    if k % 2 == 0:
        e, f = k // 2, -n - k // 2
        if f == 0 and e >= 0:
            out.append((CpMonomial(e, 0), 0))
        elif f == 0:
            out.append((CpMonomial(e, 0, indexMultiplier=p), 0))
        elif f > 0 and e >= 0:
            out.append((CpMonomial(e, f), p))
    else:
        e, f = (k + 1) // 2, -n - (k + 1) // 2
        if e < 0 and f < 0:
            out.append((CpMonomial(e, f, suspensionShift=-1), p))
    return tuple(out)


def c2_at(k, m):
    """The order-2 table in degree k + m*sigma."""
    return GradedGroup((k, m), _c2_summands(k, m))


def cp_at(k, n, p):
    """The odd-prime cyclic table in degree k + n*lambda."""
    _check_p(p)
    return GradedGroup((k, n), _cp_summands(k, n, p))


def d2p_at(k, m, n, p):
    """The dihedral table in degree k + m*sigma + n*gamma."""
    _check_p(p)
    return GradedGroup(RODegree(k, m, n), _d2p_summands(k, m, n, p))


def d2p_invp_at(k, m, n, p):
    """The dihedral table after inverting p (u_gs becomes a unit)."""
    _check_p(p)
    return GradedGroup(RODegree(k, m, n), _d2p_invp_summands(k, m, n, p))


def d2p_inv2_at(k, m, n, p):
    """The dihedral table after inverting 2 (u_2s becomes a unit)."""
    _check_p(p)
    return GradedGroup(RODegree(k, m, n), _d2p_inv2_summands(k, m, n, p))


# --------------------------------------------------------------------------
# multiplication

@dataclass(frozen=True)
class ProductResult:
    """Outcome of a product query.

    ``status`` is "ok" (a definite class: ``coefficient`` times the table
    generator ``monomial`` of additive ``order``), "zero", or the string
    UNDETERMINED when the exponent pattern falls outside every family but
    the target group is nonzero and the torsion argument cannot force the
    product to vanish.
    """

    status: str
    degree: RODegree
    coefficient: Optional[int] = None
    monomial: Optional[ClassMonomial] = None
    order: Optional[int] = None

    def is_zero(self):
        return self.status == "zero"

    def text(self):
        if self.status == "zero":
            return "0"
        if self.status == UNDETERMINED:
            return UNDETERMINED
        if self.coefficient == 1:
            return self.monomial.text()
        return f"{self.coefficient} x {self.monomial.text()}"

    def __str__(self):
        return self.text()


def _classify(mono, p):
    """Locate a monomial in the table: (generator, order, coefficient).

    Returns None when the exponent pattern matches no family, i.e. the
    monomial denotes 0.  Otherwise the coefficient is the multiple of the
    table generator that the monomial's own index multiplier denotes
    (reduced mod the order for torsion classes); a vanishing coefficient
    again means the zero class.
    """
    k, m, n = mono.degree()
    group = _d2p_summands(k, m, n, p)
    hit = None
    for gen, order in group:
        if gen.exponents() == mono.exponents():
            hit = (gen, order)
            break
    if hit is None:
        return None
    gen, order = hit
    if order == 0:
        q, r = divmod(mono.indexMultiplier, gen.indexMultiplier)
        if r:
            return None     # e.g. a bare u_2s^-1: not an element
        return gen, order, q
    coeff = mono.indexMultiplier % order
    if coeff == 0:
        return None
    return gen, order, coeff


def multiply(x, y, p):
    """The product of two nonzero table classes, projected onto the table.

    Exponents and suspension shifts add, index multipliers multiply, and
    the formal result is looked up at the sum degree.  A zero target group
    forces the product to vanish; a formal pattern that matches no family
    is resolved by the annihilator of the inputs when that suffices and
    reported as UNDETERMINED otherwise.  Monomials denoting zero classes
    are rejected with :class:`ZeroInput`.
    """
    _check_p(p)
    cx = _classify(x, p)
    if cx is None:
        raise ZeroInput(f"left factor {x.text()} denotes the zero class")
    cy = _classify(y, p)
    if cy is None:
        raise ZeroInput(f"right factor {y.text()} denotes the zero class")
    shift = x.suspensionShift + y.suspensionShift
    kill = gcd(cx[1], cy[1])        # gcd(order, 0) keeps the finite one
    total = x.indexMultiplier * y.indexMultiplier
    kx, mx, nx = x.degree()
    ky, my, ny = y.degree()
    degree = RODegree(kx + ky, mx + my, nx + ny)
    target = _d2p_summands(*degree, p)
    if not target:
        return ProductResult("zero", degree)
    exps = (x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d, shift)
    for gen, order in target:
        if gen.exponents() != exps:
            continue
        if order == 0:
            q, r = divmod(total, gen.indexMultiplier)
            if r:
                raise RuntimeError(
                    "index bookkeeping failed: product multiplier "
                    f"{total} is not a multiple of {gen.indexMultiplier}")
            return ProductResult("ok", degree, q, gen, 0)
        coeff = total % order
        if coeff == 0:
            return ProductResult("zero", degree)
        return ProductResult("ok", degree, coeff, gen, order)
    if kill and all(gcd(o, kill) == 1 for _, o in target if o):
        # the product is killed by ``kill`` but the target group has no
        # such torsion, so it can only be zero
        return ProductResult("zero", degree)
    return ProductResult(UNDETERMINED, degree)


# --------------------------------------------------------------------------
# sign of the residual involution, and the two isotropy-family pieces

def tau_sign(k, m, n, t):
    """Sign of the residual involution on H_t of the cyclic quotient.

    The quotient complexes of the rotation spheres carry a residual
    action of the reflection class; on the degree-t homology of the
    quotient model for  k + m*sigma + n*gamma  it acts by +1 or -1, and
    the sign depends only on (k, m, t).
    """
    return -1 if (abs(k + m - t) // 2 + m) % 2 else 1


def f1_piece_at(k, m, n):
    """The first isotropy-family piece in degree k + m*sigma + n*gamma.

    After inverting p the piece over the family generated by the
    reflection subgroups is the order-2 table in the folded degree
    (k + n) + (m + n)*sigma, with u_gs acting as the folding unit.
    """
    return c2_at(k + n, m + n)


def _z12_vanishes(k, m):
    return (abs(k + m) // 2 + m) % 2 == 1


def f2_piece_at(k, m, n, p):
    """The second isotropy-family piece in degree k + m*sigma + n*gamma.

    After inverting 2 the piece over the rotation family is either zero
    (a parity obstruction in (k, m)) or the odd-prime cyclic table in the
    folded degree (k + m) + n*lambda, with u_2s acting as the unit.
    """
    _check_p(p)
    if _z12_vanishes(k, m):
        return GradedGroup((k + m, n), ())
    return cp_at(k + m, n, p)


# --------------------------------------------------------------------------
# gluing of the two localizations

@dataclass(frozen=True)
class LocalizeReport:
    """Result of replaying both localizations over a degree box."""

    p: int
    box: tuple
    checked: int
    mismatches: tuple

    def ok(self):
        return not self.mismatches


def _strip(summands, q):
    """Invert the prime q in an integral degreewise answer."""
    out = []
    for mono, order in summands:
        if order:
            o = order
            while o % q == 0:
                o //= q
            if o > 1:
                out.append((mono.exponents(), o, 1))
            continue
        idx = mono.indexMultiplier
        while idx % q == 0:
            idx //= q
        out.append((mono.exponents(), 0, idx))
    return sorted(out)


def _plain(summands):
    return sorted((mono.exponents(), order, mono.indexMultiplier)
                  for mono, order in summands)


def localize_check(box, p):
    """Compare the integral table with both localized presentations.

    ``box`` bounds the scanned degrees: (kmax, mmax, nmax) checks all
    |k| <= kmax, |m| <= mmax, |n| <= nmax.  In each degree, inverting a
    prime in the integral answer (dropping the torsion it kills and the
    matching part of every index multiplier) must reproduce the localized
    family enumeration summand by summand, and the two isotropy-family
    pieces must agree with the localizations they glue into.
    """
    _check_p(p)
    kmax, mmax, nmax = box
    mismatches = []
    checked = 0
    for k in range(-kmax, kmax + 1):
        for m in range(-mmax, mmax + 1):
            for n in range(-nmax, nmax + 1):
                checked += 1
                integral = _d2p_summands(k, m, n, p)
                invp = _d2p_invp_summands(k, m, n, p)
                inv2 = _d2p_inv2_summands(k, m, n, p)
                if _strip(integral, p) != _plain(invp):
                    mismatches.append(((k, m, n), "invert-p",
                                       _strip(integral, p), _plain(invp)))
                if _strip(integral, 2) != _plain(inv2):
                    mismatches.append(((k, m, n), "invert-2",
                                       _strip(integral, 2), _plain(inv2)))
                f1 = _c2_summands(k + n, m + n)
                f1_view = sorted(
                    ((mo.b, mo.c, mo.suspensionShift), o, mo.indexMultiplier)
                    for mo, o in f1)
                invp_view = sorted(
                    ((mo.b, mo.c, mo.suspensionShift), o, mo.indexMultiplier)
                    for mo, o in invp)
                if f1_view != invp_view:
                    mismatches.append(((k, m, n), "family-1-piece",
                                       f1_view, invp_view))
                if _z12_vanishes(k, m):
                    f2 = ()
                else:
                    f2 = _cp_summands(k + m, n, p)
                f2_view = sorted(
                    ((mo.e, mo.f, mo.suspensionShift), o, mo.indexMultiplier)
                    for mo, o in f2)
                inv2_view = sorted(
                    ((mo.a, mo.d, mo.suspensionShift), o, mo.indexMultiplier)
                    for mo, o in inv2)
                if f2_view != inv2_view:
                    mismatches.append(((k, m, n), "family-2-piece",
                                       f2_view, inv2_view))
    return LocalizeReport(p, tuple(box), checked, tuple(mismatches))


# --------------------------------------------------------------------------
# symbolic reductions for a general coefficient spectrum

_PARTS = ("F1", "F2", "TILDE1", "TILDE2")


@dataclass(frozen=True)
class ReductionDescriptor:
    """Where one isotropy piece of a general coefficient computation lives.

    For a ring spectrum with suitably split fixed points, smashing with
    the four standard isotropy pieces reduces a dihedral homotopy group to
    groups over smaller subquotients; the descriptor records the target
    group, the folded degree there, which fixed-point construction is
    applied to the coefficients, and whether the piece vanishes outright
    for parity reasons.  ``specialize_hz`` evaluates the descriptor for
    the constant-coefficient spectrum itself.
    """

    part: str
    inverted: object
    targetGroup: str
    targetDegree: tuple
    operands: Tuple[str, ...]
    construction: str
    vanishes: bool
    source: RODegree

    def specialize_hz(self, p):
        _check_p(p)
        k, m, n = self.source
        if self.part == "F1":
            return f1_piece_at(k, m, n)
        if self.part == "F2":
            return f2_piece_at(k, m, n, p)
        # both reduced-family pieces are contractible for the constant
        # Mackey functor
        return GradedGroup(self.source, ())


def reduce_generald2p(part, k, m, n):
    """Describe one isotropy piece of the dihedral group in one degree.

    ``part`` is "F1" or "F2" for the two proper-isotropy families (with p
    respectively 2 inverted), "TILDE1"/"TILDE2" for their cofibres.  The
    result is symbolic: it names the subquotient computation the piece
    reduces to, without evaluating it for any particular coefficients.
    """
    if part not in _PARTS:
        raise ValueError(f"part must be one of {_PARTS}, got {part!r}")
    src = RODegree(k, m, n)
    if part == "F1":
        return ReductionDescriptor(
            part, "p", "C_2", (k + n, m + n), ("A^{C_p}",),
            "categorical-fixed-points", False, src)
    if part == "F2":
        return ReductionDescriptor(
            part, 2, "C_p", (k + m, n), ("A",),
            "underlying-with-parity", _z12_vanishes(k, m), src)
    if part == "TILDE1":
        return ReductionDescriptor(
            part, "p", "C_2", (k, m), ("Phi^{C_p} A",),
            "geometric-fixed-points", False, src)
    return ReductionDescriptor(
        part, 2, "trivial", (k + n,), ("Phi^{C_2} A", "Phi^{G} A"),
        "geometric-fixed-points", False, src)


# --------------------------------------------------------------------------
# the coefficient-ring shortcut for the dihedral Burnside Mackey functor

@dataclass(frozen=True)
class HagrogPiece:
    """One summand of the Burnside-coefficient reduction."""

    operand: str
    targetGroup: str
    targetDegree: tuple
    structure: Optional[AbelianStructure] = None
    vanishes: bool = False

    def is_symbolic(self):
        return self.structure is None and not self.vanishes


@dataclass(frozen=True)
class HagrogReport:
    """Reduction of a Burnside-coefficient group in one dihedral degree."""

    degree: RODegree
    inverted: int
    pieces: Tuple[HagrogPiece, ...]


def hagrog_at(k, m, n, inverted, p):
    """Split the Burnside-coefficient group after inverting one prime.

    With p inverted the group is a sum of two order-2 computations with
    doubled respectively plain coefficient rings (both symbolic here).
    With 2 inverted it is a sum of a non-equivariant integral piece -
    evaluated exactly: Z^2 when k + n = 0, else 0 - and an odd-prime
    cyclic piece subject to the same parity obstruction as the second
    isotropy family.
    """
    _check_p(p)
    if inverted not in (2, p):
        raise ValueError(f"inverted must be 2 or {p}, got {inverted!r}")
    src = RODegree(k, m, n)
    if inverted == p:
        return HagrogReport(src, p, (
            HagrogPiece("H(A_{C_2}^2)", "C_2", (k + n, m + n)),
            HagrogPiece("H(A_{C_2})", "C_2", (k, m)),
        ))
    integral = AbelianStructure(2 if k + n == 0 else 0, ())
    if _z12_vanishes(k, m):
        cyclic = HagrogPiece("H(A_{C_p})", "C_p", (k + m, n), vanishes=True)
    else:
        cyclic = HagrogPiece("H(A_{C_p})", "C_p", (k + m, n))
    return HagrogReport(src, 2, (
        HagrogPiece("H(Z^2)", "trivial", (k + n,), structure=integral),
        cyclic,
    ))


# --------------------------------------------------------------------------
# text syntax for monomials

_NAMES = {"u_gs": "a", "u_2s": "b", "a_s": "c", "a_g": "d"}


def parse_monomial(text):
    """Parse ``u_gs^a u_2s^b a_s^c a_g^d [S^-1] [idx*]`` into a monomial.

    Factors may appear in any order; ``idx*`` (an integer glued to a
    star) scales the class, and a bare ``1`` is the unit.  Repeating a
    generator is rejected rather than silently combined.
    """
    exps = {}
    shift = 0
    index = 1
    seen_index = False
    toks = text.replace("*", "* ").split()
    if toks == ["1"]:
        return ClassMonomial()
    for tok in toks:
        if tok == "1":
            continue
        if tok.endswith("*"):
            if seen_index:
                raise ValueError(f"two index multipliers in {text!r}")
            try:
                index = int(tok[:-1])
            except ValueError:
                raise ValueError(f"bad index multiplier {tok!r}") from None
            if index < 1:
                raise ValueError(f"index multiplier must be positive: {tok!r}")
            seen_index = True
            continue
        name, _, power = tok.partition("^")
        if name == "S":
            if power != "-1":
                raise ValueError(f"only S^-1 is a valid suspension: {tok!r}")
            if shift:
                raise ValueError(f"two suspensions in {text!r}")
            shift = -1
            continue
        if name not in _NAMES:
            raise ValueError(f"unknown generator {name!r} in {text!r}")
        if _NAMES[name] in exps:
            raise ValueError(f"generator {name} repeated in {text!r}")
        if power == "":
            exps[_NAMES[name]] = 1
        else:
            try:
                exps[_NAMES[name]] = int(power)
            except ValueError:
                raise ValueError(f"bad exponent in {tok!r}") from None
    return ClassMonomial(
        exps.get("a", 0), exps.get("b", 0), exps.get("c", 0),
        exps.get("d", 0), suspensionShift=shift, indexMultiplier=index)

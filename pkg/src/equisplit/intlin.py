"""Exact integer linear algebra: Smith normal form, kernels, presentations.

Everything here runs on arbitrary-precision Python ints.  numpy is
deliberately not used: iterated row operations overflow int64 long before
matrices get interesting, and silent wraparound is the one failure mode an
exact-arithmetic package cannot afford.  At the sizes this package meets
(a few hundred rows) the plain-Python cost is acceptable.

The Smith normal form follows the usual elimination scheme (pivot of least
absolute value, alternate row/column clearing, divisibility enforced by
folding offending entries into the pivot row); see e.g. Cohen, "A Course in
Computational Algebraic Number Theory", §2.4.  Transform matrices and their
inverses are tracked through the elementary operations so solving and
presentation-reduction need no separate inversion step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class Mat:
    """A small immutable integer matrix with explicit shape.

    Row-major tuples.  The explicit column count keeps 0xN and Nx0 cases
    honest — those show up constantly as boundary matrices at the ends of
    chain complexes.
    """

    __slots__ = ("m", "n", "rows")

    def __init__(self, rows, n=None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if n is None:
            if not rows:
                raise ValueError("column count required for empty matrix")
            n = len(rows[0])
        for r in rows:
            if len(r) != n:
                raise ValueError("ragged rows")
        self.rows = rows
        self.m = len(rows)
        self.n = n

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(m, n):
        return Mat(tuple((0,) * n for _ in range(m)), n)

    @staticmethod
    def identity(n):
        return Mat(tuple(tuple(int(i == j) for j in range(n))
                         for i in range(n)), n)

    @staticmethod
    def from_cols(cols, m=None):
        cols = [tuple(c) for c in cols]
        if m is None:
            if not cols:
                raise ValueError("row count required for empty column list")
            m = len(cols[0])
        return Mat(tuple(tuple(c[i] for c in cols) for i in range(m)), len(cols))

    # -- access -------------------------------------------------------------

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def cols(self):
        return [self.col(j) for j in range(self.n)]

    def transpose(self):
        return Mat(tuple(self.col(j) for j in range(self.n)), self.m)

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    # -- arithmetic ---------------------------------------------------------

    def mul(self, other):
        if self.n != other.m:
            raise ValueError(f"shape mismatch {self.m}x{self.n} * {other.m}x{other.n}")
        ocols = other.cols()
        return Mat(tuple(tuple(sum(a * c[k] for k, a in enumerate(row))
                               for c in ocols)
                         for row in self.rows), other.n)

    def apply(self, vec):
        vec = list(vec)
        if len(vec) != self.n:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * vec[k] for k, a in enumerate(row))
                     for row in self.rows)

    def add(self, other):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("shape mismatch")
        return Mat(tuple(tuple(a + b for a, b in zip(r, s))
                         for r, s in zip(self.rows, other.rows)), self.n)

    def neg(self):
        return Mat(tuple(tuple(-a for a in r) for r in self.rows), self.n)

    def scale(self, c):
        return Mat(tuple(tuple(c * a for a in r) for r in self.rows), self.n)

    def hstack(self, other):
        if self.m != other.m:
            raise ValueError("row mismatch")
        return Mat(tuple(r + s for r, s in zip(self.rows, other.rows)),
                   self.n + other.n)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.n == other.n
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        if self.m * self.n <= 36:
            return f"Mat({[list(r) for r in self.rows]!r}, n={self.n})"
        return f"Mat<{self.m}x{self.n}>"


@dataclass(frozen=True)
class SNF:
    """U * A * V = D with U, V unimodular and D in Smith normal form."""
    D: Mat
    U: Mat | None
    V: Mat | None
    Uinv: Mat | None
    Vinv: Mat | None

    @property
    def diagonal(self):
        d = []
        for i in range(min(self.D.m, self.D.n)):
            v = self.D.rows[i][i]
            if v == 0:
                break
            d.append(v)
        return tuple(d)

    @property
    def rank(self):
        return len(self.diagonal)


def smith_normal_form(A, transforms=True, inverse_transforms=False):
    """Smith normal form with optional (inverse) transform tracking."""
    m, n = A.m, A.n
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None
    Ui = [[int(i == j) for j in range(m)] for i in range(m)] if inverse_transforms else None
    Vi = [[int(i == j) for j in range(n)] for i in range(n)] if inverse_transforms else None

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        Di, Dj = D[i], D[j]
        for k in range(n):
            Di[k] -= q * Dj[k]
        if U is not None:
            Uii, Uj = U[i], U[j]
            for k in range(m):
                Uii[k] -= q * Uj[k]
        if Ui is not None:
            for r in Ui:
                r[j] += q * r[i]

    def row_neg(i):
        D[i] = [-x for x in D[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]
        if Ui is not None:
            for r in Ui:
                r[i] = -r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_sub(i, j, q):
        # col_i -= q * col_j
        for r in D:
            r[i] -= q * r[j]
        if V is not None:
            for r in V:
                r[i] -= q * r[j]
        if Vi is not None:
            Vii, Vj = Vi[i], Vi[j]
            for k in range(n):
                Vj[k] += q * Vii[k]

    t = 0
    while t < m and t < n:
        # locate a pivot of least absolute value in the trailing block
        piv = None
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                v = Di[j]
                if v != 0 and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                v = D[i][t]
                if v:
                    q = v // D[t][t]
                    row_sub(i, t, q)
                    if D[i][t]:
                        row_swap(t, i)   # remainder is strictly smaller
                        dirty = True
            for j in range(t + 1, n):
                v = D[t][j]
                if v:
                    q = v // D[t][t]
                    col_sub(j, t, q)
                    if D[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # enforce divisibility of the rest of the block by the pivot
            offender = None
            p = D[t][t]
            for i in range(t + 1, m):
                Di = D[i]
                for j in range(t + 1, n):
                    if Di[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_sub(t, offender, -1)     # fold offending row into pivot row
        if D[t][t] < 0:
            row_neg(t)
        t += 1

    def mk(x, ncols):
        return None if x is None else Mat(x, ncols)

    return SNF(D=Mat(D, n), U=mk(U, m), V=mk(V, n),
               Uinv=mk(Ui, m), Vinv=mk(Vi, n))


def invariant_factors(A):
    """Nonzero diagonal of the Smith form (each divides the next)."""
    return smith_normal_form(A, transforms=False).diagonal


def integer_rank(A):
    if A.m == 0 or A.n == 0:
        return 0
    return smith_normal_form(A, transforms=False).rank


def kernel_basis(A):
    """Columns forming a basis of ker(A) as a direct summand of Z^n."""
    if A.n == 0:
        return Mat.zero(0, 0)
    snf = smith_normal_form(A)
    r = snf.rank
    cols = [snf.V.col(j) for j in range(r, A.n)]
    return Mat.from_cols(cols, m=A.n)


class IntSolver:
    """Repeatedly solve A x = b over Z for a fixed A."""

    def __init__(self, A):
        self.A = A
        self.snf = smith_normal_form(A)
        self.r = self.snf.rank

    def solve(self, b):
        """An integer solution of A x = b, or None."""
        b = list(b)
        if len(b) != self.A.m:
            raise ValueError("rhs length mismatch")
        if self.A.n == 0:
            return () if all(x == 0 for x in b) else None
        c = self.snf.U.apply(b)
        y = [0] * self.A.n
        for i in range(min(self.A.m, self.A.n)):
            d = self.snf.D.rows[i][i]
            if d:
                if c[i] % d:
                    return None
                y[i] = c[i] // d
        for i in range(len(c)):
            d = self.snf.D.rows[i][i] if i < min(self.A.m, self.A.n) else 0
            if d == 0 and c[i] != 0:
                return None
        return self.snf.V.apply(y)


def solve_integer(A, b):
    return IntSolver(A).solve(b)


def rational_solve(A, b):
    """One exact rational solution of A x = b, or None if inconsistent.

    Plain fraction Gaussian elimination; fine at this package's sizes.
    """
    m, n = A.m, A.n
    M = [[Fraction(x) for x in row] + [Fraction(bi)]
         for row, bi in zip(A.rows, b)]
    if len(b) != m:
        raise ValueError("rhs length mismatch")
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b2 for a, b2 in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return tuple(x)


# ---------------------------------------------------------------------------
# finitely presented abelian groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianStructure:
    """Isomorphism type: free rank plus invariant-factor torsion chain."""
    rank: int
    torsion: tuple      # each entry > 1, each divides the next

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        """Group order (None when infinite)."""
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def primary_orders(self):
        """Multiset of prime-power orders (the primary decomposition)."""
        out = []
        for t in self.torsion:
            for p in _prime_factors(t):
                q = 1
                while t % p == 0:
                    q *= p
                    t //= p
                out.append(q)
        return tuple(sorted(out))

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def prime_factors(n):
    """Distinct prime factors of |n|, ascending.  prime_factors(0) is ()."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


_prime_factors = prime_factors


class FPAbelian:
    """Z^n modulo the column span of an integer relation matrix.

    Smith-reduces the relations once; afterwards elements (length-n integer
    vectors) can be put in canonical reduced coordinates, compared, and
    lifted back.  Reduced coordinates list the nontrivial torsion
    coordinates first (values taken mod d_i), then the free coordinates.
    """

    def __init__(self, ngens, relations=None):
        if relations is None:
            relations = Mat.zero(ngens, 0)
        if relations.m != ngens:
            raise ValueError("relation matrix has wrong number of rows")
        self.ngens = ngens
        snf = smith_normal_form(relations, transforms=True,
                                inverse_transforms=True)
        self._U = snf.U
        self._Uinv = snf.Uinv
        diag = list(snf.diagonal)
        self._full_diag = diag + [0] * (ngens - len(diag))
        self.torsion_coords = tuple(i for i, d in enumerate(self._full_diag)
                                    if d > 1)
        self.free_coords = tuple(i for i, d in enumerate(self._full_diag)
                                 if d == 0)
        self.structure = AbelianStructure(
            rank=len(self.free_coords),
            torsion=tuple(self._full_diag[i] for i in self.torsion_coords))

    def reduce(self, x):
        """Canonical coordinates of an element of Z^n in the quotient."""
        y = self._U.apply(x)
        out = [y[i] % self._full_diag[i] for i in self.torsion_coords]
        out += [y[i] for i in self.free_coords]
        return tuple(out)

    def lift(self, coords):
        """A Z^n representative with the given reduced coordinates."""
        coords = list(coords)
        if len(coords) != len(self.torsion_coords) + len(self.free_coords):
            raise ValueError("coordinate length mismatch")
        y = [0] * self.ngens
        for k, i in enumerate(self.torsion_coords):
            y[i] = coords[k]
        for k, i in enumerate(self.free_coords):
            y[i] = coords[len(self.torsion_coords) + k]
        return self._Uinv.apply(y)

    def is_zero_element(self, x):
        return all(c == 0 for c in self.reduce(x))

    def reduced_map(self, columns_out, target):
        """Matrix of an induced map in reduced coordinates.

        ``columns_out[j]`` is the image (in the *target's* generator
        coordinates) of this group's j-th reduced-coordinate basis element;
        the result is rows = target reduced coords, cols = self reduced
        coords.  Well-definedness mod relations is the caller's business.
        """
        cols = [target.reduce(c) for c in columns_out]
        width = len(self.torsion_coords) + len(self.free_coords)
        if len(cols) != width:
            raise ValueError("need one image per reduced generator")
        height = len(target.torsion_coords) + len(target.free_coords)
        return Mat.from_cols(cols, m=height) if cols else Mat.zero(height, 0)


def quotient_structure(ngens, relations):
    """Isomorphism type of Z^ngens / column span, without keeping transforms."""
    if relations.n == 0 or relations.m == 0:
        return AbelianStructure(rank=ngens, torsion=())
    diag = invariant_factors(relations)
    tor = tuple(d for d in diag if d > 1)
    return AbelianStructure(rank=ngens - len(diag), torsion=tor)


# ---------------------------------------------------------------------------
# homology of free chain complexes
# ---------------------------------------------------------------------------


def homology_structure(d_out, d_in):
    """Isomorphism type of ker(d_out)/im(d_in) for integer matrices.

    Uses the standard shortcut: the kernel is a direct summand, so the
    torsion of the quotient equals the torsion of coker(d_in), i.e. the
    invariant factors of d_in; the free rank is nullity(d_out) - rank(d_in).
    Assumes d_out * d_in = 0 (not rechecked here).
    """
    n = d_out.n
    if n != d_in.m:
        raise ValueError("chain group dimension mismatch")
    r_out = integer_rank(d_out)
    facs = invariant_factors(d_in) if (d_in.n and d_in.m) else ()
    tor = tuple(d for d in facs if d > 1)
    return AbelianStructure(rank=(n - r_out) - len(facs), torsion=tor)


class HomologyData:
    """Homology at one spot of a free complex, with usable generators.

    ``cycles`` is an n x k matrix whose columns form a basis of ker(d_out)
    (a direct summand); ``group`` presents H = ker/im in those cycle
    coordinates.  ``class_of`` maps an explicit cycle (length-n vector) to
    reduced homology coordinates; ``representative`` lifts back.
    """

    def __init__(self, d_out, d_in):
        if d_out.n != d_in.m:
            raise ValueError("chain group dimension mismatch")
        self.n = d_out.n
        self.cycles = kernel_basis(d_out)
        self._solver = IntSolver(self.cycles)
        rel_cols = []
        for j in range(d_in.n):
            col = d_in.col(j)
            y = self._solver.solve(col)
            if y is None:
                raise ValueError("boundary is not a cycle; d_out * d_in != 0?")
            rel_cols.append(y)
        rel = (Mat.from_cols(rel_cols, m=self.cycles.n) if rel_cols
               else Mat.zero(self.cycles.n, 0))
        self.group = FPAbelian(self.cycles.n, rel)
        self.structure = self.group.structure

    def class_of(self, z):
        y = self._solver.solve(z)
        if y is None:
            raise ValueError("vector is not a cycle")
        return self.group.reduce(y)

    def representative(self, coords):
        return self.cycles.apply(self.group.lift(coords))

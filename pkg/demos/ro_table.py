"""
The RO(D_2p)-graded table
=========================

Querying the three-parameter homotopy table for D_2p with constant
coefficients: reading off groups and generators, multiplying named
classes, checking signs of the residual involution, and gluing the
table back together from its two localizations.
"""

from equisplit import roq

p = 3

###############################################################################
# Reading entries
# ---------------
# A degree is a triple (k, m, n).  Each nonzero entry carries a monomial
# name in the standard generators, its additive order (0 meaning a free
# class), and an index recording divisibility.

for deg in [(0, 0, 0), (0, -1, 0), (0, 0, -1), (-2, 0, 1), (-3, 1, 1)]:
    g = roq.d2p_at(*deg, p)
    print(f"{str(deg):>12}  {str(g.structure()):<10} {g.text()}")

###############################################################################
# Products
# --------
# Multiplication works on parsed class names.  A cone class times the
# complementary polynomial class lands on an integer multiple of the
# unit.

x = roq.parse_monomial("u_gs^-1 u_2s^-1 6*", p)
y = roq.parse_monomial("u_gs u_2s", p)
r = roq.multiply(x, y, p)
print(f"\n({x.text()}) * ({y.text()}) = {r.text()}   [{r.status}]")

# a_s is 2-torsion, so doubling it annihilates:
a = roq.parse_monomial("a_s", p)
print(f"(a_s)^2 lives in {roq.multiply(a, a, p).degree},",
      f"status {roq.multiply(a, a, p).status}")

try:
    roq.parse_monomial("u_2s^-1 S^-1 2*", p)
except roq.ZeroInput as e:
    print(f"zero class rejected: {e}")

###############################################################################
# Two localizations
# -----------------
# Inverting 2 wipes out all 2-torsion; inverting p keeps it.  Compare
# the same degree in both tables.

deg = (0, -1, 0)
print(f"\ndegree {deg}:")
print("  integral   ", str(roq.d2p_at(*deg, p).structure()))
print("  2 inverted ", str(roq.d2p_inv2_at(*deg, p).structure()))
print("  p inverted ", str(roq.d2p_invp_at(*deg, p).structure()))

###############################################################################
# Signs of the involution
# -----------------------

signs = [roq.tau_sign(0, 0, 0, t) for t in range(8)]
print("\ntau signs on the quotient tower, t = 0..7:", signs)

###############################################################################
# Gluing check
# ------------
# Every entry of the integral table must be recoverable from the two
# localized tables.  The report walks a whole box of degrees.

rep = roq.localize_check((4, 3, 2), p)
print(f"\nglue over box (4,3,2): checked {rep.checked} degrees,",
      f"{len(rep.mismatches)} mismatches, ok={rep.ok()}")

"""
Burnside rings from the multiplication table up
===============================================

Build a dihedral group, walk its subgroup lattice, print the table of
marks, multiply basis elements, and split the identity into idempotents
once the right primes are invertible.
"""

from equisplit import burnside as br
from equisplit import groups as gr

###############################################################################
# The group and its subgroups
# ---------------------------
# Everything starts from an explicit multiplication table.  dihedral(6)
# is the symmetries of a triangle: indices 0..2 rotate, 3..5 reflect.

G = gr.dihedral(6)
lat = gr.subgroup_lattice(G)
print(f"{G.label}: order {G.order}")
for cls, rep in zip(lat.conjClasses, lat.classReps):
    elems = lat.subgroups[rep].elements
    print(f"  class of {elems}: {len(cls)} conjugate(s), "
          f"Weyl order {lat.weylOrder[rep]}")

###############################################################################
# Marks
# -----
# The table of marks counts fixed cosets: row K, column H holds
# |(G/H)^K|.  It is triangular in the canonical class order, with Weyl
# orders on the diagonal — that triangularity is what makes every exact
# computation below a back-substitution.

tm = br.table_of_marks(lat, lat.subgroups[-1])
print("\ntable of marks:")
for rep, row in zip(tm.classReps, tm.matrix.rows):
    print(f"  {str(rep):>18} {row}")

###############################################################################
# Multiplication
# --------------
# Products of basis elements decompose double cosets.  [G/C2] squared
# picks up a free orbit.

top = lat.subgroups[-1]
c2 = br.basis_element(lat, top, (0, 3))
c3 = br.basis_element(lat, top, (0, 1, 2))
print("\n[G/C2] * [G/C2] =", c2 * c2)
print("[G/C2] * [G/C3] =", c2 * c3)

###############################################################################
# Idempotents
# -----------
# Over Z nothing splits; invert the primes of |G| and the identity
# becomes a sum of orthogonal idempotents, one per conjugacy class of
# subgroups.  Each e_H has mark 1 exactly at its own class.

es = br.idempotent_basis(lat, top, {2, 3})
total = es[0]
for e in es[1:]:
    total = total + e
print("\nidempotents over Z[1/2, 1/3]:")
lv = br.level_data(lat, tuple(top.elements))
for rep, e in zip(lv.repElements, es):
    marks = [v.value for v in br.marks_vector(e)]
    print(f"  e_{str(rep):>18} marks {marks}")
print("sum of all idempotents == 1:", total == br.unit(lat, top, {2, 3}))

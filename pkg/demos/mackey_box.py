"""
Mackey functors and the box product
===================================

Levels, transfers and restrictions for the Burnside and constant Mackey
functors; the in-family/out-of-family decomposition; and the vanishing
that makes the splitting work: constant coefficients box the
out-of-family functor to zero once the right prime is invertible.
"""

from equisplit import groups as gr
from equisplit import mackey as mk

G = gr.dihedral(6)
lat = gr.subgroup_lattice(G)

A = mk.burnside_mackey(lat)
Z = mk.constant_mackey(lat)

print("Burnside Mackey functor of D6, level ranks:")
for lv in A.to_json()["levels"]:
    print(f"  A(G/{tuple(lv['subgroup'])}): rank {lv['rank']}")

print("\nconstant functor: every level Z, transfers multiply by the index")
c2 = (0, 3)
print("  tr from trivial to C2 acts as",
      Z.tr(lat.index_of((0,)), lat.index_of(c2)).rows)

# --- family pieces ---------------------------------------------------------
# Over Z[1/3] the Burnside functor splits along the reflection family:
# M_F carries the in-family part, N_F the rest.

MF, NF = mk.sub_functors(lat, [(0,), c2], {3})
print("\nreflection family over Z[1/3]:")
for name, F in (("M_F", MF), ("N_F", NF)):
    ranks = [lv["rank"] for lv in F.to_json()["levels"]]
    print(f"  {name} level ranks {ranks}")

# --- the box-product vanishing ---------------------------------------------

B = mk.box_product(Z, NF)
print("\nZbar box N_F over Z[1/3] is zero:", B.is_zero())

cp = (0, 1, 2)
_, N2 = mk.sub_functors(lat, [(0,), cp], {2})
print("Zbar box N_F2 over Z[1/2] is zero:", mk.box_product(Z, N2).is_zero())

# Without the inverted prime the projectors do not even exist: asking
# for them raises rather than silently using floats.
try:
    mk.sub_functors(lat, [(0,), c2], {2})
except Exception as e:
    print(f"\nno projector over Z[1/2]: {type(e).__name__}: {e}")

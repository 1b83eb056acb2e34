"""
Equivariant cell complexes and Bredon homology
==============================================

Representation spheres as finite G-CW complexes, Bredon homology against
Mackey coefficients, the fixed-point marks formula, skeleta of free
classifying spaces, and the residual involution on quotients.
"""

from equisplit import gcw
from equisplit import groups as gr
from equisplit import mackey as mk

G = gr.dihedral(6)
lat = gr.subgroup_lattice(G)

###############################################################################
# Spheres and their fixed points
# ------------------------------

sig = gcw.sphere_sigma_d2p(3, group=G)
gam = gcw.sphere_gamma_d2p(3, group=G)
for name, X in (("S^sigma", sig), ("S^gamma", gam)):
    cells = [X.ncells(d) for d in X.dims()]
    print(f"{name}: cells per dimension {cells}")
    for H in ((0,), (0, 3), (0, 1, 2)):
        fx = gcw.fixed_subcomplex(X, H)
        print(f"  fixed by {H}: {[fx.ncells(d) for d in fx.dims()]}")

###############################################################################
# Bredon homology against the marks formula
# -----------------------------------------
# With Burnside coefficients, Bredon homology of any genuine complex is
# forced by fixed-point data alone.  The library computes both sides
# independently.

A = mk.burnside_mackey(lat)
X = gcw.join(sig, gam)
hb = gcw.bredon_homology(X, A)
hf = gcw.burnside_homology_formula(X)
print(f"\njoin(S^sigma, S^gamma), Burnside coefficients:")
print("  chain level:   ", hb)
print("  marks formula: ", hf)

###############################################################################
# Rotation spheres over C_p
# -------------------------
# Reduced constant-coefficient homology alternates: order-p torsion in
# even degrees below the top, Z on top, nothing odd.

for p in (3, 5):
    Cp = gr.cyclic(p)
    Z = mk.constant_mackey(gr.subgroup_lattice(Cp))
    for n in (1, 2):
        H = gcw.bredon_homology(gcw.sphere_lambda_cp(n, p), Z, reduced=True)
        print(f"S^({n}lambda) over C_{p}: {H}")

###############################################################################
# Quotients keep a residual involution
# ------------------------------------
# Collapsing the rotations of S^{n lambda} leaves a complex with a
# leftover reflection tau; its sign on surviving homology is -1 exactly
# in degrees 2, 3 mod 4.

X = gcw.sphere_lambda_cp(3, 3)
Q = gcw.orbit_complex(X, (0, 1, 2))
maps = gcw.induced_map_on_homology(Q, Q.companions["tau"], reduced=True)
print("\ntau on the quotient of S^(3lambda):")
for t in sorted(maps):
    m = maps[t]
    if m.target.is_zero():
        continue
    sign = "-1" if m.is_minus_identity() else "+1"
    print(f"  degree {t}: acts by {sign}")

###############################################################################
# Free skeleta and group homology
# -------------------------------
# A six-dimensional free skeleton of EG, collapsed to its orbit space,
# reproduces group homology strictly below the truncation.

K = gcw.eg_skeleton(gr.symmetric(3), 6)
Q = gcw.orbit_complex(K, tuple(range(6)))
print("\nS3 classifying-space skeleton quotient:",
      gcw.underlying_homology(Q))

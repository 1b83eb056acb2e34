"""
Isotropy families and their splitting coefficients
==================================================

A family — a set of subgroups closed under conjugation and passing to
subgroups — determines a summand of the sphere after enough primes are
inverted.  The coefficients that cut out the summand solve a triangular
system over the table of marks, and the primes in their denominators are
exactly the obstruction.
"""

from equisplit import families as fm
from equisplit import groups as gr

# --- the two families of a dihedral group ----------------------------------

for p in (3, 5, 7):
    G = gr.dihedral(2 * p)
    lat = gr.subgroup_lattice(G)
    c2 = next(s.elements for s in lat.subgroups if len(s.elements) == 2)
    cp = next(s.elements for s in lat.subgroups if len(s.elements) == p)

    refl = fm.splitting_coefficients(lat, fm.family_closure(lat, [c2]))
    rot = fm.splitting_coefficients(lat, fm.family_closure(lat, [cp]))
    print(f"D_{2*p}:")
    print(f"  reflection family  c_1 = {refl.coefficient((0,)).value}, "
          f"c_C2 = {refl.coefficient(c2).value}, "
          f"denominators need {sorted(refl.denominatorPrimes)}")
    print(f"  rotation family    c_1 = {rot.coefficient((0,)).value}, "
          f"c_Cp = {rot.coefficient(cp).value}, "
          f"denominators need {sorted(rot.denominatorPrimes)}")

# --- which primes must be inverted -----------------------------------------
# The report sharpens the generic bound (primes of |G|) whenever the
# family matches a coprime semidirect decomposition.

G = gr.dihedral(10)
lat = gr.subgroup_lattice(G)
c5 = next(s.elements for s in lat.subgroups if len(s.elements) == 5)
rep = fm.splitting_primes(G, fm.family_closure(lat, [c5]), lat)
print(f"\nD_10 rotation family: invert {sorted(rep.requiredPrimes)} "
      f"({rep.theoremApplied})")

# --- certified semidirect reports ------------------------------------------
# For G = G2 |x G1 the full battery checks decency, the weighted sum
# rule, divisibility of nested coefficients, the normal-part value
# 1/|G2|, and (coprime case) both denominator bounds.  Try it on the
# twisted product C7 x| C3 — 2 has order 3 mod 7, so x -> 2x acts.

G = gr.semidirect_product(
    gr.cyclic(7), gr.cyclic(3),
    [tuple((2 ** k * x) % 7 for x in range(7)) for k in range(3)])
D = gr.standard_semidirect_decomposition(G, 7)
report = fm.semidirect_report(G, D)
print(f"\n{G.label} certificates:")
for name, summary in report.certificates:
    print(f"  {name}: {summary}")

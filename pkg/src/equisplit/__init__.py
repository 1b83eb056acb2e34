"""equisplit: exact splitting data for finite-group equivariant stable homotopy.

Subpackages by topic:

* :mod:`equisplit.groups` — multiplication-table groups, subgroup lattices,
  commutant/semidirect bookkeeping;
* :mod:`equisplit.intlin` — exact integer linear algebra (Smith normal form,
  kernels, solving) that everything homological runs on;
* :mod:`equisplit.burnside` — Burnside rings, tables of marks, localized
  idempotents;
* :mod:`equisplit.mackey` — Mackey functors and box products;
* :mod:`equisplit.families` — isotropy families, splitting coefficients,
  prime obstructions and semidirect splitting reports;
* :mod:`equisplit.gcw` — finite equivariant cell complexes and Bredon
  (co)homology;
* :mod:`equisplit.roq` — the RO(G)-graded homotopy rings of the constant
  Mackey-functor Eilenberg–MacLane object for C_2, C_p and D_2p;
* :mod:`equisplit.cli` — the ``equisplit`` command.
"""

__version__ = "0.1.0"

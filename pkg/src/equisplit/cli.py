"""The ``equisplit`` command: the whole library behind one batch binary.

Every subcommand parses its inputs, runs the corresponding library call,
and wraps the outcome in a :class:`CommandResult` — status ``ok``,
``check-failed`` (a named certificate did not hold) or ``error`` (bad
usage or bad input), with a JSON payload and a list of structured
diagnostics.  ``main`` maps the three statuses onto exit codes 0 / 1 / 2.

Output is deterministic: JSON is emitted with sorted keys, every set is
sorted before serialization, and rationals are rendered as exact strings
("-1/3"), never as floats.

Groups are given either as a file (the :func:`equisplit.groups.build_group`
format) or as shorthand like ``dihedral:6`` / ``S4``.  Families are given
as a file ``{"seeds": [[0, 3]]}`` or as ``seed:C2`` / ``seed:0,3``, with
named shapes resolved against the canonical lattice ordering (first
matching conjugacy class wins).

``verify-all`` replays the full certificate battery — the same suites the
acceptance tests run — and fails loudly on the first broken invariant.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from functools import lru_cache

from . import burnside as br
from . import families as fm
from . import gcw
from . import groups as gr
from . import mackey as mk
from . import roq
from .burnside import BurnsideError
from .families import CheckFailed, FamilyError
from .gcw import GCWError
from .groups import GroupError
from .intlin import AbelianStructure, prime_factors
from .mackey import MackeyError


class UsageError(Exception):
    """Bad command line or unusable input value."""


class CommandResult:
    """Envelope for one command run.

    ``status`` is "ok", "check-failed" or "error"; ``payload`` is the
    JSON-ready result; ``diagnostics`` is a list of structured messages.
    A check-failed result always carries at least one diagnostic naming
    the certificate that broke.
    """

    __slots__ = ("status", "payload", "diagnostics")

    def __init__(self, status, payload, diagnostics=()):
        self.status = status
        self.payload = payload
        self.diagnostics = list(diagnostics)
        if status == "check-failed" and not any(
                "certificate" in d for d in self.diagnostics):
            raise ValueError("check-failed needs a named certificate")

    def to_json(self):
        return {"status": self.status, "payload": self.payload,
                "diagnostics": self.diagnostics}

    def __repr__(self):
        return f"CommandResult({self.status!r})"


def _ok(payload, diagnostics=()):
    return CommandResult("ok", payload, diagnostics)


def _check_failed(payload, certificates):
    diags = [{"level": "error", "certificate": name, "message": msg}
             for name, msg in certificates]
    return CommandResult("check-failed", payload, diags)


def _error(message):
    return CommandResult("error", {"error": str(message)},
                         [{"level": "error", "message": str(message)}])


# ---------------------------------------------------------------------------
# input resolution
# ---------------------------------------------------------------------------

def _rational(x):
    """Exact string form of an integer or rational value."""
    if isinstance(x, br.LocalizedRational):
        x = x.value
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _parse_ints(text, count=None, what="value"):
    try:
        out = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated integers, "
                         f"got {text!r}") from None
    if count is not None and len(out) != count:
        raise UsageError(f"{what}: expected {count} integers, got {len(out)}")
    return out


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _resolve_group(text, cap):
    if text is None:
        raise UsageError("--group is required")
    if text.endswith(".json") or os.path.exists(text):
        G = gr.build_group(_load_json(text), cap=cap)
    else:
        G = gr.parse_group_shorthand(text, cap=cap)
    if G.order > cap:
        raise UsageError(f"group order {G.order} exceeds --seed-cap {cap}")
    return G


@lru_cache(maxsize=None)
def _lattice(G):
    return gr.subgroup_lattice(G)


def _resolve_subgroup(lat, token):
    """A subgroup of the lattice from CLI text.

    Accepted: ``trivial`` / ``full``; ``C<k>`` for the first class of
    cyclic subgroups of order k in canonical order; a bare integer as an
    index into the canonical subgroup list; a comma-separated element
    list.  Returns the element tuple.
    """
    token = token.strip()
    if token in ("trivial",):
        return (0,)
    if token in ("full", "G"):
        return tuple(lat.subgroups[-1].elements)
    if token.startswith("C") and token[1:].isdigit():
        k = int(token[1:])
        G = lat.group
        for ridx in lat.classReps:
            s = lat.subgroups[ridx].elements
            if len(s) == k and any(len(G.closure([g])) == k for g in s):
                return tuple(s)
        raise UsageError(f"no cyclic subgroup of order {k} in {G.label}")
    if "," in token:
        elems = _parse_ints(token, what="subgroup")
        return tuple(sorted(set(elems)))
    if token.isdigit():
        i = int(token)
        if not 0 <= i < len(lat.subgroups):
            raise UsageError(f"subgroup index {i} out of range "
                             f"(lattice has {len(lat.subgroups)})")
        return tuple(lat.subgroups[i].elements)
    raise UsageError(f"cannot parse subgroup {token!r}")


def _resolve_family(lat, token):
    if token is None:
        raise UsageError("--family is required")
    token = token.strip()
    if token.startswith("seed:"):
        seeds = [_resolve_subgroup(lat, part)
                 for part in token[5:].split("+") if part]
        if not seeds:
            raise UsageError("seed: needs at least one subgroup")
    elif token.endswith(".json") or os.path.exists(token):
        data = _load_json(token)
        if "seeds" not in data:
            raise UsageError(f"{token}: family files need a \"seeds\" list")
        seeds = [tuple(sorted(s)) for s in data["seeds"]]
    else:
        raise UsageError(f"cannot parse family {token!r} "
                         "(use seed:<subgroup> or a JSON file)")
    return fm.family_closure(lat, seeds)


def _parse_primes(text):
    if not text:
        return frozenset()
    return frozenset(_parse_ints(text, what="--primes"))


def _coefficient_system(name, lat, primes=(), fam=None):
    if name == "ZBar":
        return mk.constant_mackey(lat, primes)
    if name == "ABurnside":
        return mk.burnside_mackey(lat, primes)
    if name in ("M", "N"):
        if fam is None:
            raise UsageError(f"coefficient system {name} needs --family")
        MF, NF = mk.sub_functors(lat, fam, set(primes))
        return MF if name == "M" else NF
    raise UsageError(f"unknown coefficient system {name!r}")


def _structure_str(s):
    parts = []
    if s.rank == 1:
        parts.append("Z")
    elif s.rank > 1:
        parts.append(f"Z^{s.rank}")
    parts.extend(f"Z/{t}" for t in s.torsion)
    return " + ".join(parts) if parts else "0"


def _coeffs_json(sc):
    return {
        "coefficients": [{"rep": list(r), "value": _rational(sc.cH[r])}
                         for r in sorted(sc.cH)],
        "denominatorPrimes": sorted(sc.denominatorPrimes),
    }


def _splitting_report_json(rep):
    return {
        "family": rep.family.to_json(),
        "coefficients": _coeffs_json(rep.coefficients),
        "requiredPrimes": sorted(rep.requiredPrimes),
        "theoremApplied": rep.theoremApplied,
        "goodSubgroupChecks": [list(x) for x in rep.goodSubgroupChecks],
    }


def _odd_prime(value):
    p = int(value)
    if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, p, 2)):
        raise UsageError(f"--p wants an odd prime, got {p}")
    return p


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_group_info(args):
    G = _resolve_group(args.group, args.seed_cap)
    lat = _lattice(G)
    return _ok({
        "label": G.label,
        "order": G.order,
        "abelian": G.is_abelian(),
        "subgroupCount": len(lat.subgroups),
        "classCount": len(lat.conjClasses),
        "lattice": lat.to_json(),
    })


def _cmd_marks(args):
    G = _resolve_group(args.group, args.seed_cap)
    lat = _lattice(G)
    level = (_resolve_subgroup(lat, args.level) if args.level
             else tuple(lat.subgroups[-1].elements))
    tm = br.table_of_marks(lat, level)
    return _ok({
        "level": list(tm.level.elements),
        "classReps": [list(r) for r in tm.classReps],
        "matrix": [list(row) for row in tm.matrix.rows],
    })


def _cmd_idempotents(args):
    G = _resolve_group(args.group, args.seed_cap)
    lat = _lattice(G)
    primes = (_parse_primes(args.primes) if args.primes
              else frozenset(prime_factors(G.order)))
    top = lat.subgroups[-1]
    es = br.idempotent_basis(lat, top, primes)
    lv = br.level_data(lat, tuple(top.elements))
    by_class = {}
    for rep, e in zip(lv.repElements, es):
        key = ",".join(map(str, rep))
        by_class[key] = {",".join(map(str, r)): _rational(v)
                         for r, v in e.coeffs.items()}
    return _ok({
        "level": list(top.elements),
        "primes": sorted(primes),
        "classReps": [list(r) for r in lv.repElements],
        "idempotents": by_class,
    })


def _cmd_family_coeffs(args):
    G = _resolve_group(args.group, args.seed_cap)
    lat = _lattice(G)
    fam = _resolve_family(lat, args.family)
    sc = fm.splitting_coefficients(lat, fam)
    payload = {"family": fam.to_json()}
    payload.update(_coeffs_json(sc))
    return _ok(payload)


def _cmd_splitting_primes(args):
    G = _resolve_group(args.group, args.seed_cap)
    lat = _lattice(G)
    fam = _resolve_family(lat, args.family)
    rep = fm.splitting_primes(G, fam, lat)
    return _ok(_splitting_report_json(rep))


def _cmd_semidirect_report(args):
    G = _resolve_group(args.group, args.seed_cap)
    lat = _lattice(G)
    normal = _resolve_subgroup(lat, args.normal)
    complement = _resolve_subgroup(lat, args.complement)
    D = gr.make_decomposition(G, normal, complement)
    rep = fm.semidirect_report(G, D, lat)
    return _ok({
        "normalPart": list(D.normalPart.elements),
        "complement": list(D.complement.elements),
        "coprime": D.coprime,
        "good": [list(k) for k in rep.commutants.good],
        "F1": _splitting_report_json(rep.reportF1),
        "F2": _splitting_report_json(rep.reportF2),
        "certificates": [{"name": n, "summary": s}
                         for n, s in rep.certificates],
    })


def _cmd_box(args):
    G = _resolve_group(args.group, args.seed_cap)
    lat = _lattice(G)
    primes = _parse_primes(args.primes)
    fam = _resolve_family(lat, args.family) if args.family else None
    left = _coefficient_system(args.left, lat, primes, fam)
    right = _coefficient_system(args.right, lat, primes, fam)
    B = mk.box_product(left, right)
    return _ok({
        "left": args.left,
        "right": args.right,
        "primes": sorted(primes),
        "isZero": B.is_zero(),
        "levels": B.to_json()["levels"],
    })


def _cmd_bredon(args):
    X = gcw.from_json(_load_json(args.complex))
    lat = _lattice(X.group)
    M = _coefficient_system(args.coeff, lat)
    level = _resolve_subgroup(lat, args.level) if args.level else None
    compute = gcw.bredon_cohomology if args.cohomology else gcw.bredon_homology
    H = compute(X, M, level=level, reduced=args.reduced)
    return _ok({
        "coeff": args.coeff,
        "cohomology": bool(args.cohomology),
        "reduced": bool(args.reduced),
        "level": list(level) if level else list(range(X.group.order)),
        "groups": H.to_json(),
    })


def _cmd_burnside_formula(args):
    X = gcw.from_json(_load_json(args.complex))
    lat = _lattice(X.group)
    level = _resolve_subgroup(lat, args.level) if args.level else None
    H = gcw.burnside_homology_formula(X, level=level, reduced=args.reduced)
    return _ok({
        "reduced": bool(args.reduced),
        "level": list(level) if level else list(range(X.group.order)),
        "groups": H.to_json(),
    })


def _cmd_nf_homology(args):
    X = gcw.from_json(_load_json(args.complex))
    lat = _lattice(X.group)
    fam = _resolve_family(lat, args.family)
    primes = _parse_primes(args.primes)
    level = _resolve_subgroup(lat, args.level) if args.level else None
    H = gcw.n_f_homology(X, fam, level=level, invert=sorted(primes),
                         reduced=args.reduced)
    return _ok({
        "family": fam.to_json(),
        "invertedPrimes": sorted(primes),
        "reduced": bool(args.reduced),
        "groups": H.to_json(),
    })


def _cmd_ro_query(args):
    p = _odd_prime(args.p)
    k, m, n = _parse_ints(args.degree, 3, "--degree")
    if args.localize == "2":
        gg = roq.d2p_inv2_at(k, m, n, p)
    elif args.localize == "p":
        gg = roq.d2p_invp_at(k, m, n, p)
    else:
        gg = roq.d2p_at(k, m, n, p)
    payload = gg.to_json()
    payload["p"] = p
    payload["localize"] = args.localize
    payload["structure"] = _structure_str(gg.structure())
    payload["text"] = gg.text()
    return _ok(payload)


def _cmd_ro_mult(args):
    p = _odd_prime(args.p)
    x = roq.parse_monomial(args.left)
    y = roq.parse_monomial(args.right)
    r = roq.multiply(x, y, p)
    payload = {
        "p": p,
        "left": x.text(),
        "right": y.text(),
        "status": r.status,
        "degree": list(r.degree),
        "text": r.text(),
    }
    if r.status == "ok":
        payload["coefficient"] = r.coefficient
        payload["monomial"] = r.monomial.text()
        payload["order"] = r.order
    return _ok(payload)


def _cmd_glue_check(args):
    p = _odd_prime(args.p)
    box = _parse_ints(args.box, 3, "--box")
    rep = roq.localize_check(box, p)
    payload = {
        "p": p,
        "box": list(box),
        "checked": rep.checked,
        "ok": rep.ok(),
        "mismatches": [list(map(str, mm)) for mm in rep.mismatches],
    }
    if rep.ok():
        return _ok(payload)
    return _check_failed(payload, [
        ("localization-gluing",
         f"{len(rep.mismatches)} mismatched degrees at p={p}")])


def _cmd_tau_sign(args):
    k, m, n = _parse_ints(args.degree, 3, "--degree")
    sign = roq.tau_sign(k, m, n, args.t)
    return _ok({"degree": [k, m, n], "t": args.t, "sign": sign})


def _cmd_verify_all(args):
    p = _odd_prime(args.p) if args.p else None
    results = []
    failed = []
    for name, call in certificate_suites(p):
        try:
            res = call()
        except Exception as e:          # a suite must never take down the rest
            res = {"name": name, "ok": False,
                   "detail": f"{type(e).__name__}: {e}"}
        results.append(res)
        if not res["ok"]:
            failed.append((name, res["detail"]))
    payload = {"p": p, "ok": not failed, "certificates": results}
    if failed:
        return _check_failed(payload, failed)
    return _ok(payload)


# ---------------------------------------------------------------------------
# certificate suites
#
# These are the machine-checkable invariants behind ``verify-all``; the
# acceptance tests call the same functions one by one.  Each returns
# {"name", "ok", "detail"} plus whatever counts are worth reporting, and
# collects failures instead of raising.
# ---------------------------------------------------------------------------

def _suite(name, failures, detail, **extra):
    out = {"name": name, "ok": not failures, "detail": detail}
    if failures:
        out["failures"] = [str(f) for f in failures[:20]]
        out["detail"] = f"{len(failures)} failures: {failures[0]}"
    out.update(extra)
    return out


def constructor_groups(max_order=24):
    """Every group the basic constructors reach, up to the order bound."""
    out = [gr.cyclic(n) for n in range(1, max_order + 1)]
    out += [gr.dihedral(n) for n in range(2, max_order + 1, 2)]
    out += [gr.symmetric(n) for n in (1, 2, 3, 4)]
    out += [gr.alternating(n) for n in (1, 2, 3, 4)]
    out.append(gr.quaternion())
    return [G for G in out if G.order <= max_order]


def suite_splitting_coefficients(ps=(3, 5, 7)):
    """Reflection- and rotation-family coefficients for dihedral groups."""
    failures = []
    for p in ps:
        G = gr.dihedral(2 * p)
        lat = _lattice(G)
        c2 = next(s.elements for s in lat.subgroups if len(s.elements) == 2)
        cp = next(s.elements for s in lat.subgroups if len(s.elements) == p)
        refl = fm.splitting_coefficients(lat, fm.family_closure(lat, [c2]))
        rot = fm.splitting_coefficients(lat, fm.family_closure(lat, [cp]))
        checks = {
            "c_1 reflection": refl.coefficient((0,)).value
                              == Fraction(1 - p, 2 * p),
            "c_C2": refl.coefficient(c2).value == 1,
            "reflection primes": refl.denominatorPrimes == {p},
            "c_1 rotation": rot.coefficient((0,)).value == 0,
            "c_Cp": rot.coefficient(cp).value == Fraction(1, 2),
            "rotation primes": rot.denominatorPrimes == {2},
        }
        failures += [f"D_{2 * p}: {k}" for k, v in checks.items() if not v]
    return _suite("splitting-coefficients", failures,
                  f"both dihedral families at p in {tuple(ps)}")


def suite_idempotent_partition(max_order=24):
    """Idempotent bases over S = primes of |G| for every constructor group:
    partition of unity, idempotency, orthogonality, indicator marks."""
    failures = []
    groups = constructor_groups(max_order)
    for G in groups:
        lat = _lattice(G)
        top = lat.subgroups[-1]
        S = frozenset(prime_factors(G.order))
        es = br.idempotent_basis(lat, top, S)
        total = es[0]
        for e in es[1:]:
            total = total + e
        if total != br.unit(lat, top, S):
            failures.append(f"{G.label}: sum is not 1")
        for i, e in enumerate(es):
            if e * e != e:
                failures.append(f"{G.label}: e_{i} not idempotent")
            marks = [v.value for v in br.marks_vector(e)]
            if marks != [1 if j == i else 0 for j in range(len(es))]:
                failures.append(f"{G.label}: e_{i} marks not indicator")
            for j in range(i + 1, len(es)):
                prod = e * es[j]
                if any(v.value for v in prod.coeffs.values()):
                    failures.append(f"{G.label}: e_{i} e_{j} != 0")
    return _suite("idempotent-partition", failures,
                  f"{len(groups)} constructor groups of order <= {max_order}")


def _coset_space(G, L, H):
    t = G.table
    rem = set(L)
    pts = []
    while rem:
        g = min(rem)
        cos = tuple(sorted(t[g][h] for h in H))
        pts.append(cos)
        rem -= set(cos)
    return pts


def _orbit_product_counts(G, lv, L, K1, K2):
    """Decompose (L/K1) x (L/K2) into orbits point by point — no marks,
    no ring structure, just the group acting on pairs of cosets."""
    t = G.table
    pts = set((a, b) for a in _coset_space(G, L, K1)
              for b in _coset_space(G, L, K2))
    rep_of = {tuple(sorted(r)): r for r in lv.repElements}
    counts = {}
    while pts:
        seed = min(pts)
        orbit = set()
        stack = [seed]
        while stack:
            q = stack.pop()
            if q in orbit:
                continue
            orbit.add(q)
            for g in L:
                stack.append((tuple(sorted(t[g][e] for e in q[0])),
                              tuple(sorted(t[g][e] for e in q[1]))))
        pts -= orbit
        base = min(orbit)
        stab = tuple(g for g in L
                     if (tuple(sorted(t[g][e] for e in base[0])),
                         tuple(sorted(t[g][e] for e in base[1]))) == base)
        for g in L:
            moved = tuple(sorted(G.conjugate_subset(g, stab)))
            if moved in rep_of:
                counts[rep_of[moved]] = counts.get(rep_of[moved], 0) + 1
                break
    return counts


def suite_product_oracle(max_order=24):
    """Burnside multiplication vs direct orbit decomposition, all basis
    pairs over every constructor group."""
    failures = []
    pairs = 0
    groups = constructor_groups(max_order)
    for G in groups:
        lat = _lattice(G)
        L = tuple(lat.subgroups[-1].elements)
        lv = br.level_data(lat, L)
        for a in lv.repElements:
            xa = br.basis_element(lat, L, a)
            for b in lv.repElements:
                prod = xa * br.basis_element(lat, L, b)
                got = {rep: v.value for rep, v in prod.coeffs.items() if v}
                if got != _orbit_product_counts(G, lv, L, a, b):
                    failures.append(f"{G.label}: [{a}] x [{b}]")
                pairs += 1
    return _suite("product-oracle", failures,
                  f"{pairs} basis pairs across {len(groups)} groups")


def suite_bredon_marks():
    """Bredon homology with Burnside coefficients against the fixed-point
    marks formula, every level and degree, on a mixed pool of complexes."""
    G = gr.dihedral(6)
    lat = _lattice(G)
    A = mk.burnside_mackey(lat)
    reps = [tuple(lat.subgroups[r].elements) for r in lat.classReps]
    sig = gcw.sphere_sigma_d2p(3, group=G)
    gam = gcw.sphere_gamma_d2p(3, group=G)
    pool = [(f"orbit[{len(r)}]", gcw.orbit_cells(G, r)) for r in reps]
    pool += [
        ("sigma", sig),
        ("gamma", gam),
        ("join(sigma,sigma)", gcw.join(sig, sig)),
        ("join(sigma,gamma)", gcw.join(sig, gam)),
        ("join(orbit[1],sigma)", gcw.join(gcw.orbit_cells(G, (0,)), sig)),
        ("smash(sigma,sigma)", gcw.smash(sig, sig)),
        ("smash(sigma,gamma)", gcw.smash(sig, gam)),
        ("smash(gamma,gamma)", gcw.smash(gam, gam)),
    ]
    failures = []
    checked = 0
    for name, X in pool:
        for L in reps:
            hb = gcw.bredon_homology(X, A, level=L)
            hf = gcw.burnside_homology_formula(X, level=L)
            for d in range(X.top + 2):
                if hb.at(d) != hf.at(d):
                    failures.append(f"{name} at level {L}, degree {d}")
                checked += 1
    return _suite("bredon-marks", failures,
                  f"{len(pool)} complexes x {len(reps)} levels "
                  f"({checked} comparisons)")


def suite_rotation_spheres(ps=(3, 5)):
    """Reduced Bredon homology of the rotation representation spheres:
    torsion of order p below the top even degree, infinite cyclic on top."""
    failures = []
    for p in ps:
        lat = _lattice(gr.cyclic(p))
        Z = mk.constant_mackey(lat)
        for n in (1, 2, 3):
            H = gcw.bredon_homology(gcw.sphere_lambda_cp(n, p), Z,
                                    reduced=True)
            for t in range(2 * n + 1):
                want = (AbelianStructure(0, (p,)) if t % 2 == 0 and t < 2 * n
                        else AbelianStructure(1, ()) if t == 2 * n
                        else AbelianStructure(0, ()))
                if H.at(t) != want:
                    failures.append(f"p={p} n={n} t={t}: {H.at(t)}")
    return _suite("rotation-spheres", failures,
                  f"n <= 3 at p in {tuple(ps)}")


def suite_tau_signs(ps=(3, 5)):
    """The residual reflection on quotients of rotation spheres acts by
    -1 exactly in degrees 2, 3 mod 4, and the sign table agrees."""
    failures = []
    tested = 0
    for p in ps:
        for n in (1, 2, 3):
            X = gcw.sphere_lambda_cp(n, p)
            Q = gcw.orbit_complex(X, tuple(range(p)))
            maps = gcw.induced_map_on_homology(Q, Q.companions["tau"],
                                               reduced=True)
            for t, mp in maps.items():
                if mp.target.is_zero():
                    continue
                minus = t % 4 in (2, 3)
                if minus and not mp.is_minus_identity():
                    failures.append(f"p={p} n={n} t={t}: expected -1")
                if not minus and not mp.is_identity():
                    failures.append(f"p={p} n={n} t={t}: expected +1")
                if roq.tau_sign(0, 0, 0, t) != (-1 if minus else 1):
                    failures.append(f"tau_sign(0,0,0,{t}) disagrees")
                tested += 1
    return _suite("tau-signs", failures,
                  f"{tested} surviving degrees, p in {tuple(ps)}")


def suite_box_vanishing(ps=(3, 5)):
    """Constant coefficients box the out-of-family functor to zero once
    the right prime is inverted, both dihedral families."""
    failures = []
    for p in ps:
        G = gr.dihedral(2 * p)
        lat = _lattice(G)
        Z = mk.constant_mackey(lat)
        c2 = next(s.elements for s in lat.subgroups if len(s.elements) == 2)
        cp = next(s.elements for s in lat.subgroups if len(s.elements) == p)
        _, N1 = mk.sub_functors(lat, [(0,), c2], {p})
        if not mk.box_product(Z, N1).is_zero():
            failures.append(f"D_{2 * p}: ZBar box N_F1 over Z[1/{p}]")
        _, N2 = mk.sub_functors(lat, [(0,), cp], {2})
        if not mk.box_product(Z, N2).is_zero():
            failures.append(f"D_{2 * p}: ZBar box N_F2 over Z[1/2]")
    return _suite("box-vanishing", failures,
                  f"both families at p in {tuple(ps)}")


def suite_localization_gluing(ps=(3, 5), box=(8, 6, 4)):
    """Replaying the two localizations and the glued pieces over the box."""
    failures = []
    checked = 0
    want = 1
    for b in box:
        want *= 2 * b + 1
    for p in ps:
        rep = roq.localize_check(box, p)
        checked += rep.checked
        if rep.checked != want:
            failures.append(f"p={p}: covered {rep.checked} of {want} degrees")
        failures += [f"p={p}: {mm}" for mm in rep.mismatches]
    return _suite("localization-gluing", failures,
                  f"{checked} degrees over box {tuple(box)}, "
                  f"p in {tuple(ps)}")


def suite_positive_cone():
    """The degree table against chain-level Bredon values of the smash
    models of S^{m sigma + n gamma}, both the homological and the
    cohomological pairing, at p = 3."""
    G = gr.dihedral(6)
    lat = _lattice(G)
    Z = mk.constant_mackey(lat)
    sig = gcw.sphere_sigma_d2p(3, group=G)
    gam = gcw.sphere_gamma_d2p(3, group=G)
    failures = []
    checked = 0
    for m in range(3):
        for n in range(3):
            X = gcw.zero_sphere(G)
            for part in [sig] * m + [gam] * n:
                X = gcw.smash(X, part)
            coh = gcw.bredon_cohomology(X, Z, reduced=True)
            hom = gcw.bredon_homology(X, Z, reduced=True)
            for k in range(-6, 1):
                got = roq.d2p_at(k, m, n, 3).structure()
                want = coh.at(-k)
                if (got.rank, got.primary_orders()) != \
                        (want.rank, want.primary_orders()):
                    failures.append(f"cohomology (m,n)=({m},{n}) k={k}")
                neg = roq.d2p_at(k, -m, -n, 3).structure()
                wneg = hom.at(k)
                if (neg.rank, neg.primary_orders()) != \
                        (wneg.rank, wneg.primary_orders()):
                    failures.append(f"homology (m,n)=({m},{n}) k={k}")
                checked += 2
    return _suite("positive-cone", failures,
                  f"{checked} table entries against 9 cell models")


def suite_semidirect_reports():
    """The full certificate battery on six coprime semidirect products."""
    def dihedral_case(p):
        G = gr.dihedral(2 * p)
        return G, gr.make_decomposition(G, tuple(range(p)), (0, p))

    def a4_case():
        G = gr.alternating(4)
        lat = _lattice(G)
        v4 = next(s.elements for s in lat.subgroups if len(s.elements) == 4)
        comp = gr.schur_zassenhaus(G, v4)
        return G, gr.make_decomposition(G, v4, comp.complements[0])

    def s3xc5_case():
        G = gr.direct_product(gr.symmetric(3), gr.cyclic(5))
        return G, gr.standard_semidirect_decomposition(G, 5)

    def c3_on_c7_case():
        # 2 has order 3 mod 7: x -> 2x is a faithful C3-action on C7
        G = gr.semidirect_product(
            gr.cyclic(7), gr.cyclic(3),
            [tuple((2 ** k * x) % 7 for x in range(7)) for k in range(3)])
        return G, gr.standard_semidirect_decomposition(G, 7)

    cases = [dihedral_case(3), dihedral_case(5), dihedral_case(7),
             a4_case(), s3xc5_case(), c3_on_c7_case()]
    need = {"onlydecent", "finalrelation", "divide", "gen22",
            "gen12", "gen21"}
    failures = []
    for G, D in cases:
        try:
            rep = fm.semidirect_report(G, D)
        except CheckFailed as e:
            failures.append(f"{G.label}: certificate {e.which} failed")
            continue
        names = {n for n, _ in rep.certificates}
        missing = need - names
        if missing:
            failures.append(f"{G.label}: missing {sorted(missing)}")
    return _suite("semidirect-reports", failures,
                  f"{len(cases)} groups, {len(need)} certificates each")


def suite_skeleton_quotients(depth=6):
    """Free-skeleton quotients: positive-degree homology strictly below
    the truncation is torsion killed by |G|, and the orbit-map
    certificates hold."""
    s3 = gr.symmetric(3)
    s3_lat = _lattice(s3)
    c3 = next(s.elements for s in s3_lat.subgroups if len(s.elements) == 3)
    refl = next(s.elements for s in s3_lat.subgroups
                if len(s.elements) == 2)
    cases = [
        (gr.cyclic(2), (0, 1), (0,)),
        (gr.cyclic(3), (0, 1, 2), (0,)),
        (s3, c3, refl),
    ]
    failures = []
    for G, normal, complement in cases:
        K = gcw.eg_skeleton(G, depth)
        Q = gcw.orbit_complex(K, tuple(range(G.order)))
        H = gcw.underlying_homology(Q)
        for d in range(1, depth):
            s = H.at(d)
            if s.rank != 0 or any(G.order % t for t in s.torsion):
                failures.append(f"{G.label}: H_{d} = {s} not killed by |G|")
        D = gr.make_decomposition(G, normal, complement)
        if not gcw.orbit_map_checks(K, D).ok():
            failures.append(f"{G.label}: orbit-map certificates")
    return _suite("skeleton-quotients", failures,
                  f"quotients up to dimension {depth}, 3 groups")


def certificate_suites(p=None):
    """The ordered battery behind ``verify-all``: (name, thunk) pairs.

    A given --p narrows the prime-indexed suites to that prime where it
    applies; everything else always runs in full.
    """
    def ps(default):
        return (p,) if p in default else default

    return [
        ("splitting-coefficients",
         lambda: suite_splitting_coefficients(ps((3, 5, 7)))),
        ("idempotent-partition", suite_idempotent_partition),
        ("product-oracle", suite_product_oracle),
        ("bredon-marks", suite_bredon_marks),
        ("rotation-spheres", lambda: suite_rotation_spheres(ps((3, 5)))),
        ("tau-signs", lambda: suite_tau_signs(ps((3, 5)))),
        ("box-vanishing", lambda: suite_box_vanishing(ps((3, 5)))),
        ("localization-gluing",
         lambda: suite_localization_gluing(ps((3, 5)))),
        ("positive-cone", suite_positive_cone),
        ("semidirect-reports", suite_semidirect_reports),
        ("skeleton-quotients", suite_skeleton_quotients),
    ]


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # let values like "-3,1,1" through to --degree / --box
        self._negative_number_matcher = re.compile(r"^-\d+(,-?\d+)*$")

    def error(self, message):
        raise UsageError(message)


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit the full result envelope as JSON")
    common.add_argument("--seed-cap", type=int, default=gr.DEFAULT_ORDER_CAP,
                        help="order cap for group construction")

    top = _Parser(prog="equisplit",
                  description="Exact equivariant splitting data: Burnside "
                              "rings, families, Bredon homology and "
                              "RO(G)-graded tables.")
    sub = top.add_subparsers(dest="command", metavar="command")

    def cmd(name, handler, help_text):
        q = sub.add_parser(name, parents=[common], help=help_text)
        q.set_defaults(handler=handler)
        return q

    q = cmd("group-info", _cmd_group_info,
            "order, subgroup lattice and conjugacy data")
    q.add_argument("--group", required=True)

    q = cmd("marks", _cmd_marks, "table of marks at a level")
    q.add_argument("--group", required=True)
    q.add_argument("--level", help="subgroup (index, C<k>, elements)")

    q = cmd("idempotents", _cmd_idempotents,
            "idempotent basis of the localized Burnside ring")
    q.add_argument("--group", required=True)
    q.add_argument("--primes", help="invertible primes (default: of |G|)")

    q = cmd("family-coeffs", _cmd_family_coeffs,
            "splitting coefficients of a family")
    q.add_argument("--group", required=True)
    q.add_argument("--family", required=True)

    q = cmd("splitting-primes", _cmd_splitting_primes,
            "primes that must be inverted for the splitting")
    q.add_argument("--group", required=True)
    q.add_argument("--family", required=True)

    q = cmd("semidirect-report", _cmd_semidirect_report,
            "certified splitting reports for a semidirect decomposition")
    q.add_argument("--group", required=True)
    q.add_argument("--normal", required=True)
    q.add_argument("--complement", required=True)

    q = cmd("box", _cmd_box, "box product of two Mackey functors")
    q.add_argument("--group", required=True)
    q.add_argument("--left", required=True,
                   help="ZBar | ABurnside | M | N")
    q.add_argument("--right", required=True)
    q.add_argument("--family", help="needed for M / N")
    q.add_argument("--primes")

    q = cmd("bredon", _cmd_bredon, "Bredon (co)homology of a complex")
    q.add_argument("--complex", required=True)
    q.add_argument("--coeff", default="ABurnside",
                   help="ABurnside | ZBar")
    q.add_argument("--cohomology", action="store_true")
    q.add_argument("--level")
    q.add_argument("--reduced", action="store_true")

    q = cmd("burnside-formula", _cmd_burnside_formula,
            "fixed-point marks formula for Burnside coefficients")
    q.add_argument("--complex", required=True)
    q.add_argument("--level")
    q.add_argument("--reduced", action="store_true")

    q = cmd("nf-homology", _cmd_nf_homology,
            "out-of-family homology, optionally with primes inverted")
    q.add_argument("--complex", required=True)
    q.add_argument("--family", required=True)
    q.add_argument("--primes")
    q.add_argument("--level")
    q.add_argument("--reduced", action="store_true")

    q = cmd("ro-query", _cmd_ro_query, "one degree of the RO(G) table")
    q.add_argument("--p", required=True)
    q.add_argument("--degree", required=True, metavar="k,m,n")
    q.add_argument("--localize", choices=("2", "p"))

    q = cmd("ro-mult", _cmd_ro_mult, "product of two table classes")
    q.add_argument("--p", required=True)
    q.add_argument("--left", required=True, metavar="monomial")
    q.add_argument("--right", required=True, metavar="monomial")

    q = cmd("glue-check", _cmd_glue_check,
            "replay both localizations over a degree box")
    q.add_argument("--p", required=True)
    q.add_argument("--box", default="8,6,4", metavar="k,m,n")

    q = cmd("tau-sign", _cmd_tau_sign,
            "sign of the residual involution on a quotient degree")
    q.add_argument("--degree", required=True, metavar="k,m,n")
    q.add_argument("--t", required=True, type=int)

    q = cmd("verify-all", _cmd_verify_all,
            "run every certificate suite")
    q.add_argument("--p", help="narrow the prime-indexed suites")

    return top


def run(argv):
    """Parse and execute one command line; never raises for bad input."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _error(e)
    if not getattr(args, "handler", None):
        return _error("a subcommand is required (see equisplit --help)")
    try:
        return args.handler(args)
    except UsageError as e:
        return _error(e)
    except CheckFailed as e:
        return _check_failed({"error": str(e)}, [(e.which, str(e))])
    except roq.ZeroInput as e:
        return _error(f"not a table class: {e}")
    except (GroupError, FamilyError, BurnsideError, MackeyError, GCWError,
            ValueError) as e:
        return _error(e)


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _homology_lines(groups, prefix="H"):
    out = []
    for entry in groups:
        s = AbelianStructure(entry["rank"], tuple(entry["torsion"]))
        out.append(f"{prefix}_{entry['degree']} = {_structure_str(s)}")
    return out


def _text_lines(command, res):
    if res.status == "error":
        return [f"error: {res.payload.get('error')}"]
    p = res.payload
    if command == "group-info":
        return [f"{p['label']}: order {p['order']}, "
                f"{p['subgroupCount']} subgroups in {p['classCount']} "
                f"conjugacy classes"]
    if command == "marks":
        head = [" ".join(f"({','.join(map(str, r))})" for r in p["classReps"])]
        return head + [" ".join(map(str, row)) for row in p["matrix"]]
    if command == "idempotents":
        out = []
        for key in sorted(p["idempotents"]):
            coeffs = p["idempotents"][key]
            body = " + ".join(f"{coeffs[r]} [{r}]" for r in sorted(coeffs)
                              if coeffs[r] != "0")
            out.append(f"e[{key}] = {body}")
        return out
    if command in ("family-coeffs", "splitting-primes"):
        src = p if command == "family-coeffs" else p["coefficients"]
        out = [f"c_({','.join(map(str, c['rep']))}) = {c['value']}"
               for c in src["coefficients"]]
        out.append(f"denominator primes: {src['denominatorPrimes']}")
        if command == "splitting-primes":
            out.append(f"invert {p['requiredPrimes']} "
                       f"({p['theoremApplied']})")
        return out
    if command == "semidirect-report":
        out = [f"normal {p['normalPart']} | complement {p['complement']} | "
               f"coprime: {p['coprime']}"]
        out += [f"ok {c['name']} — {c['summary']}" for c in p["certificates"]]
        return out
    if command == "box":
        out = [f"{p['left']} box {p['right']}: "
               + ("zero" if p["isZero"] else "nonzero")]
        for lv in p["levels"]:
            s = AbelianStructure(lv["rank"], tuple(lv["torsion"]))
            out.append(f"  at {lv['subgroup']}: {_structure_str(s)}")
        return out
    if command in ("bredon", "burnside-formula", "nf-homology"):
        prefix = "H^" if p.get("cohomology") else "H"
        lines = _homology_lines(p["groups"])
        if p.get("cohomology"):
            lines = [ln.replace("H_", "H^", 1) for ln in lines]
        return lines
    if command == "ro-query":
        out = [p["structure"]]
        if p["summands"] and p["text"] != p["structure"]:
            out.append(p["text"])
        return out
    if command == "ro-mult":
        return [p["text"]]
    if command == "glue-check":
        head = f"checked {p['checked']} degrees at p={p['p']}: " \
               + ("ok" if p["ok"] else "MISMATCH")
        return [head] + [" ".join(mm) for mm in p["mismatches"][:10]]
    if command == "tau-sign":
        return ["+1" if p["sign"] > 0 else "-1"]
    if command == "verify-all":
        out = []
        for c in p["certificates"]:
            mark = "ok  " if c["ok"] else "FAIL"
            out.append(f"{mark} {c['name']} — {c['detail']}")
        out.append("all certificates hold" if p["ok"]
                   else "certificate failures above")
        return out
    return [json.dumps(p, sort_keys=True, indent=2)]


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    res = run(argv)
    as_json = "--json" in argv
    if as_json:
        print(json.dumps(res.to_json(), sort_keys=True, indent=2))
    else:
        command = next((a for a in argv if not a.startswith("-")), None)
        for line in _text_lines(command, res):
            print(line)
        if res.status == "check-failed":
            for d in res.diagnostics:
                print(f"check failed: {d.get('certificate')}: "
                      f"{d.get('message')}", file=sys.stderr)
    return {"ok": 0, "check-failed": 1, "error": 2}[res.status]


if __name__ == "__main__":
    sys.exit(main())

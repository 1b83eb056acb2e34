"""
Driving the command-line surface
================================

Everything the library computes is reachable from the ``equisplit``
executable.  This tour calls the same entry point in-process and shows
the JSON envelopes a shell user would see.
"""

import json

from equisplit import cli

# ----------------------------------------------------------------------
# Every invocation returns an envelope: status, payload, diagnostics.


def show(*argv):
    res = cli.run(list(argv))
    print(f"$ equisplit {' '.join(argv)}")
    print(f"  status: {res.status}")
    return res


res = show("group-info", "--group", "dihedral:6")
print(json.dumps(res.payload, indent=2, sort_keys=True))

# ----------------------------------------------------------------------
# Splitting coefficients for the reflection family of D_6.  Rationals
# come out as exact strings.

res = show("family-coeffs", "--group", "dihedral:6", "--family", "seed:C2")
print(json.dumps(res.payload, indent=2, sort_keys=True))

# ----------------------------------------------------------------------
# A single table entry, plus a product of named classes.

res = show("ro-query", "--p", "3", "--degree", "0,-1,0")
print(json.dumps(res.payload, indent=2, sort_keys=True))

res = show("ro-mult", "--p", "3",
           "--left", "u_gs^-1 u_2s^-1 6*", "--right", "u_gs u_2s")
print(json.dumps(res.payload, indent=2, sort_keys=True))

# ----------------------------------------------------------------------
# Bad input never raises; it comes back as an error envelope.

res = show("marks", "--group", "dihedral:99")
print(f"  diagnostics: {res.diagnostics}")

# ----------------------------------------------------------------------
# The whole certificate battery.  Each suite reports independently;
# exit code 0 means every certificate checked out.

res = show("verify-all")
for suite in res.payload["suites"]:
    flag = "ok " if suite["ok"] else "FAIL"
    print(f"  {flag} {suite['name']}: {suite['detail']}")

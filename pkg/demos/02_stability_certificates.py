"""
Deciding stability, with checkable certificates
===============================================

One side searches the subgroup for an elliptic element.  The other saturates
the folded rose into a locally isometric square complex and checks that its
loops are all loxodromic.  Whichever finishes first writes a certificate.
"""
import json

from raagstab import (
    certificate_to_json, cycle_graph, decide_stability, path_graph, verify_certificate,
)
from raagstab.deciders import dumps

c5 = cycle_graph(5)
p4 = path_graph(["p", "q", "r", "s"])

cases = [(c5, ["a"]), (c5, ["a c"]), (c5, ["a b c d"]), (p4, ["p q r s"])]
for g, gens in cases:
    res = decide_stability(g, gens, budget=10**6)
    cert = certificate_to_json(g, gens, res)
    print(f"{gens}: {res.verdict:10s} evidence={type(res.evidence).__name__:16s}"
          f" verified={bool(verify_certificate(g, gens, cert))}")

# The stable certificate for <abcd> carries the saturated complex itself.
res = decide_stability(c5, ["a b c d"])
cert = certificate_to_json(c5, ["a b c d"], res)
print(dumps(cert)[:600], "...")

# Tampering with any field makes verification fail.
bad = json.loads(dumps(cert))
bad["evidence"]["cycles_scanned"] += 1
print("tampered:", verify_certificate(c5, ["a b c d"], bad))

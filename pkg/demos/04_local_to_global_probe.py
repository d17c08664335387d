"""
Local-to-global constants and the heuristic probe
=================================================

In a delta-hyperbolic space, paths that are (lambda, epsilon)-quasigeodesic
on every window of length K are globally (lambda', epsilon')-quasigeodesic.
The probe uses that to search for constants for a subgroup in the star
metric, given an assumed delta.  Nothing computes delta here, so the
answer is labelled HEURISTIC.
"""
from raagstab import cycle_graph, l2g_constants, stability_probe

for delta, lam, eps in [(0, 1, 0), (0, 1, 1), (0, 2, 1), (1, 1, 0), (2, 1, 0)]:
    c = l2g_constants(delta, lam, eps)
    print(f"delta={delta} lambda={lam} eps={eps}: K={c.K} lambda'={c.lam_out:.3g} eps'={c.eps_out:.3g}")

g = cycle_graph(5)
for gens in (["a b c d"], ["a c"]):
    rep = stability_probe(g, gens, lambda_max=3, epsilon_max=2, delta_assumed=0)
    print(rep.label, gens, "first pass:", rep.first_pass)
    for e in rep.entries:
        print(f"   ({e.lam},{e.eps}) K={e.constants.K}: {e.status} after {e.words_checked} words")

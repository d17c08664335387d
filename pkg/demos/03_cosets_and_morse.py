"""
Coset enumeration and the Morse semi-decision
=============================================

Finite-index subgroups are Morse, and so are stable ones.  The
semi-decision tries stability first, then Todd-Coxeter with what is left
of the budget.  For anything else it can only run out of budget.
"""
from raagstab import (
    BudgetExhausted, compact, cycle_graph, enumerate_cosets, parse_graph, semidecide_morse,
    table_csv,
)

z2 = parse_graph("vertex x\nvertex y\nedge x y\n")  # Z^2; the edge graph is accepted with a warning

res = enumerate_cosets(z2, ["x^2", "y^3"], budget=10**5)
print("index of <x^2, y^3> in Z^2:", res.index)
print(table_csv(z2, compact(res.table)))

for gens in (["x^2", "y"], ["x y", "x y^-1"]):
    m = semidecide_morse(z2, gens, budget=10**5)
    print(gens, "->", m.route, "index", m.index)

c5 = cycle_graph(5)
print("<abcd> in A(C5) ->", semidecide_morse(c5, ["a b c d"], budget=10**5).route)

# <a> is neither stable nor of finite index, so the search just stops.
m = semidecide_morse(c5, ["a"], budget=10**5)
print("<a> ->", m.status if isinstance(m, BudgetExhausted) else m)

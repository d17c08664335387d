"""
Normal forms and element types in A(C5)
=======================================

The pentagon gives the smallest interesting right-angled Artin group:
connected, with connected complement, and no triangles.
"""
from raagstab import (
    classify, cycle_graph, format_word, growth_probe, normalize, parse_word, shuffle_class,
    star_length,
)

g = cycle_graph(5)  # a-b-c-d-e-a
print(g.to_text())


def show(text):
    return format_word(g, normalize(g, parse_word(g, text)))


# adjacent letters commute, so a b a^-1 collapses to b
print("a b a^-1        ->", show("a b a^-1"))
# a and c do not commute: nothing cancels
print("a c a^-1        ->", show("a c a^-1"))
print("a b e a^-1 b^-1 ->", show("a b e a^-1 b^-1"))

# every spelling of a reduced element obtained by swapping commuting neighbours
w = parse_word(g, "a b c")
print("shuffles of a b c:", sorted(format_word(g, u) for u in shuffle_class(g, w)))

# Elliptic elements sit inside a join (here the star of b); loxodromic ones do not.
for text in ["a c", "c a b c^-1", "a b c d", "a c e"]:
    ec = classify(g, parse_word(g, text))
    extra = f" cover={ec.witness}" if ec.witness else ""
    print(f"{text:12s} {ec.kind}{extra}")

# Star length: fewest pieces, each supported in one star.
n, fac = star_length(g, parse_word(g, "a b c d e"))
print("|a b c d e|_* =", n, [format_word(g, b) for b in fac.blocks], fac.star_vertices)

# Growth under powers separates the two types in practice.
for text in ["a c", "a b c d", "a^-1 c^-1 e^-1"]:
    print(f"|({text})^n|_*, n=1..8:", growth_probe(g, parse_word(g, text), 8))
# The last one climbs in steps of two, so the growth is not strictly monotone
# from one power to the next, although it is unbounded.

"""Undoing a piecewise conjugation of a rotation.

f = c r c^-1 is rotation by 1/3 seen through a two-piece change of
coordinates c, so f itself has breakpoints.  The group <f> is finite; we cut
the circle where its elements break, glue the arcs back along the group, and
recover a standard circle on which f acts as a rotation.
"""

from fractions import Fraction as F

from pw1d import piecewise as pw
from pw1d import regularize as rg
from pw1d.textio import parse_map

c = parse_map("circ{ [0: 1/2,0] [1/2: 3/2,-1/2] }")
f = pw.compose(c, pw.compose(pw.rotation(F(1, 3)), pw.inverse(c)))
print("f =", f)
print("f global:", pw.is_global(f))

group = rg.enumerate_group([f], 100)
print("group order:", len(group))

man = rg.cut_and_glue(group)
print()
print(man.to_text())
for i, comp in enumerate(man.components()):
    print("component", i, "arcs", comp, "->", rg.classify_component(man, i))

k = rg.conjugator(group, man)
print("\nconjugator k =", k)
print("c^-1        =", pw.inverse(c))
for g in group:
    print("  k g k^-1 =", pw.compose(k, pw.compose(g, pw.inverse(k))))
print("verified:", rg.verify_regularized(group, k))

# Read projectively the same circle has a parabolic holonomy, not P^1.
pm = rg.cut_and_glue(group, mode=rg.PROJECTIVE)
print("\nprojective reading:",
      [str(rg.classify_component(pm, i)) for i in range(len(pm.components()))])

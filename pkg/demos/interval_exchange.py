"""Interval exchanges on R/Z, computed exactly.

We build two exchanges of three intervals, compare their orders, look at
where a composition breaks, and carry one of them over to the projective line.
"""

from fractions import Fraction as F

from pw1d import piecewise as pw
from pw1d.textio import parse_map

# Reversing the order of intervals of lengths (1/2, 1/4, 1/4).
s = parse_map("circ{ [0: 1,1/2] [1/2: 1,-1/4] [3/4: 1,-3/4] }")
# The same reversal with lengths (1/4, 1/2, 1/4) is symmetric.
t = parse_map("circ{ [0: 1,3/4] [1/4: 1,0] [3/4: 1,-3/4] }")

print("s =", s)
print("t =", t)
print("order of s:", pw.order_of(s, 20))   # 4, not 2: unequal end lengths
print("order of t:", pw.order_of(t, 20))   # an honest involution

st = pw.compose(s, t)
print("\ns after t =", st)
print("breakpoints:", [str(b) for b in pw.breakpoints(st)])
print("bound |bp s| + |bp t| =", len(pw.breakpoints(s)) + len(pw.breakpoints(t)))
print("order of s t:", pw.order_of(st, 50))

r = pw.rotation(F(1, 3))
print("\nrotation by 1/3 =", r)
print("global on R/Z despite two pieces:", pw.is_global(r))
print("singular points:", pw.singular_points(r))

# On P^1 the circle becomes [0, 1) and everything else is fixed.
rp = pw.convert_model(r)
print("\nthe same rotation on P^1:", rp)
print("global on P^1:", pw.is_global(rp), " continuous:", pw.is_continuous(rp))
print("back to R/Z matches:", pw.convert_model(rp) == r)

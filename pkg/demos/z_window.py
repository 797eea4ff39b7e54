"""A finite window of Z, globalized.

The generator a moves i to i+1 on the window {0, ..., 4}.  Its universal
globalization is the line Z: each radius adds one point at either end.  The
window itself is commensurated but not invariant, and the line has two ends,
the obstruction that rules out a fixed point for Z.
"""

from pw1d import partial as pa

spec = pa.PartialActionSpec(["a"], points=list(range(5)),
                            tables=[{0: 1, 1: 2, 2: 3, 3: 4}])

for r in (1, 2, 5, 10):
    ball = pa.globalize_ball(spec, r)
    print(f"radius {r:2d}: {len(ball.classes):2d} classes, boundary",
          [ball.label(c) for c in ball.boundary])

ball = pa.globalize_ball(spec, 4)
window = [ball.class_of((), i) for i in range(5)]
for letter, res in pa.commensurated_check(ball, window).items():
    print(f"window vs {letter} window:", [ball.label(c) for c in res.difference])

rep = pa.ends_estimate(pa.globalize_ball(spec, 8), 2)
print("\nends:", rep.estimate, "stable from radius", rep.stable_from)
print("axioms:", pa.verify_axioms(spec, 4))

"""
The extension operator
======================

Given a k-jet on a finite set, the extension produces a C^k function on all
of R^n that reproduces the prescribed derivatives on the set.  Off the set
it is a moving blend of the jet's Taylor polynomials, weighted by the
partition of unity.
"""

import numpy as np

from whitneyext import extend, jets
from whitneyext import exprlang as el

###############################################################################
# Reconstruction of a sampled function
# ------------------------------------
# Sample sin on five points with derivatives to order 2, extend, and compare
# on a grid.  The extension is not sin — but it matches it to the order the
# jet carries near the data.

f = el.VectorExpr.parse(["sin(x0)"], 1)
pts = [(f"p{i}", (float(x),)) for i, x in enumerate([-2, -1, 0, 1, 2])]
F = extend.Extension(jets.Jet.from_expr(f, pts, 2))

print("   x      F(x)      sin(x)    |err|")
for x in np.linspace(-2.5, 2.5, 11):
    val = F.eval((x,))[0]
    print(f"{x:6.2f}  {val:9.6f}  {np.sin(x):9.6f}  {abs(val - np.sin(x)):.2e}")

###############################################################################
# On the set the match is exact, including derivatives:

d = F.eval_derivs((1.0,))
print("\nat the data point x=1:", {a: float(v[0]) for a, v in d.items()})
print("truth (sin, cos, -sin):", tuple(float(v) for v in (np.sin(1), np.cos(1), -np.sin(1))))

###############################################################################
# Polynomials of degree <= k are reproduced exactly everywhere, not just
# near the data — the blend of their Taylor polynomials is the polynomial.

p = el.VectorExpr.parse(["1 - 2*x0 + 0.5*x0^2"], 1)
P = extend.Extension(jets.Jet.from_expr(p, pts, 2))
worst = max(
    abs(P.eval((x,))[0] - p.eval_real((x,))[0]) for x in np.linspace(-8, 8, 100)
)
print("\nworst polynomial reproduction error on [-8, 8]:", worst)

###############################################################################
# Adaptive degree
# ---------------
# A distance schedule lowers the blending degree far from the set: full
# degree near the data, degree 0 in the far field.  A schedule of length L
# asks for degree L inside its smallest radius, so it needs a jet of order
# at least L.

jet = jets.Jet.from_expr(f, pts, 2)
A = extend.Extension(jet, schedule=(4.0, 1.5))
for x in (0.4, 3.0, 12.0):
    print(f"adaptive F({x:>4}) = {A.eval_adaptive((x,))[0]:.6f}   (sin = {np.sin(x):.6f})")

# an over-long schedule is refused, not silently truncated
try:
    extend.Extension(jet, schedule=(4.0, 1.5, 0.5)).eval_adaptive((0.1,))
except extend.ScheduleExhausted as err:
    print("expected refusal:", err)

###############################################################################
# Linearity
# ---------
# Extension is linear in the jet; the residual of a random combination is
# rounding noise.

g = jets.Jet.from_expr(el.VectorExpr.parse(["exp(x0)"], 1), pts, 2)
r = extend.linearity_probe(jet, g, 2.5, -1.25, (0.77,))
print("\nlinearity residual:", r)

"""
Whitney jets on finite sets
===========================

A k-jet prescribes all partial derivatives up to order k on a closed set —
here always a finite set of points.  Jets are the input to everything else:
they can be induced from smooth expressions, shifted, projected, glued, and
measured by the seminorms that control extension.
"""

import numpy as np

from whitneyext import jets
from whitneyext import exprlang as el

###############################################################################
# Inducing a jet from a function
# ------------------------------
# Take f(x) = exp(x) on three points.  The jet stores the value and the first
# two derivatives per point.

f = el.VectorExpr.parse(["exp(x0)"], 1)
pts = [("a", (-1.0,)), ("b", (0.0,)), ("c", (1.0,))]
jet = jets.Jet.from_expr(f, pts, 2)

for pid in jet.ids:
    print(pid, jet.coords[pid], "->", [float(jet.value(pid, (i,))[0]) for i in range(3)])

###############################################################################
# Taylor polynomials and remainders
# ---------------------------------
# T^2_b evaluated at point c is the quadratic approximation of e from 0;
# the remainder is what extension has to smooth over.

print("\nT^2 from b at x=1:", jet.taylor_poly("b", 2, (1.0,)))
print("truth e^1        :", np.e)
print("remainder        :", jet.remainder("b", 2, "c"))

###############################################################################
# Seminorms
# ---------
# The prime part is the largest stored derivative; the double-prime part
# measures how fast Taylor polynomials from different base points drift
# apart, normalized by distance powers.  Their sum is the norm that appears
# in every continuity estimate.

print("\n|jet|'  =", jet.seminorm_prime(2))
print("|jet|'' =", jet.seminorm_dprime(2))
print("|jet|   =", jet.seminorm(2))

# The modulus at scale delta only looks at point pairs within delta; for a
# smooth source it shrinks as delta does.
for delta in (2.0, 1.0):
    print(f"modulus(delta={delta}):", jet.whitney_modulus(2, delta))

###############################################################################
# Gluing
# ------
# Jets on overlapping point sets merge when the overlap agrees; conflicting
# data is refused rather than averaged.

left = jets.Jet.from_expr(f, [("a", (-1.0,)), ("b", (0.0,))], 2)
right = jets.Jet.from_expr(f, [("b", (0.0,)), ("c", (1.0,))], 2)
merged = jets.glue([(left, left.ids), (right, right.ids)])
print("\nglued ids:", merged.ids)

bad = jets.Jet(1, 2, 1, [("b", (0.0,))], {"b": np.array([[2.0], [1.0], [1.0]])})
try:
    jets.glue([(left, left.ids), (bad, bad.ids)])
except jets.GlueMismatch as err:
    print("expected refusal:", err)

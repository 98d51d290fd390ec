"""
Truncated Taylor arithmetic and the expression language
========================================================

Every higher-order computation in this package runs on truncated Taylor
series: a function is represented by its coefficient array up to a fixed
total degree, and arithmetic on functions becomes arithmetic on arrays.
This demo walks through the basic objects.
"""

import numpy as np

from whitneyext import multiindex, taylorarith
from whitneyext import exprlang as el

###############################################################################
# Multi-indices
# -------------
# Derivatives in n variables are addressed by multi-indices alpha, stored in
# graded lexicographic order.  The position map gives each index a fixed slot
# in every coefficient array.

for alpha in multiindex.enumerate_upto(2, 2):
    print(alpha, "order", multiindex.order(alpha), "alpha! =", multiindex.factorial(alpha))

###############################################################################
# Seeding and arithmetic
# ----------------------
# A variable is seeded as the series x0 + (x - x0); everything else follows
# from the ring operations.  Here we build exp(x)*sin(x) around x = 0.7 to
# degree 4 and read off its derivatives.

x = taylorarith.seeds((0.7,), 4)[0]
series = taylorarith.exp(x) * taylorarith.sin(x)
print("\ncoefficients of exp*sin at 0.7:", np.round(series.coeffs, 6))
print("derivatives:", np.round(taylorarith.derivatives(series), 6))

# The fourth derivative of exp(x)sin(x) is -4 exp(x) sin(x); compare:
print("closed form -4*exp*sin:", -4 * np.exp(0.7) * np.sin(0.7))

###############################################################################
# Expressions
# -----------
# The expression language covers polynomials, the four operations, integer
# powers, and exp/ln/sin/cos/sqrt.  A parsed expression evaluates either to
# a float or to a whole series in any number of variables.

e = el.parse("exp(x0) * sin(x0*x1) + x1^2", 2)
print("\nvalue at (0.5, 1.2):", el.eval_real(e, (0.5, 1.2)))

tv = el.eval_taylor(e, (0.5, 1.2), 3)
d21 = taylorarith.extract_derivative(tv, (2, 1))
print("mixed derivative d^(2,1) at (0.5, 1.2):", d21)

###############################################################################
# Errors are part of the contract: a series through a pole or a branch point
# raises instead of producing garbage.

try:
    el.eval_taylor(el.parse("1/x0", 1), (0.0,), 3)
except el.DomainError as err:
    print("\nexpected failure:", err)

###############################################################################
# Vector expressions bundle several components over a shared variable list;
# composition substitutes one map into another symbolically.

g = el.VectorExpr.parse(["2*x0", "x0^2"], 1)
f = el.VectorExpr.parse(["sin(x0)*x1"], 2)
print("\n(f o g)(0.3) =", f.compose(g).eval_real((0.3,)))
print("direct:        ", [float(np.sin(0.6) * 0.09)])

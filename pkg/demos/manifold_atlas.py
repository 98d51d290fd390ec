"""
Atlases: extension on a manifold given by charts
================================================

A function on a manifold is a family of chart presentations glued by
transition maps.  Jets stored per chart must correspond under pullback;
then chart-wise extension, blended by bumps that sum to one, produces a
global function whose chart expressions match the prescribed data.
"""

import numpy as np

from whitneyext import atlas, jets
from whitneyext import exprlang as el

###############################################################################
# Two charts of the line, where the v-coordinate doubles the u-coordinate;
# the same two manifold points appear in both charts under shared ids.

at = atlas.FiniteAtlas(
    1,
    [atlas.Chart("u"), atlas.Chart("v")],
    {
        ("u", "v"): el.VectorExpr.parse(["2*x0"], 1),
        ("v", "u"): el.VectorExpr.parse(["x0/2"], 1),
    },
)
print("u=1.5 maps to v =", at.map_point("u", "v", (1.5,)))
print("round-trip residual:", at.check_roundtrips("u", "v", [(0.3,), (2.0,)]))

###############################################################################
# One global function, two presentations: g = sin(u) is sin(v/2) in the
# second chart.  Correspondence checks that the stored jets really are the
# same function seen through the transition.

aj = atlas.AtlasJet({
    "u": jets.Jet.from_expr(el.VectorExpr.parse(["sin(x0)"], 1),
                            [("p", (1.0,)), ("q", (2.0,))], 2),
    "v": jets.Jet.from_expr(el.VectorExpr.parse(["sin(x0/2)"], 1),
                            [("p", (2.0,)), ("q", (4.0,))], 2),
})
for rep in atlas.correspondence_check_all(aj, at):
    print(f"correspondence {rep['from']} -> {rep['to']}: "
          f"residual {rep['residual']:.2e}, pass={rep['pass']}")

###############################################################################
# Transport reconstructs a chart's data from the others: drop the v-chart,
# then rebuild it by pulling the u-data through the transition.

only_u = atlas.atlas_project(aj, at, keep=["u"])
rebuilt = atlas.transport(only_u, at, "v")
dev = max(
    float(np.max(np.abs(rebuilt.values[pid] - aj.jets["v"].values[pid])))
    for pid in rebuilt.ids
)
print("\nmax deviation of reconstructed v-jet:", dev)

###############################################################################
# Manifold extension
# ------------------
# With bumps h_u + h_v = 1 the chart-wise extensions blend into one global
# function; evaluated in either chart it reproduces the stored jet.

bumps = [("u", el.parse("0.5", 1)), ("v", el.parse("0.5", 1))]
me = atlas.ManifoldExtension(aj, at, bumps)

print("\nF in u-chart at 1.0:", me.eval("u", (1.0,))[0], " (sin 1 =", np.sin(1.0), ")")
print("F in v-chart at 2.0:", me.eval("v", (2.0,))[0], " (same manifold point)")

ders = me.eval_derivs("u", (2.0,), upto=2)
print("derivatives in u at 2.0:", {a: round(float(v[0]), 6) for a, v in ders.items()})
print("truth (sin, cos, -sin) :", tuple(round(float(v), 6) for v in
                                        (np.sin(2), np.cos(2), -np.sin(2))))

###############################################################################
# Between the data points the two chart expressions still describe one
# function: F(u-chart at t) equals F(v-chart at 2t).

for t in (1.2, 1.7):
    a = me.eval("u", (t,))[0]
    b = me.eval("v", (2 * t,))[0]
    print(f"chart consistency at t={t}: |F_u - F_v| = {abs(a - b):.2e}")

"""
The Whitney extension operator.

Given a k-jet f on a finite closed set A ⊂ ℝⁿ, the extension is

    F(x) = f_0(x)                                   for x ∈ A,
    F(x) = Σ_C φ_C(x) · T^k_{x_C} f(x)              for x ∉ A,

where the sum runs over the Whitney cubes supporting x, φ_C is the smooth
partition of unity subordinate to the enlarged cubes, and x_C is the
anchor of C (a nearest point of A to its center).  F is C^k, its jet on A
is exactly the prescribed one, it depends linearly on f, and it reproduces
every polynomial of degree ≤ k whose jet induced f.

Derivatives of F off A are computed by running the whole sum in Taylor
arithmetic: each anchored Taylor polynomial is expanded as an explicit
monomial series at the query point (exact — no nested evaluation scheme),
each φ_C comes from ``pou``, and the products are truncated series
products.  On A the derivatives are read from the jet, which the theorem
guarantees is the restriction of F.

The adaptive variant assigns each cube a degree from a schedule of radii
δ_1 > δ_2 > … (with δ_{i+1} < δ_i/2): the cube with center y_C uses the
largest i with d(y_C, A) < δ_i, or 0 when even δ_1 is too small.  Cubes
far from A therefore use low-degree polynomials and cubes near A use the
full stored order; requesting a degree beyond the stored jet raises
``ScheduleExhausted``.

Evaluation is pure: an Extension is immutable after construction and
batches of query points may be evaluated concurrently (the only shared
mutation is an idempotent anchor memo).
"""

import math

import numpy as np

from . import decomp, jets, multiindex, pou, taylorarith


class ScheduleExhausted(Exception):
    """The degree schedule demands a higher order than the jet stores."""

    def __init__(self, needed, stored):
        super().__init__(
            f"schedule requires degree {needed} near the set, "
            f"but the jet stores order {stored}"
        )
        self.needed = needed
        self.stored = stored


class Extension:
    """
    The extension F of a jet on a finite set, with exact derivatives.

    Parameters
    ----------
    jet : jets.Jet
        The Whitney jet to extend; its points form the closed set A.
    k : int, optional
        Degree of the anchored Taylor polynomials (default: the jet's own
        order).  Must not exceed the stored order.
    j_max : int, optional
        Finest dyadic level for cube location; queries off A but closer
        than the resolvable scale raise ``decomp.ResolutionExceeded``.
    schedule : sequence of float, optional
        Radii δ_1 > δ_2 > … for ``eval_adaptive``, each less than half
        the previous.
    """

    def __init__(self, jet, k=None, j_max=52, schedule=None):
        self.jet = jet
        self.k = jet.k if k is None else int(k)
        if not 0 <= self.k <= jet.k:
            raise ValueError(f"degree {self.k} not available in an order-{jet.k} jet")
        self.n = jet.n
        self.m = jet.m
        self.A = decomp.FinitePoints(jet.point_array())
        self.dec = decomp.Decomposition(self.A, j_max=j_max)
        self._pid_of = {jet.coords[pid]: pid for pid in jet.ids}
        if schedule is None:
            self.schedule = None
        else:
            sched = tuple(float(d) for d in schedule)
            if not sched:
                raise ValueError("empty degree schedule")
            if sched[0] <= 0.0:
                raise ValueError("schedule radii must be positive")
            for prev, cur in zip(sched, sched[1:]):
                if not cur < prev / 2:
                    raise ValueError(
                        f"schedule must shrink by more than half at each step "
                        f"({cur} after {prev})"
                    )
            self.schedule = sched

    # -- plumbing -----------------------------------------------------------

    def _anchor_id(self, cube):
        return self._pid_of[self.dec.anchor(cube)]

    def _on_set(self, x):
        return self._pid_of.get(tuple(float(c) for c in x))

    # -- evaluation ----------------------------------------------------------

    def eval(self, x):
        """F(x) as an (m,) array."""
        x = tuple(float(c) for c in x)
        pid = self._on_set(x)
        if pid is not None:
            return self.jet.values[pid][0].copy()
        out = np.zeros(self.m)
        for cube, w in pou.phi_weights_real(x, self.dec):
            out += w * self.jet.taylor_poly(self._anchor_id(cube), self.k, x)
        return out

    def eval_batch(self, xs):
        """F on every row of xs, stacked; rows are independent."""
        return np.array([self.eval(x) for x in np.asarray(xs, dtype=float)])

    def _poly_coeff_matrix(self, cube, x, upto):
        """
        T^k_{x_C} f expanded at the query point x, as the (ncoef, m)
        Taylor-normalized coefficient matrix of an order-`upto` series.
        """
        aid = self._anchor_id(cube)
        y = self.jet.coords[aid]
        factors = [
            taylorarith.seed_variable(x, i, self.n, upto) - y[i] for i in range(self.n)
        ]
        mons = taylorarith.monomial_products(factors, self.k)
        vals = self.jet.values[aid]
        ncoef = taylorarith.context(self.n, upto).ncoef
        out = np.zeros((ncoef, self.m))
        for i, a in enumerate(self.jet.indices):
            if sum(a) > self.k:
                break
            out += np.outer(mons[a].coeffs, vals[i] / multiindex.factorial(a))
        return out

    def eval_derivs(self, x, upto=None):
        """
        All partial derivatives ∂^α F(x) for |α| ≤ upto, as a dict mapping
        multi-index tuples to (m,) arrays.  On A the values are the stored
        jet entries; off A the defining sum is run in Taylor arithmetic.
        """
        upto = self.k if upto is None else int(upto)
        if not 0 <= upto <= self.k:
            raise ValueError(f"order {upto} exceeds evaluation degree {self.k}")
        indices = multiindex.enumerate_upto(self.n, upto)
        x = tuple(float(c) for c in x)
        pid = self._on_set(x)
        if pid is not None:
            vals = self.jet.values[pid]
            return {a: vals[self.jet.pos[a]].copy() for a in indices}
        ctx = taylorarith.context(self.n, upto)
        total = np.zeros((ctx.ncoef, self.m))
        for cube, phi in pou.partition_taylor(x, self.dec, upto):
            poly = self._poly_coeff_matrix(cube, x, upto)
            for c in range(self.m):
                col = taylorarith.TaylorValue(ctx, poly[:, c])
                total[:, c] += (phi * col).coeffs
        ders = total * ctx.factorials[:, None]
        return {a: ders[i].copy() for i, a in enumerate(indices)}

    # -- adaptive degree ------------------------------------------------------

    def _cube_degree(self, cube):
        """Largest schedule index whose radius still exceeds d(y_C, A)."""
        d = self.A.distance(np.asarray(cube.center))
        g = 0
        for i, delta in enumerate(self.schedule, start=1):
            if d < delta:
                g = i
            else:
                break
        return g

    def eval_adaptive(self, x):
        """
        F(x) with per-cube polynomial degree taken from the schedule:
        each supporting cube contributes T^{g_C}_{x_C} f(x).
        """
        if self.schedule is None:
            raise ValueError("extension was built without a degree schedule")
        x = tuple(float(c) for c in x)
        pid = self._on_set(x)
        if pid is not None:
            return self.jet.values[pid][0].copy()
        out = np.zeros(self.m)
        for cube, w in pou.phi_weights_real(x, self.dec):
            g = self._cube_degree(cube)
            if g > self.jet.k:
                raise ScheduleExhausted(g, self.jet.k)
            out += w * self.jet.taylor_poly(self._anchor_id(cube), g, x)
        return out

    def supporting_count(self, x):
        """Number of cubes that actually contribute at x (locality probe)."""
        return len(pou.phi_weights_real(tuple(float(c) for c in x), self.dec))


def linearity_probe(f, g, a, b, x, k=None, j_max=52):
    """
    ‖Φ(af+bg)(x) − aΦ(f)(x) − bΦ(g)(x)‖_max — zero up to rounding, since
    the extension is linear in the jet.
    """
    combined = Extension(jets.linear_combination(a, f, b, g), k=k, j_max=j_max)
    ext_f = Extension(f, k=k, j_max=j_max)
    ext_g = Extension(g, k=k, j_max=j_max)
    r = combined.eval(x) - a * ext_f.eval(x) - b * ext_g.eval(x)
    return float(np.max(np.abs(r)))


def continuity_ratio(ext, sample_points, q="max"):
    """
    Empirical continuity constant: the largest q(∂^α F(y)) over the sample
    and |α| ≤ k, divided by the jet seminorm.  Finite and stable under
    sample refinement; scales homogeneously of degree 0 under jet rescaling
    (numerator and denominator are both degree 1).
    """
    num = 0.0
    for y in sample_points:
        for v in ext.eval_derivs(y, ext.k).values():
            num = max(num, jets.apply_seminorm(q, v))
    den = ext.jet.seminorm(ext.k, q)
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den

"""
Whitney k-jets on finite point sets.

A jet stores, for every point of a finite set A in R^n and every
multi-index a with |a| <= k, a value in R^m — the candidate mixed partial
derivatives of a C^k function.  The module provides the anchored Taylor
polynomial and remainder of a jet, the order shift, projection and
restriction, the jet seminorms (sup of values plus sup of normalized
remainder quotients), a smallness modulus for the remainder condition, and
gluing of jets given on overlapping subsets.

Any finite set is closed, so the remainder condition proper is vacuous in
the limit; the modulus is still reported as a diagnostic.  Values use the
coordinate seminorms q_i(v) = |v_i| and their maximum q_max.
"""

import math

import numpy as np

from . import multiindex
from .exprlang import VectorExpr


class GlueMismatch(ValueError):
    """Pieces disagree on an overlap point beyond tolerance."""


class ValueSpace:
    """The value space E = R^m with coordinate seminorms and their max."""

    def __init__(self, m):
        if m < 1:
            raise ValueError("output dimension must be >= 1")
        self.m = m

    def q(self, which, v):
        return apply_seminorm(which, v)

    def seminorm_names(self):
        return [f"q{i}" for i in range(self.m)] + ["max"]


def apply_seminorm(which, v):
    """Apply q_i (`which` an int) or q_max (`which` == "max") to a vector."""
    v = np.asarray(v, dtype=float)
    if which == "max":
        return float(np.max(np.abs(v)))
    return float(abs(v[int(which)]))


class Jet:
    """
    A k-jet on a finite point set.

    Parameters
    ----------
    n, k, m : int
        Domain dimension, jet order, value dimension.
    points : list of (id, coords)
        Point ids (strings) with pairwise distinct coordinates.
    values : dict id -> ndarray of shape (C(n+k,n), m)
        Rows follow the graded-lex multi-index enumeration.
    """

    def __init__(self, n, k, m, points, values):
        self.n = n
        self.k = k
        self.m = m
        self.indices = multiindex.enumerate_upto(n, k)
        self.pos = {a: i for i, a in enumerate(self.indices)}
        self.ids = [pid for pid, _ in points]
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate point ids")
        self.coords = {pid: tuple(float(c) for c in x) for pid, x in points}
        seen = set()
        for pid, x in self.coords.items():
            if len(x) != n:
                raise ValueError(f"point {pid} has dimension {len(x)}, expected {n}")
            if x in seen:
                raise ValueError(f"point coordinates {x} appear twice")
            seen.add(x)
        ncoef = len(self.indices)
        self.values = {}
        for pid in self.ids:
            if pid not in values:
                raise ValueError(f"no values for point {pid}")
            arr = np.asarray(values[pid], dtype=float)
            if arr.shape != (ncoef, m):
                raise ValueError(
                    f"values for point {pid} have shape {arr.shape}, expected {(ncoef, m)}"
                )
            self.values[pid] = arr

    # -- basic queries ----------------------------------------------------

    def npoints(self):
        return len(self.ids)

    def value(self, pid, alpha):
        """f_alpha at the point with the given id, as an (m,) array."""
        return self.values[pid][self.pos[tuple(alpha)]]

    def point_array(self):
        return np.array([self.coords[pid] for pid in self.ids])

    def diameter(self, ids=None):
        """Largest pairwise distance of the selected points."""
        ids = list(ids) if ids is not None else self.ids
        pts = np.array([self.coords[p] for p in ids])
        d = 0.0
        for i in range(len(pts) - 1):
            d = max(d, float(np.max(np.linalg.norm(pts[i + 1 :] - pts[i], axis=1))))
        return d

    # -- construction -----------------------------------------------------

    @classmethod
    def from_expr(cls, f, points, k):
        """
        Induce a jet from a smooth vector expression: f_alpha(p) is the exact
        mixed partial of f at p, obtained through Taylor arithmetic.
        """
        if isinstance(f, (list, tuple)):
            raise TypeError("f must be a VectorExpr; parse the components first")
        n = f.n
        values = {}
        for pid, x in points:
            tvs = f.eval_taylor(tuple(x), k)
            cols = [tv.coeffs * tv.ctx.factorials for tv in tvs]
            values[pid] = np.stack(cols, axis=1)
        return cls(n, k, f.m, points, values)

    # -- Taylor polynomial and remainder -----------------------------------

    def taylor_poly(self, y_id, l, x):
        """
        The order-l Taylor polynomial anchored at the stored point y,
        evaluated at an arbitrary point x: sum over |a| <= l of
        (x-y)^a / a! * f_a(y).
        """
        if l > self.k:
            raise ValueError(f"order {l} exceeds jet order {self.k}")
        y = self.coords[y_id]
        h = tuple(xi - yi for xi, yi in zip(x, y))
        vals = self.values[y_id]
        out = np.zeros(self.m)
        for i, a in enumerate(self.indices):
            if sum(a) > l:
                break
            out += (multiindex.monomial(h, a) / multiindex.factorial(a)) * vals[i]
        return out

    def remainder(self, y_id, l, x_id):
        """f_0(x) - T^l_y f(x) for stored points x, y."""
        return self.value(x_id, (0,) * self.n) - self.taylor_poly(
            y_id, l, self.coords[x_id]
        )

    # -- structural maps ----------------------------------------------------

    def shift(self, alpha):
        """
        The shifted jet whose beta-value is f_{alpha+beta}, of order
        k - |alpha|.  Shifting by alpha models differentiating the jet.
        """
        alpha = tuple(alpha)
        if sum(alpha) > self.k:
            raise ValueError(f"|{alpha}| exceeds jet order {self.k}")
        knew = self.k - sum(alpha)
        new_indices = multiindex.enumerate_upto(self.n, knew)
        rows = [self.pos[multiindex.add(alpha, b)] for b in new_indices]
        values = {pid: self.values[pid][rows] for pid in self.ids}
        return Jet(self.n, knew, self.m, [(p, self.coords[p]) for p in self.ids], values)

    def project(self, l):
        """Truncate to order l <= k (drop the higher-order values)."""
        if l > self.k:
            raise ValueError(f"order {l} exceeds jet order {self.k}")
        ncoef = multiindex.count_upto(self.n, l)
        values = {pid: self.values[pid][:ncoef] for pid in self.ids}
        return Jet(self.n, l, self.m, [(p, self.coords[p]) for p in self.ids], values)

    def restrict(self, ids):
        """Keep only the listed point ids."""
        ids = list(ids)
        unknown = [p for p in ids if p not in self.coords]
        if unknown:
            raise KeyError(f"unknown point ids: {unknown}")
        values = {pid: self.values[pid] for pid in ids}
        return Jet(self.n, self.k, self.m, [(p, self.coords[p]) for p in ids], values)

    # -- seminorms ----------------------------------------------------------

    def seminorm_prime(self, l, q="max", K=None):
        """max over |a| <= l and points of K of q(f_a)."""
        if l > self.k:
            raise ValueError(f"order {l} exceeds jet order {self.k}")
        K = list(K) if K is not None else self.ids
        ncoef = multiindex.count_upto(self.n, l)
        out = 0.0
        for pid in K:
            for row in self.values[pid][:ncoef]:
                out = max(out, apply_seminorm(q, row))
        return out

    def seminorm_dprime(self, l, q="max", K=None):
        """
        max over |a| <= l and distinct points x != y of K of
        q(R^{l-|a|}_y (shifted jet)(x)) / |x-y|^{l-|a|}; 0 when K has
        fewer than two points.
        """
        if l > self.k:
            raise ValueError(f"order {l} exceeds jet order {self.k}")
        K = list(K) if K is not None else self.ids
        if len(K) < 2:
            return 0.0
        out = 0.0
        shifted = {}
        for a in self.indices:
            if sum(a) > l:
                break
            shifted[a] = self.shift(a)
        for a, sj in shifted.items():
            la = l - sum(a)
            for y_id in K:
                for x_id in K:
                    if x_id == y_id:
                        continue
                    rem = sj.remainder(y_id, la, x_id)
                    dist = math.dist(self.coords[x_id], self.coords[y_id])
                    out = max(out, apply_seminorm(q, rem) / dist**la)
        return out

    def seminorm(self, l, q="max", K=None):
        """The jet seminorm: sup of values plus sup of remainder quotients."""
        return self.seminorm_prime(l, q, K) + self.seminorm_dprime(l, q, K)

    def whitney_modulus(self, l, delta):
        """
        The remainder-condition diagnostic: the largest normalized remainder
        quotient (with q = q_max) over point pairs at distance < delta.
        Returns 0 when no pair is that close.
        """
        if l > self.k:
            raise ValueError(f"order {l} exceeds jet order {self.k}")
        if delta <= 0:
            raise ValueError("delta must be positive")
        out = 0.0
        for a in self.indices:
            if sum(a) > l:
                break
            sj = self.shift(a)
            la = l - sum(a)
            for y_id in self.ids:
                for x_id in self.ids:
                    if x_id == y_id:
                        continue
                    dist = math.dist(self.coords[x_id], self.coords[y_id])
                    if 0.0 < dist < delta:
                        rem = sj.remainder(y_id, la, x_id)
                        out = max(out, apply_seminorm("max", rem) / dist**la)
        return out

    # -- serialization -------------------------------------------------------

    def to_dict(self):
        pts = []
        for pid in self.ids:
            vals = {
                multiindex.fmt(a): [float(v) for v in self.values[pid][i]]
                for i, a in enumerate(self.indices)
            }
            pts.append({"id": pid, "x": list(self.coords[pid]), "values": vals})
        return {"dim": self.n, "order": self.k, "outdim": self.m, "points": pts}

    @classmethod
    def from_dict(cls, d):
        n, k, m = int(d["dim"]), int(d["order"]), int(d["outdim"])
        points, values = [], {}
        indices = multiindex.enumerate_upto(n, k)
        for p in d["points"]:
            pid = str(p["id"])
            points.append((pid, tuple(float(c) for c in p["x"])))
            got = {multiindex.parse(key, n): v for key, v in p["values"].items()}
            missing = [a for a in indices if a not in got]
            if missing:
                raise ValueError(
                    f"point {pid} is missing values for indices {missing[:4]}"
                )
            values[pid] = np.array([got[a] for a in indices], dtype=float)
        return cls(n, k, m, points, values)


def glue(pieces, tol=1e-12):
    """
    Merge jets given on (possibly overlapping) id sets into one jet.

    `pieces` is a list of (jet, ids) with ids a subset of the jet's points.
    On shared ids all pieces must agree on every value to within `tol`
    (absolute, per coordinate) and carry matching point coordinates; the
    result restricts back to each piece.
    """
    if not pieces:
        raise ValueError("nothing to glue")
    first = pieces[0][0]
    n, k, m = first.n, first.k, first.m
    points, values, owner = [], {}, {}
    for jet, ids in pieces:
        if (jet.n, jet.k, jet.m) != (n, k, m):
            raise ValueError("pieces have mismatched shape (n, k, m)")
        for pid in ids:
            if pid not in jet.coords:
                raise KeyError(f"piece does not contain point id {pid!r}")
            if pid in values:
                if jet.coords[pid] != owner[pid]:
                    raise GlueMismatch(
                        f"point {pid} has conflicting coordinates "
                        f"{jet.coords[pid]} vs {owner[pid]}"
                    )
                dev = float(np.max(np.abs(jet.values[pid] - values[pid])))
                if dev > tol:
                    raise GlueMismatch(
                        f"pieces disagree at point {pid}: max deviation {dev:.3e} > {tol:.3e}"
                    )
            else:
                points.append((pid, jet.coords[pid]))
                values[pid] = jet.values[pid]
                owner[pid] = jet.coords[pid]
    return Jet(n, k, m, points, values)


def linear_combination(a, f, b, g):
    """a*f + b*g for jets on the same points (same ids and coordinates)."""
    if (f.n, f.k, f.m) != (g.n, g.k, g.m):
        raise ValueError("jets have mismatched shape")
    if f.coords != g.coords:
        raise ValueError("jets live on different point sets")
    values = {pid: a * f.values[pid] + b * g.values[pid] for pid in f.ids}
    return Jet(f.n, f.k, f.m, [(p, f.coords[p]) for p in f.ids], values)


def jet_from_expr(f, points, k):
    """Module-level alias of Jet.from_expr."""
    return Jet.from_expr(f, points, k)

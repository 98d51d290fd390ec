"""
Finite atlases, jet correspondence across charts, and manifold extension.

A manifold point is always addressed as (chart id, coordinates): with a
finite atlas whose transitions are expressions, chart coordinates are the
only computable handle.  An atlas stores the charts (each with a codomain
box or all of ℝⁿ) and, for ordered chart pairs that overlap, the
transition ψ∘φ⁻¹ as a vector expression mapping φ-coordinates to
ψ-coordinates; the presence of a transition is the overlap marker.

A jet on the manifold is a family (f_φ) of per-chart jets with a shared
point-identity map: the same id in two charts names the same manifold
point.  Two members correspond when pulling f_ψ back through the
transition reproduces f_φ on the shared points — the compatibility that
makes the family a single object.  ``transport`` moves a jet into a
target chart by pulling back from every overlapping source and gluing,
which also reconstructs a chart dropped by ``atlas_project``.

``ManifoldExtension`` combines per-chart Whitney extensions with a
user-supplied partition of unity (h_i)_i subordinate to the charts:

    F = Σ_i h_i · (F_i ∘ chart_i),

evaluated and differentiated in any chart's coordinates.  Partitions of
unity on the manifold are inputs, not synthesized: existence is a
theorem, construction is the caller's choice.
"""

import numpy as np

from . import exprlang, extend, fdb, jets, multiindex, taylorarith

_SLACK = 1e-12


class MissingTransition(Exception):
    """No transition is declared for a chart pair that must overlap."""


class PartitionDeficit(Exception):
    """The supplied bump functions do not sum to 1 at a jet point."""


class CoverageError(Exception):
    """A sub-atlas leaves some jet point without any covering chart."""


class Chart:
    """
    One chart: an id, a codomain (axis-aligned box or all of ℝⁿ), and
    optionally explicit forward/inverse maps between chart codomains.

    The maps are only needed when chart coordinates must be produced from
    another presentation; transitions carry the day-to-day coordinate
    changes.  When both are present they must invert each other on the
    codomain (checked by ``check_inverse``).
    """

    def __init__(self, cid, codomain="all", forward=None, inverse=None):
        self.id = str(cid)
        if codomain != "all":
            box = [(float(lo), float(hi)) for lo, hi in codomain]
            if any(hi <= lo for lo, hi in box):
                raise ValueError(f"chart {cid}: empty codomain box {box}")
            codomain = box
        self.codomain = codomain
        self.forward = forward
        self.inverse = inverse

    def contains(self, x, slack=_SLACK):
        """Whether x lies in the codomain, with tolerance for mapped points."""
        if self.codomain == "all":
            return True
        return all(
            lo - slack <= xi <= hi + slack
            for xi, (lo, hi) in zip(x, self.codomain)
        )

    def check_inverse(self, points, tol=1e-9):
        """Largest ‖inverse(forward(x)) − x‖_max over the sample."""
        if self.forward is None or self.inverse is None:
            raise ValueError(f"chart {self.id} has no forward/inverse pair")
        worst = 0.0
        for x in points:
            y = self.inverse.eval_real(self.forward.eval_real(x))
            worst = max(worst, max(abs(yi - xi) for yi, xi in zip(y, x)))
        if worst > tol:
            raise ValueError(
                f"chart {self.id}: forward/inverse disagree by {worst:.3e}"
            )
        return worst


class FiniteAtlas:
    """
    Charts plus transitions for the overlapping ordered pairs.

    ``transitions`` maps (from_id, to_id) to the VectorExpr taking
    from-chart coordinates to to-chart coordinates.  The identity pair is
    implicit and need not be stored.
    """

    def __init__(self, dim, charts, transitions):
        self.dim = int(dim)
        self.charts = {}
        for c in charts:
            if c.id in self.charts:
                raise ValueError(f"duplicate chart id {c.id!r}")
            self.charts[c.id] = c
        self.chart_order = [c.id for c in charts]
        self.transitions = {}
        for (frm, to), ve in transitions.items():
            if frm not in self.charts or to not in self.charts:
                raise ValueError(f"transition references unknown chart ({frm},{to})")
            if ve.n != self.dim or ve.m != self.dim:
                raise ValueError(
                    f"transition ({frm},{to}) must map dimension {self.dim} to itself"
                )
            self.transitions[(str(frm), str(to))] = ve

    def chart(self, cid):
        try:
            return self.charts[cid]
        except KeyError:
            raise KeyError(f"no chart with id {cid!r}") from None

    def has_transition(self, frm, to):
        return frm == to or (frm, to) in self.transitions

    def transition(self, frm, to):
        """The coordinate change from-chart → to-chart (identity if equal)."""
        if frm == to:
            return exprlang.identity_vector(self.dim)
        try:
            return self.transitions[(frm, to)]
        except KeyError:
            raise MissingTransition(f"no transition from {frm!r} to {to!r}") from None

    def map_point(self, frm, to, x):
        return tuple(float(v) for v in self.transition(frm, to).eval_real(x))

    def in_overlap(self, frm, to, x, slack=_SLACK):
        """
        Whether the point with from-chart coordinates x lies in the overlap
        with the to-chart.  Pairs without a declared transition are
        disjoint by convention.
        """
        if not self.chart(frm).contains(x, slack):
            return False
        if frm == to:
            return True
        if (frm, to) not in self.transitions:
            return False
        return self.chart(to).contains(self.map_point(frm, to, x), slack)

    def check_roundtrips(self, frm, to, points, tol=1e-9):
        """Largest round-trip defect of transition(frm,to) ∘ transition(to,frm)."""
        fwd, back = self.transition(frm, to), self.transition(to, frm)
        worst = 0.0
        for x in points:
            y = back.eval_real(fwd.eval_real(x))
            worst = max(worst, max(abs(yi - xi) for yi, xi in zip(y, x)))
        return worst


class AtlasJet:
    """
    Per-chart jets with shared point identities.

    ``jets`` maps chart id → Jet in that chart's coordinates; a point id
    present in several charts names one manifold point, so the stored
    coordinates must be related by the transitions (``check_identities``).
    """

    def __init__(self, jet_map):
        self.jets = dict(jet_map)
        if not self.jets:
            raise ValueError("an atlas jet needs at least one chart entry")
        shapes = {(j.n, j.k, j.m) for j in self.jets.values()}
        if len(shapes) > 1:
            raise ValueError(f"per-chart jets have mismatched shapes: {shapes}")
        self.n, self.k, self.m = shapes.pop()

    def chart_ids(self):
        return list(self.jets)

    def point_ids(self):
        """All manifold point ids, in first-appearance order."""
        seen = []
        for jet in self.jets.values():
            for pid in jet.ids:
                if pid not in seen:
                    seen.append(pid)
        return seen

    def project(self, l):
        """Forget derivative data above order l in every chart."""
        return AtlasJet({cid: jet.project(l) for cid, jet in self.jets.items()})

    def coords_in_chart(self, atlas, pid, target, slack=_SLACK):
        """
        Coordinates of the point pid in the target chart, or None when the
        point does not lie in that chart's domain.  Stored coordinates win;
        otherwise the point is routed through a transition from a chart
        that has it.
        """
        jet = self.jets.get(target)
        if jet is not None and pid in jet.coords:
            return jet.coords[pid]
        for cid, src in self.jets.items():
            if pid not in src.coords or not atlas.has_transition(cid, target):
                continue
            if cid == target:
                continue
            y = atlas.map_point(cid, target, src.coords[pid])
            if atlas.chart(target).contains(y, slack):
                return y
        return None

    def check_identities(self, atlas, tol=1e-9):
        """
        Largest coordinate disagreement across charts for any shared id:
        transition(φ→ψ) applied to the φ-coordinates must reproduce the
        stored ψ-coordinates.
        """
        worst = 0.0
        cids = list(self.jets)
        for i, phi in enumerate(cids):
            for psi in cids[i + 1 :]:
                if not atlas.has_transition(phi, psi):
                    continue
                fj, pj = self.jets[phi], self.jets[psi]
                for pid in fj.ids:
                    if pid not in pj.coords:
                        continue
                    y = atlas.map_point(phi, psi, fj.coords[pid])
                    dev = max(abs(a - b) for a, b in zip(y, pj.coords[pid]))
                    worst = max(worst, dev)
        if worst > tol:
            raise ValueError(f"shared point identities disagree by {worst:.3e}")
        return worst


# -- correspondence and transport -------------------------------------------


def correspondence_check(aj, atlas, phi, psi, tol=1e-9):
    """
    Whether f_φ and f_ψ correspond: pulling f_ψ back through the transition
    φ → ψ must reproduce f_φ on the shared points.  Returns a report dict
    with the shared-point count, the max residual, and the verdict.
    """
    f_phi, f_psi = aj.jets[phi], aj.jets[psi]
    shared = [pid for pid in f_phi.ids if pid in f_psi.coords]
    report = {"from": phi, "to": psi, "points": len(shared), "residual": 0.0}
    if shared:
        trans = atlas.transition(phi, psi)
        pts = [(pid, f_phi.coords[pid]) for pid in shared]
        pulled = fdb.jet_pullback(trans, f_psi, pts, tol=max(tol, _SLACK))
        residual = 0.0
        for pid in shared:
            dev = float(np.max(np.abs(pulled.values[pid] - f_phi.values[pid])))
            residual = max(residual, dev)
        report["residual"] = residual
    report["pass"] = report["residual"] <= tol
    return report


def correspondence_check_all(aj, atlas, tol=1e-9):
    """Reports for every ordered chart pair with a declared transition."""
    out = []
    cids = [cid for cid in atlas.chart_order if cid in aj.jets]
    for phi in cids:
        for psi in cids:
            if phi != psi and atlas.has_transition(phi, psi):
                out.append(correspondence_check(aj, atlas, phi, psi, tol))
    return out


def transport(aj, atlas, target, tol=1e-9):
    """
    The jet in target-chart coordinates assembled from every chart that
    overlaps the target: each source is pulled back through the transition
    and the pieces are glued.  Sources must agree within tol on shared
    points (they do when the family corresponds); the target chart's own
    entry, when present, contributes as a plain restriction.
    """
    coord_of = {}
    own = aj.jets.get(target)
    if own is not None:
        coord_of.update(own.coords)
    pieces = []
    for cid, src in aj.jets.items():
        if cid == target:
            pieces.append((src, list(src.ids)))
            continue
        if not atlas.has_transition(target, cid) or not atlas.has_transition(
            cid, target
        ):
            continue
        pts = []
        for pid in src.ids:
            x = coord_of.get(pid)
            if x is None:
                x = atlas.map_point(cid, target, src.coords[pid])
                if not atlas.chart(target).contains(x):
                    continue
                coord_of[pid] = x
            pts.append((pid, x))
        if not pts:
            continue
        pulled = fdb.jet_pullback(
            atlas.transition(target, cid), src, pts, tol=max(tol, _SLACK)
        )
        pieces.append((pulled, list(pulled.ids)))
    if not pieces:
        raise MissingTransition(f"no source chart overlaps {target!r}")
    return jets.glue(pieces, tol=tol)


def atlas_project(aj, atlas, keep, tol=1e-9):
    """
    Restrict the family to the sub-atlas given by chart ids `keep`.  Every
    jet point must remain covered by some kept chart; otherwise the
    dropped data could not be reconstructed and a CoverageError is raised.
    """
    keep = [str(c) for c in keep]
    unknown = [c for c in keep if c not in aj.jets]
    if unknown:
        raise KeyError(f"sub-atlas names charts without jet data: {unknown}")
    kept_ids = set()
    for cid in keep:
        kept_ids.update(aj.jets[cid].ids)
    for cid, jet in aj.jets.items():
        if cid in keep:
            continue
        lost = [pid for pid in jet.ids if pid not in kept_ids]
        if lost:
            raise CoverageError(
                f"dropping chart {cid!r} loses points {lost[:4]} "
                f"covered by no kept chart"
            )
    return AtlasJet({cid: aj.jets[cid] for cid in keep})


# -- manifold extension -------------------------------------------------------


class ManifoldExtension:
    """
    The h-weighted sum of per-chart Whitney extensions:

        F(p) = Σ_i h_i(x_i(p)) · F_i(x_i(p)),

    where x_i(p) are the chart-i coordinates of p and F_i extends chart
    i's jet.  Queries are (chart id, coordinates); derivative queries
    differentiate F ∘ chart⁻¹ in that chart's coordinates by composing
    each F_i's expansion with the transition series.

    `pou` is a list of (chart id, h expression) pairs; each h must be
    supported inside its chart's codomain and the family must sum to 1
    near every jet point (validated at the points themselves).
    """

    def __init__(self, aj, atlas, pou, k=None, j_max=52, tol=1e-9):
        self.aj = aj
        self.atlas = atlas
        self.n = atlas.dim
        self.m = aj.m
        self.k = aj.k if k is None else int(k)
        self.pieces = []
        for cid, h in pou:
            if cid not in aj.jets:
                raise ValueError(
                    f"bump attached to chart {cid!r}, which carries no jet"
                )
            if isinstance(h, exprlang.VectorExpr):
                if h.m != 1:
                    raise ValueError(f"bump for chart {cid!r} must be scalar")
                h = h.exprs[0]
            ext = extend.Extension(aj.jets[cid], k=self.k, j_max=j_max)
            self.pieces.append((str(cid), h, ext))
        if not self.pieces:
            raise ValueError("empty partition of unity")
        self._check_partition(tol)

    def _chart_point(self, frm, x, cid, ext):
        """
        Chart-cid coordinates of the point with frm-coordinates x, snapped
        to a stored jet point when within matching tolerance, or None when
        the point leaves the overlap.  Snapping keeps transition rounding
        from stranding queries just off the anchor set.
        """
        if not self.atlas.has_transition(frm, cid):
            return None
        y = self.atlas.map_point(frm, cid, x) if frm != cid else tuple(x)
        if not self.atlas.chart(cid).contains(y):
            return None
        ya = np.asarray(y)
        for pid in ext.jet.ids:
            q = ext.jet.coords[pid]
            if float(np.max(np.abs(np.asarray(q) - ya))) <= _SLACK:
                return q
        return y

    def _check_partition(self, tol):
        for pid in self.aj.point_ids():
            total = 0.0
            anywhere = False
            for cid, h, _ in self.pieces:
                x = self.aj.coords_in_chart(self.atlas, pid, cid)
                if x is None:
                    continue
                anywhere = True
                total += exprlang.eval_real(h, x)
            if not anywhere or abs(total - 1.0) > tol:
                raise PartitionDeficit(
                    f"bumps sum to {total!r} at jet point {pid!r} (need 1)"
                )

    def eval(self, chart, x):
        """F at the point with the given chart coordinates, as an (m,) array."""
        x = tuple(float(c) for c in x)
        out = np.zeros(self.m)
        for cid, h, ext in self.pieces:
            y = self._chart_point(chart, x, cid, ext)
            if y is None:
                continue
            w = exprlang.eval_real(h, y)
            if w != 0.0:
                out += w * ext.eval(y)
        return out

    def eval_derivs(self, chart, x, upto=None):
        """
        All ∂^α(F ∘ chart⁻¹)(x) for |α| ≤ upto, as a dict over multi-index
        tuples.  Each term's extension expansion (at the mapped point) is
        composed with the transition series, multiplied by the bump series,
        and summed — all in Taylor arithmetic.
        """
        upto = self.k if upto is None else int(upto)
        if not 0 <= upto <= self.k:
            raise ValueError(f"order {upto} exceeds extension degree {self.k}")
        x = tuple(float(c) for c in x)
        ctx = taylorarith.context(self.n, upto)
        seeds = taylorarith.seeds(x, upto)
        total = np.zeros((ctx.ncoef, self.m))
        for cid, h, ext in self.pieces:
            y = self._chart_point(chart, x, cid, ext)
            if y is None:
                continue
            tau = self.atlas.transition(chart, cid).eval_taylor_env(seeds)
            hseries = exprlang.eval_taylor_env(h, tau)
            inners = [t - t.const for t in tau]
            ders = ext.eval_derivs(y, upto)
            for c in range(self.m):
                coeffs = np.zeros(ctx.ncoef)
                for i, a in enumerate(ctx.indices):
                    coeffs[i] = ders[a][c] / ctx.factorials[i]
                outer = taylorarith.TaylorValue(ctx, coeffs)
                composed = taylorarith.compose(outer, inners)
                total[:, c] += (hseries * composed).coeffs
        ders = total * ctx.factorials[:, None]
        return {a: ders[i].copy() for i, a in enumerate(ctx.indices)}


def manifold_extend(aj, atlas, pou, query, k=None, j_max=52, tol=1e-9):
    """One-shot evaluation: build the extension and evaluate at (chart, x)."""
    chart, x = query
    return ManifoldExtension(aj, atlas, pou, k=k, j_max=j_max, tol=tol).eval(chart, x)


# -- JSON interchange ---------------------------------------------------------


def _jet_from_points(n, pointlist):
    """Build a Jet from the interchange point list, inferring order and m."""
    if not pointlist:
        raise ValueError("chart jet has no points")
    first = pointlist[0]["values"]
    k = max(sum(multiindex.parse(key, n)) for key in first)
    m = len(next(iter(first.values())))
    doc = {"dim": n, "order": k, "outdim": m, "points": pointlist}
    return jets.Jet.from_dict(doc)


def load_atlas(doc):
    """
    Parse the atlas interchange document into (FiniteAtlas, AtlasJet, pou).

    Schema: {"dim": n, "charts": [{"id", "codomain": {"box": [[lo,hi],…]} |
    "all"}], "transitions": [{"from", "to", "map": [expr,…]}], "jets":
    [{"chart", "points": […]}], "pou": [{"chart", "h": [expr]}]} — the
    same point schema as jet-spec files; "pou" and "jets" may be empty.
    """
    n = int(doc["dim"])
    charts = []
    for c in doc["charts"]:
        codomain = c.get("codomain", "all")
        if codomain != "all":
            codomain = [(float(lo), float(hi)) for lo, hi in codomain["box"]]
        charts.append(Chart(c["id"], codomain))
    transitions = {}
    for t in doc.get("transitions", []):
        ve = exprlang.VectorExpr.parse(t["map"], n)
        transitions[(str(t["from"]), str(t["to"]))] = ve
    atlas = FiniteAtlas(n, charts, transitions)
    aj = None
    if doc.get("jets"):
        jet_map = {}
        for entry in doc["jets"]:
            cid = str(entry["chart"])
            if cid in jet_map:
                raise ValueError(f"duplicate jet entry for chart {cid!r}")
            jet_map[cid] = _jet_from_points(n, entry["points"])
        aj = AtlasJet(jet_map)
    pou = []
    for entry in doc.get("pou", []):
        exprs = entry["h"]
        if len(exprs) != 1:
            raise ValueError("each bump must be a single scalar expression")
        pou.append((str(entry["chart"]), exprlang.parse(exprs[0], n)))
    return atlas, aj, pou

"""The extension operator: fixed degree, adaptive degree, linearity,
derivative consistency, boundary recovery."""

import math

import numpy as np
import pytest

from whitneyext import decomp, extend, jets
from whitneyext import exprlang as el
from whitneyext import multiindex as mi


def jet_of(src, pts, k, n=1):
    f = el.VectorExpr.parse([src] if isinstance(src, str) else src, n)
    return jets.Jet.from_expr(f, [(f"p{i}", tuple(p)) for i, p in enumerate(pts)], k)


def test_single_anchor_forces_taylor_polynomial():
    # A={0}, jet (f0,f1) = (0,1): every anchor is 0, so F(x) = x off A
    j = jets.Jet(1, 1, 1, [("o", (0.0,))], {"o": np.array([[0.0], [1.0]])})
    F = extend.Extension(j)
    for x in (0.3, -1.7, 5.0, 123.25):
        assert F.eval((x,))[0] == pytest.approx(x, rel=1e-14)


def test_values_on_set_are_stored_values():
    j = jet_of("exp(x0)", [(0.0,), (1.0,), (-2.0,)], 2)
    F = extend.Extension(j)
    for pid in j.ids:
        x = j.coords[pid]
        assert F.eval(x)[0] == j.values[pid][0, 0]
        ders = F.eval_derivs(x)
        for alpha in j.indices:
            assert np.array_equal(ders[alpha], j.value(pid, alpha))


def test_order_zero_convex_combination():
    j = jets.Jet(1, 0, 1, [("a", (-1.0,)), ("b", (1.0,))],
                 {"a": np.array([[0.0]]), "b": np.array([[1.0]])})
    F = extend.Extension(j)
    rng = np.random.default_rng(15)
    for x in rng.uniform(-4, 4, size=50):
        if abs(x + 1) < 1e-9 or abs(x - 1) < 1e-9:
            continue
        v = F.eval((float(x),))[0]
        assert -1e-12 <= v <= 1.0 + 1e-12
    assert F.eval((-1.0,))[0] == 0.0
    assert F.eval((1.0,))[0] == 1.0


def test_polynomial_reproduction():
    src = "1 + 2*x0 - x0^2 + x0*x1 - 3*x1^2"
    j = jet_of(src, [(0.0, 0.0), (1.0, 0.5), (-1.0, 2.0)], 2, n=2)
    F = extend.Extension(j)
    p = el.parse(src, 2)
    rng = np.random.default_rng(16)
    for _ in range(300):
        x = tuple(rng.uniform(-3, 3, size=2))
        want = el.eval_real(p, x)
        got = F.eval(x)[0]
        assert got == pytest.approx(want, rel=1e-10, abs=1e-10)


def test_second_derivative_of_quadratic_everywhere_two():
    j = jet_of("x0^2", [(0.0,)], 2)
    F = extend.Extension(j)
    for x in (0.5, -2.0, 7.3):
        d = F.eval_derivs((x,))
        assert d[(2,)][0] == pytest.approx(2.0, rel=1e-12)


def test_eval_derivs_match_finite_differences():
    j = jet_of("sin(x0)", [(-1.0,), (0.5,), (2.0,)], 3)
    F = extend.Extension(j)
    h = 1e-5
    for x in (0.1, 1.4, -0.4, 3.0):
        d = F.eval_derivs((x,), upto=1)
        fd = (F.eval((x + h,))[0] - F.eval((x - h,))[0]) / (2 * h)
        assert d[(1,)][0] == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_eval_derivs_upto_truncates():
    j = jet_of("exp(x0)", [(0.0,), (1.0,)], 3)
    F = extend.Extension(j)
    d = F.eval_derivs((0.4,), upto=1)
    assert set(d) == {(0,), (1,)}
    with pytest.raises(ValueError):
        F.eval_derivs((0.4,), upto=4)


def test_requested_degree_below_jet_order():
    j = jet_of("exp(x0)", [(0.0,), (1.0,)], 3)
    F1 = extend.Extension(j, k=1)
    assert F1.k == 1
    with pytest.raises(ValueError):
        extend.Extension(j, k=4)
    with pytest.raises(ValueError):
        extend.Extension(j, k=-1)


def test_jet_recovery_near_set():
    # offset 1e-4 pairs with the 1e-3 bound: the order-2 derivative columns
    # carry cancellation noise ~eps * max|s''| / d^2, which stays below the
    # bound at this distance but would exceed it by 1e-5
    j = jet_of("exp(x0)*sin(x1)", [(0.0, 0.0), (1.0, 0.5), (-0.5, 1.0)], 2, n=2)
    F = extend.Extension(j)
    norm = j.seminorm(2)
    rng = np.random.default_rng(17)
    for pid in j.ids:
        p = np.array(j.coords[pid])
        for _ in range(8):
            u = rng.standard_normal(2)
            u /= np.linalg.norm(u)
            x = tuple(p + 1e-4 * u)
            ders = F.eval_derivs(x)
            for alpha in j.indices:
                dev = np.max(np.abs(ders[alpha] - j.value(pid, alpha)))
                assert dev < 1e-3 * (1.0 + norm)


def test_resolution_exceeded_off_set_but_too_close():
    j = jet_of("x0", [(0.0,)], 1)
    F = extend.Extension(j, j_max=8)
    with pytest.raises(decomp.ResolutionExceeded):
        F.eval((1e-7,))


def test_eval_batch_matches_eval():
    j = jet_of("sin(x0)", [(-1.0,), (2.0,)], 2)
    F = extend.Extension(j)
    xs = [(0.3,), (1.1,), (-0.2,), (4.0,)]
    batch = F.eval_batch(xs)
    for row, x in zip(batch, xs):
        assert np.array_equal(row, F.eval(x))


def test_supporting_count_bounded():
    j = jet_of("exp(x0)*x1", [(0.0, 0.0), (2.0, 1.0)], 2, n=2)
    F = extend.Extension(j)
    rng = np.random.default_rng(18)
    worst = 0
    n_checked = 0
    while n_checked < 200:
        x = tuple(rng.uniform(-3, 4, size=2))
        if F.A.distance(x) < 1e-6:
            continue
        n_checked += 1
        worst = max(worst, F.supporting_count(x))
    assert worst <= 12  # stable small constant in the plane


# -- adaptive degree ---------------------------------------------------------------


def test_schedule_validation():
    j = jet_of("exp(x0)", [(0.0,)], 3)
    extend.Extension(j, schedule=(4.0, 1.5, 0.5))  # fine: each < half previous
    with pytest.raises(ValueError):
        extend.Extension(j, schedule=())
    with pytest.raises(ValueError):
        extend.Extension(j, schedule=(-1.0,))
    with pytest.raises(ValueError):
        extend.Extension(j, schedule=(4.0, 2.0))  # not < half
    with pytest.raises(ValueError):
        extend.Extension(j, schedule=(1.0, 0.6))


def test_adaptive_far_field_degree_collapses_to_zero():
    j = jet_of("exp(x0)", [(0.0,)], 3)
    Fa = extend.Extension(j, schedule=(1e-6,))
    F0 = extend.Extension(j, k=0)
    for x in (0.5, -2.0, 3.3):
        assert Fa.eval_adaptive((x,))[0] == pytest.approx(F0.eval((x,))[0], rel=1e-14)


def test_adaptive_matches_fixed_when_degree_realized():
    # pick x so that d(y_C, A) selects schedule slot 2 for every contributing
    # cube: then adaptive equals the fixed k=2 evaluation.  At x=1 the cube
    # centers sit at distances ~0.9-1.4, all inside [0.5, 1.5).
    j = jet_of("exp(x0)", [(0.0,)], 3)
    Fa = extend.Extension(j, schedule=(4.0, 1.5, 0.5))
    F2 = extend.Extension(j, k=2)
    x = (1.0,)
    assert Fa.eval_adaptive(x)[0] == pytest.approx(F2.eval(x)[0], rel=1e-14)
    # quadratic of exp anchored at 0, evaluated at 1: 1 + 1 + 1/2
    assert Fa.eval_adaptive(x)[0] == pytest.approx(2.5, rel=1e-14)
    # farther out only slot 1 is realized: linearization 1 + x at x = 2
    assert Fa.eval_adaptive((2.0,))[0] == pytest.approx(3.0, rel=1e-14)


def test_adaptive_schedule_exhausted():
    j = jet_of("exp(x0)", [(0.0,)], 1)
    F = extend.Extension(j, schedule=(8.0, 3.0, 1.0))
    with pytest.raises(extend.ScheduleExhausted):
        F.eval_adaptive((0.05,))  # would need degree 3 > stored order 1


def test_adaptive_error_tracks_taylor_remainder():
    j = jet_of("exp(x0)", [(0.0,)], 4)
    F = extend.Extension(j, schedule=(2.0, 0.9, 0.4, 0.15))
    rng = np.random.default_rng(19)
    for x in rng.uniform(-0.5, 0.5, size=40):
        if abs(x) < 1e-6:
            continue
        got = F.eval_adaptive((float(x),))[0]
        # worst contributing degree bound: remainder of the order-g Taylor
        # polynomial of exp at 0, g >= 1 here since |x| < 0.4 region uses
        # higher slots; use the crude bound e^{|x|} |x|^{g+1}/(g+1)! with g=1
        bound = math.exp(abs(x)) * abs(x) ** 2 / 2.0
        assert abs(got - math.exp(x)) <= bound * 1.01


# -- linearity and continuity --------------------------------------------------------


def test_linearity_trivial_cases():
    f = jet_of("sin(x0)", [(-1.0,), (1.0,)], 2)
    g = jet_of("exp(x0)", [(-1.0,), (1.0,)], 2)
    assert extend.linearity_probe(f, g, 1.0, 0.0, (0.4,)) == pytest.approx(0.0, abs=1e-14)
    assert extend.linearity_probe(f, f, 1.0, -1.0, (0.4,)) == pytest.approx(0.0, abs=1e-12)


def test_linearity_random_pairs():
    rng = np.random.default_rng(20)
    pts = [(-1.0,), (0.3,), (2.0,)]
    for _ in range(20):
        f = jet_of("sin(x0)", pts, 2)
        g = jets.Jet(1, 2, 1, [(p, f.coords[p]) for p in f.ids],
                     {p: rng.standard_normal((3, 1)) for p in f.ids})
        a, b = float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))
        x = (float(rng.uniform(-2, 3)),)
        if min(abs(x[0] - q[0]) for q in pts) < 1e-6:
            continue
        scale = (abs(a) + abs(b)) * (1.0 + max(
            float(np.max(np.abs(f.values[p]))) for p in f.ids
        ) + max(float(np.max(np.abs(g.values[p]))) for p in g.ids))
        assert extend.linearity_probe(f, g, a, b, x) <= 1e-10 * scale


def test_continuity_ratio_homogeneous_under_scaling():
    j = jet_of("exp(x0)*sin(x1)", [(0.0, 0.0), (1.0, 0.5)], 2, n=2)
    j2 = jets.linear_combination(2.0, j, 0.0, j)
    rng = np.random.default_rng(21)
    sample = []
    while len(sample) < 60:
        x = tuple(rng.uniform(-2, 3, size=2))
        if decomp.FinitePoints(j.point_array()).distance(x) > 1e-3:
            sample.append(x)
    e1 = extend.Extension(j)
    e2 = extend.Extension(j2)
    r1 = extend.continuity_ratio(e1, sample)
    r2 = extend.continuity_ratio(e2, sample)
    assert r1 > 0
    assert r2 == pytest.approx(r1, rel=1e-9)

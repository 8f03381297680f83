import random

import numpy as np
import pytest

from geniter.analysis import (ClassifyConfig, classify_attractor,
                              diagonal_fixed_points, iteration_multipliers,
                              refine_orbit, stability_class,
                              stability_partials, verify_orbit_equations)
from geniter.engine import MapSpec, iterate
from geniter.families import make_family


def bisect_cubic(a, lo, hi):
    """Independent oracle: bisection on a*x*(1-x)^2 - 1 (positive diagonal
    fixed points of the degree-2 product family satisfy this cubic)."""
    f = lambda x: a * x * (1 - x) ** 2 - 1
    flo = f(lo)
    assert flo * f(hi) < 0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if f(mid) == 0:
            return mid
        if (f(mid) < 0) == (flo < 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_diagonal_fixed_points_a135():
    spec = make_family("logistic2", a=13.5)
    fps = diagonal_fixed_points(spec)
    values = [fp.value for fp in fps]
    assert len(values) == 3
    assert values[0] == 0.0
    r1_oracle = bisect_cubic(13.5, 0.05, 0.3)
    assert values[1] == pytest.approx(r1_oracle, abs=1e-12)
    assert values[1] == pytest.approx(0.0893164, abs=1e-7)
    assert values[2] == pytest.approx(2 / 3, abs=1e-9)
    for fp in fps:
        assert fp.residual < 1e-12


def test_diagonal_fixed_points_low_a():
    # max of x(1-x)^2 is 4/27 and 5*4/27 < 1: the origin is the only root
    spec = make_family("logistic2", a=5.0)
    fps = diagonal_fixed_points(spec)
    assert [fp.value for fp in fps] == [0.0]
    grid = np.linspace(1e-6, 1.0, 20_000)
    assert np.all(5.0 * grid * (1 - grid) ** 2 - 1 < 0)


def test_origin_always_a_fixed_point():
    for name, a in (("logistic2", 9.7), ("logistic3", 30.0), ("sine2", 0.7)):
        fps = diagonal_fixed_points(make_family(name, a=a))
        assert fps[0].value == 0.0


def test_tangential_double_root_detected():
    # at a = 27/4 the positive roots coalesce at x = 1/3 with no sign change
    spec = make_family("logistic2", a=6.75)
    fps = diagonal_fixed_points(spec)
    values = [fp.value for fp in fps]
    assert values[0] == 0.0
    assert any(abs(v - 1 / 3) < 1e-5 for v in values[1:])


def test_classify_fixed_point_before_trifurcation():
    spec = make_family("logistic2", a=12.782842211)
    rep = classify_attractor(spec, "F", (0.7, 0.3))
    assert rep.kind == "FixedPoint"
    assert rep.values[0] == pytest.approx(0.6541934769, abs=1e-9)


def test_classify_period3_after_trifurcation():
    spec = make_family("logistic2", a=12.782842212)
    rep = classify_attractor(spec, "F", (0.7, 0.3))
    assert rep.kind == "Periodic"
    assert rep.period == 3
    top = max(rep.values)
    low = min(rep.values)
    assert top == pytest.approx(0.7973063104767419, abs=1e-9)
    assert low == pytest.approx(0.515931143419749, abs=1e-9)


def test_classify_border_seed_goes_to_zero():
    spec = make_family("logistic2", a=13.0)
    rep = classify_attractor(spec, "F", (0.05, 0.05))
    assert rep.kind == "FixedPoint"
    assert abs(rep.values[0]) < 1e-9
    # oracle: direct long iteration lands at 0
    tail = iterate(spec, "F", (0.05, 0.05), 5000).values[-10:]
    assert np.all(np.abs(tail) < 1e-30)


def test_classify_unbounded():
    spec = MapSpec.from_sources(2, 1, ["x*y"])
    rep = classify_attractor(spec, "F", (2.0, 2.0),
                             ClassifyConfig(transient=100, budget=10_000))
    assert rep.kind == "Unbounded"


def test_periodic_minimality_and_closure():
    spec = make_family("logistic2", a=13.0)
    cfg = ClassifyConfig()
    rep = classify_attractor(spec, "F", (0.5, 0.5), cfg)
    assert rep.kind == "Periodic" and rep.period == 3
    vals = np.array(rep.values)
    # minimality: no proper divisor of p is a period at the same tolerance
    for q in (1,):
        assert np.any(np.abs(vals - np.roll(vals, q)) >= cfg.tol)
    # closure: re-iterating from the reported history reproduces the orbit
    rerun = iterate(spec, "F", rep.history, 2 + 3 * 4).values[2:]
    for i, v in enumerate(rerun):
        assert abs(v - vals[i % 3]) < 10 * cfg.tol


def test_stability_partials_paper_points():
    spec = make_family("logistic2", a=13.5)
    assert stability_partials(spec, (2 / 3, 2 / 3)) == pytest.approx((-1.0, -1.0), abs=1e-9)
    assert stability_partials(spec, (1 / 3, 1 / 3)) == pytest.approx((1.0, 1.0), abs=1e-9)
    assert stability_partials(spec, (2 / 3, 1 / 3)) == pytest.approx((-1.0, 1.0), abs=1e-9)
    assert stability_partials(spec, (1 / 3, 2 / 3)) == pytest.approx((1.0, -1.0), abs=1e-9)


def test_finite_difference_fallback_matches_analytic():
    analytic = make_family("logistic2", a=13.5)
    plain = MapSpec.from_sources(2, 1, ["a*x*(1-x)*y*(1-y)"], params={"a": 13.5})
    assert plain.gradient is None
    rng = random.Random(5)
    for _ in range(20):
        p = (rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9))
        got = stability_partials(plain, p)
        want = stability_partials(analytic, p)
        assert np.allclose(got, want, atol=1e-6)


def test_refine_orbit_reaches_newton_tolerance():
    spec = make_family("logistic2", a=12.782842212)
    rep = classify_attractor(spec, "F", (0.7, 0.3))
    ref = refine_orbit(spec, "F", rep.values)
    assert ref.converged
    assert ref.residual < 1e-13
    assert max(ref.values) == pytest.approx(0.7973063104767419, abs=1e-12)
    assert min(ref.values) == pytest.approx(0.515931143419749, abs=1e-12)


def test_refine_orbit_never_increases_residual():
    spec = make_family("logistic2", a=12.782842212)
    rep = classify_attractor(spec, "F", (0.7, 0.3))
    # perturb the orbit and confirm refinement only improves the closure
    noisy = [v + 1e-4 for v in rep.values]
    start = refine_orbit(spec, "F", noisy, max_steps=0).residual
    done = refine_orbit(spec, "F", noisy)
    assert done.residual <= start
    assert done.converged


def test_refine_period1_reproduces_diagonal_root():
    spec = make_family("logistic2", a=13.5)
    r2 = diagonal_fixed_points(spec)[2].value
    ref = refine_orbit(spec, "F", [r2 + 1e-5])
    assert ref.converged
    assert abs(ref.values[0] - r2) < 1e-9


def test_refine_v_scheme_cyclic_system():
    # V-scheme vector fixed point of the 3->2 family: scalar period 2
    spec = make_family("twoparam32", a=55.0, b=0.9)
    rep = classify_attractor(spec, "V", (0.4, 0.5, 0.6))
    assert rep.kind == "Periodic" and rep.period == 2
    assert rep.vector_period == 1
    ref = refine_orbit(spec, "V", rep.values)
    assert ref.converged and ref.residual < 1e-13
    # the refined pair solves the two-unknown cyclic system
    # g1(x, y, x) = y, g2(x, y, x) = x with the (x, y, x) window
    x, y = ref.values[1], ref.values[0]
    g1, g2 = spec.apply((x, y, x))
    assert abs(g1 - y) < 1e-11
    assert abs(g2 - x) < 1e-11


def test_verify_orbit_equations_on_refined_orbit():
    a = 12.782842212
    spec = make_family("logistic2", a=a)
    rep = classify_attractor(spec, "F", (0.7, 0.3))
    ref = refine_orbit(spec, "F", rep.values)
    res = verify_orbit_equations(a, ref.values)
    assert res.eq1 < 1e-8
    assert res.eq2 < 1e-8


def test_verify_orbit_equations_fixed_point_triple():
    a = 13.0
    r2 = diagonal_fixed_points(make_family("logistic2", a=a))[2].value
    res = verify_orbit_equations(a, (r2, r2, r2))
    assert res.eq1 < 1e-10
    assert res.eq2 < 1e-10


def test_verify_orbit_equations_negative_control():
    res = verify_orbit_equations(12.9, (0.4, 0.6, 0.6))
    assert res.eq1 > 1e-3 or res.eq2 > 1e-3


def test_verify_orbit_equations_shape_check():
    with pytest.raises(ValueError, match="shape"):
        verify_orbit_equations(13.0, (0.1, 0.5, 0.9))


def test_two_of_three_orbit_values_identical():
    spec = make_family("logistic2", a=12.9)
    rep = classify_attractor(spec, "F", (0.7, 0.3))
    assert rep.kind == "Periodic" and rep.period == 3
    v = sorted(rep.values)
    assert abs(v[0] - v[1]) < 1e-6
    assert abs(v[2] - v[1]) > 1e-3


def test_stability_classes_at_a13():
    spec = make_family("logistic2", a=13.0)
    fps = diagonal_fixed_points(spec)
    r1, r2 = fps[1].value, fps[2].value
    assert stability_class(spec, "F", 0.0, samples=200) == "semi-stable"
    assert stability_class(spec, "F", r1, samples=200) == "semi-instable"
    assert stability_class(spec, "F", r2, samples=200) == "semi-stable"
    # beyond the last trifurcation nothing converges to r2 any more
    spec136 = make_family("logistic2", a=13.6)
    r2b = diagonal_fixed_points(spec136)[2].value
    assert stability_class(spec136, "F", r2b, samples=200) == "repelling"


def test_iteration_multipliers_saddle_at_r1():
    spec = make_family("logistic2", a=13.0)
    r1 = diagonal_fixed_points(spec)[1].value
    mags = np.abs(iteration_multipliers(spec, r1))
    assert mags.max() > 1.0
    assert mags.min() < 1.0


def test_report_json_shape():
    spec = make_family("logistic2", a=13.0)
    rep = classify_attractor(spec, "F", (0.5, 0.5))
    d = rep.to_json_dict()
    assert set(d) == {"kind", "period", "values", "iterations_used", "tolerance_used"}
    assert d["kind"] == "Periodic" and d["period"] == 3


def test_diagonal_fixed_points_requires_m1():
    spec = make_family("twoparam32", a=50.0)
    with pytest.raises(ValueError):
        diagonal_fixed_points(spec)


def test_logistic3_four_furcation_orbit_shape():
    # n of the n+1 orbit values coincide right after the (n+1)-furcation:
    # for the 3-D family the period-4 orbit carries three identical values
    from geniter.scan import locate_transition
    cv = locate_transition("logistic3", "F", (0.5, 0.5, 0.5), (50.0, 51.0),
                           tol=1e-7)
    spec = make_family("logistic3", a=cv.midpoint + 1e-6)
    rep = classify_attractor(spec, "F", (0.5, 0.5, 0.5))
    assert rep.kind == "Periodic" and rep.period == 4
    ref = refine_orbit(spec, "F", rep.values)
    v = sorted(ref.values)
    close = sum(1 for i in range(4) for j in range(i + 1, 4)
                if abs(v[i] - v[j]) < 1e-6)
    assert close == 3           # one coincident triple, the fourth far away
    assert v[-1] - v[0] > 0.05  # and the jump is discontinuous here too


def test_finite_difference_partials_at_corners():
    analytic = make_family("logistic2", a=13.5)
    plain = MapSpec.from_sources(2, 1, ["a*x*(1-x)*y*(1-y)"], params={"a": 13.5})
    for corner in ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)):
        got = stability_partials(plain, corner)
        want = stability_partials(analytic, corner)
        assert np.allclose(got, want, atol=1e-6)

"""End-to-end acceptance checks, one test per criterion, each printing a
PASS/FAIL line (run with -s or -rA to see them)."""

import random

import numpy as np
import pytest

from geniter.analysis import (classify_attractor, diagonal_fixed_points,
                              refine_orbit, stability_partials,
                              verify_orbit_equations)
from geniter.engine import MapSpec, iterate
from geniter.families import make_family
from geniter.raster import (BASIN_CONFIG, GridSpec, LABEL_PERIODIC, LABEL_R2,
                            basin_map, diagonal_ray_labels, label_report)
from geniter.scan import (feigenbaum, locate_transition, probe_seeds,
                          sharkovsky_chain, sharkovsky_compare)
from conftest import random_bounded_spec
from test_scan import brute_force_chain


def check(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} {name}: {status} {detail}".rstrip())
    assert ok, f"criterion {num} ({name}): {detail}"


# ---------------------------------------------------------------------------


def test_c01_fibonacci():
    spec = MapSpec.from_sources(2, 1, ["x + y"])
    got = iterate(spec, "F", (1, 1), 10).values.tolist()
    want = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    check(1, "fibonacci", got == want, f"got {got}")


def test_c02_closed_forms():
    spec = MapSpec.from_sources(2, 1, ["z*w + c"], params={"c": 0j},
                                complex_scalars=True)
    rng = random.Random(20240)
    worst = 0.0
    for _ in range(100):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        vals = iterate(spec.with_params(c=c), "F", (z, z), 5).values
        expect = (z * z + c,
                  z ** 3 + z * c + c,
                  z ** 5 + 2 * z ** 3 * c + z * c ** 2 + c * z ** 2 + c ** 2 + c)
        for got, want in zip(vals[2:], expect):
            worst = max(worst, abs(got - want) / abs(want))
    check(2, "closed-forms", worst < 1e-12, f"max relative error {worst:.2e}")


def test_c03_fixed_points_and_partials():
    spec = make_family("logistic2", a=13.5)
    fps = diagonal_fixed_points(spec)
    values = [fp.value for fp in fps]
    residuals = [fp.residual for fp in fps]

    # independent oracle for r1: bisect 13.5*x*(1-x)^2 = 1 on [0.05, 0.3]
    f = lambda x: 13.5 * x * (1 - x) ** 2 - 1
    lo, hi = 0.05, 0.3
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0) == (f(lo) < 0):
            lo = mid
        else:
            hi = mid
    r1_oracle = 0.5 * (lo + hi)

    ok = (len(values) == 3 and values[0] == 0.0
          and abs(values[1] - r1_oracle) < 1e-9
          and abs(values[1] - 0.0893164) < 1e-7
          and abs(values[2] - 2 / 3) < 1e-9
          and all(r < 1e-12 for r in residuals))

    partials_ok = True
    for point, want in (((2 / 3, 2 / 3), (-1.0, -1.0)),
                        ((1 / 3, 1 / 3), (1.0, 1.0)),
                        ((2 / 3, 1 / 3), (-1.0, 1.0)),
                        ((1 / 3, 2 / 3), (1.0, -1.0))):
        got = stability_partials(spec, point)
        partials_ok &= bool(np.all(np.abs(got - np.array(want)) < 1e-9))
    check(3, "fixed-points-and-partials", ok and partials_ok,
          f"roots {values}, r1 oracle {r1_oracle:.9f}")


@pytest.fixture(scope="module")
def located_transitions():
    return {
        (0.6, 0.3): locate_transition("logistic2", "F", (0.6, 0.3),
                                      (12.5, 13.5), tol=1e-8),
        (0.7, 0.3): locate_transition("logistic2", "F", (0.7, 0.3),
                                      (12.7, 12.9), tol=1e-10),
        (0.5, 0.5): locate_transition("logistic2", "F", (0.5, 0.5),
                                      (12.5, 12.65), tol=1e-8),
    }


def test_c04_seed_dependent_trifurcation(located_transitions):
    cv_a = located_transitions[(0.6, 0.3)]
    cv_b = located_transitions[(0.7, 0.3)]
    cv_c = located_transitions[(0.5, 0.5)]
    ok_a = abs(cv_a.midpoint - 13.1986367) < 5e-6
    ok_b = 12.782842211 <= cv_b.midpoint <= 12.782842212
    ok_c = abs(cv_c.midpoint - 12.562691867) < 1e-6
    check(4, "seed-dependent-trifurcation", ok_a and ok_b and ok_c,
          f"(0.6,0.3)->{cv_a.midpoint:.9f} (0.7,0.3)->{cv_b.midpoint:.11f} "
          f"(0.5,0.5)->{cv_c.midpoint:.9f}")


def test_c05_orbit_values_and_equations():
    a = 12.782842212
    spec = make_family("logistic2", a=a)
    rep = classify_attractor(spec, "F", (0.7, 0.3))
    ref = refine_orbit(spec, "F", rep.values)
    vals = sorted(ref.values)
    ok_orbit = (rep.kind == "Periodic" and rep.period == 3 and ref.converged
                and abs(vals[2] - 0.7973063104767419) < 1e-9
                and abs(vals[0] - 0.515931143419749) < 1e-9
                and abs(vals[1] - 0.515931143419749) < 1e-9)
    res = verify_orbit_equations(a, ref.values)
    ok_eqs = res.eq1 < 1e-8 and res.eq2 < 1e-8
    check(5, "orbit-values-and-equations", ok_orbit and ok_eqs,
          f"orbit {vals}, residuals ({res.eq1:.2e}, {res.eq2:.2e})")


def test_c06_catastrophe_shape(located_transitions):
    ok = True
    details = []
    for seeds, cv in located_transitions.items():
        spec = make_family("logistic2", a=cv.midpoint + 1e-6)
        rep = classify_attractor(spec, "F", seeds)
        if rep.kind != "Periodic" or rep.period != 3:
            ok = False
            details.append(f"{seeds}: {rep.kind}")
            continue
        ref = refine_orbit(spec, "F", rep.values)
        v = sorted(ref.values)
        spread = v[2] - v[0]
        close_pairs = sum(1 for i, j in ((0, 1), (0, 2), (1, 2))
                          if abs(v[i] - v[j]) < 1e-6)
        ok &= spread > 0.05 and close_pairs == 1
        details.append(f"{seeds}: jump {spread:.3f}")
    check(6, "catastrophe-shape", ok, "; ".join(details))


def test_c07_cascade_and_feigenbaum():
    est = feigenbaum("logistic2", "F", (0.5, 0.5), base_period=3, doublings=4,
                     a_start=13.3, a_stop=13.82, tol=1e-9)
    ok = (len(est.mus) == 4
          and 4.3 <= est.ratios[-1] <= 5.0
          and 13.76 <= est.mu_inf <= 13.80)
    check(7, "cascade-and-feigenbaum", ok,
          f"mus {[round(m, 6) for m in est.mus]}, final ratio "
          f"{est.ratios[-1]:.4f}, mu_inf {est.mu_inf:.5f}")


def test_c08_beyond_chaos_windows():
    hits9 = probe_seeds("logistic2", "F", 13.97, 9)
    hits15 = probe_seeds("logistic2", "F", 13.883, 15)
    ok = bool(hits9) and bool(hits15)
    check(8, "beyond-chaos-windows", ok,
          f"period 9 at a=13.97 from {hits9[0][0] if hits9 else None}, "
          f"period 15 at a=13.883 from {hits15[0][0] if hits15 else None}")


def test_c09_three_dimensional_family():
    from geniter.scan import period_table
    table = period_table("logistic3", "F", (0.5, 0.5, 0.5), (40.0, 54.4), 120)
    seq = []
    for rep in table.reports:
        if rep.period and (not seq or seq[-1] != rep.period):
            seq.append(rep.period)
    cascade_ok = seq[:4] == [1, 4, 8, 16]
    hits20 = probe_seeds("logistic3", "F", 54.51, 20)
    hits12 = probe_seeds("logistic3", "F", 54.746, 12)
    check(9, "three-dimensional-family",
          cascade_ok and bool(hits20) and bool(hits12),
          f"sweep periods {seq}, p20@54.51 {bool(hits20)}, p12@54.746 {bool(hits12)}")


def test_c10_sum_family_cascade():
    from geniter.scan import period_table
    table = period_table("sum2", "F", (0.3, 0.4), (1.80, 2.155), 240)
    seq = []
    for rep in table.reports:
        if rep.period and (not seq or seq[-1] != rep.period):
            seq.append(rep.period)
    check(10, "sum-family-cascade", seq[:5] == [1, 3, 6, 12, 24],
          f"sweep periods {seq}")


def test_c11_sharkovsky_comparator():
    rng = random.Random(161803)
    n = 2
    draw = lambda: 1 if rng.random() < 0.05 else 3 * rng.randrange(1, 333_334)
    ok = True
    for _ in range(10_000):
        p, q, r = draw(), draw(), draw()
        pq = sharkovsky_compare(p, q, n)
        qp = sharkovsky_compare(q, p, n)
        if p == q:
            ok &= pq == "equal" and qp == "equal"
        else:
            ok &= {pq, qp} == {"p-first", "q-first"}
        if pq == "p-first" and sharkovsky_compare(q, r, n) == "p-first":
            ok &= sharkovsky_compare(p, r, n) == "p-first"
        if not ok:
            break
    chain_ok = sharkovsky_chain(2, 20) == brute_force_chain(2, 20)
    check(11, "sharkovsky-comparator", ok and chain_ok,
          f"chain(2, 20) = {sharkovsky_chain(2, 20)}")


def test_c12_basin_determinism_and_oracle(tmp_path):
    spec = make_family("logistic2", a=13.0)
    grid = GridSpec(512, 512)
    b1 = basin_map(spec, "F", grid=grid, threads=1)
    b2 = basin_map(spec, "F", grid=grid, threads=2)
    p1, p2 = tmp_path / "t1.pgm", tmp_path / "t2.pgm"
    b1.to_pgm(p1)
    b2.to_pgm(p2)
    det_ok = p1.read_bytes() == p2.read_bytes()

    rng = random.Random(99)
    oracle_ok = True
    for _ in range(100):
        col, row = rng.randrange(512), rng.randrange(512)
        seeds = grid.cell_seeds(col, row, 2)
        rep = classify_attractor(spec, "F", seeds, BASIN_CONFIG)
        value = rep.values[0] if rep.kind == "FixedPoint" else None
        lab, per = label_report(rep.kind, rep.period, value, b1.fixed_points)
        oracle_ok &= (lab == b1.labels[row, col]
                      and per == b1.periods[row, col])

    fps = list(b1.fixed_points)
    offsets = [0.2 * 0.7 ** k for k in range(40)]
    labels = diagonal_ray_labels(spec, "F", fps[1], offsets, fps)
    ray = [l for l in labels if l in (LABEL_R2, LABEL_PERIODIC)]
    flips = sum(1 for a, b in zip(ray, ray[1:]) if a != b)
    check(12, "basin-determinism-and-oracle",
          det_ok and oracle_ok and flips >= 3,
          f"byte-identical {det_ok}, oracle {oracle_ok}, ray flips {flips}")


def test_c13_scheme_identities():
    rng = random.Random(271828)
    ok = True
    for _ in range(25):
        spec = random_bounded_spec(rng, m=1)
        seeds = [rng.uniform(-1, 1) for _ in range(spec.n)]
        rf = iterate(spec, "F", seeds, 120)
        rv = iterate(spec, "V", seeds, 120)
        ok &= rf.values.tolist() == rv.values.tolist()
    for _ in range(25):
        n = rng.randrange(1, 4)
        spec = random_bounded_spec(rng, n=n, m=n)
        seeds = [rng.uniform(-1, 1) for _ in range(n)]
        rec = iterate(spec, "V", seeds, n * 13)
        vec = tuple(seeds)
        expected = list(seeds)
        for _ in range(12):
            vec = spec.apply(vec)
            expected.extend(vec)
        ok &= rec.values.tolist() == expected
    check(13, "scheme-identities", ok, "F=V at m=1 and V=classical at n=m, exact")


def test_weakened_last_trifurcation_bound():
    # the supremum claim (no seed still converges to the interior fixed
    # point past a = 13.5) checked at desk scale: 64 sampled seeds at
    # a = 13.5 + 1e-3, none may classify as that fixed point
    a = 13.5 + 1e-3
    spec = make_family("logistic2", a=a)
    r2 = diagonal_fixed_points(spec)[2].value
    offenders = []
    for i in range(8):
        for j in range(8):
            seeds = ((i + 0.5) / 8, (j + 0.5) / 8)
            rep = classify_attractor(spec, "F", seeds)
            if rep.kind == "FixedPoint" and abs(rep.values[0] - r2) < 1e-6:
                offenders.append(seeds)
    check(14, "last-trifurcation-bound-weakened", not offenders,
          f"{len(offenders)} of 64 seeds still converge to r2 at a={a}")

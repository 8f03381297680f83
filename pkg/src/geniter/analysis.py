"""Fixed points on the diagonal, attractor classification, stability
partials, Newton refinement of periodic orbits, and residual checks of
the period-3 closure equations for the degree-2 product-logistic family.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .engine import MAGNITUDE_CAP, MapSpec, iterate

__all__ = [
    "ClassifyConfig", "AttractorReport", "FixedPointInfo", "OrbitResiduals",
    "RefinedOrbit", "diagonal_fixed_points", "classify_attractor",
    "stability_partials", "refine_orbit", "verify_orbit_equations",
    "stability_class", "iteration_multipliers",
]


@dataclass(frozen=True)
class ClassifyConfig:
    """Knobs for attractor classification.

    ``transient`` scalars are discarded before scanning periods
    1..``max_period``; period p is accepted when |u[k+p] - u[k]| < tol
    across a window of ``window``*p terms.  When nothing is decided
    within ``budget`` emitted scalars, a near-miss (best residual below
    near_miss_factor*tol) earns a single budget escalation.
    """

    transient: int = 200_000
    window: int = 8
    tol: float = 1e-9
    max_period: int = 4096
    budget: int = 2_000_000
    escalation: float = 10.0
    near_miss_factor: float = 1e4
    magnitude_cap: float = MAGNITUDE_CAP

    def scaled(self, factor: float) -> "ClassifyConfig":
        return replace(self, budget=int(self.budget * factor))


DEFAULT_CONFIG = ClassifyConfig()

_KIND_NAMES = {
    _kernels.KIND_FIXED: "FixedPoint",
    _kernels.KIND_PERIODIC: "Periodic",
    _kernels.KIND_UNBOUNDED: "Unbounded",
    _kernels.KIND_UNDECIDED: "Undecided",
}


@dataclass(frozen=True)
class AttractorReport:
    """Outcome of classifying one trajectory."""

    kind: str                      # FixedPoint | Periodic | Unbounded | Undecided
    period: int | None
    values: tuple[float, ...]      # p orbit values in sequence order (or the fixed value)
    vector_period: int | None
    iterations_used: int
    tolerance_used: float
    history: tuple[float, ...]     # last n scalars, oldest first (reseeding aid)

    @property
    def decided(self) -> bool:
        return self.kind in ("FixedPoint", "Periodic")

    def summary_key(self) -> tuple:
        """Classification identity used when comparing across parameters."""
        return (self.kind, self.period if self.kind == "Periodic" else None)

    def to_json_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "period": self.period,
            "values": list(self.values),
            "iterations_used": self.iterations_used,
            "tolerance_used": self.tolerance_used,
        }
        if self.vector_period is not None:
            out["vector_period"] = self.vector_period
        return out


def classify_attractor(spec: MapSpec, scheme: str, seeds: Sequence[float],
                       config: ClassifyConfig = DEFAULT_CONFIG) -> AttractorReport:
    """Classify the trajectory from ``seeds`` as a fixed point, a minimal-
    period orbit, unbounded, or undecided within the configured budget."""
    if spec.complex_scalars:
        raise ValueError("classification runs on real maps; escape rasters handle complex ones")
    if len(seeds) != spec.n:
        raise ValueError(f"expected {spec.n} seeds, got {len(seeds)}")
    is_v = str(scheme).upper() == "V"
    if str(scheme).upper() not in ("F", "V"):
        raise ValueError(f"scheme must be 'F' or 'V', got {scheme!r}")
    seeds_arr = np.asarray(seeds, dtype=np.float64)
    kind, period, produced, buf, used = _kernels.classify_f64(
        spec._codes, spec._fargs, spec._iargs, spec._starts,
        spec.n, spec.m, is_v, spec.param_array(), seeds_arr,
        config.transient, config.window, config.tol, config.max_period,
        config.budget, config.escalation, config.near_miss_factor,
        config.magnitude_cap, spec._stack_need)
    values: tuple[float, ...] = ()
    history: tuple[float, ...] = ()
    vector_period = None
    if kind == _kernels.KIND_FIXED:
        values = (float(buf[used - 1]),)
        history = tuple(float(v) for v in buf[used - spec.n:used])
    elif kind == _kernels.KIND_PERIODIC:
        values = tuple(float(v) for v in buf[used - period:used])
        history = tuple(float(v) for v in buf[used - spec.n:used])
        if spec.m > 1 and period % spec.m == 0:
            vector_period = period // spec.m
    return AttractorReport(
        kind=_KIND_NAMES[kind],
        period=int(period) if kind in (_kernels.KIND_FIXED, _kernels.KIND_PERIODIC) else None,
        values=values,
        vector_period=vector_period,
        iterations_used=int(produced),
        tolerance_used=config.tol,
        history=history,
    )


# ---------------------------------------------------------------------------
# Fixed points on the diagonal


@dataclass(frozen=True)
class FixedPointInfo:
    value: float
    residual: float
    stability_class: str | None = None


def _diagonal_h(spec: MapSpec):
    params = spec.param_values

    def h(x: float) -> float:
        from .expr import evaluate
        return evaluate(spec.components[0], (x,) * spec.n, params) - x

    return h


def diagonal_fixed_points(spec: MapSpec, interval: tuple[float, float] = (0.0, 1.0),
                          grid: int = 10_000, with_stability: bool = False,
                          scheme: str = "F") -> list[FixedPointInfo]:
    """Roots of f(x, ..., x) = x located by a sign-scan plus bisection.

    Tangential (double) roots leave no sign change, so grid-local minima
    of |h| below 1e-8 are refined by golden-section search as well; a
    candidate is kept only when its residual drops below 1e-12.
    """
    if spec.m != 1:
        raise ValueError("diagonal fixed points require m = 1")
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    if grid < 2:
        raise ValueError("grid must be >= 2")
    h = _diagonal_h(spec)
    xs = np.linspace(lo, hi, grid + 1)
    hs = np.array([h(x) for x in xs])

    roots: list[float] = []
    for i in range(grid):
        a, b = xs[i], xs[i + 1]
        ha, hb = hs[i], hs[i + 1]
        if ha == 0.0:
            roots.append(a)
            continue
        if hb == 0.0:
            continue  # owned by the next interval's left endpoint
        if ha * hb < 0.0:
            roots.append(_bisect(h, a, b, ha))
    if hs[-1] == 0.0:
        roots.append(xs[-1])

    # tangential candidates: interior local minima of |h|
    habs = np.abs(hs)
    for i in range(1, grid):
        if habs[i] < 1e-8 and habs[i] <= habs[i - 1] and habs[i] <= habs[i + 1]:
            x_star = _golden_min(lambda x: abs(h(x)), xs[i - 1], xs[i + 1])
            if abs(h(x_star)) < 1e-12:
                roots.append(x_star)

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) < 1e-7:
            if abs(h(r)) < abs(h(merged[-1])):
                merged[-1] = r
            continue
        merged.append(r)
    out = [FixedPointInfo(value=float(r), residual=float(abs(h(r)))) for r in merged]
    if with_stability:
        out = [replace(fp, stability_class=stability_class(spec, scheme, fp.value))
               for fp in out]
    return out


def _bisect(h, a: float, b: float, ha: float, width: float = 1e-14) -> float:
    for _ in range(200):
        mid = 0.5 * (a + b)
        if b - a < width or mid == a or mid == b:
            return mid
        hm = h(mid)
        if hm == 0.0:
            return mid
        if (ha < 0) != (hm < 0):
            b = mid
        else:
            a, ha = mid, hm
    return 0.5 * (a + b)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, a: float, b: float, width: float = 1e-14) -> float:
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def iteration_multipliers(spec: MapSpec, value: float) -> np.ndarray:
    """Eigenvalues of the linearized sliding-window map at a diagonal
    fixed point: the roots of lambda^n = sum_i df/dx_i lambda^(i-1)."""
    if spec.m != 1:
        raise ValueError("multipliers are defined for m = 1")
    grad = stability_partials(spec, np.full(spec.n, value))
    poly = np.concatenate(([1.0], -grad[::-1]))
    return np.roots(poly)


def stability_class(spec: MapSpec, scheme: str, value: float,
                    samples: int = 1000, rng_seed: int = 20240 + 1,
                    tol: float = 1e-6,
                    config: ClassifyConfig | None = None) -> str:
    """Empirical stability label for a diagonal fixed point.

    Classifies ``samples`` uniform random seeds from the open unit
    hypercube: attraction fraction >= 99% reads attracting-sampled and
    1%..99% semi-stable.  Below 1% the attracted set has measure zero
    at sampling resolution, so the linearized window map decides: a
    saddle (stable and unstable directions both present) attracts a
    lower-dimensional set and reads semi-instable, no stable direction
    at all reads repelling.  Floating-point probes cannot sit exactly
    on a measure-zero stable set, hence the eigenvalue test.
    """
    config = config or ClassifyConfig(transient=20_000, max_period=64,
                                      budget=200_000, escalation=1.0)
    rng = np.random.default_rng(rng_seed)
    hits = 0
    for _ in range(samples):
        seeds = rng.uniform(0.0, 1.0, size=spec.n)
        rep = classify_attractor(spec, scheme, seeds, config)
        if rep.kind == "FixedPoint" and abs(rep.values[0] - value) < tol:
            hits += 1
    frac = hits / samples
    if frac >= 0.99:
        return "attracting-sampled"
    if frac >= 0.01:
        return "semi-stable"
    mags = np.abs(iteration_multipliers(spec, value))
    if np.all(mags >= 1.0):
        return "repelling"
    if np.any(mags > 1.0):
        return "semi-instable"
    return "semi-stable"


# ---------------------------------------------------------------------------
# Stability partials


def stability_partials(spec: MapSpec, point: Sequence[float],
                       step: float = 1e-6) -> np.ndarray:
    """Partial derivatives of the single component at ``point``; analytic
    for catalog families, central finite differences otherwise."""
    if spec.m != 1:
        raise ValueError("stability partials require m = 1")
    point = np.asarray(point, dtype=np.float64)
    if point.shape != (spec.n,):
        raise ValueError(f"point must have length {spec.n}")
    params = np.asarray(spec.param_values, dtype=np.float64)
    if spec.gradient is not None:
        return np.asarray(spec.gradient(point, params), dtype=np.float64)
    grad = np.empty(spec.n)
    for i in range(spec.n):
        hi = point.copy(); hi[i] += step
        lo = point.copy(); lo[i] -= step
        grad[i] = (spec.apply(hi)[0] - spec.apply(lo)[0]) / (2.0 * step)
    return grad


# ---------------------------------------------------------------------------
# Newton refinement of periodic orbits


@dataclass(frozen=True)
class RefinedOrbit:
    values: tuple[float, ...]
    residual: float
    converged: bool
    steps: int
    message: str = ""


def _closure_gap(spec: MapSpec, scheme: str, window: np.ndarray, p: int) -> np.ndarray:
    rec = iterate(spec, scheme, window, spec.n + p)
    if rec.truncated:
        return np.full(spec.n, np.inf)
    vals = rec.values
    return vals[p:p + spec.n] - window


def refine_orbit(spec: MapSpec, scheme: str, orbit: Sequence[float],
                 tol: float = 1e-13, max_steps: int = 100) -> RefinedOrbit:
    """Damped Newton on the closure system u_{i+p} = u_i (i = 1..n) for
    the window of n scalars seeding a period-p stretch of the sequence.

    The orbit values are taken in sequence order ending on a component-
    cycle boundary, which is how classify_attractor reports them.
    """
    orbit = [float(v) for v in orbit]
    p = len(orbit)
    if p < 1:
        raise ValueError("orbit must contain at least one value")
    n = spec.n
    window = np.array([orbit[(p - n + i) % p] for i in range(n)])

    gap = _closure_gap(spec, scheme, window, p)
    res = float(np.max(np.abs(gap)))
    steps = 0
    message = ""
    while res > tol and steps < max_steps:
        jac = np.empty((n, n))
        for i in range(n):
            h = 1e-7 * max(1.0, abs(window[i]))
            wp = window.copy(); wp[i] += h
            wm = window.copy(); wm[i] -= h
            jac[:, i] = (_closure_gap(spec, scheme, wp, p)
                         - _closure_gap(spec, scheme, wm, p)) / (2.0 * h)
        try:
            delta = np.linalg.solve(jac, -gap)
        except np.linalg.LinAlgError:
            message = "singular jacobian"
            break
        if not np.all(np.isfinite(delta)):
            message = "singular jacobian"
            break
        lam = 1.0
        improved = False
        for _ in range(30):
            cand = window + lam * delta
            cgap = _closure_gap(spec, scheme, cand, p)
            cres = float(np.max(np.abs(cgap)))
            if cres < res:
                window, gap, res = cand, cgap, cres
                improved = True
                break
            lam *= 0.5
        steps += 1
        if not improved:
            message = message or "stalled"
            break
    refined = iterate(spec, scheme, window, n + p).values[n:n + p]
    return RefinedOrbit(values=tuple(float(v) for v in refined),
                        residual=res, converged=res <= tol, steps=steps,
                        message=message)


# ---------------------------------------------------------------------------
# Closure equations of the period-3 orbit of a*x(1-x)*y(1-y)
#
# With seeds (x, y) the sequence starts
#   u3 = a X Y                          X = x(1-x), Y = y(1-y)
#   u4 = a^2 X Y^2 (1 - a X Y)
#   u5 = a^4 X^2 Y^3 (1 - a X Y)^2 (1 - a^2 X Y^2 (1 - a X Y))
# and a period-3 orbit closes through u4 = u1 and u5 = u2.


@dataclass(frozen=True)
class OrbitResiduals:
    eq1: float   # u5 - y evaluated at (x, y) = (eta, theta)
    eq2: float   # u4 - x evaluated at (x, y) = (theta, eta)


def _u4(a: float, x: float, y: float) -> float:
    X = x * (1.0 - x)
    Y = y * (1.0 - y)
    return a * a * X * Y * Y * (1.0 - a * X * Y)


def _u5(a: float, x: float, y: float) -> float:
    X = x * (1.0 - x)
    Y = y * (1.0 - y)
    t = 1.0 - a * X * Y
    return a ** 4 * X * X * Y ** 3 * t * t * (1.0 - a * a * X * Y * Y * t)


def verify_orbit_equations(a: float, orbit: Sequence[float]) -> OrbitResiduals:
    """Residuals of the two closure equations at the orbit's (eta, theta).

    ``orbit`` must have the (eta, theta, theta) shape: exactly two of its
    three values equal within 1e-6 (a fixed-point triple also passes,
    trivially satisfying every closure).
    """
    vals = [float(v) for v in orbit]
    if len(vals) != 3:
        raise ValueError("orbit must contain exactly 3 values")
    pairs = [(abs(vals[i] - vals[j]), i, j)
             for i, j in ((0, 1), (0, 2), (1, 2))]
    sep, i, j = min(pairs)
    if sep > 1e-6:
        raise ValueError("orbit does not have the (eta, theta, theta) shape")
    theta = 0.5 * (vals[i] + vals[j])
    eta = vals[3 - i - j]
    return OrbitResiduals(
        eq1=abs(_u5(a, eta, theta) - theta),
        eq2=abs(_u4(a, theta, eta) - theta),
    )

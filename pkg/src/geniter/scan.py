"""Parameter sweeps, bisection of classification transitions, Feigenbaum
ratio estimation, seed-grid probing of stable windows, and the
generalized Sharkovsky ordering on (n+1)N plus {1}.
"""

from __future__ import annotations

import os
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import AttractorReport, ClassifyConfig, DEFAULT_CONFIG, classify_attractor
from .engine import MapSpec
from .families import make_family

__all__ = [
    "PeriodTable", "CriticalValue", "FeigenbaumEstimate", "BracketingError",
    "period_table", "locate_transition", "feigenbaum", "probe_seeds",
    "sharkovsky_compare", "sharkovsky_chain",
]


class BracketingError(RuntimeError):
    """A scan could not bracket the requested transition; ``partial``
    carries whatever was located before the failure."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def _spec_factory(family, params: dict | None, sweep: str) -> Callable[[float], MapSpec]:
    """Normalize the family argument to a callable a -> MapSpec."""
    if callable(family) and not isinstance(family, MapSpec):
        return family
    if isinstance(family, MapSpec):
        return lambda a: family.with_params(**{sweep: a})
    if isinstance(family, str):
        fixed = dict(params or {})
        fixed.pop(sweep, None)
        return lambda a: make_family(family, **fixed, **{sweep: a})
    raise TypeError(f"family must be a name, MapSpec or callable, got {family!r}")


def default_threads() -> int:
    env = os.environ.get("GENITER_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class PeriodTable:
    """One classification per swept parameter value, sorted by parameter."""

    a_values: np.ndarray
    reports: tuple[AttractorReport, ...]

    def rows(self):
        return list(zip(self.a_values.tolist(), self.reports))

    def periods(self) -> list[int | None]:
        return [r.period for r in self.reports]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("a,kind,period,values\n")
            for a, rep in zip(self.a_values.tolist(), self.reports):
                vals = ",".join(repr(v) for v in rep.values)
                fh.write(f"{a!r},{rep.kind},{rep.period if rep.period else 0}"
                         + ("," + vals if vals else "") + "\n")


def period_table(family, scheme: str, seeds: Sequence[float],
                 a_range: tuple[float, float], steps: int,
                 config: ClassifyConfig = DEFAULT_CONFIG,
                 params: dict | None = None, sweep: str = "a",
                 threads: int | None = None) -> PeriodTable:
    """Classify the attractor at ``steps`` uniformly spaced parameter
    values; rows land in index-addressed slots so any thread count
    yields the identical table."""
    lo, hi = float(a_range[0]), float(a_range[1])
    if not lo < hi:
        raise ValueError("a_range must satisfy lo < hi")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    spec_of = _spec_factory(family, params, sweep)
    a_values = np.linspace(lo, hi, steps)
    seeds = tuple(seeds)
    results: list[AttractorReport | None] = [None] * steps

    def work(i: int) -> None:
        results[i] = classify_attractor(spec_of(float(a_values[i])), scheme,
                                        seeds, config)

    threads = threads or default_threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(steps)))
    else:
        for i in range(steps):
            work(i)
    return PeriodTable(a_values=a_values, reports=tuple(results))


# ---------------------------------------------------------------------------
# Transition location


@dataclass(frozen=True)
class CriticalValue:
    """A parameter value where the attractor classification changes."""

    bracket: tuple[float, float]
    midpoint: float
    lower: AttractorReport
    upper: AttractorReport
    seeds: tuple[float, ...]
    tol: float
    forced_steps: int = 0   # bisection steps advanced past an undecided midpoint

    def to_json_dict(self) -> dict:
        return {
            "bracket": list(self.bracket),
            "midpoint": self.midpoint,
            "lower": self.lower.to_json_dict(),
            "upper": self.upper.to_json_dict(),
            "seeds": list(self.seeds),
            "tol": self.tol,
            "forced_steps": self.forced_steps,
        }


def _classify_decided(spec_of, a, scheme, seeds, config):
    rep = classify_attractor(spec_of(a), scheme, seeds, config)
    if not rep.decided and rep.kind == "Undecided":
        rep = classify_attractor(spec_of(a), scheme, seeds, config.scaled(10.0))
    return rep


def locate_transition(family, scheme: str, seeds: Sequence[float],
                      bracket: tuple[float, float], tol: float = 1e-9,
                      config: ClassifyConfig = DEFAULT_CONFIG,
                      params: dict | None = None, sweep: str = "a",
                      max_steps: int = 200) -> CriticalValue:
    """Bisect the parameter until the bracket around a classification
    change is narrower than ``tol``.

    Undecided midpoints get one budget escalation; if still undecided the
    endpoint whose classification matches the last decided midpoint is
    advanced (counted in ``forced_steps``) -- convergence near the
    catastrophic boundary slows down without limit, so a stubbornly
    undecided point is taken as lying on the far side of the boundary
    relative to the last decided sample.
    """
    spec_of = _spec_factory(family, params, sweep)
    seeds = tuple(float(s) for s in seeds)
    a_lo, a_hi = float(bracket[0]), float(bracket[1])
    if not a_lo < a_hi:
        raise ValueError("bracket must satisfy lo < hi")
    rep_lo = _classify_decided(spec_of, a_lo, scheme, seeds, config)
    rep_hi = _classify_decided(spec_of, a_hi, scheme, seeds, config)
    for name, rep in (("lower", rep_lo), ("upper", rep_hi)):
        if not rep.decided:
            raise BracketingError(f"{name} bracket endpoint is {rep.kind}")
    key_lo = rep_lo.summary_key()
    key_hi = rep_hi.summary_key()
    if key_lo == key_hi:
        raise BracketingError(
            f"identical classifications {key_lo} at both bracket endpoints")

    last_decided_key = None
    forced = 0
    steps = 0
    while a_hi - a_lo > tol and steps < max_steps:
        steps += 1
        mid = 0.5 * (a_lo + a_hi)
        if mid <= a_lo or mid >= a_hi:
            break
        rep = _classify_decided(spec_of, mid, scheme, seeds, config)
        if not rep.decided:
            forced += 1
            if last_decided_key == key_hi:
                a_hi = mid
            else:
                a_lo = mid
            continue
        key = rep.summary_key()
        last_decided_key = key
        if key == key_lo:
            a_lo, rep_lo = mid, rep
        elif key == key_hi:
            a_hi, rep_hi = mid, rep
        else:
            # a third classification splits the bracket; keep the lower pair
            a_hi, rep_hi, key_hi = mid, rep, key
    return CriticalValue(bracket=(a_lo, a_hi), midpoint=0.5 * (a_lo + a_hi),
                         lower=rep_lo, upper=rep_hi, seeds=seeds, tol=tol,
                         forced_steps=forced)


# ---------------------------------------------------------------------------
# Feigenbaum cascade


@dataclass(frozen=True)
class FeigenbaumEstimate:
    base_period: int
    mus: tuple[float, ...]          # mu_k: period base*2^(k-1) -> base*2^k
    ratios: tuple[float, ...]       # (mu_k - mu_{k-1}) / (mu_{k+1} - mu_k)
    delta_est: float | None
    mu_inf: float | None

    def to_json_dict(self) -> dict:
        return {
            "base_period": self.base_period,
            "mus": list(self.mus),
            "ratios": list(self.ratios),
            "delta_est": self.delta_est,
            "mu_inf": self.mu_inf,
        }


def _estimate_from_mus(base_period: int, mus: list[float]) -> FeigenbaumEstimate:
    ratios = tuple((mus[i - 1] - mus[i - 2]) / (mus[i] - mus[i - 1])
                   for i in range(2, len(mus)))
    delta = ratios[-1] if ratios else None
    mu_inf = None
    if delta and delta > 1.0 and len(mus) >= 2:
        mu_inf = mus[-1] + (mus[-1] - mus[-2]) / (delta - 1.0)
    return FeigenbaumEstimate(base_period=base_period, mus=tuple(mus),
                              ratios=ratios, delta_est=delta, mu_inf=mu_inf)


def feigenbaum(family, scheme: str, seeds: Sequence[float], base_period: int,
               doublings: int, a_start: float, a_stop: float,
               tol: float = 1e-9, config: ClassifyConfig = DEFAULT_CONFIG,
               params: dict | None = None, sweep: str = "a") -> FeigenbaumEstimate:
    """Locate the doubling points mu_1..mu_doublings of the cascade
    base_period -> 2*base_period -> ... inside [a_start, a_stop], then
    form the gap ratios and extrapolate the accumulation point
    mu_inf = mu_k + (mu_k - mu_{k-1}) / (delta_est - 1).
    """
    if doublings < 3:
        raise ValueError("doublings must be >= 3")
    spec_of = _spec_factory(family, params, sweep)
    seeds = tuple(float(s) for s in seeds)

    def key_at(a: float):
        rep = _classify_decided(spec_of, a, scheme, seeds, config)
        return rep.summary_key() if rep.decided else None

    cur_p = int(base_period)
    cur_key = ("Periodic", cur_p) if cur_p > 1 else ("FixedPoint", None)
    # find a starting point inside the base-period window
    a_lo = None
    coarse = np.linspace(a_start, a_stop, 65)
    for a in coarse:
        if key_at(float(a)) == cur_key:
            a_lo = float(a)
            break
    if a_lo is None:
        raise BracketingError(
            f"no parameter in [{a_start}, {a_stop}] shows period {cur_p}",
            partial=_estimate_from_mus(base_period, []))

    mus: list[float] = []
    for k in range(1, doublings + 1):
        target = cur_p * 2
        target_key = ("Periodic", target)
        if len(mus) >= 2:
            step = max((mus[-1] - mus[-2]) / 4.669 / 6.0, tol * 4)
        elif len(mus) == 1:
            step = (a_stop - mus[-1]) / 32.0
        else:
            step = (a_stop - a_start) / 64.0
        # march until the classification leaves the current window
        a_probe = a_lo + step
        while a_probe <= a_stop and key_at(a_probe) == cur_key:
            a_lo = a_probe
            a_probe += step
        if a_probe > a_stop:
            raise BracketingError(
                f"period {cur_p} never doubles below a={a_stop}",
                partial=_estimate_from_mus(base_period, mus))
        # bisect the boundary of the current window
        lo, hi = a_lo, a_probe
        last_was_cur = True
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            key = key_at(mid)
            if key == cur_key:
                lo, last_was_cur = mid, True
            elif key is None:
                if last_was_cur:
                    lo = mid
                else:
                    hi = mid
            else:
                hi, last_was_cur = mid, False
        mu_k = 0.5 * (lo + hi)
        mus.append(mu_k)
        # confirm the doubled window just above mu_k before continuing
        confirmed = None
        probe = max(step / 8.0, tol * 8)
        for _ in range(24):
            a_try = hi + probe
            if a_try > a_stop:
                break
            if key_at(a_try) == target_key:
                confirmed = a_try
                break
            probe *= 1.6
        if confirmed is None:
            if k < doublings:
                raise BracketingError(
                    f"period {target} window not found above mu_{k}={mu_k}",
                    partial=_estimate_from_mus(base_period, mus))
            break
        a_lo, cur_p, cur_key = confirmed, target, target_key
    return _estimate_from_mus(base_period, mus)


# ---------------------------------------------------------------------------
# Seed-grid probing of stable windows


def probe_seeds(family, scheme: str, a: float, target_period: int,
                per_axis: int | None = None,
                config: ClassifyConfig = DEFAULT_CONFIG,
                params: dict | None = None, sweep: str = "a",
                stop_at_first: bool = True) -> list[tuple[tuple[float, ...], AttractorReport]]:
    """Probe a uniform seed grid in the open unit hypercube and return
    the seeds whose attractor has the target scalar period.

    Stable windows attract positive-measure seed sets, so a regular grid
    (16 per axis in the plane, 8 per axis in the cube) is enough to find
    them; the scan order is row-major and deterministic.
    """
    spec_of = _spec_factory(family, params, sweep)
    spec = spec_of(float(a))
    if per_axis is None:
        per_axis = 16 if spec.n <= 2 else 8
    ticks = [(i + 1) / (per_axis + 1) for i in range(per_axis)]
    grids = np.meshgrid(*([ticks] * spec.n), indexing="ij")
    seeds_list = np.stack([g.ravel() for g in grids], axis=1)
    hits = []
    for row in seeds_list:
        rep = classify_attractor(spec, scheme, row, config)
        if rep.kind == "Periodic" and rep.period == target_period:
            hits.append((tuple(row.tolist()), rep))
            if stop_at_first:
                break
    return hits


# ---------------------------------------------------------------------------
# Generalized Sharkovsky ordering on (n+1)N | {1}
#
# Writing p = (n+1) * 2^s * d with d odd, the chain runs
#   d >= 3 first, by ascending s then ascending d;
#   then the pure powers d = 1 by descending s;
#   then the literal period 1.


def _sharkovsky_key(p: int, n: int) -> tuple[int, int, int]:
    if p == 1:
        return (2, 0, 0)
    if p < 1 or p % (n + 1) != 0:
        raise ValueError(
            f"period {p} is not in ({n + 1})N nor 1 for dimension n={n}")
    q = p // (n + 1)
    s = (q & -q).bit_length() - 1
    d = q >> s
    if d >= 3:
        return (0, s, d)
    return (1, -s, 0)


def sharkovsky_compare(p: int, q: int, n: int) -> str:
    """Order two admissible periods: 'p-first', 'q-first' or 'equal'."""
    kp = _sharkovsky_key(int(p), int(n))
    kq = _sharkovsky_key(int(q), int(n))
    if kp == kq:
        return "equal"
    return "p-first" if kp < kq else "q-first"


def sharkovsky_chain(n: int, limit: int) -> list[int]:
    """All periods of (n+1)N | {1} up to ``limit``, in chain order."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    periods = list(range(n + 1, limit + 1, n + 1)) + [1]
    periods.sort(key=lambda p: _sharkovsky_key(p, n))
    return periods

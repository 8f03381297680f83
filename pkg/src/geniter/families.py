"""Catalog of the built-in map families.

Every real family maps the unit hypercube into [0, 1] for parameters
inside the documented domain; ``logistic2``, ``logistic3`` and ``sine2``
also vanish on the whole hypercube boundary, while ``sum2`` does not
(it is the stock example of a single-maximum family violating boundary
vanishing).  The two complex families are the bilinear and biquadratic
escape-time maps on C^2.

``make_family`` returns a ready :class:`~geniter.engine.MapSpec`; real
m = 1 families carry analytic gradients used for stability analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import MapSpec

__all__ = ["Family", "FAMILIES", "make_family"]


def _grad_logistic2(point, params):
    a = params[0]
    x, y = point
    return np.array([a * (1 - 2 * x) * y * (1 - y),
                     a * x * (1 - x) * (1 - 2 * y)])


def _grad_logistic3(point, params):
    a = params[0]
    x, y, z = point
    return np.array([a * (1 - 2 * x) * y * (1 - y) * z * (1 - z),
                     a * x * (1 - x) * (1 - 2 * y) * z * (1 - z),
                     a * x * (1 - x) * y * (1 - y) * (1 - 2 * z)])


def _grad_sine2(point, params):
    a = params[0]
    x, y = point
    pi = math.pi
    return np.array([a * pi * math.cos(pi * x) * math.sin(pi * y),
                     a * pi * math.sin(pi * x) * math.cos(pi * y)])


def _grad_sum2(point, params):
    a = params[0]
    x, y = point
    return np.array([a * (1 - 2 * x), a * (1 - 2 * y)])


@dataclass(frozen=True)
class Family:
    name: str
    n: int
    m: int
    sources: tuple[str, ...]
    params: tuple[str, ...]
    # (lo, hi, hi_open) per real parameter; complex params are unchecked
    domains: dict = field(default_factory=dict)
    complex_scalars: bool = False
    gradient: object = None
    defaults: dict = field(default_factory=dict)


FAMILIES: dict[str, Family] = {
    "logistic2": Family(
        name="logistic2", n=2, m=1,
        sources=("a*x*(1-x)*y*(1-y)",),
        params=("a",), domains={"a": (0.0, 16.0, True)},
        gradient=_grad_logistic2),
    "logistic3": Family(
        name="logistic3", n=3, m=1,
        sources=("a*x*(1-x)*y*(1-y)*z*(1-z)",),
        # max of the product is a/64, so a <= 64 keeps the cube invariant
        params=("a",), domains={"a": (0.0, 64.0, False)},
        gradient=_grad_logistic3),
    "sine2": Family(
        name="sine2", n=2, m=1,
        sources=("a*sin(pi*x)*sin(pi*y)",),
        params=("a",), domains={"a": (0.0, 1.0, False)},
        gradient=_grad_sine2),
    "sum2": Family(
        name="sum2", n=2, m=1,
        sources=("a*(x*(1-x) + y*(1-y))",),
        params=("a",), domains={"a": (0.0, 2.5, False)},
        gradient=_grad_sum2),
    "bilinear-c": Family(
        name="bilinear-c", n=2, m=1,
        sources=("z*w + c",),
        params=("c",), complex_scalars=True),
    "biquadratic-c": Family(
        name="biquadratic-c", n=2, m=1,
        sources=("z^2*w^2 + c",),
        params=("c",), complex_scalars=True),
    "twoparam32": Family(
        name="twoparam32", n=3, m=2,
        sources=("a*x*(1-x)*y*(1-y)*z*(1-z)",
                 "b*sin(pi*x)*sin(pi*y)*sin(pi*z)"),
        params=("a", "b"),
        domains={"a": (0.0, 64.0, False), "b": (0.0, 1.0, False)},
        defaults={"b": 0.9}),
}


def make_family(name: str, **params) -> MapSpec:
    """Build a MapSpec for a named family with bound parameter values.

    Unsupplied parameters fall back to the family default if there is
    one; values outside the documented domain raise ValueError.
    """
    try:
        fam = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; "
                         f"known: {', '.join(sorted(FAMILIES))}") from None
    unknown = set(params) - set(fam.params)
    if unknown:
        raise ValueError(f"family {name!r} has no parameter {sorted(unknown)}")
    bound = dict(fam.defaults)
    bound.update(params)
    missing = [p for p in fam.params if p not in bound]
    if missing:
        raise ValueError(f"family {name!r} needs parameter values for {missing}")
    for pname, (lo, hi, hi_open) in fam.domains.items():
        v = bound[pname]
        if isinstance(v, complex):
            raise ValueError(f"parameter {pname!r} of {name!r} must be real")
        v = float(v)
        ok = lo < v < hi if hi_open else lo < v <= hi
        if not ok:
            bracket = ")" if hi_open else "]"
            raise ValueError(
                f"parameter {pname}={v} outside the domain ({lo}, {hi}{bracket} of {name!r}")
    ordered = {p: bound[p] for p in fam.params}
    return MapSpec.from_sources(fam.n, fam.m, fam.sources, params=ordered,
                                complex_scalars=fam.complex_scalars,
                                name=name, gradient=fam.gradient)

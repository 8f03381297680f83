"""Generalized F- and V-iteration of n-to-m maps.

Both schemes emit one scalar sequence u_1, u_2, ... whose first n terms
are the seeds.  Under the F scheme each new scalar is one component
function applied to the immediately preceding n scalars, the m
components cycling in order, so the window slides by one per term.
Under the V scheme all m components are applied to the same n-scalar
window, emitting a block of m scalars, and the window then advances by
m; for n = m this is ordinary iteration of the vector map read out
block by block, and for m = 1 the two schemes coincide.

Iteration truncates (flagged, not raised) as soon as a term is
non-finite or exceeds the magnitude cap, so downstream classification
has a definite unbounded signal.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .expr import CompiledProgram, compile as _compile, evaluate

__all__ = ["MapSpec", "SequenceRecord", "IterState", "iterate", "seed_state", "step",
           "MAGNITUDE_CAP"]

MAGNITUDE_CAP = 1e100


def _as_scheme_flag(scheme: str) -> bool:
    s = str(scheme).upper()
    if s == "F":
        return False
    if s == "V":
        return True
    raise ValueError(f"scheme must be 'F' or 'V', got {scheme!r}")


@dataclass(frozen=True, eq=False)
class MapSpec:
    """An n-to-m map: m compiled scalar components of arity n plus bound
    parameter values.  Immutable and safe to share across threads."""

    n: int
    m: int
    components: tuple[CompiledProgram, ...]
    param_names: tuple[str, ...] = ()
    param_values: tuple[float | complex, ...] = ()
    complex_scalars: bool = False
    gradient: Callable | None = None   # analytic partials hook (m = 1 families)
    name: str = ""

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if self.m > self.n:
            raise ValueError(f"m={self.m} exceeds n={self.n}")
        components = tuple(self.components)
        if len(components) != self.m:
            raise ValueError(f"expected {self.m} components, got {len(components)}")
        for prog in components:
            if prog.arity != self.n:
                raise ValueError(f"component arity {prog.arity} != n={self.n}")
            if prog.n_params != len(self.param_names):
                raise ValueError("component parameter count does not match spec")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "param_names", tuple(self.param_names))
        values = tuple(self.param_values)
        if len(values) != len(self.param_names):
            raise ValueError("parameter values do not match parameter names")
        if not self.complex_scalars and any(isinstance(v, complex) for v in values):
            raise ValueError("complex parameter values need complex_scalars=True")
        object.__setattr__(self, "param_values", values)
        # flattened instruction stream shared by all kernels
        codes = np.concatenate([p.codes for p in components]) if components else np.zeros(0, np.int64)
        fargs = np.concatenate([p.fargs for p in components])
        iargs = np.concatenate([p.iargs for p in components])
        starts = np.zeros(self.m + 1, dtype=np.int64)
        for j, p in enumerate(components):
            starts[j + 1] = starts[j] + len(p.codes)
        for arr in (codes, fargs, iargs, starts):
            arr.setflags(write=False)
        object.__setattr__(self, "_codes", codes)
        object.__setattr__(self, "_fargs", fargs)
        object.__setattr__(self, "_iargs", iargs)
        object.__setattr__(self, "_starts", starts)
        object.__setattr__(self, "_stack_need",
                           max(p.stack_need for p in components))

    @classmethod
    def from_sources(cls, n: int, m: int, sources: Sequence[str],
                     params: dict[str, float | complex] | None = None,
                     complex_scalars: bool = False, name: str = "",
                     gradient: Callable | None = None) -> "MapSpec":
        params = dict(params or {})
        names = tuple(params.keys())
        programs = tuple(_compile(src, n, names) for src in sources)
        return cls(n=n, m=m, components=programs, param_names=names,
                   param_values=tuple(params.values()),
                   complex_scalars=complex_scalars, gradient=gradient,
                   name=name)

    def with_params(self, **updates) -> "MapSpec":
        """Copy of this spec with some parameter values rebound."""
        unknown = set(updates) - set(self.param_names)
        if unknown:
            raise ValueError(f"unknown parameters {sorted(unknown)}")
        values = tuple(updates.get(k, v)
                       for k, v in zip(self.param_names, self.param_values))
        return MapSpec(n=self.n, m=self.m, components=self.components,
                       param_names=self.param_names, param_values=values,
                       complex_scalars=self.complex_scalars,
                       gradient=self.gradient, name=self.name)

    def param_array(self) -> np.ndarray:
        dtype = np.complex128 if self.complex_scalars else np.float64
        return np.asarray(self.param_values, dtype=dtype)

    def apply(self, inputs: Sequence[float | complex]) -> tuple:
        """Evaluate all m components once on one n-vector (reference path)."""
        return tuple(evaluate(p, inputs, self.param_values) for p in self.components)


@dataclass(frozen=True)
class SequenceRecord:
    """The emitted scalar sequence u_1.. up to the requested count, cut
    short (``truncated``) if a term went non-finite or past the cap."""

    values: np.ndarray
    truncated: bool
    scheme: str
    requested_count: int

    def __len__(self):
        return len(self.values)

    def to_csv(self, path) -> None:
        complex_mode = np.iscomplexobj(self.values)
        with open(path, "w", newline="") as fh:
            if complex_mode:
                fh.write("index,re,im\n")
                for i, v in enumerate(self.values.tolist(), start=1):
                    fh.write(f"{i},{v.real!r},{v.imag!r}\n")
            else:
                fh.write("index,value\n")
                for i, v in enumerate(self.values.tolist(), start=1):
                    fh.write(f"{i},{v!r}\n")


def iterate(spec: MapSpec, scheme: str, seeds: Sequence[float | complex],
            count: int, cap: float = MAGNITUDE_CAP) -> SequenceRecord:
    """Emit u_1..u_count; the seeds are u_1..u_n verbatim."""
    is_v = _as_scheme_flag(scheme)
    if len(seeds) != spec.n:
        raise ValueError(f"expected {spec.n} seeds, got {len(seeds)}")
    if count < spec.n:
        raise ValueError(f"count must be >= n={spec.n}")
    if spec.complex_scalars:
        seeds_arr = np.asarray(seeds, dtype=np.complex128)
        values, truncated = _kernels.iterate_c128(
            spec._codes, spec._fargs, spec._iargs, spec._starts,
            spec.n, spec.m, is_v, spec.param_array(), seeds_arr, count, cap,
            spec._stack_need)
    else:
        seeds_arr = np.asarray(seeds, dtype=np.float64)
        values, truncated = _kernels.iterate_f64(
            spec._codes, spec._fargs, spec._iargs, spec._starts,
            spec.n, spec.m, is_v, spec.param_array(), seeds_arr, count, cap,
            spec._stack_need)
    values = np.ascontiguousarray(values)
    values.setflags(write=False)
    return SequenceRecord(values=values, truncated=bool(truncated),
                          scheme="V" if is_v else "F", requested_count=count)


@dataclass
class IterState:
    """Incremental iteration state: the last n scalars (oldest first),
    the count of scalars emitted so far, and the block/cycle phase."""

    spec: MapSpec
    scheme: str
    history: list
    produced_count: int
    _jphase: int = 0
    _vblock: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.history) != self.spec.n:
            raise ValueError("history must hold exactly n scalars")


def seed_state(spec: MapSpec, scheme: str, seeds: Sequence[float | complex]) -> IterState:
    _as_scheme_flag(scheme)
    if len(seeds) != spec.n:
        raise ValueError(f"expected {spec.n} seeds, got {len(seeds)}")
    if spec.complex_scalars:
        seeds = [complex(v) for v in seeds]
    else:
        seeds = [float(v) for v in seeds]
    return IterState(spec=spec, scheme=str(scheme).upper(), history=list(seeds),
                     produced_count=spec.n)


def step(state: IterState) -> list:
    """Advance one step: emits 1 scalar under F, m scalars under V.

    Concatenating step outputs after the seeds reproduces ``iterate``.
    """
    spec = state.spec
    is_v = _as_scheme_flag(state.scheme)
    if is_v:
        window = tuple(state.history)
        emitted = [evaluate(p, window, spec.param_values) for p in spec.components]
        state.history = state.history[spec.m:] + emitted
        state.produced_count += spec.m
        return emitted
    j = state._jphase
    v = evaluate(spec.components[j], tuple(state.history), spec.param_values)
    state.history = state.history[1:] + [v]
    state._jphase = (j + 1) % spec.m
    state.produced_count += 1
    return [v]

"""numba-compiled hot loops: stack-program evaluation, F/V iteration,
attractor classification and per-row raster work.

Real and complex interpreters are spelled out separately (numba's static
typing rules out one polymorphic body).  All kernels release the GIL so
callers can parallelize with plain thread pools; none of them uses
shared mutable state beyond caller-provided output arrays, so results
are independent of the thread count.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from numba import njit

from .expr import (
    OP_CONST, OP_VAR, OP_PARAM, OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW,
    OP_NEG, OP_SIN, OP_COS, OP_EXP, OP_ABS, OP_SQRT,
)

KIND_FIXED = 0
KIND_PERIODIC = 1
KIND_UNBOUNDED = 2
KIND_UNDECIDED = 3

_JIT = dict(cache=True, nogil=True, error_model="numpy")

# guard for complex sin/cos/exp whose exponentials overflow silently
_EXP_GUARD = 709.0


@njit(inline="always", **_JIT)
def eval_f64(codes, fargs, iargs, s0, s1, vals, base, params, stack):
    sp = 0
    for i in range(s0, s1):
        c = codes[i]
        if c == OP_CONST:
            stack[sp] = fargs[i]; sp += 1
        elif c == OP_VAR:
            stack[sp] = vals[base + iargs[i]]; sp += 1
        elif c == OP_PARAM:
            stack[sp] = params[iargs[i]]; sp += 1
        elif c == OP_ADD:
            sp -= 1; stack[sp - 1] = stack[sp - 1] + stack[sp]
        elif c == OP_SUB:
            sp -= 1; stack[sp - 1] = stack[sp - 1] - stack[sp]
        elif c == OP_MUL:
            sp -= 1; stack[sp - 1] = stack[sp - 1] * stack[sp]
        elif c == OP_DIV:
            sp -= 1; stack[sp - 1] = stack[sp - 1] / stack[sp]
        elif c == OP_POW:
            sp -= 1; stack[sp - 1] = stack[sp - 1] ** stack[sp]
        elif c == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif c == OP_SIN:
            v = stack[sp - 1]
            stack[sp - 1] = math.sin(v) if math.isfinite(v) else np.nan
        elif c == OP_COS:
            v = stack[sp - 1]
            stack[sp - 1] = math.cos(v) if math.isfinite(v) else np.nan
        elif c == OP_EXP:
            stack[sp - 1] = math.exp(stack[sp - 1])
        elif c == OP_ABS:
            stack[sp - 1] = abs(stack[sp - 1])
        else:  # OP_SQRT
            v = stack[sp - 1]
            stack[sp - 1] = math.sqrt(v) if v >= 0.0 else np.nan
    return stack[0]


@njit(inline="always", **_JIT)
def eval_c128(codes, fargs, iargs, s0, s1, vals, base, params, stack):
    sp = 0
    for i in range(s0, s1):
        c = codes[i]
        if c == OP_CONST:
            stack[sp] = complex(fargs[i], 0.0); sp += 1
        elif c == OP_VAR:
            stack[sp] = vals[base + iargs[i]]; sp += 1
        elif c == OP_PARAM:
            stack[sp] = params[iargs[i]]; sp += 1
        elif c == OP_ADD:
            sp -= 1; stack[sp - 1] = stack[sp - 1] + stack[sp]
        elif c == OP_SUB:
            sp -= 1; stack[sp - 1] = stack[sp - 1] - stack[sp]
        elif c == OP_MUL:
            sp -= 1; stack[sp - 1] = stack[sp - 1] * stack[sp]
        elif c == OP_DIV:
            sp -= 1
            b = stack[sp]
            if b == 0j:
                stack[sp - 1] = complex(np.nan, np.nan)
            else:
                stack[sp - 1] = stack[sp - 1] / b
        elif c == OP_POW:
            sp -= 1; stack[sp - 1] = stack[sp - 1] ** stack[sp]
        elif c == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif c == OP_SIN:
            v = stack[sp - 1]
            if abs(v.imag) > _EXP_GUARD:
                stack[sp - 1] = complex(np.nan, np.nan)
            else:
                stack[sp - 1] = cmath.sin(v)
        elif c == OP_COS:
            v = stack[sp - 1]
            if abs(v.imag) > _EXP_GUARD:
                stack[sp - 1] = complex(np.nan, np.nan)
            else:
                stack[sp - 1] = cmath.cos(v)
        elif c == OP_EXP:
            v = stack[sp - 1]
            if v.real > _EXP_GUARD:
                stack[sp - 1] = complex(np.nan, np.nan)
            else:
                stack[sp - 1] = cmath.exp(v)
        elif c == OP_ABS:
            stack[sp - 1] = complex(abs(stack[sp - 1]), 0.0)
        else:  # OP_SQRT
            stack[sp - 1] = cmath.sqrt(stack[sp - 1])
    return stack[0]


# ---------------------------------------------------------------------------
# One emitted scalar.  For F the window slides by one; for V the window
# is frozen for a whole m-block (hist only rolls when the block is full).
# jphase is the component index of the next scalar.


@njit(inline="always", **_JIT)
def _step_f64(codes, fargs, iargs, starts, n, m, is_v, params, hist, vblock,
              jphase, stack):
    v = eval_f64(codes, fargs, iargs, starts[jphase], starts[jphase + 1],
                 hist, 0, params, stack)
    if is_v:
        vblock[jphase] = v
        jphase += 1
        if jphase == m:
            for i in range(n - m):
                hist[i] = hist[i + m]
            for i in range(m):
                hist[n - m + i] = vblock[i]
            jphase = 0
    else:
        for i in range(n - 1):
            hist[i] = hist[i + 1]
        hist[n - 1] = v
        jphase += 1
        if jphase == m:
            jphase = 0
    return v, jphase


@njit(inline="always", **_JIT)
def _step_c128(codes, fargs, iargs, starts, n, m, is_v, params, hist, vblock,
               jphase, stack):
    v = eval_c128(codes, fargs, iargs, starts[jphase], starts[jphase + 1],
                  hist, 0, params, stack)
    if is_v:
        vblock[jphase] = v
        jphase += 1
        if jphase == m:
            for i in range(n - m):
                hist[i] = hist[i + m]
            for i in range(m):
                hist[n - m + i] = vblock[i]
            jphase = 0
    else:
        for i in range(n - 1):
            hist[i] = hist[i + 1]
        hist[n - 1] = v
        jphase += 1
        if jphase == m:
            jphase = 0
    return v, jphase


# ---------------------------------------------------------------------------
# Full-sequence iteration (used by engine.iterate)


@njit(**_JIT)
def iterate_f64(codes, fargs, iargs, starts, n, m, is_v, params, seeds,
                count, cap, stack_need):
    out = np.empty(count, dtype=np.float64)
    for i in range(n):
        out[i] = seeds[i]
        if not (abs(out[i]) <= cap):   # catches nan too
            return out[:i + 1], True
    stack = np.empty(stack_need, dtype=np.float64)
    if is_v:
        t = n
        k = 0
        while t < count:
            base = k * m
            for j in range(m):
                if t >= count:
                    break
                v = eval_f64(codes, fargs, iargs, starts[j], starts[j + 1],
                             out, base, params, stack)
                out[t] = v
                t += 1
                if not (abs(v) <= cap):
                    return out[:t], True
            k += 1
    else:
        t = n
        while t < count:
            j = (t - n) % m
            v = eval_f64(codes, fargs, iargs, starts[j], starts[j + 1],
                         out, t - n, params, stack)
            out[t] = v
            t += 1
            if not (abs(v) <= cap):
                return out[:t], True
    return out, False


@njit(**_JIT)
def iterate_c128(codes, fargs, iargs, starts, n, m, is_v, params, seeds,
                 count, cap, stack_need):
    out = np.empty(count, dtype=np.complex128)
    for i in range(n):
        out[i] = seeds[i]
        if not (abs(out[i]) <= cap):
            return out[:i + 1], True
    stack = np.empty(stack_need, dtype=np.complex128)
    if is_v:
        t = n
        k = 0
        while t < count:
            base = k * m
            for j in range(m):
                if t >= count:
                    break
                v = eval_c128(codes, fargs, iargs, starts[j], starts[j + 1],
                              out, base, params, stack)
                out[t] = v
                t += 1
                if not (abs(v) <= cap):
                    return out[:t], True
            k += 1
    else:
        t = n
        while t < count:
            j = (t - n) % m
            v = eval_c128(codes, fargs, iargs, starts[j], starts[j + 1],
                          out, t - n, params, stack)
            out[t] = v
            t += 1
            if not (abs(v) <= cap):
                return out[:t], True
    return out, False


# ---------------------------------------------------------------------------
# Attractor classification.
#
# Discard a transient, fill a detection buffer, and scan candidate
# periods in ascending order; p is accepted when |u[k+p] - u[k]| < tol
# for all k over a window of wmult*p terms, so the reported period is
# minimal.  If nothing is found the discarded span grows geometrically
# until the budget runs out; a near-miss (best residual within
# near_factor*tol) earns one budget escalation by esc_factor.
#
# The discarded span and buffer length are kept multiples of m so the
# buffer always ends on a component-cycle boundary: the last n buffer
# values plus "next component = g_1" reproduce the tail exactly.


@njit(**_JIT)
def classify_f64(codes, fargs, iargs, starts, n, m, is_v, params, seeds,
                 transient, wmult, tol, max_period, budget, esc_factor,
                 near_factor, cap, stack_need):
    blen = ((wmult + 1) * max_period + n + m - 1) // m * m
    buf = np.empty(blen, dtype=np.float64)
    hist = np.empty(n, dtype=np.float64)
    for i in range(n):
        hist[i] = seeds[i]
        if not (abs(hist[i]) <= cap):
            return KIND_UNBOUNDED, 0, 0, buf, 0
    vblock = np.empty(m, dtype=np.float64)
    stack = np.empty(stack_need, dtype=np.float64)
    jphase = 0
    produced = 0
    discard = (transient + m - 1) // m * m
    total_budget = budget
    escalated = False
    while True:
        i = 0
        while i < discard:
            v, jphase = _step_f64(codes, fargs, iargs, starts, n, m, is_v,
                                  params, hist, vblock, jphase, stack)
            produced += 1
            if not (abs(v) <= cap):
                return KIND_UNBOUNDED, 0, produced, buf, 0
            i += 1
        for i2 in range(blen):
            v, jphase = _step_f64(codes, fargs, iargs, starts, n, m, is_v,
                                  params, hist, vblock, jphase, stack)
            produced += 1
            if not (abs(v) <= cap):
                return KIND_UNBOUNDED, 0, produced, buf, 0
            buf[i2] = v
        for p in range(1, max_period + 1):
            ok = True
            for k in range(wmult * p):
                if not (abs(buf[k + p] - buf[k]) < tol):
                    ok = False
                    break
            if ok:
                kind = KIND_FIXED if p == 1 else KIND_PERIODIC
                return kind, p, produced, buf, blen
        if produced >= total_budget:
            if not escalated and esc_factor > 1.0:
                best = np.inf
                for p in range(1, max_period + 1):
                    worst = 0.0
                    for k in range(wmult * p):
                        r = abs(buf[k + p] - buf[k])
                        if r > worst:
                            worst = r
                    if worst < best:
                        best = worst
                if best < near_factor * tol:
                    escalated = True
                    total_budget = int(budget * esc_factor)
                    discard = (produced + m - 1) // m * m
                    continue
            return KIND_UNDECIDED, 0, produced, buf, blen
        discard = (produced + m - 1) // m * m


# ---------------------------------------------------------------------------
# Raster rows.  Each call classifies the cells of rows [row_start, row_end)
# and writes them into preallocated index-addressed slots, so any
# partitioning of rows across threads produces identical output.


@njit(**_JIT)
def basin_rows_f64(codes, fargs, iargs, starts, n, m, is_v, params,
                   width, x0, dx, y1, dy, axis0, axis1, base_seed,
                   transient, wmult, tol, max_period, budget, esc_factor,
                   near_factor, cap, stack_need, row_start, row_end,
                   kinds, periods, values, iters):
    seeds = np.empty(n, dtype=np.float64)
    for row in range(row_start, row_end):
        cy = y1 - (row + 0.5) * dy
        for col in range(width):
            cx = x0 + (col + 0.5) * dx
            for i in range(n):
                seeds[i] = base_seed[i]
            seeds[axis0] = cx
            seeds[axis1] = cy
            kind, p, produced, buf, used = classify_f64(
                codes, fargs, iargs, starts, n, m, is_v, params, seeds,
                transient, wmult, tol, max_period, budget, esc_factor,
                near_factor, cap, stack_need)
            kinds[row, col] = kind
            periods[row, col] = p
            iters[row, col] = produced
            if kind == KIND_FIXED:
                values[row, col] = buf[used - 1]
            else:
                values[row, col] = np.nan


@njit(**_JIT)
def escape_rows_c128(codes, fargs, iargs, starts, n, m, is_v, params_base,
                     seed_template, cell_mask, c_index, width, x0, dx, y1, dy,
                     radius, max_iter, stack_need, row_start, row_end, counts):
    hist = np.empty(n, dtype=np.complex128)
    vblock = np.empty(m, dtype=np.complex128)
    stack = np.empty(stack_need, dtype=np.complex128)
    params = params_base.copy()
    for row in range(row_start, row_end):
        cy = y1 - (row + 0.5) * dy
        for col in range(width):
            cx = x0 + (col + 0.5) * dx
            zeta = complex(cx, cy)
            for i in range(n):
                hist[i] = zeta if cell_mask[i] else seed_template[i]
            if c_index >= 0:
                params[c_index] = zeta
            seeds_ok = True
            for i in range(n):
                if not (abs(hist[i]) <= radius):
                    seeds_ok = False
            if not seeds_ok:
                counts[row, col] = 0
                continue
            jphase = 0
            cnt = 0
            while cnt < max_iter:
                v, jphase = _step_c128(codes, fargs, iargs, starts, n, m,
                                       is_v, params, hist, vblock, jphase,
                                       stack)
                if not (abs(v) <= radius):
                    break
                cnt += 1
            counts[row, col] = cnt

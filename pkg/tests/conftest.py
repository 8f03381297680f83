import math
import random

import pytest

from geniter import expr
from geniter.engine import MapSpec


def random_ast(rng: random.Random, arity: int, params: list[str], depth: int = 0):
    """Random expression tree; leaves avoid negative literals so the
    printed form re-parses to the same arithmetic."""
    if depth >= 4 or rng.random() < 0.3:
        choice = rng.random()
        if choice < 0.4:
            return expr.Num(round(rng.uniform(0.0, 4.0), 3))
        if choice < 0.5 and params:
            k = rng.randrange(len(params))
            return expr.Param(k, params[k])
        if choice < 0.55:
            return expr.Num(math.pi, name="pi")
        return expr.Var(rng.randrange(arity))
    choice = rng.random()
    if choice < 0.55:
        op = rng.choice("+-*/^")
        left = random_ast(rng, arity, params, depth + 1)
        right = random_ast(rng, arity, params, depth + 1)
        if op == "^":
            # keep exponents tame so values stay finite
            right = expr.Num(float(rng.randrange(1, 4)))
        return expr.Bin(op, left, right)
    if choice < 0.7:
        return expr.Neg(random_ast(rng, arity, params, depth + 1))
    fn = rng.choice(["sin", "cos", "abs", "sqrt", "exp"])
    return expr.Fun(fn, random_ast(rng, arity, params, depth + 1))


def random_bounded_sources(rng: random.Random, n: int, m: int) -> list[str]:
    """Component sources whose values stay in [-2, 2] forever: small
    linear combinations of sin/cos of window terms."""
    sources = []
    for _ in range(m):
        terms = []
        for _ in range(rng.randrange(1, 4)):
            c = round(rng.uniform(0.1, 0.6), 3)
            fn = rng.choice(["sin", "cos"])
            v1 = rng.randrange(n) + 1
            v2 = rng.randrange(n) + 1
            w = round(rng.uniform(0.2, 1.5), 3)
            terms.append(f"{c}*{fn}({w}*x{v1} + 0.3*x{v2})")
        sources.append(" + ".join(terms))
    return sources


def random_bounded_spec(rng: random.Random, n: int | None = None,
                        m: int | None = None) -> MapSpec:
    if n is None:
        n = rng.randrange(1, 5)
    if m is None:
        m = rng.randrange(1, n + 1)
    return MapSpec.from_sources(n, m, random_bounded_sources(rng, n, m))


@pytest.fixture
def rng():
    return random.Random(987123)

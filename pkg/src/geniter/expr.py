"""Parse and compile scalar map-component expressions.

Grammar (ASCII, standard infix precedence)::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative, binds tightest
    atom    := NUMBER | IDENT | IDENT '(' sum ')' | '(' sum ')'

Identifiers resolve to input variables ``x1 .. xn`` (with aliases
``x, y, z`` for arity <= 3 and ``z, w`` for arity <= 2), declared
parameter names, the constant ``pi``, or a builtin function
(``sin, cos, exp, abs, sqrt``).

Compiled programs are flat stack-machine instruction lists evaluated
over real or complex double-precision scalars.  A program is pure:
the same inputs and parameter values always produce the same scalar,
and non-finite results (division by zero, overflow, domain errors)
come back as inf/nan rather than raising.

Error positions in :class:`ExprError` are 1-based character offsets.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ExprError",
    "Num", "Var", "Param", "Neg", "Bin", "Fun",
    "parse", "to_source", "compile", "evaluate",
    "CompiledProgram",
    "FUNCTIONS",
]

FUNCTIONS = ("sin", "cos", "exp", "abs", "sqrt")

# instruction opcodes
OP_CONST = 0
OP_VAR = 1
OP_PARAM = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_POW = 7
OP_NEG = 8
OP_SIN = 9
OP_COS = 10
OP_EXP = 11
OP_ABS = 12
OP_SQRT = 13

_FUNC_OPS = {"sin": OP_SIN, "cos": OP_COS, "exp": OP_EXP, "abs": OP_ABS, "sqrt": OP_SQRT}
_BIN_OPS = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV, "^": OP_POW}


class ExprError(ValueError):
    """Malformed expression; ``position`` is the 1-based offset in the source."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# AST


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: float
    name: str | None = None  # "pi" for the named constant


@dataclass(frozen=True)
class Var(Node):
    index: int  # 0-based input slot


@dataclass(frozen=True)
class Param(Node):
    index: int
    name: str


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Bin(Node):
    op: str  # one of + - * / ^
    left: Node
    right: Node


@dataclass(frozen=True)
class Fun(Node):
    func: str
    arg: Node


# ---------------------------------------------------------------------------
# Tokenizer

_TOK_NUM = "num"
_TOK_IDENT = "ident"
_TOK_OP = "op"
_TOK_LP = "("
_TOK_RP = ")"
_TOK_END = "end"


def _tokenize(source: str) -> list[tuple[str, object, int]]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        start = i + 1  # 1-based
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            while j < n and (source[j].isdigit() or source[j] == "."):
                j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            try:
                value = float(text)
            except ValueError:
                raise ExprError(f"bad numeric literal '{text}'", start) from None
            tokens.append((_TOK_NUM, value, start))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            if not source[i:j].isascii():
                raise ExprError("identifiers must be ASCII", start)
            tokens.append((_TOK_IDENT, source[i:j], start))
            i = j
        elif c in "+-*/^":
            tokens.append((_TOK_OP, c, start))
            i += 1
        elif c == "(":
            tokens.append((_TOK_LP, c, start))
            i += 1
        elif c == ")":
            tokens.append((_TOK_RP, c, start))
            i += 1
        else:
            raise ExprError(f"unexpected character {c!r}", start)
    tokens.append((_TOK_END, "", n + 1))
    return tokens


def _variable_aliases(arity: int) -> dict[str, int]:
    names = {f"x{k + 1}": k for k in range(arity)}
    for k, alias in enumerate(("x", "y", "z")[:arity]):
        names[alias] = k
    if arity <= 2:
        # complex-plane convention f(z, w)
        names["z"] = 0
        if arity == 2:
            names["w"] = 1
    return names


class _Parser:
    def __init__(self, source: str, arity: int, param_names: list[str]):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0
        self.arity = arity
        self.vars = _variable_aliases(arity)
        self.params = {name: k for k, name in enumerate(param_names)}

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Node:
        node = self.sum()
        kind, _, at = self.peek()
        if kind != _TOK_END:
            raise ExprError("unexpected trailing input", at)
        return node

    def sum(self) -> Node:
        node = self.product()
        while True:
            kind, val, _ = self.peek()
            if kind == _TOK_OP and val in "+-":
                self.advance()
                node = Bin(val, node, self.product())
            else:
                return node

    def product(self) -> Node:
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == _TOK_OP and val in "*/":
                self.advance()
                node = Bin(val, node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        kind, val, _ = self.peek()
        if kind == _TOK_OP and val == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == _TOK_OP and val == "^":
            self.advance()
            # exponent at unary level so ``2^-3`` parses
            return Bin("^", base, self.unary())
        return base

    def atom(self) -> Node:
        kind, val, at = self.advance()
        if kind == _TOK_NUM:
            return Num(val)
        if kind == _TOK_LP:
            node = self.sum()
            kind, _, at2 = self.advance()
            if kind != _TOK_RP:
                raise ExprError("expected ')'", at2)
            return node
        if kind == _TOK_IDENT:
            nxt_kind, _, _ = self.peek()
            if nxt_kind == _TOK_LP:
                if val not in _FUNC_OPS:
                    raise ExprError(f"unknown function '{val}'", at)
                self.advance()
                arg = self.sum()
                kind2, _, at2 = self.advance()
                if kind2 != _TOK_RP:
                    raise ExprError("expected ')'", at2)
                return Fun(val, arg)
            if val == "pi":
                return Num(math.pi, name="pi")
            if val in self.vars:
                return Var(self.vars[val])
            if val in self.params:
                return Param(self.params[val], val)
            if len(val) >= 2 and val[0] == "x" and val[1:].isdigit():
                raise ExprError(
                    f"variable '{val}' exceeds arity {self.arity}", at)
            raise ExprError(f"unknown identifier '{val}'", at)
        raise ExprError("expected a value", at)


_RESERVED = {"pi", *FUNCTIONS}


def parse(source: str, arity: int, param_names: list[str] | tuple[str, ...] = ()) -> Node:
    """Parse ``source`` into an AST for a map component of the given arity."""
    if not isinstance(source, str) or not source.strip():
        raise ExprError("empty expression", 1)
    if arity < 1:
        raise ValueError("arity must be >= 1")
    param_names = list(param_names)
    aliases = _variable_aliases(arity)
    for name in param_names:
        if name in _RESERVED or name in aliases:
            raise ValueError(f"parameter name {name!r} collides with a builtin name")
    if len(set(param_names)) != len(param_names):
        raise ValueError("duplicate parameter names")
    return _Parser(source, arity, param_names).parse()


# ---------------------------------------------------------------------------
# Pretty printer (used by the round-trip tests and for --expr echoing)

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _render(node: Node, parent_prec: int, right_side: bool) -> str:
    if isinstance(node, Num):
        text = node.name if node.name else repr(node.value)
        if not node.name and node.value < 0:
            return f"({text})"
        return text
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Fun):
        return f"{node.func}({_render(node.arg, 0, False)})"
    if isinstance(node, Neg):
        inner = _render(node.arg, _PREC["neg"], False)
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PREC["neg"] or (parent_prec == _PREC["neg"] and right_side) else text
    if isinstance(node, Bin):
        prec = _PREC[node.op]
        if node.op == "^":
            left = _render(node.left, prec + 1, False)   # ^ is right-assoc
            right = _render(node.right, prec, True)
        else:
            left = _render(node.left, prec, False)
            right = _render(node.right, prec + 1, True)
        text = f"{left} {node.op} {right}" if node.op in "+-" else f"{left}{node.op}{right}"
        return f"({text})" if prec < parent_prec or (prec == parent_prec and right_side) else text
    raise TypeError(f"not an expression node: {node!r}")


def to_source(node: Node) -> str:
    """Render an AST back to parseable source text."""
    return _render(node, 0, False)


# ---------------------------------------------------------------------------
# Compilation to the stack machine


@dataclass(frozen=True, eq=False)
class CompiledProgram:
    """Flat stack program for one scalar map component.

    ``codes[i]`` is the opcode, ``fargs[i]`` the constant for OP_CONST,
    ``iargs[i]`` the slot index for OP_VAR / OP_PARAM.  Validated on
    construction: the net stack effect must be exactly +1 with no
    intermediate underflow.
    """

    codes: np.ndarray
    fargs: np.ndarray
    iargs: np.ndarray
    arity: int
    n_params: int
    source: str = ""
    stack_need: int = field(default=0)

    def __post_init__(self):
        codes = np.ascontiguousarray(self.codes, dtype=np.int64)
        fargs = np.ascontiguousarray(self.fargs, dtype=np.float64)
        iargs = np.ascontiguousarray(self.iargs, dtype=np.int64)
        if not (len(codes) == len(fargs) == len(iargs)):
            raise ValueError("instruction arrays must have equal length")
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "fargs", fargs)
        object.__setattr__(self, "iargs", iargs)
        object.__setattr__(self, "stack_need", self._validate())
        self.codes.setflags(write=False)
        self.fargs.setflags(write=False)
        self.iargs.setflags(write=False)

    def _validate(self) -> int:
        depth = 0
        peak = 0
        for code, idx in zip(self.codes, self.iargs):
            if code in (OP_CONST, OP_VAR, OP_PARAM):
                if code == OP_VAR and not 0 <= idx < self.arity:
                    raise ValueError(f"variable index {idx} out of range for arity {self.arity}")
                if code == OP_PARAM and not 0 <= idx < self.n_params:
                    raise ValueError(f"parameter index {idx} out of range")
                depth += 1
            elif code in (OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW):
                if depth < 2:
                    raise ValueError("stack underflow in program")
                depth -= 1
            elif code in (OP_NEG, OP_SIN, OP_COS, OP_EXP, OP_ABS, OP_SQRT):
                if depth < 1:
                    raise ValueError("stack underflow in program")
            else:
                raise ValueError(f"unknown opcode {code}")
            peak = max(peak, depth)
        if depth != 1:
            raise ValueError(f"program leaves {depth} values on the stack, expected 1")
        return peak

    def __call__(self, inputs, params=()):
        return evaluate(self, inputs, params)


def _emit(node: Node, codes: list, fargs: list, iargs: list) -> None:
    if isinstance(node, Num):
        codes.append(OP_CONST); fargs.append(node.value); iargs.append(0)
    elif isinstance(node, Var):
        codes.append(OP_VAR); fargs.append(0.0); iargs.append(node.index)
    elif isinstance(node, Param):
        codes.append(OP_PARAM); fargs.append(0.0); iargs.append(node.index)
    elif isinstance(node, Neg):
        _emit(node.arg, codes, fargs, iargs)
        codes.append(OP_NEG); fargs.append(0.0); iargs.append(0)
    elif isinstance(node, Bin):
        _emit(node.left, codes, fargs, iargs)
        _emit(node.right, codes, fargs, iargs)
        codes.append(_BIN_OPS[node.op]); fargs.append(0.0); iargs.append(0)
    elif isinstance(node, Fun):
        _emit(node.arg, codes, fargs, iargs)
        codes.append(_FUNC_OPS[node.func]); fargs.append(0.0); iargs.append(0)
    else:
        raise TypeError(f"not an expression node: {node!r}")


def compile(source: str, arity: int, param_names: list[str] | tuple[str, ...] = ()) -> CompiledProgram:
    """Compile source text to a stack program of the given arity."""
    node = parse(source, arity, param_names)
    codes: list = []
    fargs: list = []
    iargs: list = []
    _emit(node, codes, fargs, iargs)
    return CompiledProgram(
        codes=np.array(codes, dtype=np.int64),
        fargs=np.array(fargs, dtype=np.float64),
        iargs=np.array(iargs, dtype=np.int64),
        arity=arity,
        n_params=len(param_names),
        source=source,
    )


# ---------------------------------------------------------------------------
# Reference evaluator (pure Python; the hot loops live in _kernels)


def _real_pow(a: float, b: float) -> float:
    if a == 0.0 and b < 0.0:
        # libm: pow(+-0, negative) -> +-inf
        if b == int(b) and int(b) % 2 != 0:
            return math.copysign(math.inf, a)
        return math.inf
    try:
        return math.pow(a, b)
    except ValueError:          # negative base, fractional exponent
        return math.nan
    except OverflowError:
        neg = a < 0.0 and b == int(b) and int(b) % 2 != 0
        return -math.inf if neg else math.inf


def _real_div(a: float, b: float) -> float:
    try:
        return a / b
    except ZeroDivisionError:
        if a == 0.0 or math.isnan(a):
            return math.nan
        return math.inf * math.copysign(1.0, a) * math.copysign(1.0, b)


def _real_exp(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


_REAL_UNARY = {
    OP_NEG: lambda v: -v,
    OP_SIN: lambda v: math.sin(v) if math.isfinite(v) else math.nan,
    OP_COS: lambda v: math.cos(v) if math.isfinite(v) else math.nan,
    OP_EXP: _real_exp,
    OP_ABS: abs,
    OP_SQRT: lambda v: math.sqrt(v) if v >= 0.0 else math.nan,
}


def _cplx_unary(code: int, v: complex) -> complex:
    try:
        if code == OP_NEG:
            return -v
        if code == OP_SIN:
            return cmath.sin(v)
        if code == OP_COS:
            return cmath.cos(v)
        if code == OP_EXP:
            return cmath.exp(v)
        if code == OP_ABS:
            return complex(abs(v), 0.0)
        return cmath.sqrt(v)
    except (ValueError, OverflowError):
        return complex(math.nan, math.nan)


def evaluate(program: CompiledProgram, inputs, params=()):
    """Evaluate a compiled program on a vector of scalars.

    Real mode when every input and parameter is real, complex mode
    otherwise.  Division by zero and domain errors yield non-finite
    scalars; arity or parameter-count mismatches raise ValueError.
    """
    inputs = tuple(inputs)
    params = tuple(params)
    if len(inputs) != program.arity:
        raise ValueError(f"expected {program.arity} inputs, got {len(inputs)}")
    if len(params) != program.n_params:
        raise ValueError(f"expected {program.n_params} parameters, got {len(params)}")
    is_complex = any(isinstance(v, complex) for v in inputs) or any(
        isinstance(v, complex) for v in params)
    prog = zip(program.codes.tolist(), program.fargs.tolist(), program.iargs.tolist())
    stack: list = []
    push = stack.append
    if is_complex:
        inputs = tuple(complex(v) for v in inputs)
        params = tuple(complex(v) for v in params)
        for code, f, k in prog:
            if code == OP_CONST:
                push(complex(f))
            elif code == OP_VAR:
                push(inputs[k])
            elif code == OP_PARAM:
                push(params[k])
            elif code == OP_ADD:
                b = stack.pop(); stack[-1] = stack[-1] + b
            elif code == OP_SUB:
                b = stack.pop(); stack[-1] = stack[-1] - b
            elif code == OP_MUL:
                b = stack.pop(); stack[-1] = stack[-1] * b
            elif code == OP_DIV:
                b = stack.pop()
                if b == 0:
                    stack[-1] = complex(math.nan, math.nan)
                else:
                    try:
                        stack[-1] = stack[-1] / b
                    except OverflowError:
                        stack[-1] = complex(math.nan, math.nan)
            elif code == OP_POW:
                b = stack.pop()
                try:
                    stack[-1] = stack[-1] ** b
                except (ZeroDivisionError, OverflowError, ValueError):
                    stack[-1] = complex(math.nan, math.nan)
            else:
                stack[-1] = _cplx_unary(code, stack[-1])
        return stack[0]
    inputs = tuple(float(v) for v in inputs)
    params = tuple(float(v) for v in params)
    for code, f, k in prog:
        if code == OP_CONST:
            push(f)
        elif code == OP_VAR:
            push(inputs[k])
        elif code == OP_PARAM:
            push(params[k])
        elif code == OP_ADD:
            b = stack.pop(); stack[-1] = stack[-1] + b
        elif code == OP_SUB:
            b = stack.pop(); stack[-1] = stack[-1] - b
        elif code == OP_MUL:
            b = stack.pop(); stack[-1] = stack[-1] * b
        elif code == OP_DIV:
            b = stack.pop(); stack[-1] = _real_div(stack[-1], b)
        elif code == OP_POW:
            b = stack.pop(); stack[-1] = _real_pow(stack[-1], b)
        else:
            stack[-1] = _REAL_UNARY[code](stack[-1])
    return stack[0]

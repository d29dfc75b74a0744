"""Linear, stack-based genetic programming: genomes, interpreter, operators.

A program is a flat sequence of postfix instructions executed on a value
stack. The instruction set is deliberately tiny (push constant, push input
variable, +, -, *, protected /, DUP, SWAP) so every genome encodes a smooth
function of its inputs, division-protection jumps aside.

Execution semantics (fixed for reproducibility):

* binary operators pop two operands; the second value popped is the LEFT
  operand, so ``a b -`` computes a - b,
* an instruction whose operand requirement exceeds the current stack depth
  is skipped (no-op),
* the protected division ``a b /`` yields 1.0 whenever ``|b| < 1e-9``,
* any non-finite arithmetic result (overflow) is replaced by 0.0 on the
  spot, which keeps the interpreter total,
* the result is the SUM of the values left on the stack after the last
  instruction, or 0.0 when the stack ends up empty. A program that reduces
  to a single expression therefore evaluates to exactly that expression,
  while loose terms accumulate additively; no instruction is ever dead
  code, which is what lets fitness gradients act on every fragment of a
  genome instead of only on its tail.

Programs are immutable values and the interpreter is pure and reentrant;
the genetic operators draw all randomness from a caller-owned generator.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple, Sequence

import numpy as np

MAX_PROGRAM_LENGTH = 200
DIV_GUARD = 1e-9
DEFAULT_CONST_RANGE = ((-10.0, 10.0),)

_N_OPERATORS = 6


class Op(IntEnum):
    CONST = 0
    VAR = 1
    ADD = 2
    SUB = 3
    MUL = 4
    DIV = 5
    DUP = 6
    SWAP = 7


class Instruction(NamedTuple):
    op: Op
    arg: float | int | None = None


ADD = Instruction(Op.ADD)
SUB = Instruction(Op.SUB)
MUL = Instruction(Op.MUL)
DIV = Instruction(Op.DIV)
DUP = Instruction(Op.DUP)
SWAP = Instruction(Op.SWAP)

_OPERATORS = (ADD, SUB, MUL, DIV, DUP, SWAP)

_OP_TOKENS = {Op.ADD: "+", Op.SUB: "-", Op.MUL: "*", Op.DIV: "/",
              Op.DUP: "DUP", Op.SWAP: "SWAP"}
_TOKEN_OPS = {tok: Instruction(op) for op, tok in _OP_TOKENS.items()}
_VAR_TOKEN = re.compile(r"x(\d+)")


def const(value: float) -> Instruction:
    """Instruction pushing a literal constant."""
    return Instruction(Op.CONST, float(value))


def var(index: int) -> Instruction:
    """Instruction pushing input coordinate ``x[index]``."""
    return Instruction(Op.VAR, int(index))


def _as_ranges(const_range) -> tuple[tuple[float, float], ...]:
    """Normalize a constant range spec to a tuple of (lo, hi) intervals.

    Accepts a single ``(lo, hi)`` pair or a sequence of pairs; constants are
    drawn by first picking an interval uniformly, then a value uniformly
    inside it.
    """
    items = tuple(const_range)
    if len(items) == 2 and all(isinstance(v, (int, float)) for v in items):
        items = (items,)
    ranges = []
    for pair in items:
        lo, hi = float(pair[0]), float(pair[1])
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ValueError(f"invalid constant interval ({lo}, {hi})")
        ranges.append((lo, hi))
    if not ranges:
        raise ValueError("const_range must contain at least one interval")
    return tuple(ranges)


@dataclass(frozen=True)
class Program:
    """An immutable linear genome encoding a function R^dimension -> R."""

    dimension: int
    code: tuple[Instruction, ...]
    const_range: tuple[tuple[float, float], ...] = DEFAULT_CONST_RANGE

    def __post_init__(self):
        object.__setattr__(self, "code", tuple(self.code))
        object.__setattr__(self, "const_range", _as_ranges(self.const_range))
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if not 1 <= len(self.code) <= MAX_PROGRAM_LENGTH:
            raise ValueError(
                f"program length must be in [1, {MAX_PROGRAM_LENGTH}], got {len(self.code)}")
        for ins in self.code:
            if ins.op == Op.VAR:
                if not 0 <= ins.arg < self.dimension:
                    raise ValueError(f"variable index {ins.arg} out of range")
            elif ins.op == Op.CONST:
                if not math.isfinite(ins.arg):
                    raise ValueError("constant payload must be finite")

    def __len__(self) -> int:
        return len(self.code)


def interpret_batch(program: Program, points) -> np.ndarray:
    """Evaluate ``program`` at each row of ``points`` (shape (n, dimension)).

    Always returns finite values; see module docstring for the semantics.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != program.dimension:
        raise ValueError(
            f"points must have shape (n, {program.dimension}), got {pts.shape}")
    n = pts.shape[0]
    stack: list[np.ndarray] = []
    push = stack.append
    pop = stack.pop
    with np.errstate(all="ignore"):
        for op, arg in program.code:
            if op >= Op.ADD:
                if op == Op.DUP:
                    if stack:
                        push(stack[-1])
                elif op == Op.SWAP:
                    if len(stack) >= 2:
                        stack[-1], stack[-2] = stack[-2], stack[-1]
                else:
                    if len(stack) < 2:
                        continue
                    b = pop()
                    a = pop()
                    if op == Op.ADD:
                        v = a + b
                    elif op == Op.SUB:
                        v = a - b
                    elif op == Op.MUL:
                        v = a * b
                    else:
                        guard = np.abs(b) < DIV_GUARD
                        v = np.where(guard, 1.0, a / np.where(guard, 1.0, b))
                    mask = np.isfinite(v)
                    if not mask.all():
                        v = np.where(mask, v, 0.0)
                    push(v)
            elif op == Op.CONST:
                push(np.full(n, arg))
            else:
                push(pts[:, arg])
    if not stack:
        return np.zeros(n)
    # accumulate bottom-to-top so results are bit-reproducible
    total = stack[0].copy()
    for term in stack[1:]:
        total = total + term
        mask = np.isfinite(total)
        if not mask.all():
            total = np.where(mask, total, 0.0)
    mask = np.isfinite(total)
    if not mask.all():
        return np.where(mask, total, 0.0)
    return total


def interpret(program: Program, x) -> float:
    """Evaluate ``program`` at a single point."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != program.dimension:
        raise ValueError(
            f"point must have length {program.dimension}, got shape {x.shape}")
    return float(interpret_batch(program, x[None, :])[0])


def _random_instruction(dimension: int, ranges, rng) -> Instruction:
    # Terminal with probability 0.5 (then const vs variable 50/50),
    # otherwise a uniform choice among the six operators.
    if rng.random() < 0.5:
        if rng.random() < 0.5:
            lo, hi = ranges[int(rng.integers(len(ranges)))]
            return Instruction(Op.CONST, float(rng.uniform(lo, hi)))
        return Instruction(Op.VAR, int(rng.integers(dimension)))
    return _OPERATORS[int(rng.integers(_N_OPERATORS))]


def random_program(dimension: int, max_length: int, const_range, rng,
                   min_length: int = 2) -> Program:
    """Create a random program of length uniform in {min_length, ..., max_length}.

    With min_length == max_length every draw has that exact length, which is
    how first-generation individuals of a fixed initial size are built.
    """
    if max_length < 2:
        raise ValueError("max_length must be >= 2")
    if not 1 <= min_length <= max_length:
        raise ValueError("min_length must lie in [1, max_length]")
    rng = np.random.default_rng(rng)
    ranges = _as_ranges(const_range)
    length = int(rng.integers(min_length, max_length + 1))
    code = tuple(_random_instruction(dimension, ranges, rng) for _ in range(length))
    return Program(dimension, code, ranges)


def splice(code_a: Sequence[Instruction], code_b: Sequence[Instruction],
           cuts_a: tuple[int, int], cuts_b: tuple[int, int]):
    """Exchange the middle segments a[i_a:j_a) and b[i_b:j_b)."""
    ia, ja = cuts_a
    ib, jb = cuts_b
    child_a = tuple(code_a[:ia]) + tuple(code_b[ib:jb]) + tuple(code_a[ja:])
    child_b = tuple(code_b[:ib]) + tuple(code_a[ia:ja]) + tuple(code_b[jb:])
    return child_a, child_b


def two_point_crossover(a: Program, b: Program, rng) -> tuple[Program, Program]:
    """Two-point crossover on linear genomes.

    Cut points (i <= j) are drawn uniformly and independently per parent and
    the enclosed segments are exchanged. Offspring longer than the hard cap
    are truncated at the cap; an empty offspring is replaced by a copy of
    the parent that contributed its outer segments.
    """
    if a.dimension != b.dimension:
        raise ValueError("parents must share a dimension")
    rng = np.random.default_rng(rng)
    ia, ja = sorted(int(v) for v in rng.integers(0, len(a.code) + 1, size=2))
    ib, jb = sorted(int(v) for v in rng.integers(0, len(b.code) + 1, size=2))
    code_a, code_b = splice(a.code, b.code, (ia, ja), (ib, jb))
    child_a = a if not code_a else Program(
        a.dimension, code_a[:MAX_PROGRAM_LENGTH], a.const_range)
    child_b = b if not code_b else Program(
        b.dimension, code_b[:MAX_PROGRAM_LENGTH], b.const_range)
    return child_a, child_b


def mutate(program: Program, p_m: float, const_range, rng) -> Program:
    """Replace each instruction independently with probability ``p_m``.

    A replacement stays within the slot's instruction family: a constant
    draws a fresh payload from ``const_range``, a variable a fresh index,
    an operator a fresh operator. Length is preserved and the input program
    is left untouched.
    """
    if not 0.0 <= p_m <= 1.0:
        raise ValueError("p_m must be a probability")
    rng = np.random.default_rng(rng)
    ranges = _as_ranges(const_range)
    flags = rng.random(len(program.code)) < p_m
    code = list(program.code)
    for i in np.flatnonzero(flags):
        op = code[i].op
        if op == Op.CONST:
            lo, hi = ranges[int(rng.integers(len(ranges)))]
            code[i] = Instruction(Op.CONST, float(rng.uniform(lo, hi)))
        elif op == Op.VAR:
            code[i] = Instruction(Op.VAR, int(rng.integers(program.dimension)))
        else:
            code[i] = _OPERATORS[int(rng.integers(_N_OPERATORS))]
    return Program(program.dimension, tuple(code), ranges)


def render(program: Program) -> str:
    """Serialize a program to space-separated postfix text."""
    tokens = []
    for op, arg in program.code:
        if op == Op.CONST:
            tokens.append(repr(float(arg)))
        elif op == Op.VAR:
            tokens.append(f"x{arg}")
        else:
            tokens.append(_OP_TOKENS[op])
    return " ".join(tokens)


def parse(text: str, dimension: int, const_range=DEFAULT_CONST_RANGE) -> Program:
    """Parse the textual form back into a Program; inverse of render()."""
    code = []
    for token in text.split():
        if token in _TOKEN_OPS:
            code.append(_TOKEN_OPS[token])
            continue
        m = _VAR_TOKEN.fullmatch(token)
        if m:
            code.append(Instruction(Op.VAR, int(m.group(1))))
            continue
        try:
            code.append(Instruction(Op.CONST, float(token)))
        except ValueError:
            raise ValueError(f"unknown program token {token!r}") from None
    return Program(dimension, tuple(code), const_range)

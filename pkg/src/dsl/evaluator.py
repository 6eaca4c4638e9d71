"""Evaluation of parsed summand expressions, and their wrapping as measure handles."""

import math
from typing import Optional

from audit.handles import MeasureHandle, MeasureKind
from measures.core import q_logarithm
from measures.distribution import AbsolutelyContinuousPair, Distribution, as_q
from measures.errors import MeasureDomainError, ShapeMismatchError
from utils.utils import KahanSummation
from .parser import BinaryOp, Call, DslValidationError, MeasureExpression, Number, UnaryOp, Variable, parse


class DslEvaluationError(MeasureDomainError):
    """A summand could not be evaluated at some index of the support."""

    def __init__(self, message: str, index: Optional[int] = None, span=None):
        super().__init__(message, index=index)
        self.span = span


def _power(base: float, exponent: float, node) -> float:
    try:
        return math.pow(base, exponent)
    except (ValueError, OverflowError) as e:
        raise DslEvaluationError(f"cannot raise {base!r} to {exponent!r}: {e}", span=node.span)


def _eval(node, env) -> float:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Variable):
        return env[node.name]
    if isinstance(node, UnaryOp):
        return -_eval(node.operand, env)
    if isinstance(node, BinaryOp):
        left = _eval(node.left, env)
        right = _eval(node.right, env)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if right == 0.0:
                raise DslEvaluationError("division by zero", span=node.span)
            return left / right
        return _power(left, right, node)
    if isinstance(node, Call):
        args = [_eval(arg, env) for arg in node.args]
        if node.name == "log":
            if not args[0] > 0.0:
                raise DslEvaluationError(f"log of nonpositive argument {args[0]!r}", span=node.span)
            return math.log(args[0])
        if node.name == "exp":
            try:
                return math.exp(args[0])
            except OverflowError:
                raise DslEvaluationError(f"exp overflows at {args[0]!r}", span=node.span)
        if node.name == "lnq":
            if not args[0] > 0.0:
                raise DslEvaluationError(f"lnq of nonpositive argument {args[0]!r}", span=node.span)
            try:
                return q_logarithm(args[0], env["q"])
            except MeasureDomainError as e:
                raise DslEvaluationError(str(e), span=node.span)
        return _power(args[0], args[1], node)
    raise TypeError(f"unknown expression node {node!r}")


def _require_variables(expr: MeasureExpression, r_available: bool, q_available: bool):
    span = expr.references("r")
    if span is not None and not r_available:
        raise DslValidationError("'r' is only available for divergence-type measures", expr.source, span)
    span = expr.references("q")
    if span is not None and not q_available:
        raise DslValidationError("expression uses q (or lnq) but no q parameter was supplied", expr.source, span)


def evaluate(expr: MeasureExpression, p: Distribution, r: Optional[Distribution] = None, q=None) -> float:
    """Sum the summand over the support of p, then apply the affine wrapper."""
    _require_variables(expr, r is not None, q is not None)
    if r is not None and r.n != p.n:
        raise ShapeMismatchError(f"p has length {p.n} but r has length {r.n}")
    q_value = as_q(q).q if q is not None else math.nan
    acc = KahanSummation()
    for i in p.support:
        env = {"p": p[i], "r": r[i] if r is not None else math.nan, "q": q_value}
        try:
            value = _eval(expr.ast, env)
        except DslEvaluationError as e:
            raise DslEvaluationError(f"{e} at index {i}", index=i, span=e.span)
        except (MeasureDomainError, ArithmeticError) as e:
            raise DslEvaluationError(f"{e} at index {i}", index=i)
        if not math.isfinite(value):
            raise DslEvaluationError(f"summand is {value!r} at index {i}", index=i, span=expr.ast.span)
        acc.add(value)
    total = expr.scale * acc.sum + expr.offset
    if not math.isfinite(total):
        raise DslEvaluationError(f"sum of summands is {total!r}", span=expr.ast.span)
    return total


def as_measure(expr, kind, q=None) -> MeasureHandle:
    """Wrap an expression (or its source) as a handle for the audit and characterization engines."""
    if isinstance(expr, str):
        expr = parse(expr)
    kind = MeasureKind.parse(kind)
    divergence = kind is MeasureKind.DIVERGENCE
    _require_variables(expr, divergence, q is not None)
    q_value = as_q(q) if q is not None else None

    if divergence:
        def evaluator(pair: AbsolutelyContinuousPair) -> float:
            return evaluate(expr, pair.p, pair.r, q_value)
    else:
        def evaluator(p: Distribution) -> float:
            return evaluate(expr, p, None, q_value)

    return MeasureHandle(kind, evaluator, expr.source)


def infer_kind(expr: MeasureExpression) -> MeasureKind:
    """Divergence-type when the summand mentions r, entropy-type otherwise."""
    return MeasureKind.DIVERGENCE if expr.uses_r else MeasureKind.ENTROPY

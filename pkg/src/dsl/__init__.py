from .parser import (
    parse,
    tokenize,
    MeasureExpression,
    SourceSpan,
    DslSyntaxError,
    DslValidationError,
    render_span,
    Number,
    Variable,
    UnaryOp,
    BinaryOp,
    Call,
)
from .evaluator import evaluate, as_measure, infer_kind, DslEvaluationError

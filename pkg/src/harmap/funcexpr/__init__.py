"""Expression DSL, AST, and jet-based derivatives of holomorphic functions."""

from .backend import backend_name, warmup
from .expr import (Const, Cos, Diff, Exp, HoloExpr, Log, Pow, Prod, Quot,
                   Sin, Sum, Var, substitute, to_source)
from .jets import HoloFunction, Jet, derivative, eval_jet, evaluate
from .parser import parse_expr
from .tape import Tape, compile_expr

__all__ = [
    "Const", "Cos", "Diff", "Exp", "HoloExpr", "Log", "Pow", "Prod", "Quot",
    "Sin", "Sum", "Var", "substitute", "to_source",
    "HoloFunction", "Jet", "derivative", "eval_jet", "evaluate",
    "parse_expr", "Tape", "compile_expr", "backend_name", "warmup",
]

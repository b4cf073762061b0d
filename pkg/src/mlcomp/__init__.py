"""Memoryless computation: register-update programs and universal automata networks."""

from .algebra import Instruction, Program, State, Transformation
from .errors import (BudgetError, DegenerateInputError, MLCompError, NotInvertibleError, ParseError,
                     RangeError, ShapeError)

__version__ = "0.1.0"

__all__ = [
    "BudgetError", "DegenerateInputError", "Instruction", "MLCompError", "NotInvertibleError",
    "ParseError", "Program", "RangeError", "ShapeError", "State", "Transformation", "__version__",
]

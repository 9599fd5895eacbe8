"""
Exception hierarchy for the index coding workbench.
The CLI maps these onto exit codes (see cli.py).
"""

from typing import Any, Dict, Optional


class IndexCodingError(Exception):
    """Base class for every workbench error"""


# ===========================================
# INPUT ERRORS (exit code 2)
# ===========================================

class InputError(IndexCodingError, ValueError):
    """Malformed user input"""


class GraphParseError(InputError):
    """Graph file could not be parsed"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class GicParseError(GraphParseError):
    """GIC file could not be parsed"""


class MatrixFileError(InputError):
    """Encoding matrix file is unreadable or inconsistent"""


# ===========================================
# LIMITS (exit code 3)
# ===========================================

class CapExceededError(IndexCodingError):
    """An enumeration or size cap was exceeded"""

    def __init__(self, name: str, value: int, cap: int):
        self.name = name
        self.value = value
        self.cap = cap
        super().__init__(f"{name}={value} exceeds the configured cap {cap}")


# ===========================================
# ALGEBRA / OPTIMIZATION
# ===========================================

class FieldError(IndexCodingError, ValueError):
    """Invalid field modulus, points or matrix dimensions"""


class LpError(IndexCodingError):
    """Malformed linear program"""


class InfeasibleCoverError(LpError):
    """A cover violates the program it claims to solve"""


# ===========================================
# CODE CONSTRUCTION / DECODING (exit code 4)
# ===========================================

class CodeConstructionError(IndexCodingError):
    """Randomized construction did not verify within its budget"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class AlignmentError(IndexCodingError):
    """Decoding precondition (alignment) does not hold"""


class GicStructureError(IndexCodingError):
    """GIC structure cannot be processed"""


class GicDecodeError(IndexCodingError):
    """GIC residual system could not be solved"""

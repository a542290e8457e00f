"""Variable Shift SDDs: compile CNFs and query the result."""

from ._vssdd import (
    ContractViolation,
    Function,
    InvalidId,
    InvalidInput,
    InvalidTerm,
    InvalidUniverse,
    InvariantViolation,
    Manager,
    ParseError,
    ResourceLimit,
    Vtree,
    VssddError,
    generate,
    load_diagram,
    parse_dimacs,
)

__all__ = [
    "ContractViolation",
    "Function",
    "InvalidId",
    "InvalidInput",
    "InvalidTerm",
    "InvalidUniverse",
    "InvariantViolation",
    "Manager",
    "ParseError",
    "ResourceLimit",
    "Vtree",
    "VssddError",
    "generate",
    "load_diagram",
    "parse_dimacs",
]

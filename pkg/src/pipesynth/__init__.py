"""Interactive synthesis of linear method-pipeline programs.

Programs are pipelines input.f.g.h over a fixed, typed method vocabulary.
The engine enumerates the well-formed space once, then narrows it with
input/output examples and granular syntactic feedback on candidate
programs, showing per-step debug traces along the way.
"""

from .values import (
    BoolV,
    CharV,
    ErrorV,
    IntV,
    ListV,
    MapV,
    PairV,
    Str,
    Value,
)

__all__ = [
    "Str",
    "IntV",
    "CharV",
    "BoolV",
    "ListV",
    "PairV",
    "MapV",
    "ErrorV",
    "Value",
]

__version__ = "0.1.0"

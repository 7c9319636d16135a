from __future__ import annotations

from ..diagram import DiagramError


class ParseError(DiagramError):
    """Syntax or reference error in an input document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)

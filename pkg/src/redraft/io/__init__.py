"""Model I/O: XMI subset, native text format, DOT export, case generation."""

from .dot import export_dot
from .errors import ParseError
from .generate import CaseSpec, Shape, case_stats, generate_case, ladder, replicate
from .native import parse_native, write_native
from .xmi import parse_xmi, write_xmi

__all__ = [
    "CaseSpec",
    "ParseError",
    "Shape",
    "case_stats",
    "export_dot",
    "generate_case",
    "ladder",
    "parse_native",
    "parse_xmi",
    "replicate",
    "write_native",
    "write_xmi",
]

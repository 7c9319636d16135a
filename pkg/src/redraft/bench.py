"""Benchmark presets: the two small fixtures and the two scale workloads."""

from __future__ import annotations

import time
import tracemalloc
from typing import Callable

from .diagram import ClassDiagram
from .engine import normalize
from .fixtures import testcase1, testcase2
from .io.generate import case_stats, ladder, replicate

PRESETS: dict[str, Callable[[], ClassDiagram]] = {
    "testcase1": testcase1,
    "testcase2": testcase2,
    "testcase3": lambda: ladder(500, 10),
    "testcase2_1000": lambda: replicate(testcase2(), 1000),
}

COLUMNS = ("preset", "classes", "attributes", "size", "steps", "seconds", "peak_mb")


class PresetError(Exception):
    def __init__(self, preset: str, cause: BaseException) -> None:
        super().__init__(f"preset {preset!r} failed: {cause}")
        self.preset = preset


def run_preset(name: str, *, trace_memory: bool = True) -> dict[str, object]:
    """Generate the preset input and normalize it once.

    ``peak_mb`` is the tracemalloc peak over generation plus normalization;
    tracing slows the run, so ``seconds`` is measured on a second, untraced
    normalization when ``trace_memory`` is set.
    """
    try:
        build = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}") from None
    try:
        peak = None
        if trace_memory:
            tracemalloc.start()
            try:
                normalize(build())
                peak = tracemalloc.get_traced_memory()[1]
            finally:
                tracemalloc.stop()
        d = build()
        started = time.perf_counter()
        _, trace = normalize(d)
        seconds = time.perf_counter() - started
    except Exception as exc:  # noqa: BLE001 - reported per preset
        raise PresetError(name, exc) from exc
    record: dict[str, object] = {"preset": name, **case_stats(d), "steps": trace.steps}
    record["seconds"] = round(seconds, 4)
    record["peak_mb"] = None if peak is None else round(peak / 2**20, 2)
    return record


def format_table(records: list[dict[str, object]]) -> str:
    if not records:
        return ""
    rows = [COLUMNS] + [tuple("-" if r[c] is None else str(r[c]) for c in COLUMNS) for r in records]
    widths = [max(len(row[i]) for row in rows) for i in range(len(COLUMNS))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows) + "\n"

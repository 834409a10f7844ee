"""Loaders for the published reference values bundled as package data.

Golden tests and the table commands compare freshly computed numbers
against these baselines; the CSV files carry the provenance comments.
"""

import csv
import functools
import math
from importlib import resources


def _rows(name: str) -> list[dict[str, str]]:
    text = resources.files("grksearch.data").joinpath(name).read_text()
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    return list(csv.DictReader(lines))


def _to_float(raw: str) -> float:
    return math.inf if raw == "inf" else float(raw)


@functools.cache
def table1_reference() -> list[dict]:
    """Two-stage versus direct query coefficients, keyed (k1, k2)."""
    return [
        {
            "k1": int(r["k1"]),
            "k2": int(r["k2"]),
            "direct": float(r["direct"]),
            "hierarchical": float(r["hierarchical"]),
            "gap": float(r["gap"]),
        }
        for r in _rows("table1.csv")
    ]


@functools.cache
def table2_reference() -> list[dict]:
    """Upper bound of alpha per block count; math.inf marks the limit row."""
    return [
        {"k": _to_float(r["k"]), "alpha_bound": float(r["alpha_bound"])}
        for r in _rows("table2.csv")
    ]


@functools.cache
def table3_reference() -> list[dict]:
    """Query-offset comparison values per block count."""
    return [
        {
            "k": int(r["k"]),
            "offset_at_zero": float(r["offset_at_zero"]),
            "offset_at_optimum": float(r["offset_at_optimum"]),
            "offset_at_bound": float(r["offset_at_bound"]),
        }
        for r in _rows("table3.csv")
    ]

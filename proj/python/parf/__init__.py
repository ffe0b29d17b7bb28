"""FPGA placement and routing.

The heavy lifting lives in the compiled ``_parf`` module; this package adds
JSON decoding of reports.
"""

import json

from ._parf import (
    REPORT_SCHEMA,
    Design,
    GenerationError,
    check_placement,
    generate,
    heatmap_svg,
    hpwl,
    permute_truth_table,
    positions,
    smooth_wirelength,
)
from . import _parf

__all__ = [
    "REPORT_SCHEMA",
    "Design",
    "GenerationError",
    "check_placement",
    "generate",
    "heatmap_svg",
    "hpwl",
    "permute_truth_table",
    "place",
    "positions",
    "run_flow",
    "smooth_wirelength",
]


def _decoded(result):
    result = dict(result)
    result["report"] = json.loads(result["report"])
    return result


def run_flow(design, seed=1, threads=1, dr_iters=50, guided=True, out_dir=None):
    """Place, route and validate ``design``; the report comes back as a dict."""
    return _decoded(_parf.run_flow(design, seed, threads, dr_iters, guided, str(out_dir or "")))


def place(design, seed=1, threads=1):
    """Global placement, legalization and detailed placement only."""
    return _decoded(_parf.place(design, seed, threads))

"""JSON problem files and CSV solution output.

Problem schema::

    {
      "order": N,
      "t0": float,
      "operator": {"kind": "dense" | "diagonal", "dimension": d,
                   "data": [[re, im], ...]},   # d*d row-major, or d entries
      "initial": [[[re, im], ...], ...],      # N vectors of d entries
      "times": [float, ...]                   # optional, defaults to [t0]
    }
"""

from __future__ import annotations

import csv
import json
import math
from numbers import Real
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import ProblemFormatError
from .operators import LinearOperator
from .solver import CauchyProblem, SolutionSample

__all__ = [
    "load_problem",
    "problem_from_dict",
    "problem_to_dict",
    "format_float",
    "write_solution_csv",
]


def format_float(x: float) -> str:
    """17 significant digits: round-trips any double."""
    return f"{float(x):.17g}"


def _is_number(x) -> bool:
    return isinstance(x, Real) and not isinstance(x, bool) and math.isfinite(x)


def _complex(value, field: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(_is_number(v) for v in value)
    ):
        raise ProblemFormatError(field, f"expected [re, im] pair of finite numbers, got {value!r}")
    return complex(value[0], value[1])


def _complex_list(values, length: int, field: str) -> np.ndarray:
    if not isinstance(values, list):
        raise ProblemFormatError(field, "expected a list of [re, im] pairs")
    if len(values) != length:
        raise ProblemFormatError(field, f"expected {length} entries, got {len(values)}")
    return np.array([_complex(v, f"{field}[{i}]") for i, v in enumerate(values)])


def _positive_int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ProblemFormatError(field, f"expected a positive integer, got {value!r}")
    return value


def problem_from_dict(data) -> tuple[CauchyProblem, list[float]]:
    """Validate a decoded problem document; returns the problem and its times."""
    if not isinstance(data, dict):
        raise ProblemFormatError("<root>", "expected a JSON object")
    for key in ("order", "operator", "initial"):
        if key not in data:
            raise ProblemFormatError(key, "missing required field")
    order = _positive_int(data["order"], "order")
    t0 = data.get("t0", 0.0)
    if not _is_number(t0):
        raise ProblemFormatError("t0", f"expected a finite number, got {t0!r}")

    op = data["operator"]
    if not isinstance(op, dict):
        raise ProblemFormatError("operator", "expected an object")
    kind = op.get("kind")
    if kind not in ("dense", "diagonal"):
        raise ProblemFormatError("operator.kind", f"expected 'dense' or 'diagonal', got {kind!r}")
    dim = _positive_int(op.get("dimension"), "operator.dimension")
    if "data" not in op:
        raise ProblemFormatError("operator.data", "missing required field")
    if kind == "dense":
        flat = _complex_list(op["data"], dim * dim, "operator.data")
        operator = LinearOperator.dense(flat.reshape(dim, dim))
    else:
        operator = LinearOperator.diagonal(_complex_list(op["data"], dim, "operator.data"))

    initial = data["initial"]
    if not isinstance(initial, list) or len(initial) != order:
        raise ProblemFormatError("initial", f"expected {order} initial vectors")
    vectors = [_complex_list(u, dim, f"initial[{i}]") for i, u in enumerate(initial)]

    times = data.get("times", [t0])
    if not isinstance(times, list) or not all(_is_number(t) for t in times):
        raise ProblemFormatError("times", "expected a list of finite numbers")
    problem = CauchyProblem(order, operator, vectors, t0=float(t0))
    return problem, [float(t) for t in times]


def load_problem(path) -> tuple[CauchyProblem, list[float]]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError("<json>", str(exc)) from None
    return problem_from_dict(data)


def _pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.ravel(values)]


def problem_to_dict(problem: CauchyProblem, times: Iterable[float] | None = None) -> dict:
    op = problem.operator
    out = {
        "order": problem.order,
        "t0": problem.t0,
        "operator": {"kind": op.kind, "dimension": op.dimension, "data": _pairs(op.data)},
        "initial": [_pairs(u) for u in problem.initial],
    }
    if times is not None:
        out["times"] = [float(t) for t in times]
    return out


def write_solution_csv(samples: Iterable[SolutionSample], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["time", "index", "re", "im", "method"])
    for s in samples:
        for i, z in enumerate(s.state):
            writer.writerow(
                [format_float(s.time), i, format_float(z.real), format_float(z.imag), s.method.value]
            )

"""JSON encoders and decoders for the artifacts the CLI reads and writes.

Conventions (documented in docs/manual.md):

* complex matrices: row-major nested lists of ``[re, im]`` pairs,
* spectra: flat lists of reals,
* step functions: ``{"breakpoints": [...], "values": [...]}`` where
  breakpoints are exact ``"p/q"`` strings on output and may be strings,
  integers, or reals on input,
* non-finite reals inside reports: the strings ``"-inf"`` / ``"inf"``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from .reports import InequalityRecord, MembershipReport
from .stepfn import StepFunction


def matrix_to_json(a: np.ndarray) -> list:
    m = np.asarray(a, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def matrix_from_json(payload) -> np.ndarray:
    if not isinstance(payload, list) or not payload:
        raise ValueError("matrix payload must be a non-empty list of rows")
    n = len(payload)
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(payload):
        if not isinstance(row, list) or len(row) != n:
            raise ValueError("matrix payload must be square (row-major)")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) for x in cell)
            ):
                raise ValueError("matrix entries must be [re, im] pairs")
            out[i, j] = complex(cell[0], cell[1])
    return out


def spectrum_to_json(v) -> list[float]:
    return [float(x) for x in v]


def spectrum_from_json(payload) -> np.ndarray:
    if not isinstance(payload, list) or not payload:
        raise ValueError("spectrum payload must be a non-empty list of reals")
    if not all(isinstance(x, (int, float)) for x in payload):
        raise ValueError("spectrum entries must be reals")
    return np.asarray([float(x) for x in payload])


def step_function_to_json(f: StepFunction) -> dict:
    return {
        "breakpoints": [str(b) for b in f.breakpoints],
        "values": [float(v) for v in f.values],
    }


def step_function_from_json(payload) -> StepFunction:
    if not isinstance(payload, dict):
        raise ValueError("step function payload must be an object")
    try:
        breaks = payload["breakpoints"]
        values = payload["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError("step function payload needs breakpoints and values") from exc
    if not isinstance(breaks, list) or not isinstance(values, list):
        raise ValueError("breakpoints and values must be lists")
    return StepFunction(breakpoints=tuple(breaks), values=tuple(values))


def real_to_json(x: float):
    if math.isfinite(x):
        return float(x)
    return "-inf" if x < 0 else "inf"


def real_from_json(payload) -> float:
    if isinstance(payload, (int, float)):
        return float(payload)
    if payload == "-inf":
        return float("-inf")
    if payload == "inf":
        return float("inf")
    raise ValueError(f"cannot parse real value {payload!r}")


def _record_to_json(rec: InequalityRecord) -> dict:
    out = {
        "direction": rec.direction,
        "lhs": real_to_json(rec.lhs),
        "rhs": real_to_json(rec.rhs),
        "slack": real_to_json(rec.slack),
    }
    if rec.triple is not None:
        out["triple"] = {
            "n": rec.triple.n,
            "r": rec.triple.r,
            "I": list(rec.triple.I.elements),
            "J": list(rec.triple.J.elements),
            "K": list(rec.triple.K.elements),
        }
    return out


def report_to_json(report: MembershipReport, seed: Optional[int] = None) -> dict:
    out = {
        "verdict": report.verdict,
        "worst_slack": real_to_json(report.worst_slack),
        "tol": report.tol,
        "records": [_record_to_json(r) for r in report.records],
    }
    if report.note:
        out["note"] = report.note
    if seed is not None:
        out["seed"] = seed
    return out


def report_from_json(payload) -> dict:
    """Validate and normalize an emitted report; returns a plain dict with
    floats restored (records keep their triple descriptions as dicts)."""
    if not isinstance(payload, dict):
        raise ValueError("report payload must be an object")
    for key in ("verdict", "worst_slack", "tol", "records"):
        if key not in payload:
            raise ValueError(f"report payload is missing {key!r}")
    if payload["verdict"] not in ("pass", "fail"):
        raise ValueError("report verdict must be 'pass' or 'fail'")
    records = []
    for item in payload["records"]:
        records.append(
            {
                "direction": item["direction"],
                "lhs": real_from_json(item["lhs"]),
                "rhs": real_from_json(item["rhs"]),
                "slack": real_from_json(item["slack"]),
                "triple": item.get("triple"),
            }
        )
    return {
        "verdict": payload["verdict"],
        "worst_slack": real_from_json(payload["worst_slack"]),
        "tol": float(payload["tol"]),
        "records": records,
        "note": payload.get("note"),
        "seed": payload.get("seed"),
    }

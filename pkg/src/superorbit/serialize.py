"""JSON forms shared by the CLI and the tests."""

from __future__ import annotations

from typing import Mapping

from .superring import RingSignature, SuperPolynomial, from_json as poly_from_json, to_json as poly_to_json
from .supermatrix import SuperMatrix

__all__ = ["poly_to_json", "poly_from_json", "matrix_to_json", "matrix_from_json"]


def matrix_to_json(a: SuperMatrix) -> dict:
    return {"m": a.m, "n": a.n, "entries": [[str(x) for x in row] for row in a.rows]}


def matrix_from_json(ring: RingSignature, data: Mapping) -> SuperMatrix:
    from .parser import parse

    m, n = int(data["m"]), int(data["n"])
    rows = [[x if isinstance(x, SuperPolynomial) else parse(str(x), ring) for x in row] for row in data["entries"]]
    return SuperMatrix(ring, m, n, rows)

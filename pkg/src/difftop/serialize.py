"""JSON/CSV codecs shared by the CLI and the report writers.

Rationals travel as canonical "p/q" strings throughout.
"""

from __future__ import annotations

from .poly import Polynomial
from .ratfunc import RationalFunction
from .logring import LogElement
from .scalars import scalar_from_str, scalar_to_str


def poly_to_json(p: Polynomial):
    return [scalar_to_str(c) for c in p.coeffs]


def poly_from_json(data, var="z") -> Polynomial:
    return Polynomial([scalar_from_str(c) for c in data], var)


def rf_to_json(f: RationalFunction):
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def rf_from_json(data, var="z") -> RationalFunction:
    return RationalFunction(
        poly_from_json(data["num"], var), poly_from_json(data["den"], var)
    )


def matrix_to_json(m):
    return [[rf_to_json(e) for e in row] for row in m.entries()]


def logelement_to_json(e: LogElement):
    return {
        "lambda_deg": e.lam_degree(),
        "parts": {str(j): rf_to_json(f) for j, f in sorted(e.parts.items())},
    }


def logmatrix_to_json(m):
    return [[logelement_to_json(e) for e in row] for row in m.entries()]

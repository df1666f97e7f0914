"""Text and JSON encodings for series, matrices, and certificates.

Rationals always travel as strings (``"-3/7"``, ``"5"``), never floats.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .decompose import FactorizationCertificate
from .errors import DomainError
from .fps import Series
from .riordan import RiordanMatrix


def rat_to_str(v: Fraction) -> str:
    return str(v)


def rat_from_str(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DomainError(f"rationals must be encoded as strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"malformed rational {s!r}") from None


def matrix_to_doc(m: RiordanMatrix) -> dict:
    return {
        "order": m.order,
        "d": [rat_to_str(v) for v in m.d],
        "h": [rat_to_str(v) for v in m.h],
        "rows": [[rat_to_str(v) for v in row] for row in m.rows],
    }


def matrix_from_doc(doc: Mapping) -> RiordanMatrix:
    """Accept a matrix document; ``d``/``h`` and ``rows`` must agree when both are present."""
    if not isinstance(doc, Mapping):
        raise DomainError("matrix document must be a JSON object")
    m = None
    if "d" in doc and "h" in doc:
        d = Series(rat_from_str(v) for v in doc["d"])
        h = Series(rat_from_str(v) for v in doc["h"])
        m = RiordanMatrix.from_dh(d, h)
    if "rows" in doc:
        from_rows = RiordanMatrix.from_rows([[rat_from_str(v) for v in row] for row in doc["rows"]])
        if m is not None and m != from_rows:
            raise DomainError("rows disagree with the (d, h) pair")
        m = from_rows
    if m is None:
        raise DomainError("matrix document needs 'd' and 'h' or 'rows'")
    if "order" in doc and doc["order"] != m.order:
        raise DomainError(f"declared order {doc['order']} does not match {m.order}")
    return m


def matrix_to_triangle(m: RiordanMatrix) -> str:
    return "\n".join(" ".join(rat_to_str(v) for v in row) for row in m.rows) + "\n"


def matrix_to_csv(m: RiordanMatrix) -> str:
    lines = ["row,col,value"]
    for i, row in enumerate(m.rows):
        for j, v in enumerate(row):
            lines.append(f"{i},{j},{rat_to_str(v)}")
    return "\n".join(lines) + "\n"


def certificate_to_doc(cert: FactorizationCertificate) -> dict:
    return {
        "target": matrix_to_doc(cert.target),
        "factors": [matrix_to_doc(f) for f in cert.factors],
        "verified": cert.verified,
        "widths": cert.width,
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"

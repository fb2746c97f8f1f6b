"""Plain-text formats for node sets and polynomial coefficient files.

Node files: a header line "m,n,count", then one row per node holding the
m coordinates as decimals with 17 significant digits followed by the
provenance bit string of the leaf that produced the node ("-" for
problems solved without a tree).

Polynomial files: a JSON document with fields m, n, ordering (the fixed
string "graded-lex-eqC") and coefficients, position-matched to the
canonical monomial order.  JSON float text round-trips at full precision.
"""

from __future__ import annotations

import json

import numpy as np

from .monomials import count_total
from .nodes import NodeSet
from .polynomial import MultiPoly

__all__ = [
    "FileFormatError",
    "ORDERING_TAG",
    "format_nodes",
    "parse_nodes",
    "read_nodes",
    "write_nodes",
    "format_polynomial",
    "parse_polynomial",
    "read_polynomial",
    "write_polynomial",
]

ORDERING_TAG = "graded-lex-eqC"


class FileFormatError(ValueError):
    """A node or polynomial file violates its format; message names the spot."""


def format_nodes(nodes: NodeSet) -> str:
    lines = [f"{nodes.m},{nodes.n},{len(nodes)}"]
    for row, label in zip(nodes.points, nodes.provenance):
        coords = ",".join("%.17g" % float(x) for x in row)
        lines.append(f"{coords},{label}")
    return "\n".join(lines) + "\n"


def write_nodes(nodes: NodeSet, path) -> None:
    with open(path, "w", encoding="ascii") as handle:
        handle.write(format_nodes(nodes))


def parse_nodes(text: str, source: str = "<string>") -> NodeSet:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FileFormatError(f"{source}:1: empty node file, expected header m,n,count")
    header = lines[0].split(",")
    if len(header) != 3:
        raise FileFormatError(
            f"{source}:1: header must be m,n,count, got {lines[0]!r}"
        )
    try:
        m, n, count = (int(field) for field in header)
    except ValueError:
        raise FileFormatError(
            f"{source}:1: header fields must be integers, got {lines[0]!r}"
        ) from None
    if m < 1 or n < 0 or count < 1:
        raise FileFormatError(f"{source}:1: header values out of range: m={m} n={n} count={count}")
    if len(lines) - 1 != count:
        raise FileFormatError(
            f"{source}: header announces {count} nodes but file has {len(lines) - 1} rows"
        )
    points = np.empty((count, m))
    labels = []
    for i, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != m + 1:
            raise FileFormatError(
                f"{source}:{i}: expected {m} coordinates plus a provenance label, "
                f"got {len(fields)} fields"
            )
        try:
            points[i - 2] = [float(field) for field in fields[:m]]
        except ValueError as bad:
            raise FileFormatError(f"{source}:{i}: bad coordinate: {bad}") from None
        label = fields[m].strip()
        if label != "-" and (not label or set(label) - {"0", "1"}):
            raise FileFormatError(
                f"{source}:{i}: provenance must be a 0/1 bit string or '-', got {label!r}"
            )
        labels.append(label)
    return NodeSet(points, labels, m, n)


def read_nodes(path) -> NodeSet:
    with open(path, "r", encoding="ascii") as handle:
        return parse_nodes(handle.read(), source=str(path))


def format_polynomial(poly: MultiPoly) -> str:
    doc = {
        "m": poly.m,
        "n": poly.n,
        "ordering": ORDERING_TAG,
        "coefficients": [float(c) for c in poly.coeffs],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_polynomial(poly: MultiPoly, path) -> None:
    with open(path, "w", encoding="ascii") as handle:
        handle.write(format_polynomial(poly))


def parse_polynomial(text: str, source: str = "<string>") -> MultiPoly:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as bad:
        raise FileFormatError(f"{source}:{bad.lineno}: not valid JSON: {bad.msg}") from None
    if not isinstance(doc, dict):
        raise FileFormatError(f"{source}: top level must be an object")
    for field in ("m", "n", "ordering", "coefficients"):
        if field not in doc:
            raise FileFormatError(f"{source}: missing field '{field}'")
    m, n = doc["m"], doc["n"]
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 0:
        raise FileFormatError(f"{source}: field 'm'/'n' must be integers with m>=1, n>=0")
    if doc["ordering"] != ORDERING_TAG:
        raise FileFormatError(
            f"{source}: field 'ordering' must be {ORDERING_TAG!r}, got {doc['ordering']!r}"
        )
    coeffs = doc["coefficients"]
    expected = count_total(m, n)
    if not isinstance(coeffs, list) or len(coeffs) != expected:
        raise FileFormatError(
            f"{source}: field 'coefficients' must be a list of {expected} reals "
            f"for m={m}, n={n}"
        )
    try:
        values = np.array([float(c) for c in coeffs])
    except (TypeError, ValueError):
        raise FileFormatError(f"{source}: field 'coefficients' holds a non-numeric entry") from None
    return MultiPoly(m, n, values)


def read_polynomial(path) -> MultiPoly:
    with open(path, "r", encoding="ascii") as handle:
        return parse_polynomial(handle.read(), source=str(path))

"""Deterministic text formatting for JSON and CSV output.

Reals are written with up to 17 significant digits (%.17g), which round-trips
float64 exactly and keeps output byte-stable across runs.
"""

import json


def fmt(x) -> str:
    return f"{float(x):.17g}"


def fmt_vector(v) -> str:
    return "[" + ", ".join(fmt(x) for x in v) + "]"


def fmt_matrix(m) -> str:
    return "[" + ", ".join(fmt_vector(row) for row in m) + "]"


def fmt_bool(b) -> str:
    return "true" if b else "false"


def fmt_str(s) -> str:
    return json.dumps(str(s))

"""Deterministic text rendering for output artifacts.

CSV cells carry 17 significant digits so identical runs diff byte-for-byte;
JSON uses the shortest round-trip float representation (also deterministic
at 64-bit) with stable key order.
"""

import json


def fmt(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render_csv(header, rows, footer=None):
    lines = [",".join(header)]
    lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
    if footer is not None:
        lines.append("# " + json.dumps(footer, sort_keys=True))
    return "\n".join(lines) + "\n"


def render_json(payload):
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"

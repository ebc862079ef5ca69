"""Aperiodic template set for the non-overlapping template matching test.

A template B of length m is aperiodic when no proper prefix equals the
suffix of the same length (B[k:] != B[:m-k] for all 0 < k < m), which makes
overlapping occurrences impossible. There are 148 such templates at m = 9;
they ship as a data file and can be regenerated for cross-checking.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from ..errors import FormatError

TEMPLATE_COUNT_M9 = 148


def is_aperiodic(bits: tuple) -> bool:
    m = len(bits)
    return all(bits[k:] != bits[:m - k] for k in range(1, m))


def generate_aperiodic_templates(m: int) -> np.ndarray:
    """All aperiodic m-bit templates in ascending numeric order, shape (k, m)."""
    out = []
    for value in range(1 << m):
        bits = tuple((value >> (m - 1 - j)) & 1 for j in range(m))
        if is_aperiodic(bits):
            out.append(bits)
    return np.array(out, dtype=np.uint8)


def load_templates_m9() -> np.ndarray:
    """The packaged m=9 template list, shape (148, 9)."""
    text = (
        resources.files("mtjrng.nist")
        .joinpath("data/templates_m9.txt")
        .read_text(encoding="utf-8")
    )
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if len(line) != 9 or set(line) - {"0", "1"}:
            raise FormatError(f"templates_m9.txt line {line_no}: bad template {line!r}")
        rows.append([int(ch) for ch in line])
    arr = np.array(rows, dtype=np.uint8)
    if arr.shape != (TEMPLATE_COUNT_M9, 9):
        raise FormatError(
            f"templates_m9.txt holds {arr.shape[0]} templates, "
            f"expected {TEMPLATE_COUNT_M9}"
        )
    return arr

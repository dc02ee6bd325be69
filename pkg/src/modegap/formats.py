"""Reading cost matrices and probability vectors; JSON serialization.

Rationals are written as ``"a/b"`` strings, each accompanied by a
``*_decimal`` convenience field rounded to 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

from .certify import Counterexample, Verdict
from .cost_matrix import CostMatrix, as_cost_matrix
from .decision import DecisionSet, ProbVector
from .errors import NegativeProbability, NotNormalized, NotSquare, ParseError
from .rational import fraction_decimal, to_fraction

RENORMALIZE_TOLERANCE = Fraction(1, 10**6)


def _read_text(path) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _csv_rows(lines) -> Iterator[tuple[int, list[str]]]:
    """Non-blank CSV rows with their 1-based line numbers."""
    if isinstance(lines, str):
        lines = io.StringIO(lines)
    reader = csv.reader(lines)
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        yield reader.line_num, row


def _cells(line: int, row: list[str]) -> list[Fraction]:
    out = []
    for col, cell in enumerate(row, start=1):
        try:
            out.append(to_fraction(cell))
        except ValueError as exc:
            raise ParseError(str(exc), line, col) from None
    return out


def parse_matrix_text(text: str, fmt: str = "csv") -> CostMatrix:
    if fmt == "json":
        return _parse_matrix_json(text)
    if fmt != "csv":
        raise ValueError(f"unknown matrix format {fmt!r}")
    rows = []
    width = None
    for line, row in _csv_rows(text):
        values = _cells(line, row)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ParseError(f"expected {width} entries, found {len(values)}", line)
        rows.append(values)
    if not rows:
        raise ParseError("empty matrix file")
    if len(rows) != width:
        raise NotSquare(f"matrix has {len(rows)} rows and {width} columns")
    if width < 2:
        raise NotSquare("matrix must be at least 2x2")
    return CostMatrix.from_rows(rows)


def _parse_matrix_json(text: str) -> CostMatrix:
    def no_constants(name):
        raise ValueError(f"non-finite number {name}")

    try:
        doc = json.loads(text, parse_float=Fraction, parse_constant=no_constants)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError('expected an object with "entries"')
    entries = doc["entries"]
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise ParseError('"entries" must be a list of lists')
    rows = []
    for i, row in enumerate(entries, start=1):
        values = []
        for j, cell in enumerate(row, start=1):
            try:
                values.append(to_fraction(cell))
            except ValueError as exc:
                raise ParseError(f"entries[{i}][{j}]: {exc}", i, j) from None
        rows.append(values)
    k = doc.get("k", len(rows))
    if not isinstance(k, int) or isinstance(k, bool):
        raise ParseError('"k" must be an integer')
    if len(rows) != k or any(len(r) != k for r in rows):
        raise NotSquare(f"entries are not {k}x{k}")
    if k < 2:
        raise NotSquare("matrix must be at least 2x2")
    return CostMatrix.from_rows(rows)


def sniff_format(path, fmt: Optional[str] = None) -> str:
    if fmt:
        return fmt
    return "json" if Path(path).suffix.lower() == ".json" else "csv"


def parse_matrix(path, fmt: Optional[str] = None) -> CostMatrix:
    """Load a cost matrix from CSV or JSON (chosen by extension unless
    ``fmt`` is given)."""
    return parse_matrix_text(_read_text(path), sniff_format(path, fmt))


def iter_probs_text(lines, renormalize: bool = False, k: Optional[int] = None) -> Iterator[ProbVector]:
    """Parse probability rows from text or an iterable of lines.

    A row whose exact sum differs from 1 is rescaled only when
    ``renormalize`` is set and the sum is within 1e-6 of 1.
    """
    for line, row in _csv_rows(lines):
        values = _cells(line, row)
        if k is None:
            k = len(values)
        if len(values) != k:
            raise ParseError(f"expected {k} probabilities, found {len(values)}", line)
        for col, x in enumerate(values, start=1):
            if x < 0:
                raise NegativeProbability(f"negative probability {x}", line, col)
        s = sum(values)
        if s != 1:
            if renormalize and abs(s - 1) <= RENORMALIZE_TOLERANCE:
                values = [x / s for x in values]
            else:
                raise NotNormalized(f"row sums to {s}, not 1", line)
        yield ProbVector(tuple(values))


def iter_probs(path, renormalize: bool = False, k: Optional[int] = None) -> Iterator[ProbVector]:
    """Stream probability vectors from a CSV file without loading it whole."""
    with open(path, encoding="utf-8", newline="") as fh:
        yield from iter_probs_text(fh, renormalize, k)


def parse_probs(path, renormalize: bool = False, k: Optional[int] = None) -> list[ProbVector]:
    return list(iter_probs(path, renormalize, k))


# -- serialization -----------------------------------------------------------


def rational_json(x: Fraction) -> str:
    return str(x)


def matrix_to_json(m) -> dict:
    m = as_cost_matrix(m)
    return {
        "k": m.k,
        "entries": [[str(x) for x in row] for row in m.entries],
        "entries_decimal": [[fraction_decimal(x) for x in row] for row in m.entries],
    }


def decision_to_json(d: DecisionSet) -> dict:
    return {"labels": d.sorted_labels(), "value": str(d.value), "value_decimal": fraction_decimal(d.value)}


def counterexample_to_json(cx: Optional[Counterexample]) -> Optional[dict]:
    if cx is None:
        return None
    return {
        "p": [str(x) for x in cx.p.probs],
        "p_decimal": [fraction_decimal(x) for x in cx.p.probs],
        "mode_label": cx.mode_label,
        "bayes_labels": sorted(cx.bayes_labels),
        "regret": str(cx.regret),
        "regret_decimal": fraction_decimal(cx.regret),
        "witness_pair": list(cx.witness_pair) if cx.witness_pair else None,
    }


def verdict_to_json(v: Verdict) -> dict:
    return {
        "mode_is_bayes": v.mode_is_bayes,
        "canonical": matrix_to_json(v.canonical),
        "counterexample": counterexample_to_json(v.counterexample),
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def dumps_line(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"

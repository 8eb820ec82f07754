"""CSV and JSON file formats.

Instances CSV
    First row holds variable names; every other row is one instance with
    cells ``0``, ``1`` or empty (missing). Lines starting with ``#`` are
    comments.

Contingency CSV
    Header ``n00,n01,n10,n11`` and exactly one data row of counts. The first
    index is A, the second B. Labels may be given in a comment such as
    ``# A=admiration B=joy``.

Output CSVs start with a ``# input-sha256: <hex>`` comment tying them to the
run manifest. Numbers are written with 6 significant digits.
"""

from __future__ import annotations

import csv
import hashlib
import json
import re
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .data import BinaryMatrix, CategoricalColumn, ContingencyTable, conjoin, one_hot_encode
from .errors import ParseError, SchemaError
from .inference import PairResult
from .relational import DistanceMatrix, EdgeList

CONTINGENCY_HEADER = ("n00", "n01", "n10", "n11")
MISSING = ("", "NA", "na", "NaN", "nan")
RESULT_COLUMNS = (
    "var_a",
    "var_b",
    "n",
    "n00",
    "n01",
    "n10",
    "n11",
    "prob_a",
    "prob_a_given_b",
    "prob_a_given_b_sd",
    "delta_p",
    "delta_p_sd",
    "ci_low",
    "ci_high",
    "mc_standard_error",
    "p_value",
    "delta_p_reverse",
    "significant",
    "relation",
    "converged",
    "warnings",
)
_LABEL = re.compile(r"(?:^|[\s,;])([AB])\s*=\s*([^\s,;:()]+)")


def fmt(x: float) -> str:
    return f"{x:.6g}"


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def read_records(path) -> tuple[list[str], list[list[str]], list[int]]:
    """Split a CSV into comment lines, parsed records and their 1-based line numbers."""
    text = Path(path).read_text(encoding="utf-8-sig")
    comments, body, lines = [], [], []
    for number, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("#"):
            comments.append(line.lstrip()[1:].strip())
        elif line.strip():
            body.append(line)
            lines.append(number)
    if not body:
        raise ParseError(f"{path}: file is empty", row=1)
    return comments, [[c.strip() for c in rec] for rec in csv.reader(body)], lines


def read_instances(
    path,
    categorical: Sequence[str] = (),
    itemsets: Iterable[Sequence[str]] = (),
) -> BinaryMatrix:
    """Parse an instances CSV.

    Columns listed in ``categorical`` may hold arbitrary labels and are
    one-hot encoded in place (one column per label, sorted). Each entry of
    ``itemsets`` adds a conjunction column named ``"X&Y"``.
    """
    _, records, lines = read_records(path)
    header, rows = records[0], records[1:]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise SchemaError(f"{path}: duplicate variable names: {', '.join(dupes)}", row=lines[0])
    unknown = set(categorical) - set(header)
    if unknown:
        raise SchemaError(f"{path}: categorical columns not in header: {sorted(unknown)}")
    if not rows:
        raise ParseError(f"{path}: no data rows")

    names, columns, masks = [], [], []
    for j, name in enumerate(header):
        cells = []
        for rec, line in zip(rows, lines[1:]):
            if len(rec) != len(header):
                raise ParseError(
                    f"{path}: expected {len(header)} cells, found {len(rec)}", row=line
                )
            cells.append(rec[j])
        missing = np.array([c in MISSING for c in cells])
        if name in categorical:
            present = [c for c in cells if c not in MISSING]
            if not present:
                raise ParseError(f"{path}: categorical column has no values", column=name)
            encoded = one_hot_encode(CategoricalColumn(name, present))
            for k, label in enumerate(encoded.variable_names):
                col = np.zeros(len(cells), np.int8)
                col[~missing] = encoded.rows[:, k]
                names.append(label)
                columns.append(col)
                masks.append(missing)
            continue
        col = np.zeros(len(cells), np.int8)
        for i, c in enumerate(cells):
            if c in MISSING:
                continue
            if c not in ("0", "1"):
                raise ParseError(
                    f"{path}: cell {c!r} is not 0, 1 or empty", row=lines[i + 1], column=name
                )
            col[i] = int(c)
        names.append(name)
        columns.append(col)
        masks.append(missing)

    matrix = BinaryMatrix(tuple(names), np.column_stack(columns), np.column_stack(masks))
    for items in itemsets:
        items = list(items)
        col = matrix.column(items[0])
        miss = matrix.column_missing(items[0])
        for other in items[1:]:
            col = conjoin(col, matrix.column(other))
            miss = miss | matrix.column_missing(other)
        name = "&".join(items)
        rows_ = np.column_stack([matrix.rows, col])
        mask = np.column_stack(
            [matrix.missing if matrix.missing is not None else np.zeros_like(matrix.rows, bool), miss]
        )
        matrix = BinaryMatrix(matrix.variable_names + (name,), rows_, mask)
    return matrix


def read_contingency(path) -> ContingencyTable:
    comments, records, lines = read_records(path)
    header = tuple(records[0])
    if sorted(header) != sorted(CONTINGENCY_HEADER) or len(header) != 4:
        raise SchemaError(
            f"{path}: contingency header must be {','.join(CONTINGENCY_HEADER)}, got {','.join(header)}",
            row=lines[0],
        )
    if len(records) != 2:
        raise ParseError(f"{path}: expected exactly one data row, found {len(records) - 1}")
    row = records[1]
    if len(row) != 4:
        raise ParseError(f"{path}: expected 4 counts, found {len(row)}", row=lines[1])
    counts = {}
    for name, cell in zip(header, row):
        if not cell.isdigit():
            raise ParseError(
                f"{path}: count {cell!r} is not a non-negative integer", row=lines[1], column=name
            )
        counts[name] = int(cell)
    labels = {"A": "A", "B": "B"}
    for line in comments:
        for key, value in _LABEL.findall(line):
            labels[key] = value
    return ContingencyTable(**counts, label_a=labels["A"], label_b=labels["B"])


def ingest(path, format: str = "instances", **options):
    """Read ``path`` as ``"instances"`` (BinaryMatrix) or ``"contingency"``."""
    if format == "instances":
        return read_instances(path, **options)
    if format == "contingency":
        return read_contingency(path)
    raise ValueError(f"unknown input format {format!r}")


def _open_csv(path, checksum: str | None):
    fh = open(path, "w", newline="", encoding="utf-8")
    if checksum:
        fh.write(f"# input-sha256: {checksum}\n")
    return fh, csv.writer(fh, lineterminator="\n")


def write_instances(matrix: BinaryMatrix, path, checksum: str | None = None) -> None:
    fh, w = _open_csv(path, checksum)
    with fh:
        w.writerow(matrix.variable_names)
        missing = matrix.missing
        for i, row in enumerate(matrix.rows):
            if missing is None:
                w.writerow(int(v) for v in row)
            else:
                w.writerow("" if m else int(v) for v, m in zip(row, missing[i]))


def write_contingency(table: ContingencyTable, path, checksum: str | None = None) -> None:
    fh, w = _open_csv(path, checksum)
    with fh:
        fh.write(f"# A={table.label_a} B={table.label_b} (first index is A, second is B)\n")
        w.writerow(CONTINGENCY_HEADER)
        w.writerow(table.counts)


def _sort_key(r: PairResult):
    p = r.chosen.p_value
    return (p, -abs(r.chosen.mean), r.reported_pair)


def result_rows(results: Sequence[PairResult]) -> list[dict]:
    """Report rows in the chosen orientation, sorted by p-value then |ΔP|."""
    rows = []
    for r in sorted(results, key=_sort_key):
        a, b = r.reported_pair
        table = r.table if r.chosen_orientation == "ab" else r.table.transpose()
        s = r.chosen
        other = r.summary_ba if r.chosen_orientation == "ab" else r.summary_ab
        rows.append(
            {
                "var_a": a,
                "var_b": b,
                "n": table.n,
                "n00": table.n00,
                "n01": table.n01,
                "n10": table.n10,
                "n11": table.n11,
                "prob_a": fmt(s.prob_a),
                "prob_a_given_b": fmt(s.prob_a_given_b),
                "prob_a_given_b_sd": fmt(s.prob_a_given_b_sd),
                "delta_p": fmt(s.mean),
                "delta_p_sd": fmt(s.sd),
                "ci_low": fmt(s.ci_low),
                "ci_high": fmt(s.ci_high),
                "mc_standard_error": fmt(s.mc_standard_error),
                "p_value": s.p_value_text,
                "delta_p_reverse": fmt(other.mean),
                "significant": int(r.significant),
                "relation": r.relation,
                "converged": int(r.converged),
                "warnings": "; ".join(r.warnings),
            }
        )
    return rows


def write_results(results: Sequence[PairResult], path, checksum: str | None = None) -> None:
    fh, w = _open_csv(path, checksum)
    with fh:
        dw = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS, lineterminator="\n")
        dw.writeheader()
        dw.writerows(result_rows(results))


def parse_p_value(text: str) -> float:
    """Inverse of the p-value formatting; ``"<2.5e-05"`` becomes 0.0."""
    text = text.strip()
    return 0.0 if text.startswith("<") else float(text)


def read_results(path) -> list[dict]:
    """Load a results table written by :func:`write_results` with typed fields."""
    _, records, lines = read_records(path)
    header = records[0]
    missing = set(RESULT_COLUMNS) - set(header)
    if missing:
        raise SchemaError(f"{path}: results table lacks columns {sorted(missing)}", row=lines[0])
    out = []
    ints = {"n", "n00", "n01", "n10", "n11", "significant", "converged"}
    text = {"var_a", "var_b", "relation", "warnings", "p_value"}
    for rec, i in zip(records[1:], lines[1:]):
        if len(rec) != len(header):
            raise ParseError(f"{path}: expected {len(header)} cells, found {len(rec)}", row=i)
        row = dict(zip(header, rec))
        try:
            for k in RESULT_COLUMNS:
                if k in ints:
                    row[k] = int(row[k])
                elif k not in text:
                    row[k] = float(row[k])
            row["p_value_text"] = row["p_value"]
            row["p_value"] = parse_p_value(row["p_value"])
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}", row=i) from None
        out.append(row)
    return out


def write_edges(edges: EdgeList, path, checksum: str | None = None) -> None:
    fh, w = _open_csv(path, checksum)
    with fh:
        w.writerow(("var_a", "var_b", "weight", "p_value"))
        for e in edges:
            w.writerow((e.var_a, e.var_b, fmt(e.weight), e.p_value_text or fmt(e.p_value)))


def write_distances(matrix: DistanceMatrix, path, checksum: str | None = None) -> None:
    fh, w = _open_csv(path, checksum)
    with fh:
        w.writerow(matrix.labels)
        for row in matrix.values:
            w.writerow(fmt(v) for v in row)


def read_distances(path) -> DistanceMatrix:
    _, records, _ = read_records(path)
    labels = records[0]
    values = np.array([[float(v) for v in rec] for rec in records[1:]])
    if values.shape != (len(labels), len(labels)):
        raise ParseError(f"{path}: distance matrix is not {len(labels)}x{len(labels)}")
    return DistanceMatrix(tuple(labels), values)


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


"""Observation data: binary matrices, one-hot encoding and 2x2 contingency tables.

Cell indices follow the (A, B) convention throughout the package: ``n01``
counts instances where A is absent and B is present, ``n10`` instances where
A is present and B is absent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DataShapeError, LabelLookupError, SchemaError


@dataclass(frozen=True)
class CategoricalColumn:
    """A named categorical variable observed on N instances."""

    name: str
    values: tuple

    def __init__(self, name: str, values: Iterable):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "values", tuple(values))

    @property
    def categories(self) -> list:
        return sorted(set(self.values))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    """N instances by k binary variables.

    ``missing`` is an optional boolean mask of the same shape; masked cells
    hold 0 in ``rows`` and are excluded pairwise by :func:`contingency`.
    """

    variable_names: tuple[str, ...]
    rows: np.ndarray
    missing: np.ndarray | None = field(default=None)

    def __post_init__(self):
        names = tuple(str(n) for n in self.variable_names)
        rows = np.asarray(self.rows)
        if rows.ndim == 1 and len(names) == 1:
            rows = rows.reshape(-1, 1)
        if rows.ndim != 2:
            raise DataShapeError(f"rows must be 2-dimensional, got shape {rows.shape}")
        if rows.shape[0] < 1:
            raise DataShapeError("a binary matrix needs at least one instance")
        if rows.shape[1] != len(names):
            raise DataShapeError(
                f"{rows.shape[1]} columns but {len(names)} variable names"
            )
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicate variable names: {', '.join(dupes)}")

        missing = self.missing
        if missing is not None:
            missing = np.asarray(missing, dtype=bool)
            if missing.shape != rows.shape:
                raise DataShapeError("missing mask must match the shape of rows")
            rows = np.where(missing, 0, rows)
            if not missing.any():
                missing = None
        if not np.isin(rows, (0, 1)).all():
            raise DataShapeError("binary matrix cells must be exactly 0 or 1")

        object.__setattr__(self, "variable_names", names)
        object.__setattr__(self, "rows", _frozen(rows.astype(np.int8)))
        object.__setattr__(
            self, "missing", None if missing is None else _frozen(missing)
        )

    @classmethod
    def from_columns(cls, columns: dict[str, Sequence[int]]) -> "BinaryMatrix":
        names = list(columns)
        lengths = {len(v) for v in columns.values()}
        if len(lengths) > 1:
            raise DataShapeError(f"columns have different lengths: {sorted(lengths)}")
        rows = np.column_stack([np.asarray(columns[n]) for n in names]) if names else None
        if rows is None:
            raise DataShapeError("no columns given")
        return cls(tuple(names), rows)

    @property
    def n_instances(self) -> int:
        return self.rows.shape[0]

    @property
    def n_variables(self) -> int:
        return self.rows.shape[1]

    def index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise LabelLookupError(f"unknown variable {name!r}") from None

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.index(name)]

    def column_missing(self, name: str) -> np.ndarray:
        if self.missing is None:
            return np.zeros(self.n_instances, dtype=bool)
        return self.missing[:, self.index(name)]

    def with_column(self, name: str, values: Sequence[int]) -> "BinaryMatrix":
        values = np.asarray(values)
        if values.shape != (self.n_instances,):
            raise DataShapeError(
                f"new column has length {values.size}, expected {self.n_instances}"
            )
        rows = np.column_stack([self.rows, values])
        missing = None
        if self.missing is not None:
            missing = np.column_stack([self.missing, np.zeros(self.n_instances, bool)])
        return BinaryMatrix(self.variable_names + (name,), rows, missing)

    def select(self, names: Sequence[str]) -> "BinaryMatrix":
        idx = [self.index(n) for n in names]
        missing = None if self.missing is None else self.missing[:, idx]
        return BinaryMatrix(tuple(names), self.rows[:, idx], missing)

    def degenerate_variables(self) -> list[str]:
        """Names of variables that are constant over their observed cells."""
        out = []
        for j, name in enumerate(self.variable_names):
            col = self.rows[:, j]
            if self.missing is not None:
                col = col[~self.missing[:, j]]
            if col.size == 0 or col.min() == col.max():
                out.append(name)
        return out

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        if self.variable_names != other.variable_names:
            return False
        if not np.array_equal(self.rows, other.rows):
            return False
        mine = self.missing if self.missing is not None else np.zeros_like(self.rows, bool)
        theirs = other.missing if other.missing is not None else np.zeros_like(other.rows, bool)
        return np.array_equal(mine, theirs)

    __hash__ = None


@dataclass(frozen=True)
class ContingencyTable:
    """Counts of the four (A, B) outcomes for an ordered pair of variables."""

    n00: int
    n01: int
    n10: int
    n11: int
    label_a: str = "A"
    label_b: str = "B"

    def __post_init__(self):
        for cell in ("n00", "n01", "n10", "n11"):
            value = getattr(self, cell)
            if int(value) != value or value < 0:
                raise DataShapeError(f"{cell} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, cell, int(value))

    @property
    def n(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.n00, self.n01, self.n10, self.n11)

    @property
    def degenerate(self) -> bool:
        """True when A or B never varies (a zero margin)."""
        a1, b1 = self.n10 + self.n11, self.n01 + self.n11
        n = self.n
        return a1 in (0, n) or b1 in (0, n)

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(
            self.n00, self.n10, self.n01, self.n11, self.label_b, self.label_a
        )


def one_hot_encode(column: CategoricalColumn | Sequence, name: str = "") -> BinaryMatrix:
    """Expand a categorical column into one indicator column per category.

    Output columns are named by category label, in sorted label order.
    """
    if not isinstance(column, CategoricalColumn):
        column = CategoricalColumn(name, column)
    if not column.values:
        raise DataShapeError(f"cannot one-hot encode empty column {column.name!r}")
    cats = column.categories
    values = np.asarray(column.values, dtype=object)
    rows = np.column_stack([(values == c).astype(np.int8) for c in cats])
    return BinaryMatrix(tuple(str(c) for c in cats), rows)


def conjoin(a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    """Elementwise AND of two binary columns (an item-set indicator)."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise DataShapeError(f"cannot conjoin columns of shapes {a.shape} and {b.shape}")
    return (a.astype(bool) & b.astype(bool)).astype(np.int8)


def contingency(matrix: BinaryMatrix, a: str, b: str) -> ContingencyTable:
    """Reduce two variables of ``matrix`` to their 2x2 table.

    Rows with a missing value in either variable are dropped for this pair
    only, so ``table.n`` may be smaller than ``matrix.n_instances``.
    """
    ca, cb = matrix.column(a), matrix.column(b)
    keep = ~(matrix.column_missing(a) | matrix.column_missing(b))
    ca, cb = ca[keep], cb[keep]
    n11 = int(np.count_nonzero(ca & cb))
    n10 = int(np.count_nonzero(ca)) - n11
    n01 = int(np.count_nonzero(cb)) - n11
    n00 = int(ca.size) - n11 - n10 - n01
    return ContingencyTable(n00, n01, n10, n11, a, b)

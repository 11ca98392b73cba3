"""Dataset container and CSV ingestion.

A dataset is a dense numeric design matrix plus one response of the
three supported kinds.  Variables are addressed everywhere by 1-based
ids in header order; column names are kept for display and round trips.

The CSV layout is a header row followed by numeric cells with no
missing values.  All non-response columns are design columns.  Floats
are rendered with ``repr`` so that export -> import round-trips are
exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .dgp import GeneratedData
from .exceptions import (
    ColumnMissingError,
    InvalidConfigError,
    MissingColumnError,
    MissingValueError,
    NonNumericError,
)
from .fitters import BINOMIAL, GAUSSIAN, Family

__all__ = ["Dataset", "load_csv_dataset", "save_csv_dataset", "parse_response_spec"]


@dataclass(frozen=True)
class Dataset:
    """Design matrix with a family-specific response.

    Exactly one of ``y`` (gaussian/binomial) or ``time``/``status``
    (survival) is populated, matching ``family.kind``.
    """

    X: np.ndarray
    family: Family
    names: tuple[str, ...]
    y: np.ndarray | None = None
    time: np.ndarray | None = None
    status: np.ndarray | None = None
    response_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.X.ndim != 2 or len(self.names) != self.X.shape[1]:
            raise InvalidConfigError("names must match design columns")
        if self.family.kind == "cox_survival":
            if self.time is None or self.status is None:
                raise InvalidConfigError("survival dataset needs time and status")
        elif self.y is None:
            raise InvalidConfigError(f"{self.family.kind} dataset needs y")
        if not self.response_names:
            default = ("time", "status") if self.family.kind == "cox_survival" else ("y",)
            object.__setattr__(self, "response_names", default)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def all_ids(self) -> tuple[int, ...]:
        return tuple(range(1, self.d + 1))

    def check_id(self, var_id: int) -> None:
        if not 1 <= var_id <= self.d:
            raise ColumnMissingError(f"variable id {var_id} outside 1..{self.d}")

    def col(self, var_id: int) -> np.ndarray:
        self.check_id(var_id)
        return self.X[:, var_id - 1]

    def cols(self, var_ids) -> np.ndarray:
        for v in var_ids:
            self.check_id(v)
        return self.X[:, [v - 1 for v in var_ids]]

    def response_kwargs(self) -> dict:
        if self.family.kind == "cox_survival":
            return {"time": self.time, "status": self.status}
        return {"y": self.y}

    def rows(self, index) -> "Dataset":
        """Row subset (slice or index array), e.g. for sample splitting."""
        kw = {}
        if self.y is not None:
            kw["y"] = self.y[index]
        if self.time is not None:
            kw["time"] = self.time[index]
            kw["status"] = self.status[index]
        return replace(self, X=self.X[index], **kw)

    @classmethod
    def from_generated(cls, data: GeneratedData,
                       tie_method: str = "efron") -> "Dataset":
        names = tuple(f"x{j}" for j in range(1, data.X.shape[1] + 1))
        if data.config.response_kind == "gaussian":
            return cls(X=data.X, family=GAUSSIAN, names=names, y=data.y)
        return cls(X=data.X, family=Family("cox_survival", tie_method),
                   names=names, time=data.time, status=data.status)


def parse_response_spec(spec) -> tuple[str, tuple[str, ...]]:
    """Normalize a response spec to ``(family_kind, response_columns)``.

    Accepted forms: ``{"gaussian": "y"}``, ``{"binomial": "label"}``,
    ``{"survival": ("time", "status")}`` or the JSON-friendly
    ``{"survival": {"time": "t", "status": "event"}}``.
    """
    if not isinstance(spec, dict) or len(spec) != 1:
        raise InvalidConfigError("response spec must name exactly one family")
    kind, cols = next(iter(spec.items()))
    if kind in ("gaussian", "binomial"):
        if not isinstance(cols, str):
            raise InvalidConfigError(f"{kind} response spec needs a column name")
        return kind, (cols,)
    if kind == "survival":
        if isinstance(cols, dict):
            try:
                pair = (cols["time"], cols["status"])
            except KeyError as exc:
                raise InvalidConfigError("survival spec needs time and status") from exc
        elif isinstance(cols, (tuple, list)) and len(cols) == 2:
            pair = (cols[0], cols[1])
        else:
            raise InvalidConfigError("survival spec needs (time, status) columns")
        return kind, tuple(pair)
    raise InvalidConfigError(f"unknown response family {kind!r}")


def _parse_cell(raw: str, row: int, col_name: str) -> float:
    text = raw.strip()
    if text == "":
        raise MissingValueError(f"missing value at row {row}, column {col_name!r}")
    try:
        return float(text)
    except ValueError:
        raise NonNumericError(
            f"non-numeric value {raw!r} at row {row}, column {col_name!r}"
        ) from None


def load_csv_dataset(path, response_spec, tie_method: str = "efron") -> Dataset:
    """Read a rectangular numeric CSV into a Dataset.

    Data rows are numbered from 1 in error messages.  A survival status
    cell outside {0, 1} is reported as a non-numeric-class error naming
    the cell.
    """
    kind, response_cols = parse_response_spec(response_spec)
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumnError(f"{path} is empty") from None
        header = [h.strip() for h in header]
        for col in response_cols:
            if col not in header:
                raise MissingColumnError(f"response column {col!r} not in header")
        rows = []
        for i, raw in enumerate(reader, start=1):
            if len(raw) != len(header):
                raise MissingValueError(
                    f"row {i} has {len(raw)} cells, expected {len(header)}"
                )
            rows.append([_parse_cell(cell, i, header[j])
                         for j, cell in enumerate(raw)])
    if not rows:
        raise MissingValueError(f"{path} has a header but no data rows")
    table = np.asarray(rows, dtype=float)

    resp_pos = [header.index(c) for c in response_cols]
    design_pos = [j for j in range(len(header)) if j not in resp_pos]
    names = tuple(header[j] for j in design_pos)
    X = table[:, design_pos]

    if kind == "gaussian":
        return Dataset(X=X, family=GAUSSIAN, names=names,
                       y=table[:, resp_pos[0]], response_names=tuple(response_cols))
    if kind == "binomial":
        y = table[:, resp_pos[0]]
        _check_binary(y, response_cols[0])
        return Dataset(X=X, family=BINOMIAL, names=names, y=y,
                       response_names=tuple(response_cols))
    time = table[:, resp_pos[0]]
    status = table[:, resp_pos[1]]
    _check_binary(status, response_cols[1])
    return Dataset(X=X, family=Family("cox_survival", tie_method), names=names,
                   time=time, status=status.astype(int),
                   response_names=tuple(response_cols))


def _check_binary(values: np.ndarray, col_name: str) -> None:
    bad = np.flatnonzero(~np.isin(values, (0.0, 1.0)))
    if bad.size:
        raise NonNumericError(
            f"value {values[bad[0]]!r} at row {bad[0] + 1}, column {col_name!r} "
            f"is not a 0/1 indicator"
        )


def save_csv_dataset(dataset: Dataset, path) -> None:
    """Write the dataset in the same CSV layout ``load_csv_dataset``
    reads; floats use repr so the round trip is exact."""
    path = Path(path)
    header = list(dataset.names) + list(dataset.response_names)
    if dataset.family.kind == "cox_survival":
        resp_cols = [dataset.time, dataset.status]
    else:
        resp_cols = [dataset.y]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(dataset.n):
            row = [repr(float(v)) for v in dataset.X[i]]
            row += [repr(float(c[i])) for c in resp_cols]
            writer.writerow(row)

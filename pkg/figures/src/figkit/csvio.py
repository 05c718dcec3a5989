"""Reader and validator for fourspin scan CSVs.

The format is a '#'-prefixed header block of `key = value` lines (tool
version banner first), a column-header row, then numeric rows.  Figures
declare the parameters a dataset must carry; any disagreement aborts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ScanData", "read_scan", "require_params"]


class FigureInputError(RuntimeError):
    """Input CSV missing, malformed, or inconsistent with the figure."""


@dataclass(frozen=True)
class ScanData:
    path: str
    header: dict
    columns: tuple
    data: np.ndarray  # shape (n_rows, n_numeric_columns); text columns dropped

    def column(self, name: str) -> np.ndarray:
        try:
            return self.data[:, self.columns.index(name)]
        except ValueError as exc:
            raise FigureInputError(f"{self.path}: no column {name!r}") from exc

    def param(self, key: str, default=None):
        return self.header.get(key, default)


def read_scan(path) -> ScanData:
    header = {}
    columns = None
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise FigureInputError(f"cannot read {path}: {exc}") from exc
    for line in lines:
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                header[key.strip()] = val.strip()
            continue
        if not line.strip():
            continue
        if columns is None:
            columns = tuple(line.split(","))
            continue
        rows.append(line.split(","))
    if columns is None or not rows:
        raise FigureInputError(f"{path}: no data rows")

    numeric_cols, names = [], []
    for j, name in enumerate(columns):
        try:
            col = np.array([float(r[j]) for r in rows])
        except ValueError:
            continue  # text column (e.g. region labels)
        numeric_cols.append(col)
        names.append(name)
    return ScanData(path=str(path), header=header, columns=tuple(names),
                    data=np.column_stack(numeric_cols))


def require_params(scan: ScanData, expected: dict, rel_tol: float = 1e-12):
    """Abort unless the scan header carries the expected parameter values."""
    for key, want in expected.items():
        got = scan.header.get(key)
        if got is None:
            raise FigureInputError(f"{scan.path}: header misses {key!r}")
        if isinstance(want, str):
            if got != want:
                raise FigureInputError(
                    f"{scan.path}: {key} = {got!r}, figure needs {want!r}")
            continue
        try:
            value = float(got)
        except ValueError as exc:
            raise FigureInputError(f"{scan.path}: {key} = {got!r} not numeric") from exc
        if not math.isclose(value, float(want), rel_tol=rel_tol, abs_tol=1e-12):
            raise FigureInputError(
                f"{scan.path}: {key} = {value}, figure needs {want}")

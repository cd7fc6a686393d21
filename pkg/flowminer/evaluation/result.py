"""Per-length V&F / IV&F / V&NF report."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import pandas as pd

PathLike = Union[str, Path]

COLUMNS = ["length", "V_F", "IV_F", "V_NF"]


@dataclass
class LengthRow:
    """Pattern sets of one length: valid & found, invalid & found, valid & not found."""
    length: int
    valid_found: list = field(default_factory=list)
    invalid_found: list = field(default_factory=list)
    valid_not_found: list = field(default_factory=list)

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.valid_found), len(self.invalid_found), len(self.valid_not_found)


@dataclass
class MiningReport:
    """Outputs of ``classify``."""
    rows: list = field(default_factory=list)

    def row(self, length: int) -> LengthRow:
        for r in self.rows:
            if r.length == length:
                return r
        raise KeyError(f"no row for length {length}")

    def to_dataframe(self) -> pd.DataFrame:
        data = [(r.length, *r.counts) for r in self.rows]
        return pd.DataFrame(data, columns=COLUMNS)

    def totals(self) -> dict[str, int]:
        df = self.to_dataframe()
        return {c: int(df[c].sum()) for c in COLUMNS[1:]}

    def summary(self) -> str:
        """Aligned text table with a totals line."""
        df = self.to_dataframe()
        total = pd.DataFrame([{"length": "total", **self.totals()}], columns=COLUMNS)
        return pd.concat([df.astype({"length": object}), total], ignore_index=True).to_string(index=False)

    def to_csv(self, path: PathLike) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_dataframe().to_csv(path, index=False, lineterminator="\n")

    def __repr__(self) -> str:
        t = self.totals() if self.rows else {}
        return f"MiningReport(lengths={len(self.rows)}, totals={t})"


def compare_reports(a: MiningReport, b: MiningReport, labels: tuple[str, str] = ("a", "b")) -> pd.DataFrame:
    """Side-by-side counts of two reports with the ``b - a`` difference per column."""
    left = a.to_dataframe().set_index("length")
    right = b.to_dataframe().set_index("length")
    out = left.join(right, how="outer", lsuffix=f"_{labels[0]}", rsuffix=f"_{labels[1]}").fillna(0).astype(int)
    for c in COLUMNS[1:]:
        out[f"{c}_delta"] = out[f"{c}_{labels[1]}"] - out[f"{c}_{labels[0]}"]
    return out.reset_index()

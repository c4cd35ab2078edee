"""CSV export and import of stored sets (``kind,x1,y1,x2,y2``)."""
from __future__ import annotations

import csv
from os import PathLike
from typing import Iterable, Union

from .geometry import Kind, ParetoElement, canonicalize, validate_element

SET_HEADER = ["kind", "x1", "y1", "x2", "y2"]

PathArg = Union[str, "PathLike[str]"]


def write_set_csv(elements: Iterable[ParetoElement], path: PathArg) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SET_HEADER)
        for e in elements:
            w.writerow([e.kind.value] + [f"{v:.12g}" for v in e])


def read_set_csv(path: PathArg) -> list[ParetoElement]:
    """Read a set written by :func:`write_set_csv`, in canonical form."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SET_HEADER:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        for row in reader:
            kind = Kind(row["kind"])
            e = ParetoElement(*(float(row[c]) for c in SET_HEADER[1:]))
            if kind is Kind.POINT and e.x1 != e.x2:
                raise ValueError(f"point row with distinct endpoints: {row}")
            validate_element(e)
            out.append(e)
    return canonicalize(out)

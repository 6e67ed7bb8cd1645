"""Karnaugh-map grids for placements: text/CSV/JSON rendering and diffing."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .kcode import GrayLayout, default_layout
from .placement import ErrorPattern, Placement, occupied_map, require_valid
from .codec import covered_triples

__all__ = ["MapGrid", "CellDiff", "render_map", "diff_grids",
           "grid_to_text", "grid_to_csv", "grid_to_json", "grid_from_csv",
           "occupied_from_grid", "ZERO_LABEL", "FORBIDDEN_MARK"]

ZERO_LABEL = "N"
FORBIDDEN_MARK = "f"


@dataclass(frozen=True)
class MapGrid:
    layout: GrayLayout
    cells: dict  # (row, col) -> label; unlabeled squares are absent

    @property
    def n(self) -> int:
        return self.layout.n

    def label_at(self, row: int, col: int) -> str:
        return self.cells.get((row, col), "")

    def sorted_cells(self) -> list[tuple[int, int, str]]:
        return [(r, c, v) for (r, c), v in sorted(self.cells.items())]


def render_map(p: Placement, include_triples: bool = False,
               forbidden_for: tuple[int, int] | None = None,
               layout: GrayLayout | None = None) -> MapGrid:
    """Grid of canonical pattern labels for a valid placement.

    The zero square is labeled "N".  With `include_triples` the covered
    three-bit patterns are labeled too.  `forbidden_for` = (i, j) marks the
    squares forbidden to a further data bit by the placed pair (X_i, X_j)
    with "f" (1-indexed into the placement's data list).
    """
    require_valid(p)
    layout = layout or default_layout(p.n)
    if layout.n != p.n:
        raise ValueError("layout width does not match placement width")
    mapping = dict(occupied_map(p).mapping)
    if include_triples:
        mapping.update(covered_triples(p))
    cells = {}
    for code, pat in mapping.items():
        cells[layout.to_grid(code)] = pat.label if pat.size else ZERO_LABEL
    if forbidden_for is not None:
        from .placement import forbidden_squares
        i, j = forbidden_for
        if not (1 <= i <= p.d and 1 <= j <= p.d and i != j):
            raise ValueError(f"forbidden_for needs two distinct data indices, got {forbidden_for}")
        for code in forbidden_squares(p.data[i - 1], p.data[j - 1], p.n):
            if code not in mapping:
                cells[layout.to_grid(code)] = FORBIDDEN_MARK
    return MapGrid(layout, cells)


@dataclass(frozen=True)
class CellDiff:
    row: int
    col: int
    a: str
    b: str


def diff_grids(a: MapGrid, b: MapGrid) -> tuple[CellDiff, ...]:
    """Cell-level differences; empty means identical."""
    if (a.layout.row_count, a.layout.col_count) != (b.layout.row_count, b.layout.col_count):
        raise ValueError("grid dimensions differ")
    out = []
    for key in sorted(set(a.cells) | set(b.cells)):
        va, vb = a.cells.get(key, ""), b.cells.get(key, "")
        if va != vb:
            out.append(CellDiff(key[0], key[1], va, vb))
    return tuple(out)


def grid_to_text(grid: MapGrid) -> str:
    """Fixed-width table with Gray-coded row/column headers."""
    lay = grid.layout
    head = "rows " + " ".join(f"s{k}" for k in lay.row_vars) \
         + " | cols " + " ".join(f"s{k}" for k in lay.col_vars)
    width = max([len(v) for v in grid.cells.values()] + [len(lay.col_bits(0))]) + 1
    lines = [head]
    corner = " " * (len(lay.row_bits(0)) + 1)
    lines.append(corner + "".join(lay.col_bits(c).ljust(width) for c in range(lay.col_count)))
    for r in range(lay.row_count):
        row = lay.row_bits(r) + " "
        row += "".join(grid.label_at(r, c).ljust(width) for c in range(lay.col_count))
        lines.append(row.rstrip())
    return "\n".join(lines) + "\n"


def grid_to_csv(grid: MapGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["row", "col", "label"])
    lay = grid.layout
    for r, c, label in grid.sorted_cells():
        w.writerow([lay.row_bits(r), lay.col_bits(c), label])
    return buf.getvalue()


def grid_to_json(grid: MapGrid) -> dict:
    """Cells keyed by the integer K-code of the square."""
    lay = grid.layout
    cells = {str(lay.from_grid(r, c)): label for r, c, label in grid.sorted_cells()}
    return {"layout": lay.to_json(), "cells": cells}


def grid_from_csv(text: str, layout: GrayLayout) -> MapGrid:
    cells = {}
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["row", "col", "label"]:
        raise ValueError("grid CSV must start with header row,col,label")
    for rowbits, colbits, label in reader:
        if len(rowbits) != len(layout.row_vars) or len(colbits) != len(layout.col_vars):
            raise ValueError(f"cell ({rowbits}, {colbits}) does not fit the layout")
        cells[(layout.row_of(rowbits), layout.col_of(colbits))] = label
    return MapGrid(layout, cells)


def occupied_from_grid(grid: MapGrid) -> dict[int, ErrorPattern]:
    """Parse the labels back into the syndrome -> pattern map ("f" marks skipped)."""
    out = {}
    lay = grid.layout
    for r, c, label in grid.sorted_cells():
        if label == FORBIDDEN_MARK:
            continue
        code = lay.from_grid(r, c)
        out[code] = ErrorPattern() if label == ZERO_LABEL else ErrorPattern.parse(label)
    return out

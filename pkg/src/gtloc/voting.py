"""Voting-map outlier rejection.

Each correspondence votes for the grid cell containing the query-image origin
it implies. True matches agree on one origin and pile up in a single cell,
while wrong matches scatter their votes over the whole map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gtloc.errors import EmptyMap
from gtloc.geometry import CorrespondenceLike, CorrespondenceSet, as_correspondence_set
from gtloc.image import Image


@dataclass
class VotingMap:
    origin: tuple[float, float]
    cell_size: float
    cols: int
    rows: int
    margin_cells: int = 0
    counts: np.ndarray = field(default=None, repr=False)
    dropped: int = 0
    _votes: list = field(default_factory=list, repr=False)
    _cells: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.counts is None:
            self.counts = np.zeros((self.rows, self.cols), dtype=np.int64)

    @property
    def interior_cols(self) -> int:
        return self.cols - 2 * self.margin_cells

    @property
    def interior_rows(self) -> int:
        return self.rows - 2 * self.margin_cells

    @property
    def total_votes(self) -> int:
        return int(self.counts.sum())

    def cell_of(self, x: float, y: float) -> tuple[int, int] | None:
        """(row, col) containing a global point, or None outside the grid."""
        col = math.floor((x - self.origin[0]) / self.cell_size)
        row = math.floor((y - self.origin[1]) / self.cell_size)
        if 0 <= col < self.cols and 0 <= row < self.rows:
            return row, col
        return None

    def registry(self, row: int, col: int) -> CorrespondenceSet:
        """Correspondences that voted for one cell, in canonical order."""
        if not self._votes:
            return CorrespondenceSet.empty()
        allc = CorrespondenceSet.concatenate(self._votes)
        cells = np.concatenate(self._cells)
        idx = np.flatnonzero(cells == row * self.cols + col)
        return _canonical(allc.subset(idx))


def _canonical(cs: CorrespondenceSet) -> CorrespondenceSet:
    if len(cs) < 2:
        return cs
    order = np.lexsort((
        cs.ref_angles, cs.query_angles,
        cs.ref_pts[:, 1], cs.ref_pts[:, 0],
        cs.query_pts[:, 1], cs.query_pts[:, 0],
    ))
    return cs.subset(order)


def make_voting_map(map_extent, cell_size: float = 75.0, margin: float = 0.0) -> VotingMap:
    """Zeroed grid over ``map_extent = (xmin, ymin, xmax, ymax)`` plus ``margin`` pixels per side."""
    xmin, ymin, xmax, ymax = (float(v) for v in map_extent)
    if not (xmax >= xmin and ymax >= ymin) or not all(map(math.isfinite, (xmin, ymin, xmax, ymax))):
        raise ValueError(f"degenerate extent {map_extent}")
    if cell_size <= 0:
        raise ValueError("cell_size must be positive")
    cols = max(1, math.ceil((xmax - xmin) / cell_size))
    rows = max(1, math.ceil((ymax - ymin) / cell_size))
    m = max(0, math.ceil(margin / cell_size))
    return VotingMap(
        origin=(xmin - m * cell_size, ymin - m * cell_size),
        cell_size=float(cell_size),
        cols=cols + 2 * m,
        rows=rows + 2 * m,
        margin_cells=m,
    )


def cast_votes(vm: VotingMap, correspondences: CorrespondenceLike) -> None:
    cs = as_correspondence_set(correspondences)
    if len(cs) == 0:
        return
    origins, _ = cs.implied_origins()
    col = np.floor((origins[:, 0] - vm.origin[0]) / vm.cell_size)
    row = np.floor((origins[:, 1] - vm.origin[1]) / vm.cell_size)
    inside = (col >= 0) & (col < vm.cols) & (row >= 0) & (row < vm.rows)
    vm.dropped += int(len(cs) - np.count_nonzero(inside))
    if not np.any(inside):
        return
    lin = row[inside].astype(np.int64) * vm.cols + col[inside].astype(np.int64)
    vm.counts += np.bincount(lin, minlength=vm.rows * vm.cols).reshape(vm.rows, vm.cols)
    vm._votes.append(cs.subset(np.flatnonzero(inside)))
    vm._cells.append(lin)


def winning_cell(vm: VotingMap) -> tuple[tuple[int, int], CorrespondenceSet]:
    """Cell with most votes (lowest row-major index on ties) and its correspondences."""
    if vm.total_votes == 0:
        raise EmptyMap("no votes were cast inside the grid")
    lin = int(np.argmax(vm.counts))
    row, col = divmod(lin, vm.cols)
    return (row, col), vm.registry(row, col)


def dump_votes(vm: VotingMap) -> Image:
    """One pixel per cell, counts scaled so the maximum maps to 255 (round half up)."""
    peak = int(vm.counts.max()) if vm.counts.size else 0
    if peak == 0:
        return Image(np.zeros((vm.rows, vm.cols), dtype=np.uint8))
    scaled = (2 * vm.counts * 255 + peak) // (2 * peak)
    return Image(scaled.astype(np.uint8))

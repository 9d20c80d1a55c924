"""Partitions of box-definable carriers and the tuned / monotone checkers.

A partition holds a carrier region and pairwise disjoint nonempty cells
covering it.  Cells are kept in a canonical order, ascending by each cell's
lexicographically least point, so equal partitions always enumerate their
cells identically.

The checkers decide, exactly:

* tuned: whenever one cell contains a point below some point of another
  cell, every point of the first cell lies below some point of the second;
* monotone: every cell is cofinal in its hull, and the set of varying
  coordinates never shrinks when moving up along the componentwise order.

Both checks run on the finite atom quotient of the partition (see
``atomgrid``), which is exact for box-union regions.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .atomgrid import AtomGrid
from .region import (
    DimensionMismatch,
    OrderKind,
    Point,
    Region,
    full,
)


class PartitionError(ValueError):
    """Invalid partition; carries the failing kind and a witnessing region."""

    def __init__(self, kind: str, message: str, witness: Optional[Region] = None):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True)
class Partition:
    dim: int
    carrier: Region
    cells: tuple[Region, ...]

    @property
    def size(self) -> int:
        return len(self.cells)

    @classmethod
    def _trusted(cls, dim: int, carrier: Region, cells: Iterable[Region]) -> "Partition":
        """Construct without validation; callers guarantee the invariants."""
        ordered = tuple(sorted(cells, key=Region.min_point))
        return cls(dim, carrier, ordered)

    # -- cached atom quotient -------------------------------------------------

    @cached_property
    def _grid(self) -> AtomGrid:
        return AtomGrid.for_regions(self.dim, (self.carrier, *self.cells))

    @cached_property
    def _owner(self) -> np.ndarray:
        """Flat int32 array mapping each atom to its cell index (-1 outside)."""
        owner = np.full(self._grid.size, -1, dtype=np.int32)
        for i, cell in enumerate(self.cells):
            owner[self._grid.region_bool(cell).ravel()] = i
        return owner

    @cached_property
    def _sizes(self) -> np.ndarray:
        return np.bincount(self._owner[self._owner >= 0], minlength=self.size)

    def _downset_flat(self, j: int, order: OrderKind) -> np.ndarray:
        return self._grid.region_bool(self.cells[j].downset(order)).ravel()

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        carrier = "full" if self.carrier.equal(full(self.dim)) else self.carrier.to_json()
        return {
            "dim": self.dim,
            "carrier": carrier,
            "cells": [c.to_json() for c in self.cells],
        }

    @classmethod
    def from_json(cls, obj: object) -> "Partition":
        if not isinstance(obj, dict):
            raise ValueError("partition must be a JSON object")
        dim = obj.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"partition field 'dim' must be a positive integer, got {dim!r}")
        raw_carrier = obj.get("carrier", "full")
        carrier = full(dim) if raw_carrier == "full" else Region.from_json(raw_carrier)
        if carrier.dim != dim:
            raise ValueError("partition field 'carrier' has the wrong dimension")
        raw_cells = obj.get("cells")
        if not isinstance(raw_cells, list) or not raw_cells:
            raise ValueError("partition field 'cells' must be a nonempty list")
        cells = []
        for c in raw_cells:
            cell = Region.from_json(c)
            if cell.dim != dim:
                raise ValueError("partition cell has the wrong dimension")
            cells.append(cell)
        return make_partition(carrier, cells)


def make_partition(carrier: Region, cells: Sequence[Region]) -> Partition:
    """Validate cells against the carrier and return the canonical partition."""
    cells = tuple(cells)
    if not cells:
        raise PartitionError("no_cells", "a partition needs at least one cell")
    dim = carrier.dim
    for i, c in enumerate(cells):
        if c.dim != dim:
            raise DimensionMismatch(f"cell {i} has dimension {c.dim}, carrier {dim}")
        if c.is_empty():
            raise PartitionError("empty_cell", f"cell {i} is empty", witness=c)
    grid = AtomGrid.for_regions(dim, (carrier, *cells))
    claimed = np.zeros(grid.size, dtype=bool)
    flats = []
    for i, c in enumerate(cells):
        flat = grid.region_bool(c).ravel()
        overlap = flat & claimed
        if overlap.any():
            witness = grid.region_of_bool(overlap.reshape(grid.shape))
            raise PartitionError(
                "overlap", f"cell {i} overlaps an earlier cell", witness=witness
            )
        claimed |= flat
        flats.append(flat)
    car = grid.region_bool(carrier).ravel()
    excess = claimed & ~car
    if excess.any():
        witness = grid.region_of_bool(excess.reshape(grid.shape))
        raise PartitionError("excess", "cells extend beyond the carrier", witness=witness)
    gap = car & ~claimed
    if gap.any():
        witness = grid.region_of_bool(gap.reshape(grid.shape))
        raise PartitionError("gap", "cells do not cover the carrier", witness=witness)
    return Partition._trusted(dim, carrier, cells)


def restrict(p: Partition, v: Region) -> Partition:
    """Intersect every cell with v, dropping the empty traces."""
    if v.dim != p.dim:
        raise DimensionMismatch(f"dimensions differ: {p.dim} vs {v.dim}")
    carrier = p.carrier.intersect(v)
    if carrier.is_empty():
        raise PartitionError("empty_carrier", "restriction has an empty carrier")
    cells = [c.intersect(v) for c in p.cells]
    return Partition._trusted(p.dim, carrier, [c for c in cells if not c.is_empty()])


def induced(carrier: Region, family: Sequence[Region]) -> Partition:
    """Partition of the carrier into membership classes of the family.

    Two points fall in the same cell exactly when they belong to the same
    members of the family.
    """
    if carrier.is_empty():
        raise PartitionError("empty_carrier", "cannot partition an empty carrier")
    family = list(family)
    for f in family:
        if f.dim != carrier.dim:
            raise DimensionMismatch("family member dimension differs from carrier")
    if not family:
        return Partition._trusted(carrier.dim, carrier, [carrier])
    grid = AtomGrid.for_regions(carrier.dim, (carrier, *family))
    car = grid.region_bool(carrier).ravel()
    idx = np.flatnonzero(car)
    profiles = np.stack([grid.region_bool(f).ravel()[idx] for f in family])
    _, inverse = np.unique(profiles.T, axis=0, return_inverse=True)
    cells = []
    for label in range(int(inverse.max()) + 1):
        flat = np.zeros(grid.size, dtype=bool)
        flat[idx[inverse == label]] = True
        cells.append(grid.region_of_bool(flat.reshape(grid.shape)))
    return Partition._trusted(carrier.dim, carrier, cells)


def refines(fine: Partition, coarse: Partition) -> bool:
    """True when every cell of fine sits inside a single cell of coarse."""
    if fine.dim != coarse.dim:
        raise DimensionMismatch("partition dimensions differ")
    if not fine.carrier.equal(coarse.carrier):
        raise PartitionError("carrier_mismatch", "partitions have different carriers")
    grid = AtomGrid.for_regions(fine.dim, (*fine.cells, *coarse.cells))
    owner = np.full(grid.size, -1, dtype=np.int32)
    for j, cell in enumerate(coarse.cells):
        owner[grid.region_bool(cell).ravel()] = j
    for cell in fine.cells:
        owners = np.unique(owner[grid.region_bool(cell).ravel()])
        if owners.size != 1 or owners[0] < 0:
            return False
    return True


def cell_of(p: Partition, point: Point) -> int:
    """Index of the cell containing the point; the point must be in the carrier."""
    if len(point) != p.dim:
        raise DimensionMismatch(f"point of dimension {len(point)}, partition {p.dim}")
    atom = p._grid.point_atom(point)
    flat = int(np.ravel_multi_index(atom, p._grid.shape)) if p.dim else 0
    idx = int(p._owner[flat])
    if idx < 0:
        raise ValueError(f"point {point} lies outside the carrier")
    return idx


# -- the two decision procedures --------------------------------------------------


@dataclass(frozen=True)
class TunedViolation:
    """Cell pair with a related point pair but a source point seeing nothing."""

    source: int
    target: int
    witness: Point

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "witness": list(self.witness),
        }


@dataclass(frozen=True)
class MonotoneViolation:
    """Either a cell not cofinal in its hull, or a varying-set order breach."""

    kind: str  # "hull" or "varying"
    cell: int
    other: Optional[int]
    witness: Point

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "cell": self.cell,
            "other": self.other,
            "witness": list(self.witness),
        }


def tuned_violation(p: Partition, order: OrderKind) -> Optional[TunedViolation]:
    """First violating (source, target) pair in index order, or None if tuned.

    The witness is the least point of the source cell that sees no point of
    the target cell.
    """
    grid = p._grid
    owner = p._owner
    owned = owner >= 0
    sizes = p._sizes
    best: Optional[tuple[int, int]] = None
    for j in range(p.size):
        down = p._downset_flat(j, order)
        cov = np.bincount(owner[down & owned], minlength=p.size)
        bad = np.flatnonzero((cov > 0) & (cov < sizes))
        for i in bad:
            pair = (int(i), j)
            if best is None or pair < best:
                best = pair
    if best is None:
        return None
    i, j = best
    down = p._downset_flat(j, order)
    violating = (owner == i) & ~down
    witness = grid.first_point(violating)
    assert witness is not None
    return TunedViolation(i, j, witness)


def is_tuned(p: Partition, order: OrderKind) -> bool:
    return tuned_violation(p, order) is None


def monotone_violation(p: Partition) -> Optional[MonotoneViolation]:
    """First violation of the monotonicity conditions, or None.

    Hull cofinality is checked cell by cell first; then, for every cell pair
    with a componentwise-related point pair, the varying coordinates of the
    lower cell must be a subset of those of the upper cell.
    """
    grid = p._grid
    owner = p._owner
    owned = owner >= 0
    for i, cell in enumerate(p.cells):
        hull = grid.region_bool(cell.hull()).ravel()
        down = p._downset_flat(i, OrderKind.REFLEXIVE)
        missing = hull & ~down
        if missing.any():
            witness = grid.first_point(missing)
            assert witness is not None
            return MonotoneViolation("hull", i, None, witness)
    varying = [p.cells[i].varying_coords() for i in range(p.size)]
    best: Optional[tuple[int, int]] = None
    for j in range(p.size):
        down = p._downset_flat(j, OrderKind.REFLEXIVE)
        sources = np.unique(owner[down & owned])
        for i in sources:
            if varying[int(i)] - varying[j]:
                pair = (int(i), j)
                if best is None or pair < best:
                    best = pair
    if best is None:
        return None
    i, j = best
    down = p._downset_flat(j, OrderKind.REFLEXIVE)
    witness = grid.first_point((owner == i) & down)
    assert witness is not None
    return MonotoneViolation("varying", i, j, witness)


def is_monotone(p: Partition) -> bool:
    return monotone_violation(p) is None

"""Monotone refinement of finite partitions of the grid.

Every finite partition of omega^n built from box-union cells admits a finite
monotone refinement, and monotone partitions are tuned for both product
orders.  The construction here is recursive in the dimension:

* dimension 1: if some cell is finite, split the initial segment up to the
  largest point covered by finite cells into singletons and keep the tails
  of the infinite cells;
* dimension n: pick the least threshold k0 such that every cell meeting the
  shifted quadrant [k0, w)^n is cofinal in the whole grid, restrict to that
  quadrant, and grow the refined partition back toward the origin one
  quadrant layer at a time.  Each layer adds, for every nonempty set I of
  coordinates, a partition of the face where exactly those coordinates are
  zero; the face partition refines both the target partition and the shadows
  (zero-pinned images) of everything built so far, and is itself refined
  recursively in the lower dimension.

A trace records the threshold, the per-layer face work, and recursive
subtraces; identical inputs yield identical traces and outputs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .atomgrid import AtomGrid
from .partition import (
    Partition,
    PartitionError,
    induced,
    is_monotone,
    refines,
    restrict,
)
from .region import (
    OMEGA,
    OrderKind,
    Point,
    Region,
    boundary_face,
    full,
    point_region,
    upper_quadrant,
)


@dataclass(frozen=True)
class FaceStep:
    coords: tuple[int, ...]
    family_size: int
    atom_count: int
    cell_count: int
    sub: "RefinementTrace"

    def to_json(self) -> dict:
        return {
            "coords": list(self.coords),
            "family_size": self.family_size,
            "atom_count": self.atom_count,
            "cell_count": self.cell_count,
            "sub": self.sub.to_json(),
        }


@dataclass(frozen=True)
class LevelStep:
    level: int
    faces: tuple[FaceStep, ...]

    def to_json(self) -> dict:
        return {"level": self.level, "faces": [f.to_json() for f in self.faces]}


@dataclass(frozen=True)
class RefinementTrace:
    """Deterministic record of one refinement run."""

    dim: int
    k0: Optional[int]
    cells_in: int
    cells_out: int
    steps: tuple[LevelStep, ...]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "k0": self.k0,
            "cells_in": self.cells_in,
            "cells_out": self.cells_out,
            "steps": [s.to_json() for s in self.steps],
        }

    def depth(self) -> int:
        sub = [
            f.sub.depth() for s in self.steps for f in s.faces
        ]
        return 1 + max(sub, default=0)


def _require_full_carrier(p: Partition) -> None:
    if not p.carrier.equal(full(p.dim)):
        raise PartitionError("carrier_mismatch", "refinement expects a full carrier")


def refine_monotone_1d(p: Partition) -> Partition:
    """Monotone refinement over the line.

    Partitions whose cells are all infinite come back unchanged.  Otherwise
    everything up to the largest point lying in a finite cell becomes a
    singleton and each infinite cell keeps its tail.
    """
    if p.dim != 1:
        raise ValueError("refine_monotone_1d expects dimension 1")
    _require_full_carrier(p)
    finite = [c for c in p.cells if all(b.intervals[0].bounded for b in c.boxes)]
    if not finite:
        return p
    k0 = max(c.max_constant() for c in finite)
    tail = upper_quadrant(1, k0 + 1)
    cells = [point_region(k) for k in range(k0 + 1)]
    cells += [c.intersect(tail) for c in p.cells if c not in finite]
    return Partition._trusted(1, full(1), cells)


def cofinal_threshold(p: Partition) -> int:
    """Least k such that every cell meeting [k, w)^n is cofinal in the grid."""
    _require_full_carrier(p)
    n = p.dim
    bound = 0
    for cell in p.cells:
        if cell.is_cofinal_in_space():
            continue
        for b in cell.boxes:
            finite_his = [iv.hi for iv in b.intervals if iv.hi is not OMEGA]
            if not finite_his:
                raise RuntimeError("cell with an unbounded box cannot be non-cofinal")
            bound = max(bound, 1 + min(finite_his))
    k0 = bound
    # The closed form above is checked against the defining property.
    quadrant = upper_quadrant(n, k0)
    for cell in p.cells:
        if not cell.intersect(quadrant).is_empty():
            if not cell.is_cofinal_in_space():
                raise RuntimeError("threshold check failed: non-cofinal cell meets the quadrant")
    if k0 > 0:
        prev = upper_quadrant(n, k0 - 1)
        ok = any(
            not cell.intersect(prev).is_empty() and not cell.is_cofinal_in_space()
            for cell in p.cells
        )
        if not ok:
            raise RuntimeError("threshold is not minimal")
    return k0


def _proper_subsets(coords: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = []
    for size in range(len(coords)):
        out.extend(itertools.combinations(coords, size))
    return out


def _extend_core(
    coarse: Partition, inner: Partition
) -> tuple[Partition, tuple[FaceStep, ...]]:
    """Extend a monotone partition of [1, w)^n to all of omega^n.

    ``coarse`` partitions the full grid; ``inner`` partitions the shifted
    quadrant and refines the restriction of ``coarse`` to it.  The points
    with at least one zero coordinate are covered face by face, ordered by
    how many coordinates are pinned to zero.
    """
    n = coarse.dim
    parts: dict[tuple[int, ...], list[Region]] = {(): list(inner.cells)}
    faces: list[FaceStep] = []
    for size in range(1, n + 1):
        for coords in itertools.combinations(range(n), size):
            face = boundary_face(n, coords)
            family: list[Region] = []
            for cell in coarse.cells:
                cut = cell.intersect(face)
                if not cut.is_empty():
                    family.append(cut)
            for sub in _proper_subsets(coords):
                for built in parts[sub]:
                    family.append(built.pin_coords(coords, 0))
            atoms = induced(face, family)
            shifted = [
                cell.drop_coords(coords).translate(-1) for cell in atoms.cells
            ]
            sub_part = Partition._trusted(n - size, full(n - size), shifted)
            refined, subtrace = refine_monotone(sub_part)
            back = [
                cell.translate(1).insert_coords(coords, 0) for cell in refined.cells
            ]
            parts[coords] = back
            faces.append(
                FaceStep(coords, len(family), atoms.size, len(back), subtrace)
            )
    cells = [c for key in parts for c in parts[key]]
    return Partition._trusted(n, full(n), cells), tuple(faces)


def extend_from_quadrant(coarse: Partition, inner: Partition) -> Partition:
    """Validated one-layer extension; see ``_extend_core`` for the construction."""
    if coarse.dim != inner.dim:
        raise ValueError("partition dimensions differ")
    _require_full_carrier(coarse)
    if not inner.carrier.equal(upper_quadrant(inner.dim, 1)):
        raise PartitionError("carrier_mismatch", "inner partition must cover [1, w)^n")
    if not is_monotone(inner):
        raise PartitionError("not_monotone", "inner partition is not monotone")
    if not refines(inner, restrict(coarse, upper_quadrant(coarse.dim, 1))):
        raise PartitionError("not_refining", "inner partition does not refine the restriction")
    part, _ = _extend_core(coarse, inner)
    return part


def _shift_partition(p: Partition, delta: int) -> Partition:
    return Partition._trusted(
        p.dim, p.carrier.translate(delta), [c.translate(delta) for c in p.cells]
    )


def refine_monotone(p: Partition) -> tuple[Partition, RefinementTrace]:
    """Finite monotone refinement of a partition of the full grid."""
    n = p.dim
    _require_full_carrier(p)
    if n == 0:
        return p, RefinementTrace(0, None, p.size, p.size, ())
    if n == 1:
        refined = refine_monotone_1d(p)
        k0 = None if refined is p else max(
            c.max_constant()
            for c in p.cells
            if all(b.intervals[0].bounded for b in c.boxes)
        )
        return refined, RefinementTrace(1, k0, p.size, refined.size, ())
    k0 = cofinal_threshold(p)
    current = restrict(p, upper_quadrant(n, k0)) if k0 else p
    for cell in current.cells:
        if not cell.is_cofinal_in_space():
            raise RuntimeError("restriction to the quadrant lost cofinality")
    steps: list[LevelStep] = []
    for level in range(k0, 0, -1):
        shift = level - 1
        outer = restrict(p, upper_quadrant(n, shift)) if shift else p
        extended, faces = _extend_core(
            _shift_partition(outer, -shift), _shift_partition(current, -shift)
        )
        current = _shift_partition(extended, shift)
        steps.append(LevelStep(level, faces))
    trace = RefinementTrace(n, k0, p.size, current.size, tuple(steps))
    # Structural bounds on the run: one extension step per quadrant layer,
    # one face per nonempty coordinate set, recursion no deeper than n.
    assert len(trace.steps) == k0
    assert all(len(step.faces) == 2**n - 1 for step in trace.steps)
    assert trace.depth() <= n
    return current, trace


# -- products with a finite frame ---------------------------------------------------


@dataclass(frozen=True)
class FiberedPartition:
    """Partition of grid x finite frame, stored as one fiber per world."""

    dim: int
    worlds: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    fibers: tuple[Partition, ...]

    def fiber(self, world: str) -> Partition:
        return self.fibers[self.worlds.index(world)]

    def to_json(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "edges": [list(e) for e in self.edges],
            "fibers": {w: f.to_json() for w, f in zip(self.worlds, self.fibers)},
        }

    @classmethod
    def from_json(cls, obj: object) -> "FiberedPartition":
        if not isinstance(obj, dict):
            raise ValueError("fibered partition must be a JSON object")
        worlds = obj.get("worlds")
        if not isinstance(worlds, list) or not worlds or not all(isinstance(w, str) for w in worlds):
            raise ValueError("field 'worlds' must be a nonempty list of strings")
        raw_edges = obj.get("edges", [])
        if not isinstance(raw_edges, list):
            raise ValueError("field 'edges' must be a list of [source, target] pairs")
        edges = []
        for e in raw_edges:
            if not isinstance(e, list) or len(e) != 2 or e[0] not in worlds or e[1] not in worlds:
                raise ValueError(f"edge {e!r} does not join two listed worlds")
            edges.append((e[0], e[1]))
        raw_fibers = obj.get("fibers")
        if not isinstance(raw_fibers, dict) or set(raw_fibers) != set(worlds):
            raise ValueError("field 'fibers' must map every world to a partition")
        fibers = tuple(Partition.from_json(raw_fibers[w]) for w in worlds)
        return make_fibered(worlds, edges, fibers)


def make_fibered(
    worlds: Sequence[str],
    edges: Sequence[tuple[str, str]],
    fibers: Sequence[Partition],
) -> FiberedPartition:
    worlds = tuple(worlds)
    if len(set(worlds)) != len(worlds):
        raise ValueError("world names must be distinct")
    if len(fibers) != len(worlds):
        raise ValueError("one fiber per world is required")
    dims = {f.dim for f in fibers}
    if len(dims) != 1:
        raise ValueError("fibers must share a dimension")
    dim = dims.pop()
    for w, f in zip(worlds, fibers):
        if not f.carrier.equal(full(dim)):
            raise PartitionError("carrier_mismatch", f"fiber of world {w!r} must cover the grid")
    seen = set()
    ordered = []
    for raw in edges:
        e = (raw[0], raw[1])
        if e[0] not in worlds or e[1] not in worlds:
            raise ValueError(f"edge {e!r} does not join two listed worlds")
        if e not in seen:
            seen.add(e)
            ordered.append(e)
    return FiberedPartition(dim, worlds, tuple(ordered), tuple(fibers))


def refine_product_finite(
    fp: FiberedPartition, order: OrderKind
) -> tuple[FiberedPartition, RefinementTrace]:
    """Tuned refinement of a partition of grid x finite frame.

    All fibers are refined jointly: the common refinement of every fiber
    cell is made monotone once, and every world receives that partition.
    The result is tuned in the product frame for the given base order.
    """
    splitters = [cell for f in fp.fibers for cell in f.cells]
    base = induced(full(fp.dim), splitters)
    refined, trace = refine_monotone(base)
    out = FiberedPartition(
        fp.dim, fp.worlds, fp.edges, tuple(refined for _ in fp.worlds)
    )
    return out, trace


@dataclass(frozen=True)
class ProductTunedViolation:
    source_world: str
    source_cell: int
    target_world: str
    target_cell: int
    witness: Point

    def to_json(self) -> dict:
        return {
            "source_world": self.source_world,
            "source_cell": self.source_cell,
            "target_world": self.target_world,
            "target_cell": self.target_cell,
            "witness": list(self.witness),
        }


def _pair_tables(
    pg: Partition, ph: Partition, order: OrderKind
) -> tuple[np.ndarray, np.ndarray]:
    """Premise and inclusion tables between the cells of two fiber partitions."""
    grid = AtomGrid.for_regions(pg.dim, (*pg.cells, *ph.cells))
    owner = np.full(grid.size, -1, dtype=np.int32)
    for i, cell in enumerate(pg.cells):
        owner[grid.region_bool(cell).ravel()] = i
    sizes = np.bincount(owner[owner >= 0], minlength=pg.size)
    premise = np.zeros((pg.size, ph.size), dtype=bool)
    included = np.zeros((pg.size, ph.size), dtype=bool)
    owned = owner >= 0
    for j, cell in enumerate(ph.cells):
        down = grid.region_bool(cell.downset(order)).ravel()
        cov = np.bincount(owner[down & owned], minlength=pg.size)
        premise[:, j] = cov > 0
        included[:, j] = cov == sizes
    return premise, included


def product_tuned_violation(
    fp: FiberedPartition, order: OrderKind
) -> Optional[ProductTunedViolation]:
    """Tuned check on the product frame: cells are (world, fiber cell) pairs."""
    cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
    for g, h in fp.edges:
        pg, ph = fp.fiber(g), fp.fiber(h)
        key = (id(pg), id(ph))
        if key not in cache:
            cache[key] = _pair_tables(pg, ph, order)
        premise, included = cache[key]
        bad = premise & ~included
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            missing = pg.cells[i].difference(ph.cells[j].downset(order))
            return ProductTunedViolation(g, i, h, j, missing.min_point())
    return None


def product_tuned(fp: FiberedPartition, order: OrderKind) -> bool:
    return product_tuned_violation(fp, order) is None


def product_refines(fine: FiberedPartition, coarse: FiberedPartition) -> bool:
    """Worldwise refinement of fibered partitions over the same frame."""
    if fine.worlds != coarse.worlds:
        raise ValueError("fibered partitions are over different world sets")
    return all(refines(f, c) for f, c in zip(fine.fibers, coarse.fibers))

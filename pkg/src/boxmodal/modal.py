"""Modal semantics over the grid frames, finite quotients, and subalgebras.

``truth_region`` evaluates a formula exactly on the infinite frame: diamond
is downward closure under the chosen order, box its dual.  A partition that
is tuned for the order and compatible with the valuation induces a finite
quotient frame on which finite model checking agrees with the symbolic
semantics cell by cell; ``filtration_pipeline`` builds that quotient via the
monotone refiner and verifies the agreement for every subformula.

``generate_subalgebra`` exhibits the finite family of region unions closed
under complement, intersection, and downward closure that contains a given
finite set of generators: the unions of cells of a tuned refinement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .atomgrid import AtomGrid
from .formulas import (
    And,
    Box,
    Const,
    Diamond,
    Formula,
    Implies,
    Not,
    Or,
    Var,
    subformulas,
    variables,
)
from .partition import Partition, TunedViolation, induced, tuned_violation
from .refine import RefinementTrace, refine_monotone
from .region import OrderKind, Region, empty_region, full


class UnboundVariable(ValueError):
    pass


class NotTuned(ValueError):
    def __init__(self, violation: TunedViolation):
        super().__init__(
            f"partition is not tuned: cell {violation.source} sees cell "
            f"{violation.target} only partially (witness {violation.witness})"
        )
        self.violation = violation


class NotCompatible(ValueError):
    """The partition does not refine the valuation's membership classes."""

    def __init__(self, var: str, cell: int, witness: Region):
        super().__init__(f"cell {cell} straddles the region of variable {var!r}")
        self.var = var
        self.cell = cell
        self.witness = witness


@dataclass
class Valuation:
    dim: int
    order: OrderKind
    vars: dict[str, Region] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, r in self.vars.items():
            if r.dim != self.dim:
                raise ValueError(f"region of variable {name!r} has the wrong dimension")

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "order": self.order.value,
            "vars": {name: r.to_json() for name, r in sorted(self.vars.items())},
        }

    @classmethod
    def from_json(cls, obj: object) -> "Valuation":
        if not isinstance(obj, dict):
            raise ValueError("valuation must be a JSON object")
        dim = obj.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"valuation field 'dim' must be a positive integer, got {dim!r}")
        order = OrderKind.from_json(obj.get("order", "le"))
        raw = obj.get("vars", {})
        if not isinstance(raw, dict):
            raise ValueError("valuation field 'vars' must be an object")
        regions = {name: Region.from_json(r) for name, r in raw.items()}
        return cls(dim, order, regions)


def truth_region(f: Formula, val: Valuation) -> Region:
    """Exact truth set of a formula on the infinite frame."""
    memo: dict[Formula, Region] = {}

    def ev(node: Formula) -> Region:
        cached = memo.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Var):
            try:
                r = val.vars[node.name]
            except KeyError:
                raise UnboundVariable(f"variable {node.name!r} has no region") from None
        elif isinstance(node, Const):
            r = full(val.dim) if node.value else empty_region(val.dim)
        elif isinstance(node, Not):
            r = ev(node.sub).complement()
        elif isinstance(node, And):
            r = ev(node.left).intersect(ev(node.right))
        elif isinstance(node, Or):
            r = ev(node.left).union(ev(node.right))
        elif isinstance(node, Implies):
            r = ev(node.left).complement().union(ev(node.right))
        elif isinstance(node, Diamond):
            r = ev(node.sub).downset(val.order)
        elif isinstance(node, Box):
            r = ev(node.sub).complement().downset(val.order).complement()
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[node] = r
        return r

    return ev(f)


@dataclass(frozen=True)
class QuotientFrame:
    """Finite frame whose worlds are the cells of a tuned partition."""

    dim: int
    order: OrderKind
    cells: tuple[Region, ...]
    edges: frozenset[tuple[int, int]]
    valuation: Mapping[str, frozenset[int]]

    @property
    def world_count(self) -> int:
        return len(self.cells)

    def to_json(self) -> dict:
        return {
            "worlds": self.world_count,
            "edges": sorted(list(e) for e in self.edges),
            "val": {
                name: sorted(worlds) for name, worlds in sorted(self.valuation.items())
            },
            "cells": [c.to_json() for c in self.cells],
        }


def quotient_frame(p: Partition, order: OrderKind, val: Valuation) -> QuotientFrame:
    """Quotient of the frame by a tuned partition compatible with the valuation.

    World i reaches world j when some point of cell i sees a point of
    cell j; tunedness upgrades that to all points of cell i.
    """
    violation = tuned_violation(p, order)
    if violation is not None:
        raise NotTuned(violation)
    grid = AtomGrid.for_regions(p.dim, (p.carrier, *p.cells, *val.vars.values()))
    owner = np.full(grid.size, -1, dtype=np.int32)
    for i, cell in enumerate(p.cells):
        owner[grid.region_bool(cell).ravel()] = i
    owned = owner >= 0
    sizes = np.bincount(owner[owned], minlength=p.size)
    val_map: dict[str, frozenset[int]] = {}
    for name in sorted(val.vars):
        flat = grid.region_bool(val.vars[name]).ravel()
        cov = np.bincount(owner[flat & owned], minlength=p.size)
        partial = np.flatnonzero((cov > 0) & (cov < sizes))
        if partial.size:
            i = int(partial[0])
            witness = p.cells[i].intersect(val.vars[name])
            raise NotCompatible(name, i, witness)
        val_map[name] = frozenset(int(i) for i in np.flatnonzero(cov == sizes))
    edges = set()
    for j in range(p.size):
        down = grid.region_bool(p.cells[j].downset(order)).ravel()
        for i in np.unique(owner[down & owned]):
            edges.add((int(i), j))
    return QuotientFrame(p.dim, order, tuple(p.cells), frozenset(edges), val_map)


def mc_finite(qf: QuotientFrame, f: Formula) -> frozenset[int]:
    """Worlds of the quotient frame satisfying the formula."""
    succ: dict[int, tuple[int, ...]] = {
        i: tuple(sorted(j for (a, j) in qf.edges if a == i))
        for i in range(qf.world_count)
    }
    everything = frozenset(range(qf.world_count))
    memo: dict[Formula, frozenset[int]] = {}

    def ev(node: Formula) -> frozenset[int]:
        cached = memo.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Var):
            if node.name not in qf.valuation:
                raise UnboundVariable(f"variable {node.name!r} not interpreted in the frame")
            s = qf.valuation[node.name]
        elif isinstance(node, Const):
            s = everything if node.value else frozenset()
        elif isinstance(node, Not):
            s = everything - ev(node.sub)
        elif isinstance(node, And):
            s = ev(node.left) & ev(node.right)
        elif isinstance(node, Or):
            s = ev(node.left) | ev(node.right)
        elif isinstance(node, Implies):
            s = (everything - ev(node.left)) | ev(node.right)
        elif isinstance(node, Diamond):
            sub = ev(node.sub)
            s = frozenset(i for i in everything if any(j in sub for j in succ[i]))
        elif isinstance(node, Box):
            sub = ev(node.sub)
            s = frozenset(i for i in everything if all(j in sub for j in succ[i]))
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[node] = s
        return s

    return ev(f)


class TruthLemmaFailure(RuntimeError):
    """The quotient and the symbolic semantics disagreed; indicates a bug."""


@dataclass(frozen=True)
class FiltrationReport:
    dim: int
    order: OrderKind
    cells_input: int
    cells_refined: int
    world_count: int
    edge_count: int
    truth: Region
    globally_true: bool
    subformula_count: int
    trace: RefinementTrace

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "order": self.order.value,
            "cells_input": self.cells_input,
            "cells_refined": self.cells_refined,
            "worlds": self.world_count,
            "edges": self.edge_count,
            "truth_region": self.truth.to_json(),
            "globally_true": self.globally_true,
            "subformulas": self.subformula_count,
            "trace": self.trace.to_json(),
        }


def filtration_pipeline(f: Formula, val: Valuation) -> FiltrationReport:
    """Build the tuned quotient for a formula and verify it is truth-preserving.

    For every subformula, the union of satisfying cells in the quotient must
    equal the symbolic truth region; a mismatch raises TruthLemmaFailure.
    """
    missing = variables(f) - set(val.vars)
    if missing:
        raise UnboundVariable(f"variables with no region: {sorted(missing)}")
    base = induced(full(val.dim), [val.vars[name] for name in sorted(val.vars)])
    refined, trace = refine_monotone(base)
    qf = quotient_frame(refined, val.order, val)
    for sub in subformulas(f):
        symbolic = truth_region(sub, val)
        sat = mc_finite(qf, sub)
        quotient = empty_region(val.dim)
        for i in sorted(sat):
            quotient = quotient.union(qf.cells[i])
        if not symbolic.equal(quotient):
            raise TruthLemmaFailure(
                f"quotient disagrees with the frame semantics on {sub}"
            )
    truth = truth_region(f, val)
    return FiltrationReport(
        dim=val.dim,
        order=val.order,
        cells_input=base.size,
        cells_refined=refined.size,
        world_count=qf.world_count,
        edge_count=len(qf.edges),
        truth=truth.normalize(),
        globally_true=truth.equal(full(val.dim)),
        subformula_count=len(subformulas(f)),
        trace=trace,
    )


# -- finitely generated subalgebras -----------------------------------------------


class TooManyAtoms(ValueError):
    pass


@dataclass(frozen=True)
class SubalgebraResult:
    """Finite closed family containing the generators, as unions of atoms."""

    order: OrderKind
    atoms: Partition
    generator_atoms: tuple[frozenset[int], ...]
    down_atoms: tuple[frozenset[int], ...]
    trace: RefinementTrace

    @property
    def atom_count(self) -> int:
        return self.atoms.size

    @property
    def element_count(self) -> int:
        return 1 << self.atom_count

    def region_of(self, atom_set: frozenset[int]) -> Region:
        out = empty_region(self.atoms.dim)
        for i in sorted(atom_set):
            out = out.union(self.atoms.cells[i])
        return out

    def downset_of(self, atom_set: frozenset[int]) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for i in atom_set:
            out |= self.down_atoms[i]
        return out

    def to_json(self) -> dict:
        return {
            "order": self.order.value,
            "atom_count": self.atom_count,
            "element_count": self.element_count,
            "atoms": self.atoms.to_json(),
            "generator_atoms": [sorted(s) for s in self.generator_atoms],
        }


def generate_subalgebra(
    generators: Sequence[Region],
    order: OrderKind,
    dim: Optional[int] = None,
    max_atoms: int = 16,
) -> SubalgebraResult:
    """Close finitely many regions under complement, intersection, and downset.

    The tuned refinement of the membership classes of the generators yields
    atoms whose unions form a family closed under all three operations; the
    generators decompose exactly into atoms.  Exactness of the downset step
    is verified atom by atom, which is what makes the family's closure a
    checked fact rather than an assumption.
    """
    generators = list(generators)
    if dim is None:
        if not generators:
            raise ValueError("dim is required when there are no generators")
        dim = generators[0].dim
    for g in generators:
        if g.dim != dim:
            raise ValueError("generators must share a dimension")
    base = induced(full(dim), generators)
    atoms, trace = refine_monotone(base)
    if atoms.size > max_atoms:
        raise TooManyAtoms(
            f"{atoms.size} atoms would give 2**{atoms.size} elements; raise max_atoms to allow"
        )
    grid = AtomGrid.for_regions(dim, (*atoms.cells, *generators))
    owner = np.full(grid.size, -1, dtype=np.int32)
    for i, cell in enumerate(atoms.cells):
        owner[grid.region_bool(cell).ravel()] = i
    sizes = np.bincount(owner[owner >= 0], minlength=atoms.size)

    def decompose(r: Region, what: str) -> frozenset[int]:
        flat = grid.region_bool(r).ravel()
        cov = np.bincount(owner[flat & (owner >= 0)], minlength=atoms.size)
        if ((cov > 0) & (cov < sizes)).any():
            raise RuntimeError(f"{what} is not a union of atoms")
        if int(cov.sum()) != int(np.count_nonzero(flat)):
            raise RuntimeError(f"{what} leaks outside the atom partition")
        return frozenset(int(i) for i in np.flatnonzero(cov == sizes))

    generator_atoms = tuple(decompose(g, f"generator {k}") for k, g in enumerate(generators))
    down_atoms = tuple(
        decompose(cell.downset(order), f"downset of atom {j}")
        for j, cell in enumerate(atoms.cells)
    )
    return SubalgebraResult(order, atoms, generator_atoms, down_atoms, trace)

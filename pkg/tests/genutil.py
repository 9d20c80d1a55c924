"""Seeded random generators shared by the unit and acceptance tests."""
from __future__ import annotations

import random

from boxmodal import (
    Box,
    Interval,
    OMEGA,
    OrderKind,
    Partition,
    Region,
    Valuation,
    make_fibered,
)
from boxmodal.formulas import (
    And,
    Box as BoxF,
    Const,
    Diamond,
    Formula,
    Implies,
    Not,
    Or,
    Var,
)
from boxmodal.randgen import InfeasibleParameters, gen_random


def random_region(rng: random.Random, dim: int, max_const: int, max_boxes: int = 3) -> Region:
    boxes = []
    for _ in range(rng.randint(0, max_boxes)):
        ivs = []
        for _ in range(dim):
            lo = rng.randint(0, max_const)
            if rng.random() < 0.4:
                hi = OMEGA
            else:
                hi = rng.randint(lo, max_const)
            ivs.append(Interval(lo, hi))
        boxes.append(Box(tuple(ivs)))
    return Region(dim, tuple(boxes))


def random_partition(rng: random.Random, n: int, cells: int, max_const: int) -> Partition:
    """gen_random with the cell count clamped to what the thresholds allow."""
    cap = (min(3, max(1, max_const)) + 1) ** n
    cells = min(cells, cap)
    seed = rng.randrange(1 << 30)
    for _ in range(256):
        try:
            return gen_random(n, cells, max_const, seed)
        except InfeasibleParameters:
            seed = (seed + 1000003) % (1 << 30)
    raise AssertionError("could not build a feasible random partition")


def random_formula(rng: random.Random, names: list[str], depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.15:
            return Const(rng.random() < 0.5)
        return Var(rng.choice(names))
    pick = rng.randrange(6)
    if pick == 0:
        return Not(random_formula(rng, names, depth - 1))
    if pick == 1:
        return Diamond(random_formula(rng, names, depth - 1))
    if pick == 2:
        return BoxF(random_formula(rng, names, depth - 1))
    left = random_formula(rng, names, depth - 1)
    right = random_formula(rng, names, depth - 1)
    if pick == 3:
        return And(left, right)
    if pick == 4:
        return Or(left, right)
    return Implies(left, right)


def random_valuation(
    rng: random.Random, dim: int, names: list[str], max_const: int, order: OrderKind
) -> Valuation:
    return Valuation(
        dim, order, {name: random_region(rng, dim, max_const) for name in names}
    )


def random_fibered(rng: random.Random, dim: int, n_worlds: int):
    worlds = [chr(ord("a") + i) for i in range(n_worlds)]
    edges = [
        (g, h) for g in worlds for h in worlds if rng.random() < 0.5
    ]
    fibers = [
        random_partition(rng, dim, rng.randint(1, 3), rng.randint(0, 4))
        for _ in worlds
    ]
    return make_fibered(worlds, edges, fibers)

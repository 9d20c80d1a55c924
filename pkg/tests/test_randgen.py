"""The seeded partition generator: pinned regressions and parameter policy."""
from __future__ import annotations

import json

import pytest

from boxmodal import OMEGA, full
from boxmodal.randgen import InfeasibleParameters, gen_random


def test_pinned_line_case():
    p = gen_random(1, 2, 3, seed=7)
    assert json.dumps(p.to_json(), sort_keys=True) == json.dumps(
        {
            "dim": 1,
            "carrier": "full",
            "cells": [
                {"dim": 1, "boxes": [[[0, 0]]]},
                {"dim": 1, "boxes": [[[1, None]]]},
            ],
        },
        sort_keys=True,
    )
    assert all(c.max_constant() <= 3 for c in p.cells)


def test_single_cell_is_full_grid():
    for n in (1, 2, 3):
        p = gen_random(n, 1, 5, seed=11)
        assert p.size == 1
        assert p.cells[0].equal(full(n))


def test_zero_constants_give_face_atoms():
    p = gen_random(2, 3, 0, seed=7)
    # With no room for thresholds above 1, every cell is a union of the four
    # corner atoms [0,0]/[1,w) per coordinate.
    for cell in p.cells:
        for b in cell.boxes:
            for iv in b.intervals:
                assert (iv.lo, iv.hi) in ((0, 0), (1, OMEGA), (0, OMEGA))


def test_determinism():
    a = gen_random(2, 4, 6, seed=99)
    b = gen_random(2, 4, 6, seed=99)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    c = gen_random(2, 4, 6, seed=100)
    assert json.dumps(a.to_json()) != json.dumps(c.to_json())


def test_parameter_validation():
    with pytest.raises(InfeasibleParameters):
        gen_random(4, 2, 3, seed=0)
    with pytest.raises(InfeasibleParameters):
        gen_random(2, 9, 3, seed=0)
    with pytest.raises(InfeasibleParameters):
        gen_random(2, 2, 9, seed=0)
    with pytest.raises(InfeasibleParameters):
        gen_random(1, 8, 0, seed=0)


def test_outputs_are_valid_partitions():
    from boxmodal import Partition

    for seed in range(10):
        try:
            p = gen_random(2, 4, 5, seed=seed)
        except InfeasibleParameters:
            continue
        # Rebuild through full validation.
        Partition.from_json(p.to_json())

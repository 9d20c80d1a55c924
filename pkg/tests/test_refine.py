"""The monotone refiner: pinned traces, soundness, determinism, products."""
from __future__ import annotations

import json
import random

import pytest

from boxmodal import (
    OMEGA,
    OrderKind,
    PartitionError,
    box,
    cofinal_threshold,
    extend_from_quadrant,
    full,
    is_monotone,
    is_tuned,
    make_fibered,
    make_partition,
    point_region,
    product_refines,
    product_tuned,
    refine_monotone,
    refine_monotone_1d,
    refine_product_finite,
    refines,
    region,
    restrict,
    upper_quadrant,
)

from genutil import random_fibered, random_partition

LE = OrderKind.REFLEXIVE
LT = OrderKind.STRICT


def cells_equal(p, expected):
    assert p.size == len(expected)
    assert all(a.equal(b) for a, b in zip(p.cells, expected))


class TestLine:
    def test_example(self):
        p = make_partition(
            full(1), [region(box(0), box(2)), point_region(1), upper_quadrant(1, 3)]
        )
        q = refine_monotone_1d(p)
        cells_equal(
            q,
            [point_region(0), point_region(1), point_region(2), upper_quadrant(1, 3)],
        )

    def test_all_infinite_unchanged(self):
        p = make_partition(full(1), [full(1)])
        assert refine_monotone_1d(p) is p
        evens_like = make_partition(
            full(1), [region(box(0), box((2, OMEGA))), point_region(1)]
        )
        # Cell {1} is finite, so this one is refined.
        assert refine_monotone_1d(evens_like) is not evens_like

    def test_infinite_cell_loses_head(self):
        p = make_partition(full(1), [point_region(5), point_region(5).complement()])
        q = refine_monotone_1d(p)
        cells_equal(
            q,
            [point_region(k) for k in range(6)] + [upper_quadrant(1, 6)],
        )

    def test_output_tuned_both_orders(self):
        p = make_partition(
            full(1), [region(box(0), box(2)), point_region(1), upper_quadrant(1, 3)]
        )
        q = refine_monotone_1d(p)
        assert is_monotone(q)
        assert is_tuned(q, LE) and is_tuned(q, LT)


class TestThreshold:
    def test_origin(self):
        origin = point_region(0, 0)
        p = make_partition(full(2), [origin, origin.complement()])
        assert cofinal_threshold(p) == 1

    def test_all_cofinal(self):
        assert cofinal_threshold(make_partition(full(2), [full(2)])) == 0

    def test_box_cell(self):
        cell = region(box((0, 3), (0, 5)))
        p = make_partition(full(2), [cell, cell.complement()])
        # The bounded cell still meets [3, w)^2 but not [4, w)^2.
        assert cell.intersect(upper_quadrant(2, 3)).is_empty() is False
        assert cell.intersect(upper_quadrant(2, 4)).is_empty() is True
        assert cofinal_threshold(p) == 4


class TestExtend:
    def test_origin_example(self):
        origin = point_region(0, 0)
        coarse = make_partition(full(2), [origin, origin.complement()])
        inner = make_partition(upper_quadrant(2, 1), [upper_quadrant(2, 1)])
        out = extend_from_quadrant(coarse, inner)
        cells_equal(
            out,
            [
                origin,
                region(box(0, (1, OMEGA))),
                region(box((1, OMEGA), 0)),
                upper_quadrant(2, 1),
            ],
        )

    def test_trivial_coarse(self):
        coarse = make_partition(full(2), [full(2)])
        inner = make_partition(upper_quadrant(2, 1), [upper_quadrant(2, 1)])
        out = extend_from_quadrant(coarse, inner)
        cells_equal(
            out,
            [
                point_region(0, 0),
                region(box(0, (1, OMEGA))),
                region(box((1, OMEGA), 0)),
                upper_quadrant(2, 1),
            ],
        )

    def test_line(self):
        coarse = make_partition(full(1), [full(1)])
        inner = make_partition(upper_quadrant(1, 1), [upper_quadrant(1, 1)])
        out = extend_from_quadrant(coarse, inner)
        cells_equal(out, [point_region(0), upper_quadrant(1, 1)])

    def test_keeps_inner_cells(self):
        rng = random.Random(3)
        p = random_partition(rng, 2, 3, 3)
        q, _ = refine_monotone(p)
        inner = restrict(q, upper_quadrant(2, 1))
        # Building up from a refined quadrant keeps its cells verbatim.
        out = extend_from_quadrant(p, inner)
        for cell in inner.cells:
            assert any(cell.equal(c) for c in out.cells)

    def test_precondition_violations(self):
        origin = point_region(0, 0)
        coarse = make_partition(full(2), [origin, origin.complement()])
        not_inner = make_partition(full(2), [full(2)])
        with pytest.raises(PartitionError):
            extend_from_quadrant(coarse, not_inner)


class TestRefine:
    def test_pinned_origin(self):
        origin = point_region(0, 0)
        p = make_partition(full(2), [origin, origin.complement()])
        q, trace = refine_monotone(p)
        cells_equal(
            q,
            [
                origin,
                region(box(0, (1, OMEGA))),
                region(box((1, OMEGA), 0)),
                upper_quadrant(2, 1),
            ],
        )
        assert trace.k0 == 1
        assert len(trace.steps) == 1

    def test_full_unchanged(self):
        for n in (1, 2, 3):
            p = make_partition(full(n), [full(n)])
            q, trace = refine_monotone(p)
            assert q.size == 1
            assert trace.k0 in (0, None)
            assert not trace.steps

    def test_stripes(self):
        a = region(box((0, 1), (0, OMEGA)))
        p = make_partition(full(2), [a, a.complement()])
        q, trace = refine_monotone(p)
        assert refines(q, p)
        assert is_monotone(q)
        assert is_tuned(q, LE) and is_tuned(q, LT)
        assert trace.k0 == 2

    def test_trace_structure(self):
        rng = random.Random(11)
        for n in (2, 3):
            p = random_partition(rng, n, 3, 3)
            q, trace = refine_monotone(p)
            assert trace.dim == n
            assert len(trace.steps) == trace.k0
            for step in trace.steps:
                assert len(step.faces) == 2**n - 1
            assert trace.depth() <= n
            assert trace.cells_in == p.size
            assert trace.cells_out == q.size

    def test_determinism(self):
        rng = random.Random(21)
        p = random_partition(rng, 2, 4, 5)
        q1, t1 = refine_monotone(p)
        q2, t2 = refine_monotone(p)
        assert json.dumps(t1.to_json(), sort_keys=True) == json.dumps(
            t2.to_json(), sort_keys=True
        )
        assert json.dumps(q1.to_json(), sort_keys=True) == json.dumps(
            q2.to_json(), sort_keys=True
        )

    def test_soundness_small_corpus(self):
        rng = random.Random(2024)
        for n in (1, 2):
            for _ in range(10):
                p = random_partition(rng, n, rng.randint(1, 4), rng.randint(0, 5))
                q, _ = refine_monotone(p)
                assert refines(q, p)
                assert is_monotone(q)
                assert is_tuned(q, LE)
                assert is_tuned(q, LT)

    def test_rejects_subcarrier(self):
        p = make_partition(upper_quadrant(2, 1), [upper_quadrant(2, 1)])
        with pytest.raises(PartitionError):
            refine_monotone(p)


class TestProduct:
    def test_spec_example(self):
        fib_a = make_partition(full(1), [full(1)])
        fib_b = make_partition(
            full(1), [region(box(0), box(2)), point_region(1), upper_quadrant(1, 3)]
        )
        fp = make_fibered(["a", "b"], [("a", "b")], [fib_a, fib_b])
        out, _ = refine_product_finite(fp, LE)
        assert out.fibers[0].size == 4
        assert sum(f.size for f in out.fibers) == 8
        cells_equal(
            out.fibers[0],
            [point_region(0), point_region(1), point_region(2), upper_quadrant(1, 3)],
        )
        assert product_refines(out, fp)
        assert product_tuned(out, LE)

    def test_single_world_no_edges(self):
        fp = make_fibered(["a"], [], [make_partition(full(2), [full(2)])])
        out, _ = refine_product_finite(fp, LE)
        assert out.fibers[0].size == 1
        assert product_tuned(out, LE)

    def test_reflexive_point_world(self):
        origin = point_region(0, 0)
        p = make_partition(full(2), [origin, origin.complement()])
        fp = make_fibered(["a"], [("a", "a")], [p])
        out, _ = refine_product_finite(fp, LE)
        q, _ = refine_monotone(p)
        assert out.fibers[0].size == q.size
        assert all(a.equal(b) for a, b in zip(out.fibers[0].cells, q.cells))
        assert product_tuned(out, LE)

    def test_random_products(self):
        rng = random.Random(77)
        for _ in range(5):
            fp = random_fibered(rng, rng.randint(1, 2), rng.randint(2, 3))
            for order in (LE, LT):
                out, _ = refine_product_finite(fp, order)
                assert product_refines(out, fp)
                assert product_tuned(out, order)

    def test_json_roundtrip(self):
        rng = random.Random(13)
        fp = random_fibered(rng, 2, 2)
        from boxmodal import FiberedPartition

        back = FiberedPartition.from_json(fp.to_json())
        assert back.worlds == fp.worlds
        assert back.edges == fp.edges
        for f1, f2 in zip(back.fibers, fp.fibers):
            assert f1.size == f2.size
            assert all(a.equal(b) for a, b in zip(f1.cells, f2.cells))

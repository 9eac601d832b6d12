"""Weighted edit distance: examples, oracle equivalence, transform properties."""

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from melplag.align import CostParams, edge_weight, edit_distance, substitution_cost
from melplag.encode import Clip, Element
from melplag.errors import EmptyClipError, InvalidParamsError


def clip(*elements: Element, piece_id: str = "p", start: int = 0) -> Clip:
    return Clip(piece_id, start, tuple(elements))


def el(dpitch: int, dlogdur: float = 0.0, downbeat: bool = False) -> Element:
    return Element(dpitch, dlogdur, downbeat)


UNIT = CostParams()
RAW = CostParams(normalize_by_length=False)


class TestSubstitutionCost:
    def test_identical_elements_free(self):
        assert substitution_cost(el(3, 0.5, True), el(3, 0.5, True), UNIT) == 0.0

    def test_pitch_difference(self):
        assert substitution_cost(el(2), el(3), UNIT) == 1.0

    def test_downbeat_pair_doubles(self):
        assert substitution_cost(el(2, downbeat=True), el(3, downbeat=True), UNIT) == 2.0

    def test_single_downbeat_no_penalty(self):
        assert substitution_cost(el(2, downbeat=True), el(3), UNIT) == 1.0
        assert substitution_cost(el(2), el(3, downbeat=True), UNIT) == 1.0

    def test_duration_channel(self):
        assert substitution_cost(el(0, 1.5), el(0, -0.5), UNIT) == 2.0

    def test_scales(self):
        p = CostParams(pitch_scale=0.5, dur_scale=2.0)
        assert substitution_cost(el(2, 1.0), el(4, 0.0), p) == 0.5 * 2 + 2.0 * 1

    def test_binary_mismatch(self):
        p = CostParams(binary_mismatch=True)
        assert substitution_cost(el(2), el(9), p) == 1.0
        assert substitution_cost(el(2), el(2), p) == 0.0
        both_down = CostParams(binary_mismatch=True, k_down=3.0)
        assert substitution_cost(el(2, downbeat=True), el(9, downbeat=True), both_down) == 3.0

    def test_symmetric(self):
        rng = random.Random(7)
        for _ in range(50):
            x = el(rng.randint(-12, 12), rng.choice([-1.0, 0.0, 0.585]), rng.random() < 0.5)
            y = el(rng.randint(-12, 12), rng.choice([-1.0, 0.0, 0.585]), rng.random() < 0.5)
            assert substitution_cost(x, y, UNIT) == substitution_cost(y, x, UNIT)


class TestCostParamsValidation:
    def test_k_down_below_one(self):
        with pytest.raises(InvalidParamsError):
            CostParams(k_down=0.5)

    @pytest.mark.parametrize("field", ["c_ins", "c_del", "pitch_scale", "dur_scale"])
    def test_nonpositive_costs(self, field):
        with pytest.raises(InvalidParamsError):
            CostParams(**{field: 0.0})


def oracle_distance(a, b, p: CostParams) -> float:
    """Plain recursion over the edit rules, no memoization, no normalization."""

    def rec(i, j):
        if i == 0:
            return j * p.c_ins
        if j == 0:
            return i * p.c_del
        x, y = a[i - 1], b[j - 1]
        if x.dpitch == y.dpitch and x.dlogdur == y.dlogdur:
            return rec(i - 1, j - 1)
        return min(
            rec(i - 1, j) + p.c_del,
            rec(i, j - 1) + p.c_ins,
            rec(i - 1, j - 1) + substitution_cost(x, y, p),
        )

    return rec(len(a), len(b))


def random_elements(rng: random.Random, n: int) -> list[Element]:
    return [
        Element(rng.randint(-6, 6), rng.choice([-1.0, -0.585, 0.0, 0.585, 1.0]), rng.random() < 0.4)
        for _ in range(n)
    ]


class TestEditDistance:
    def test_equal_clips_zero(self):
        c = clip(el(1), el(-2, 1.0, True), el(0))
        assert edit_distance(c, c, RAW) == 0.0
        assert edit_distance(c, c, UNIT) == 0.0

    def test_two_deletions(self):
        u = clip(el(1), el(5), el(-3))
        w = clip(el(1))
        assert edit_distance(u, w, RAW) == 2.0

    def test_normalized_by_longer_length(self):
        u = clip(el(1), el(5), el(-3))
        w = clip(el(1))
        assert edit_distance(u, w, UNIT) == pytest.approx(2.0 / 3.0)

    def test_empty_clip_rejected(self):
        u = clip(el(1))
        empty = Clip("p", 0, ())
        with pytest.raises(EmptyClipError):
            edit_distance(u, empty, UNIT)
        with pytest.raises(EmptyClipError):
            edit_distance(empty, u, UNIT)

    def test_copy_ignores_downbeat_flag(self):
        u = clip(el(2, 0.0, True))
        w = clip(el(2, 0.0, False))
        assert edit_distance(u, w, RAW) == 0.0

    def test_matches_recursive_oracle(self):
        rng = random.Random(2024)
        for _ in range(300):
            a = random_elements(rng, rng.randint(1, 5))
            b = random_elements(rng, rng.randint(1, 5))
            p = CostParams(
                k_down=rng.choice([1.0, 2.0, 3.5]),
                c_ins=rng.choice([0.5, 1.0, 2.0]),
                c_del=rng.choice([0.5, 1.0, 2.0]),
                pitch_scale=rng.choice([0.5, 1.0]),
                dur_scale=rng.choice([1.0, 2.0]),
                normalize_by_length=False,
                binary_mismatch=rng.random() < 0.3,
            )
            got = edit_distance(Clip("a", 0, tuple(a)), Clip("b", 0, tuple(b)), p)
            assert got == oracle_distance(a, b, p)

    def test_symmetric_when_ins_equals_del(self):
        rng = random.Random(11)
        for _ in range(100):
            u = Clip("a", 0, tuple(random_elements(rng, rng.randint(1, 6))))
            w = Clip("b", 0, tuple(random_elements(rng, rng.randint(1, 6))))
            assert edit_distance(u, w, UNIT) == edit_distance(w, u, UNIT)

    def test_zero_iff_equal_content(self):
        rng = random.Random(13)
        for _ in range(100):
            u_el = random_elements(rng, rng.randint(1, 5))
            w_el = random_elements(rng, rng.randint(1, 5))
            d = edit_distance(Clip("a", 0, tuple(u_el)), Clip("b", 0, tuple(w_el)), RAW)
            same = [(e.dpitch, e.dlogdur) for e in u_el] == [(e.dpitch, e.dlogdur) for e in w_el]
            assert (d == 0.0) == same

    def test_not_a_metric(self):
        """Downbeat weighting breaks the triangle inequality.

        Equality ignores downbeat flags, so x copies to its off-beat twin y
        for free, and y substitutes to z at coefficient 1. The direct
        x-to-z substitution pays the downbeat coefficient.
        """
        p = CostParams(k_down=2.0, normalize_by_length=False)
        x = clip(el(0, 0.0, True))
        y = clip(el(0, 0.0, False))
        z = clip(el(1, 0.0, True))
        d_xy = edit_distance(x, y, p)
        d_yz = edit_distance(y, z, p)
        d_xz = edit_distance(x, z, p)
        assert d_xy == 0.0
        assert d_yz == 1.0
        assert d_xz == 2.0
        assert d_xz > d_xy + d_yz


class TestEdgeWeight:
    def test_zero_distance_is_exactly_one(self):
        assert edge_weight(0.0) == 1.0

    def test_ln3_example(self):
        assert edge_weight(math.log(3)) == pytest.approx(math.log(4 / 3) / math.log(2))
        assert edge_weight(math.log(3)) == pytest.approx(0.4150, abs=1e-4)

    def test_large_distance_vanishes(self):
        assert 0.0 < edge_weight(20.0) < 1e-8

    @given(st.floats(0.0, 100.0))
    def test_bounds(self, d):
        w = edge_weight(d)
        assert 0.0 < w <= 1.0

    @given(st.floats(0.0, 50.0), st.floats(1e-9, 10.0))
    def test_strictly_decreasing(self, d, gap):
        assert edge_weight(d) > edge_weight(d + gap)

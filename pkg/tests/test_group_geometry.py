#!/usr/bin/env python3
"""
Unit tests for group families, length functions and ball geometry
"""

import math
import unittest
import sys
import os
from fractions import Fraction

import numpy as np

# Add project root to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from group_geometry import (
    Combinator, FiniteTowerGroup, LengthFunction, RootsOfUnityGroup, Scale, SolenoidGroup,
    combine, doubling_report, enumerate_ball, hausdorff_subgroup_distance, length_F, length_H, level,
    validate_tower,
)
from helpers.exceptions import BudgetExceededError, CombinatorError, ImproperLengthError
from tests.oracles import solenoid_ball_count

BUDGET = 10 ** 6
GROUPS = (SolenoidGroup(2, 2), SolenoidGroup(3, 1), RootsOfUnityGroup((2, 4, 8)))


class TestSolenoidElements(unittest.TestCase):
    """Exact arithmetic on ℤ[1/p]^d"""

    def setUp(self):
        self.group = SolenoidGroup(2, 1)

    def test_multiply_adds_coordinates(self):
        g = self.group.element('1/2') * self.group.element('1/4')
        self.assertEqual(g, self.group.element('3/4'))
        self.assertEqual(g.level, 2)

    def test_inverse_and_identity(self):
        g = self.group.element('5/8')
        self.assertTrue((g * g.inverse()).is_identity)
        self.assertEqual(self.group.identity().level, 0)

    def test_integer_has_level_zero(self):
        self.assertEqual(self.group.element('4/2').level, 0)
        self.assertEqual(self.group.fractions(self.group.element(3)), (Fraction(3),))

    def test_rejects_foreign_denominator(self):
        with self.assertRaises(ValueError):
            self.group.element('1/3')

    def test_rejects_composite_p(self):
        with self.assertRaises(ValueError):
            SolenoidGroup(4)

    def test_nearest_in_level_rounds_half_to_even(self):
        nearest = self.group.nearest_in_level(self.group.element('1/4'), 1)
        self.assertEqual(nearest, self.group.identity())

    def test_to_list_is_json_friendly(self):
        group = SolenoidGroup(3, 2)
        self.assertEqual(group.element('1/3', 2).to_list(), ['1/3', '2'])


class TestRootsOfUnity(unittest.TestCase):
    """ℤ(α)×ℤ and the finite tower group"""

    def setUp(self):
        self.group = RootsOfUnityGroup((2, 4, 8))

    def test_element_reduces_to_minimal_level(self):
        g = self.group.element(2, 2)
        self.assertEqual(g.coords, (1, 1, 0))
        self.assertEqual(g.level, 1)

    def test_multiply_adds_angles_and_integers(self):
        g = self.group.element(1, 2, 1)
        h = self.group.element(1, 2, -1)
        self.assertEqual(g * h, self.group.element(1, 1, 0))

    def test_square_of_minus_one_is_identity(self):
        minus_one = self.group.element(1, 1)
        self.assertTrue((minus_one * minus_one).is_identity)

    def test_level_past_prefix_raises(self):
        with self.assertRaises(BudgetExceededError):
            self.group.element(1, 4)

    def test_validate_tower(self):
        self.assertEqual(validate_tower((2, 6, 12)), (1, 2, 6, 12))
        with self.assertRaises(ValueError):
            validate_tower((2, 8))

    def test_finite_group_enumerates_all_roots(self):
        group = FiniteTowerGroup((2, 4))
        self.assertEqual(len(list(group.elements())), len(group))
        self.assertEqual(group.top_level, 2)


class TestScalesAndLengths(unittest.TestCase):
    """Scale maps, combinators and the standard length"""

    def test_geometric_max_level(self):
        scale = Scale.geometric(2)
        self.assertEqual(scale.max_level_within(7.9), 2)
        self.assertEqual(scale.max_level_within(0.5), -1)

    def test_tower_prefix_limit(self):
        scale = Scale.tower((1, 2, 4))
        self.assertEqual(scale.max_level_within(7), 2)
        with self.assertRaises(BudgetExceededError):
            scale.max_level_within(8)

    def test_level_length_is_zero_only_at_identity(self):
        group = SolenoidGroup(3)
        f = LengthFunction.f(group)
        self.assertEqual(f(group.identity()), 0.0)
        self.assertEqual(f(group.element(5)), 1.0)
        self.assertEqual(f(group.element('1/9')), 9.0)

    def test_standard_length_uses_max(self):
        group = SolenoidGroup(2)
        length = LengthFunction.standard(group)
        self.assertEqual(length(group.element('3/2')), 2.0)
        self.assertEqual(length(group.element(3)), 3.0)

    def test_lp_combinator_rejects_small_exponent(self):
        with self.assertRaises(CombinatorError):
            Combinator.lp(0.5)

    def test_custom_combinator_rejects_non_norm(self):
        with self.assertRaises(CombinatorError):
            Combinator.custom("square", lambda a, b: a * a + b * b)

    def test_combinator_by_name(self):
        self.assertAlmostEqual(Combinator.by_name("l2")(3.0, 4.0), 5.0)
        self.assertEqual(Combinator.by_name("sum")(1.0, 2.0), 3.0)

    def test_module_level_length_functions(self):
        group = SolenoidGroup(2, 2)
        g = group.element('3/4', '-1/2')
        self.assertEqual(level(g), 2)
        self.assertEqual(length_F(g), 4.0)
        self.assertEqual(length_F(g, Scale.geometric(3)), 9.0)
        self.assertEqual(length_F(group.identity()), 0.0)
        self.assertEqual(length_H(g), 0.75)
        self.assertEqual(length_H(g, "l1"), 1.25)
        summed = combine(LengthFunction.h(group), LengthFunction.f(group), "sum")
        self.assertEqual(summed(g), 4.75)

    def test_h_length_alone_is_not_proper(self):
        self.assertFalse(LengthFunction.h(SolenoidGroup(2)).is_proper)
        self.assertTrue(LengthFunction.standard(SolenoidGroup(2)).is_proper)


class TestBalls(unittest.TestCase):
    """Ball enumeration, doubling and Hausdorff distances"""

    def test_solenoid_ball_counts(self):
        group = SolenoidGroup(2, 2)
        length = LengthFunction.standard(group, "max")
        for n in range(3):
            ball = enumerate_ball(length, 2 ** n, BUDGET)
            self.assertEqual(len(ball), solenoid_ball_count(2, 2, n))
        self.assertEqual([solenoid_ball_count(2, 2, n) for n in range(3)], [9, 81, 1089])

    def test_ball_is_sorted_by_level(self):
        length = LengthFunction.standard(SolenoidGroup(2))
        ball = enumerate_ball(length, 2, BUDGET)
        levels = [g.level for g in ball]
        self.assertEqual(levels, sorted(levels))
        self.assertEqual(ball.index(ball.elements[3]), 3)

    def test_ball_rows(self):
        group = SolenoidGroup(2)
        ball = enumerate_ball(LengthFunction.standard(group), 1, BUDGET)
        rows = ball.rows()
        self.assertEqual(len(rows), 3)
        identity_row = rows[ball.index(group.identity())]
        self.assertEqual(identity_row["length_f"], 0.0)
        self.assertEqual(identity_row["length"], 0.0)

    def test_restricted_to_level(self):
        length = LengthFunction.standard(SolenoidGroup(2))
        ball = enumerate_ball(length, 4, BUDGET)
        restricted = ball.restricted_to_level(0)
        self.assertTrue(all(g.level == 0 for g in restricted))
        self.assertEqual(len(restricted), 9)

    def test_budget_exceeded(self):
        length = LengthFunction.standard(SolenoidGroup(2, 2))
        with self.assertRaises(BudgetExceededError) as ctx:
            enumerate_ball(length, 2, budget=10)
        self.assertEqual(ctx.exception.required, 81)

    def test_improper_length_raises(self):
        with self.assertRaises(ImproperLengthError):
            enumerate_ball(LengthFunction.h(SolenoidGroup(2)), 1.0, BUDGET)

    def test_negative_radius_raises(self):
        with self.assertRaises(ValueError):
            enumerate_ball(LengthFunction.standard(SolenoidGroup(2)), -1.0, BUDGET)

    def test_solenoid_doubling_within_bound(self):
        length = LengthFunction.standard(SolenoidGroup(2))
        report = doubling_report(length, 2.0, [1, 2, 4], bound=4.0, budget=BUDGET)
        self.assertEqual([(row.inner, row.outer) for row in report.rows], [(3, 9), (9, 33), (33, 129)])
        self.assertTrue(report.within_bound)
        self.assertAlmostEqual(report.max_ratio, 129 / 33)

    def test_bunce_deddens_ball_counts(self):
        length = LengthFunction.standard(RootsOfUnityGroup((2, 4, 8)))
        counts = [len(enumerate_ball(length, r, BUDGET)) for r in (1, 2, 4, 8)]
        self.assertEqual(counts, [3, 5, 20, 104])
        report = doubling_report(length, 2.0, [4], budget=BUDGET)
        self.assertAlmostEqual(report.max_ratio, 5.2)

    def test_tower_level_length_counts(self):
        alpha = (2, 6, 12)
        length = LengthFunction.f(RootsOfUnityGroup(alpha, integer_factor=False))
        for a in alpha:
            self.assertEqual(len(enumerate_ball(length, a, BUDGET)), a)
        report = doubling_report(length, 2.0, [1, 3, 6], budget=BUDGET)
        self.assertEqual([row.ratio for row in report.rows], [2.0, 3.0, 2.0])

    def test_doubling_rejects_small_theta(self):
        with self.assertRaises(ValueError):
            doubling_report(LengthFunction.standard(SolenoidGroup(2)), 1.0, [1])

    def test_solenoid_hausdorff_matches_closed_form(self):
        length = LengthFunction.standard(SolenoidGroup(2))
        report = hausdorff_subgroup_distance(length, 1, 8, BUDGET)
        self.assertEqual(report.exact, 0.25)
        self.assertAlmostEqual(report.enumerated, 0.25)
        self.assertEqual(report.window_size, 129)

    def test_bunce_deddens_hausdorff_closed_form(self):
        group = RootsOfUnityGroup((2, 4, 8))
        self.assertAlmostEqual(group.exact_hausdorff(1), math.pi / 2)
        self.assertIsNone(group.exact_hausdorff(1, "chordal"))

    def test_bunce_deddens_hausdorff_matches_enumeration(self):
        length = LengthFunction.standard(RootsOfUnityGroup((2, 4, 8, 16)))
        for n in (1, 2, 3):
            report = hausdorff_subgroup_distance(length, n, 16, BUDGET)
            self.assertAlmostEqual(report.exact, math.pi / 2 ** n)
            self.assertAlmostEqual(report.enumerated, report.exact)

    def test_balls_are_symmetric_and_nested(self):
        for group in GROUPS:
            length = LengthFunction.standard(group)
            previous = None
            for r in (1, 2, 4):
                ball = enumerate_ball(length, r, BUDGET)
                self.assertTrue(all(g.inverse() in ball for g in ball))
                if previous is not None:
                    self.assertTrue(all(g in ball for g in previous))
                previous = ball

    def test_membership_agrees_with_length(self):
        rng = np.random.default_rng(3)
        for group in GROUPS:
            length = LengthFunction.standard(group)
            r = 4
            ball = enumerate_ball(length, r, BUDGET)
            cap = max(g.level for g in ball)
            for _ in range(500):
                g = group.random_element(rng, cap + 1, r)
                self.assertEqual(g in ball, length(g) <= r, msg=f"{group.key} {g.to_list()}")


class TestLengthAxioms(unittest.TestCase):
    """Subadditivity, symmetry and the ultrametric level length on random elements"""

    def test_random_triples(self):
        rng = np.random.default_rng(17)
        slack = 1e-12
        for group in GROUPS:
            length = LengthFunction.standard(group)
            f = length.f_part
            for _ in range(500):
                g, h = group.random_element(rng, 3, 4.0), group.random_element(rng, 3, 4.0)
                self.assertLessEqual(length(g * h), length(g) + length(h) + slack)
                self.assertAlmostEqual(length(g.inverse()), length(g), delta=slack)
                self.assertLessEqual(f(g * h), max(f(g), f(h)) + slack)


if __name__ == '__main__':
    unittest.main()

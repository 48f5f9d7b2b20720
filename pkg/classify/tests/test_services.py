import numpy as np
import pytest
from django.test import SimpleTestCase

from classify.models import ConfigTag
from classify.services import (
    classify_points,
    classify_triple,
    is_r_pick,
    lies_in_geodesic,
    lies_in_real_disk,
    lies_in_totally_real,
    projected_area,
)
from core.exceptions import DegenerateTriple, HypothesisFailed, WrongDimension
from core.tests.factories import bergman_gram, random_automorphism, random_points, random_unitary
from embedding.services import embed
from hyperbolic.models import PointSet
from hyperbolic.services import apply, gram_from_points
from invariants.services import angular_invariant, capital_delta, delta

RIGHT_ANGLE_FIRST = PointSet([[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]])
RIGHT_ANGLE_SECOND = PointSet([[0.0, 0.0], [0.4, 0.0], [0.4, 0.5]])
COMPLEX_LINE = PointSet([[0.0], [0.5], [0.3j]])


class ClassifyTripleTest(SimpleTestCase):
    def test_geodesic(self):
        """Test a real colinear triple"""
        self.assertEqual(classify_triple(PointSet([[0.0], [0.3], [0.6]])).tag, ConfigTag.GEODESIC)

    def test_right_angle_at_first(self):
        """Test orthogonal directions from the first point"""
        result = classify_triple(RIGHT_ANGLE_FIRST)
        self.assertEqual(result.tag, ConfigTag.RIGHT_ANGLE_AT_FIRST)
        self.assertLessEqual(result.witnesses['right_angle_first'], 1e-7)

    def test_right_angle_at_second(self):
        """Test a right angle at the second point"""
        self.assertEqual(classify_triple(RIGHT_ANGLE_SECOND).tag, ConfigTag.RIGHT_ANGLE_AT_SECOND)

    def test_complex_geodesic(self):
        """Test a non-real triple in the disk"""
        result = classify_triple(COMPLEX_LINE)
        self.assertEqual(result.tag, ConfigTag.COMPLEX_GEODESIC)
        self.assertGreater(result.witnesses['angular'], 1e-3)

    def test_real_geodesic_disk(self):
        """Test a real triple with no right angle"""
        X = PointSet([[0.0, 0.0], [0.3, 0.0], [0.2, 0.4]])
        self.assertEqual(classify_triple(X).tag, ConfigTag.REAL_GEODESIC_DISK)

    def test_generic(self):
        """Test random points of the two-ball"""
        X = random_points(np.random.default_rng(1), 3, 2, separation=0.2)
        self.assertEqual(classify_triple(X).tag, ConfigTag.GENERIC)

    def test_coincident_points(self):
        """Test DegenerateTriple on repeated points"""
        with self.assertRaises(DegenerateTriple):
            classify_triple(PointSet([[0.1], [0.1], [0.4]]))

    def test_needs_three_points(self):
        """Test WrongDimension for other sizes"""
        with self.assertRaises(WrongDimension):
            classify_triple(PointSet([[0.1], [0.4]]))

    def test_automorphism_invariance(self):
        """Test that moving a triple keeps its class"""
        rng = np.random.default_rng(2)
        for X in (RIGHT_ANGLE_FIRST, RIGHT_ANGLE_SECOND):
            Y = apply(random_automorphism(rng, 2), X)
            self.assertEqual(classify_triple(Y).tag, classify_triple(X).tag)
        Y = apply(random_automorphism(rng, 2), PointSet(COMPLEX_LINE.padded(2)))
        self.assertEqual(classify_triple(Y).tag, ConfigTag.COMPLEX_GEODESIC)


class CapitalDeltaDictionaryTest(SimpleTestCase):
    """Delta(1; 2, 3) simplifies on the special classes"""

    def check(self, X, expected):
        G = gram_from_points(X)
        self.assertAlmostEqual(capital_delta(G, 0, 1, 2), expected(G), delta=1e-8)

    def test_right_angle_at_first(self):
        """Test Delta = delta_12 delta_13 / delta_23"""
        self.check(RIGHT_ANGLE_FIRST, lambda G: delta(G, 0, 1) * delta(G, 0, 2) / delta(G, 1, 2))

    def test_right_angle_at_second(self):
        """Test Delta = delta_12"""
        self.check(RIGHT_ANGLE_SECOND, lambda G: delta(G, 0, 1))

    def test_complex_geodesic(self):
        """Test Delta = delta_12 delta_13"""
        self.check(COMPLEX_LINE, lambda G: delta(G, 0, 1) * delta(G, 0, 2))

    def test_complex_geodesic_embeds_in_the_disk(self):
        """Test that complex geodesic triples embed one-dimensionally"""
        self.assertEqual(embed(gram_from_points(COMPLEX_LINE)).d, 1)
        self.assertEqual(embed(gram_from_points(RIGHT_ANGLE_FIRST)).d, 2)


class LargeSetTest(SimpleTestCase):
    def test_geodesic_sets(self):
        """Test the geodesic test on colinear and non-colinear sets"""
        self.assertTrue(lies_in_geodesic(PointSet([[0.0], [0.1]])))
        self.assertTrue(lies_in_geodesic(PointSet([[0.0], [0.2], [0.4], [0.6]])))
        self.assertFalse(lies_in_geodesic(PointSet([[0, 0], [0.5, 0], [0, 0.5], [0.3, 0]])))

    def test_totally_real(self):
        """Test real sets, their unitary images and a non-real set"""
        rng = np.random.default_rng(3)
        X = PointSet(rng.uniform(-0.4, 0.4, size=(5, 3)))
        self.assertTrue(lies_in_totally_real(X))
        U = random_unitary(rng, 3)
        self.assertTrue(lies_in_totally_real(PointSet(X.points @ U.T)))
        self.assertFalse(lies_in_totally_real(COMPLEX_LINE))

    def test_real_disk(self):
        """Test real planar sets against three orthogonal directions"""
        planar = PointSet([[0.0, 0.0], [0.3, 0.0], [0.1, 0.4], [-0.2, 0.3]])
        self.assertTrue(lies_in_real_disk(planar))
        self.assertTrue(lies_in_real_disk(PointSet([[0.1, 0.2, 0.3], [0.3, 0.0, 0.1], [-0.2, 0.1, 0.0]])))
        spread = PointSet([[0, 0, 0], [0.5, 0, 0], [0, 0.5, 0], [0, 0, 0.5]])
        self.assertTrue(lies_in_totally_real(spread))
        self.assertFalse(lies_in_real_disk(spread))

    def test_survey(self):
        """Test the class counts over every triple"""
        survey = classify_points(PointSet([[0, 0], [0.5, 0], [0, 0.5], [0.3, 0]]))
        self.assertEqual(sum(survey.counts.values()), 4)
        self.assertEqual(survey.classes[(0, 1, 3)].tag, ConfigTag.GEODESIC)
        self.assertIn('1,2,3', survey.as_dict()['triples'])


class RPickTest(SimpleTestCase):
    def test_disk_points(self):
        """Test that Drury-Arveson spaces on the disk are r-Pick"""
        self.assertTrue(is_r_pick(gram_from_points(PointSet([[0.0], [0.2], [0.5], [0.7j]]))))

    def test_two_ball_points(self):
        """Test that a generic triple of the two-ball is not"""
        X = random_points(np.random.default_rng(4), 3, 2, separation=0.2)
        self.assertFalse(is_r_pick(gram_from_points(X)))

    def test_hypothesis(self):
        """Test that spaces without the CPP are refused"""
        with self.assertRaises(HypothesisFailed):
            is_r_pick(bergman_gram(0.5))


class ProjectedAreaTest(SimpleTestCase):
    def test_real_triple(self):
        """Test zero area for real triples"""
        self.assertAlmostEqual(projected_area(PointSet([[0.0, 0.0], [0.3, 0.0], [0.2, 0.4]])), 0.0, places=10)

    def test_coincident_projections(self):
        """Test zero area when two vertices project to the same point"""
        self.assertEqual(projected_area(RIGHT_ANGLE_FIRST), 0.0)

    def test_disk_triangle(self):
        """Test the area of a triangle of the disk against |A|"""
        G = gram_from_points(COMPLEX_LINE)
        self.assertAlmostEqual(projected_area(COMPLEX_LINE), abs(angular_invariant(G, 0, 1, 2)), delta=1e-8)

    @pytest.mark.slow
    def test_random_triples(self):
        """Test area = |A_123| on 300 random triples of the two-ball"""
        rng = np.random.default_rng(300)
        for _ in range(300):
            X = random_points(rng, 3, 2, separation=0.05)
            A = angular_invariant(gram_from_points(X), 0, 1, 2)
            self.assertAlmostEqual(projected_area(X), abs(A), delta=1e-8)

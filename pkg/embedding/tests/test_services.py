import time

import numpy as np
import pytest
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from core.exceptions import Infeasible, NotCPP, ValidationFailure
from core.services import basepoint_rescale, rescaling_equivalent, validate_gram
from core.tests.factories import (
    arg_example_gram,
    bergman_gram,
    random_automorphism,
    random_points,
    real_points,
)
from embedding.services import (
    embed,
    embed_from_invariants,
    embed_with_certificate,
    gram_from_invariants,
)
from hyperbolic.models import PointSet
from hyperbolic.services import apply, congruent, gram_from_points, normal_form
from invariants.models import InvariantData
from invariants.services import delta, has_cpp, invariant_data, lf, three_point_inequality


class EmbedTest(SimpleTestCase):
    def test_two_dimensional_space(self):
        """Test that [[1, 1], [1, 2]] embeds as {0, sqrt(1/2)}"""
        X = embed(validate_gram(np.array([[1.0, 1.0], [1.0, 2.0]])))
        self.assertEqual((X.n, X.d), (2, 1))
        assert_allclose(X.points[:, 0], [0.0, np.sqrt(0.5)], atol=1e-14)

    def test_single_kernel(self):
        """Test that a one point space embeds at the origin"""
        X = embed(validate_gram(np.array([[3.0]])))
        assert_allclose(X.points, [[0.0]])

    def test_normal_form_round_trip(self):
        """Test that a configuration in normal form is recovered exactly"""
        X = PointSet([[0.0, 0.0], [0.4, 0.0], [0.1 + 0.2j, 0.3]])
        assert_allclose(embed(gram_from_points(X)).points, X.points, atol=1e-12)

    def test_rescaled_gram(self):
        """Test that rescaling the Gram matrix does not move the embedding"""
        rng = np.random.default_rng(3)
        X = normal_form(random_points(rng, 5, 3)).points
        G = gram_from_points(apply(random_automorphism(rng, 3), X))
        assert_allclose(embed(G).points, X.points, atol=1e-8)

    def test_dimension_is_at_most_n_minus_one(self):
        """Test that points in a complex line embed in the disk"""
        X = real_points(np.random.default_rng(5), 4, 1)
        self.assertEqual(embed(gram_from_points(X)).d, 1)

    def test_certificate(self):
        """Test the residual and condition reported with the points"""
        G = gram_from_points(random_points(np.random.default_rng(6), 4, 3))
        result = embed_with_certificate(G)
        self.assertTrue(result.cpp)
        self.assertLess(result.residual, 1e-10)
        self.assertGreaterEqual(result.condition, 1.0)
        self.assertTrue(rescaling_equivalent(gram_from_points(result.points), G))

    def test_bergman_space_is_not_embeddable(self):
        """Test NotCPP with a certificate on the Bergman triple"""
        with self.assertRaises(NotCPP) as cm:
            embed(bergman_gram(0.5))
        self.assertFalse(cm.exception.certificate['cpp'])
        self.assertIsNotNone(cm.exception.certificate['violating_r'])

    def test_arg_example_is_not_embeddable(self):
        """Test NotCPP when cos A_123 < 0"""
        with self.assertRaises(NotCPP):
            embed(arg_example_gram(2, 0.9))


class InvariantsEmbeddingTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(12)
        self.X = random_points(self.rng, 4, 3)

    def test_gram_from_invariants(self):
        """Test that J(X) rebuilds the basepoint rescaling of the Gram matrix"""
        G = gram_from_points(self.X)
        rebuilt = gram_from_invariants(invariant_data(G))
        assert_allclose(rebuilt.K, basepoint_rescale(G, 0).K, atol=1e-9)

    def test_embed_from_invariants_is_congruent(self):
        """Test that J(X) determines X up to automorphisms"""
        Y = embed_from_invariants(invariant_data(gram_from_points(self.X)))
        self.assertTrue(congruent(self.X, Y))

    def test_invalid_deltas(self):
        """Test Infeasible when the deltas violate positivity"""
        J = InvariantData(n=3, deltas={(0, 1): 0.1, (0, 2): 0.1, (1, 2): 0.9}, angulars={(0, 1, 2): 0.0})
        with self.assertRaises(Infeasible):
            gram_from_invariants(J)

    def test_obtuse_angle(self):
        """Test Infeasible when cos A_123 < 0"""
        J = invariant_data(arg_example_gram(2, 0.9))
        with self.assertRaises(Infeasible):
            embed_from_invariants(J)


def random_three_point_gram(rng):
    """A valid 3x3 Gram with unit diagonal and random entries, or None"""
    K = np.eye(3, dtype=complex)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        K[i, j] = rng.uniform(0.2, 0.95) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        K[j, i] = np.conj(K[i, j])
    try:
        return validate_gram(K)
    except ValidationFailure:
        return None



@pytest.mark.slow
class ThreePointEquivalenceTest(SimpleTestCase):
    def test_verdicts_agree(self):
        """Test embed, the MQ test, the angle inequality and LF <= delta_13 on 1000 triples"""
        rng = np.random.default_rng(1000)
        checked = agreeing = 0
        while checked < 1000:
            G = random_three_point_gram(rng)
            if G is None:
                continue
            footprint, d13 = lf(G, 0, 1, 2), delta(G, 0, 2)
            if abs(footprint - d13) < 1e-9:
                continue
            checked += 1
            try:
                embed(G)
                embedded = True
            except NotCPP:
                embedded = False
            verdicts = {embedded, bool(has_cpp(G)), three_point_inequality(G), footprint <= d13}
            agreeing += len(verdicts) == 1
        self.assertEqual(agreeing, 1000)


@pytest.mark.slow
class RoundTripTest(SimpleTestCase):
    def test_normal_form_sets(self):
        """Test embed(gram_from_points(X)) = X for 200 normal form configurations"""
        rng = np.random.default_rng(200)
        start = time.perf_counter()
        for _ in range(200):
            n = int(rng.integers(2, 11))
            d = int(rng.integers(1, n))
            X = normal_form(random_points(rng, n, d, separation=0.1)).points
            Y = embed(gram_from_points(X))
            width = max(X.d, Y.d)
            assert_allclose(Y.padded(width), X.padded(width), atol=1e-8)
        self.assertLess(time.perf_counter() - start, 10.0)

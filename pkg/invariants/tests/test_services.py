import itertools

import numpy as np
import pytest
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from core.exceptions import InvalidInput, NotCPP, WrongDimension
from core.models import RescalingMap
from core.services import rescale
from core.tests.factories import (
    OMEGA,
    arg_example_gram,
    bergman_gram,
    random_gamma,
    random_points,
)
from hyperbolic.models import PointSet
from hyperbolic.services import gram_from_points
from invariants.services import (
    angular_invariant,
    capital_delta,
    capital_delta_closed_form,
    capital_delta_interpolation,
    capital_delta_lf_form,
    cocycle_defect,
    delta,
    delta_matrix,
    frak_d,
    has_cpp,
    invariant_data,
    lf,
    mq_matrix,
    pi_half_holds,
    projection_delta,
    sti_holds,
    sti_margins,
    three_point_inequality,
    three_point_margin,
)


class DeltaTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.G = gram_from_points(random_points(self.rng, 5, 3))

    def test_delta_matrix_matches_pairwise(self):
        """Test that the delta matrix agrees with the pairwise function"""
        D = delta_matrix(self.G)
        for i, j in itertools.combinations(range(5), 2):
            self.assertAlmostEqual(D[i, j], delta(self.G, i, j), places=12)
        assert_allclose(D, D.T)
        assert_allclose(np.diag(D), 0.0)

    def test_projection_form(self):
        """Test that delta equals the distance of the rank one projections"""
        for i, j in itertools.combinations(range(5), 2):
            self.assertAlmostEqual(projection_delta(self.G, i, j), delta(self.G, i, j), places=9)

    def test_two_point_value(self):
        """Test delta on the space [[1, 1], [1, 2]]"""
        G = gram_from_points(PointSet(np.array([[0.0], [np.sqrt(0.5)]])))
        self.assertAlmostEqual(delta(G, 0, 1), np.sqrt(0.5), places=12)


class AngularInvariantTest(SimpleTestCase):
    def test_arg_example_lambda_two(self):
        """Test A_123 = 6 arg(1 - 0.9 omega) for the second power of the Szego kernel"""
        G = arg_example_gram(2, 0.9)
        A = angular_invariant(G, 0, 1, 2)
        self.assertAlmostEqual(A, 6 * np.angle(1 - 0.9 * OMEGA), delta=1e-10)
        self.assertLess(np.cos(A), 0)
        self.assertFalse(pi_half_holds(G))
        self.assertFalse(has_cpp(G))

    def test_arg_example_lambda_one(self):
        """Test the Szego kernel case, which has the complete Pick property"""
        G = arg_example_gram(1, 0.5)
        self.assertAlmostEqual(angular_invariant(G, 0, 1, 2), -1.00042, places=4)
        self.assertTrue(has_cpp(G))
        self.assertTrue(pi_half_holds(G))

    def test_real_points_have_zero_angle(self):
        """Test that real configurations have vanishing angular invariants"""
        G = gram_from_points(PointSet(np.array([[0.0, 0.0], [0.5, 0.0], [0.1, 0.4]])))
        self.assertAlmostEqual(angular_invariant(G, 0, 1, 2), 0.0, places=12)

    def test_antisymmetry(self):
        """Test that swapping two indices negates A"""
        G = gram_from_points(random_points(np.random.default_rng(3), 3, 2))
        self.assertAlmostEqual(angular_invariant(G, 0, 1, 2), -angular_invariant(G, 1, 0, 2), places=12)

    def test_requires_distinct_indices(self):
        """Test that repeated indices are rejected"""
        G = gram_from_points(random_points(np.random.default_rng(3), 3, 2))
        with self.assertRaises(InvalidInput):
            angular_invariant(G, 0, 0, 1)

    def test_cocycle_identity(self):
        """Test the cocycle identity on every 4-subset"""
        G = gram_from_points(random_points(np.random.default_rng(5), 6, 3))
        for quad in itertools.combinations(range(6), 4):
            self.assertLess(abs(cocycle_defect(G, *quad)), 1e-10)


class BergmanTest(SimpleTestCase):
    """The Bergman kernel at -r, 0, r violates the strong triangle inequality"""

    def test_delta_series(self):
        """Test delta_13 against its series 2 sqrt2 r - 4 sqrt2 r^3 + 7 sqrt2 r^5 at r = 0.1"""
        r = 0.1
        d13 = delta(bergman_gram(r), 0, 2)
        cubic = 2 * np.sqrt(2) * r - 4 * np.sqrt(2) * r**3
        self.assertLess(abs(d13 - (cubic + 7 * np.sqrt(2) * r**5)), 5e-6)
        self.assertLess(abs(d13 - cubic), 1.2e-4)

    def test_delta_closed_form(self):
        """Test delta_12^2 = r^2 (2 - r^2) at r = 0.5"""
        self.assertAlmostEqual(delta(bergman_gram(0.5), 0, 1) ** 2, 0.4375, places=12)

    def test_sti_fails_by_expected_margin(self):
        """Test that delta_13 exceeds the STI bound by about r^3 / sqrt2"""
        r = 0.1
        G = bergman_gram(r)
        d12, d23, d13 = delta(G, 0, 1), delta(G, 1, 2), delta(G, 0, 2)
        excess = d13 - (d12 + d23) / (1 + d12 * d23)
        self.assertGreater(excess, 0.8 * 0.5 * np.sqrt(2) * r**3)
        self.assertLess(excess, 1.2 * 0.5 * np.sqrt(2) * r**3)
        self.assertFalse(sti_holds(G, 1, 0, 2))
        self.assertTrue(all(m < 0 for m in sti_margins(G, 1, 0, 2)))

    def test_no_cpp(self):
        """Test that the certificate names a violating MQ matrix"""
        certificate = has_cpp(bergman_gram(0.5))
        self.assertFalse(certificate)
        self.assertIsNotNone(certificate.violating_r)
        self.assertLess(certificate.violating_eigenvalue, 0)
        self.assertFalse(certificate.as_dict()['cpp'])

    def test_frak_d_needs_cpp(self):
        """Test that the Delta data are refused without the CPP"""
        with self.assertRaises(NotCPP):
            frak_d(bergman_gram(0.5))


class PickSpaceInvariantsTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(17)
        self.G = gram_from_points(random_points(self.rng, 5, 3))

    def test_drury_arveson_has_cpp(self):
        """Test that every MQ matrix of a Drury-Arveson Gram is PSD"""
        certificate = has_cpp(self.G)
        self.assertTrue(certificate)
        self.assertEqual(sorted(certificate.as_dict()['mq_min_eigenvalues']), ['1', '2', '3', '4', '5'])

    def test_mq_matrix_shape(self):
        """Test the MQ matrix of a 5-point space"""
        MQ = mq_matrix(self.G, 2)
        self.assertEqual(MQ.M.shape, (4, 4))
        self.assertEqual(MQ.indices, (0, 1, 3, 4))
        assert_allclose(MQ.M, MQ.M.conj().T)
        assert_allclose(np.diag(MQ.M).real, [delta(self.G, 2, i) ** 2 for i in MQ.indices], atol=1e-12)

    def test_sti_holds(self):
        """Test the strong triangle inequality on every ordered triple"""
        for triple in itertools.permutations(range(5), 3):
            self.assertTrue(sti_holds(self.G, *triple))

    def test_invariant_data_count(self):
        """Test that J(X) has n(n-1)/2 deltas and (n-1)(n-2)/2 angles"""
        J = invariant_data(self.G)
        self.assertEqual(len(J.deltas), 10)
        self.assertEqual(len(J.angulars), 6)
        self.assertEqual(J.count, 16)

    def test_capital_delta_forms_agree(self):
        """Test the Cramer, closed, LF and interpolation forms of Delta"""
        for x, y, z in itertools.permutations(range(4), 3):
            expected = capital_delta_interpolation(self.G, x, y, z)
            self.assertAlmostEqual(capital_delta(self.G, x, y, z), expected, delta=1e-9)
            self.assertAlmostEqual(capital_delta_closed_form(self.G, x, y, z), expected, delta=1e-9)
            self.assertAlmostEqual(capital_delta_lf_form(self.G, x, y, z), expected, delta=1e-9)

    def test_capital_delta_chain(self):
        """Test Delta(x; y, z) <= min(delta_xy, delta_xz) on a CPP space"""
        for x, y, z in itertools.permutations(range(4), 3):
            cap = capital_delta(self.G, x, y, z)
            self.assertLessEqual(cap, min(delta(self.G, x, y), delta(self.G, x, z)) + 1e-12)

    def test_frak_d_keys(self):
        """Test the Delta data of a CPP space"""
        data = frak_d(self.G)
        self.assertEqual(len(data.capital_deltas), 6)
        self.assertIn((0, 1, 2), data.capital_deltas)


class ThreePointInequalityTest(SimpleTestCase):
    def test_ball_triples(self):
        """Test that triples of the ball satisfy the angle inequality"""
        rng = np.random.default_rng(17)
        for d in (1, 2, 3):
            G = gram_from_points(random_points(rng, 3, d))
            self.assertTrue(three_point_inequality(G))
            self.assertTrue(has_cpp(G))

    def test_spaces_without_cpp(self):
        """Test the Bergman triple and the obtuse angular example"""
        self.assertFalse(three_point_inequality(bergman_gram(0.5)))
        self.assertFalse(three_point_inequality(arg_example_gram(2, 0.9)))
        self.assertLess(three_point_margin(arg_example_gram(2, 0.9)), 0.0)

    def test_margin_from_moduli_and_angle(self):
        """Test the margin against the moduli and angle entered by hand"""
        G = bergman_gram(0.5)
        khat = np.abs(G.K) / np.sqrt(np.outer(G.diagonal, G.diagonal))
        a12, a23, a13 = khat[0, 1], khat[1, 2], khat[0, 2]
        expected = 2.0 * np.cos(angular_invariant(G, 0, 1, 2)) / (a12 * a23 * a13) - (
            1 / a12**2 + 1 / a23**2 + 1 / a13**2 - 1
        )
        self.assertAlmostEqual(three_point_margin(G), expected, places=10)

    def test_needs_three_points(self):
        """Test WrongDimension for larger spaces"""
        with self.assertRaises(WrongDimension):
            three_point_inequality(gram_from_points(random_points(np.random.default_rng(2), 4, 2)))


class RescalingInvarianceTest(SimpleTestCase):
    @pytest.mark.property
    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_invariants_survive_rescaling(self, seed):
        """Test that delta, A, LF, Delta and the CPP verdict ignore rescalings"""
        rng = np.random.default_rng(seed)
        G = gram_from_points(random_points(rng, 4, 2))
        H = rescale(G, RescalingMap(random_gamma(rng, 4)))
        assert_allclose(delta_matrix(H), delta_matrix(G), atol=1e-8)
        self.assertAlmostEqual(angular_invariant(H, 0, 1, 2), angular_invariant(G, 0, 1, 2), delta=1e-8)
        self.assertAlmostEqual(lf(H, 0, 1, 3), lf(G, 0, 1, 3), delta=1e-8)
        self.assertAlmostEqual(capital_delta(H, 1, 2, 3), capital_delta(G, 1, 2, 3), delta=1e-8)
        self.assertEqual(bool(has_cpp(H)), bool(has_cpp(G)))


@pytest.mark.slow
class CapitalDeltaAgreementTest(SimpleTestCase):
    def test_three_way_agreement(self):
        """Test Cramer, closed form and interpolation on 500 random CPP spaces"""
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(500):
            n = int(rng.integers(3, 7))
            G = gram_from_points(random_points(rng, n, int(rng.integers(1, 4)), separation=0.1))
            x, y, z = rng.choice(n, size=3, replace=False)
            oracle = capital_delta_interpolation(G, x, y, z)
            for value in (capital_delta(G, x, y, z), capital_delta_closed_form(G, x, y, z)):
                worst = max(worst, abs(value - oracle) / oracle)
        self.assertLessEqual(worst, 1e-9)

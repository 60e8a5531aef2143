import itertools
import random
import unittest
from fractions import Fraction

from shtukacrit.affweyl import admissible_set, identity, is_straight, omega, translation
from shtukacrit.coweight import Coweight, dominance_leq
from shtukacrit.newton import (
    NewtonPoint,
    b_set,
    basic_point,
    newton_point_of,
    shapiro_product,
    validate_newton,
)
from tests.oracles import dominant_coweights, random_element

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


class TestNewtonPoint(unittest.TestCase):
    def test_validate(self):
        """Test the breakpoint condition."""
        self.assertTrue(validate_newton((HALF, HALF, 0)))
        self.assertFalse(validate_newton((Fraction(2, 3), THIRD, 0)))
        self.assertTrue(validate_newton((0, 0)))
        self.assertFalse(validate_newton((0, 1)))

    def test_construction(self):
        """Test that invalid slope sequences are refused."""
        nu = NewtonPoint(("1/2", "1/2"))
        self.assertTrue(nu.is_basic())
        self.assertEqual(nu.to_list(), ["1/2", "1/2"])
        with self.assertRaises(ValueError):
            NewtonPoint((Fraction(2, 3), THIRD, 0))

    def test_pairing(self):
        """Test ⟨ν, 2ρ⟩ = Σ_{i<j}(ν_i − ν_j)."""
        self.assertEqual(NewtonPoint((1, 0, -1)).pairing_2rho(), 4)
        self.assertEqual(NewtonPoint((HALF, HALF)).pairing_2rho(), 0)

    def test_newton_point_of(self):
        """Test cycle averages of t_v·w."""
        self.assertEqual(newton_point_of((3, 0, 0), (1, 2, 0)).slopes, (1, 1, 1))
        self.assertEqual(newton_point_of((1, 0, 2), (1, 0, 2)).slopes, (2, HALF, HALF))


class TestBSet(unittest.TestCase):
    """Test cases for B(GL_d, λ)."""

    def test_examples(self):
        """Test the Newton sets of small coweights."""
        self.assertEqual(
            b_set(Coweight((1, 0))), {NewtonPoint((1, 0)), NewtonPoint((HALF, HALF))}
        )
        self.assertEqual(b_set(Coweight((0, 0))), {NewtonPoint((0, 0))})
        self.assertEqual(
            b_set(Coweight((1, 0, 0))),
            {
                NewtonPoint((1, 0, 0)),
                NewtonPoint((HALF, HALF, 0)),
                NewtonPoint((THIRD, THIRD, THIRD)),
            },
        )

    def test_members_below_lambda(self):
        """Test that every member is dominated by λ and the basic point is least."""
        lam = Coweight((2, 0, -1))
        points = b_set(lam)
        basic = basic_point(lam)
        self.assertIn(basic, points)
        for nu in points:
            self.assertTrue(dominance_leq(nu.slopes, lam))
            self.assertTrue(dominance_leq(basic.slopes, nu.slopes))

    def test_basic_point(self):
        """Test the isoclinic point of a few coweights."""
        self.assertEqual(basic_point(Coweight((1, 0))).slopes, (HALF, HALF))
        self.assertEqual(basic_point(Coweight((1, 1))).slopes, (1, 1))
        self.assertEqual(basic_point(Coweight((1, 0, -1))).slopes, (0, 0, 0))

    def test_basic_point_is_least(self):
        """Test that the basic point and λ lie in B(λ) and the basic point is below every member."""
        for d in range(1, 5):
            for lam in dominant_coweights(d, -2, 2):
                with self.subTest(lam=lam):
                    points = b_set(lam)
                    basic = basic_point(lam)
                    self.assertIn(basic, points)
                    self.assertIn(NewtonPoint(lam), points)
                    for nu in points:
                        self.assertTrue(dominance_leq(basic.slopes, nu.slopes))

    def test_monotone_under_dominance(self):
        """Test that μ ⪯ λ implies B(μ) ⊆ B(λ)."""
        for d in (2, 3):
            points = {lam: b_set(lam) for lam in dominant_coweights(d, -2, 2)}
            for mu, lam in itertools.product(points, repeat=2):
                if dominance_leq(mu, lam):
                    self.assertLessEqual(points[mu], points[lam], (mu, lam))


class TestShapiroProduct(unittest.TestCase):
    def test_examples(self):
        """Test Newton points of cyclic products."""
        self.assertEqual(shapiro_product([omega(2), omega(2)]).slopes, (1, 1))
        self.assertEqual(shapiro_product([identity(3), identity(3)]).slopes, (0, 0, 0))
        self.assertEqual(
            shapiro_product([translation((1, 0)), translation((0, 1))]).slopes, (1, 1)
        )

    def test_rotation_invariance(self):
        """Test that rotating the tuple leaves the Newton point unchanged."""
        rng = random.Random(11)
        for _ in range(200):
            d = rng.choice((2, 3, 4))
            elements = [random_element(rng, d, 2) for _ in range(rng.randint(2, 4))]
            expected = shapiro_product(elements)
            for k in range(1, len(elements)):
                self.assertEqual(shapiro_product(elements[k:] + elements[:k]), expected)

    def test_straight_pairs_land_in_b_set(self):
        """Test that straight pairs from Adm(λ₁) × Adm(λ₂) give points of B(λ₁ + λ₂)."""
        for d in (2, 3):
            for lam1, lam2 in itertools.product(dominant_coweights(d, -1, 1), repeat=2):
                points = b_set(Coweight(a + b for a, b in zip(lam1, lam2)))
                adm1 = admissible_set(lam1).elements
                adm2 = admissible_set(lam2).elements
                for e1, e2 in itertools.product(adm1, adm2):
                    if is_straight([e1, e2]):
                        self.assertIn(shapiro_product([e1, e2]), points, (e1, e2))

    def test_empty(self):
        """Test that an empty tuple is rejected."""
        with self.assertRaises(ValueError):
            shapiro_product([])


if __name__ == "__main__":
    unittest.main()

import random
import unittest
from fractions import Fraction

from shtukacrit.errors import EmptyDenominatorSetError
from shtukacrit.exactq import (
    QModZClass,
    bracket_q,
    format_rational,
    lcm_denominators,
    to_rational,
)


class TestBracket(unittest.TestCase):
    """Test cases for the section ℚ/ℤ → [0, 1)."""

    def test_bracket_examples(self):
        """Test representatives of simple classes."""
        self.assertEqual(bracket_q(Fraction(1, 2)), Fraction(1, 2))
        self.assertEqual(bracket_q(Fraction(-1, 3)), Fraction(2, 3))
        self.assertEqual(bracket_q(2), 0)

    def test_bracket_is_periodic(self):
        """Test that shifting by an integer does not change the bracket."""
        rng = random.Random(7)
        for _ in range(1000):
            x = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
            n = rng.randint(-20, 20)
            self.assertEqual(bracket_q(x + n), bracket_q(x))
            self.assertTrue(0 <= bracket_q(x) < 1)

    def test_bracket_of_negation(self):
        """Test that [x] + [−x] is 0 exactly on integers and 1 otherwise."""
        rng = random.Random(11)
        for _ in range(300):
            x = Fraction(rng.randint(-30, 30), rng.randint(1, 6))
            total = bracket_q(x) + bracket_q(-x)
            self.assertEqual(total, 0 if x.denominator == 1 else 1)


class TestDenominators(unittest.TestCase):
    def test_lcm_examples(self):
        """Test the common denominator of a few sets."""
        self.assertEqual(lcm_denominators([Fraction(1, 2), Fraction(1, 3)]), 6)
        self.assertEqual(lcm_denominators([0]), 1)
        self.assertEqual(lcm_denominators([Fraction(3, 4), Fraction(1, 2)]), 4)

    def test_lcm_empty(self):
        """Test that an empty set is rejected."""
        with self.assertRaises(EmptyDenominatorSetError) as context:
            lcm_denominators([])
        self.assertEqual(str(context.exception), "empty denominator set")

    def test_lcm_ignores_integer_shifts(self):
        """Test invariance under adding integers to entries."""
        xs = [Fraction(1, 4), Fraction(5, 6)]
        self.assertEqual(lcm_denominators(xs), lcm_denominators([x + 3 for x in xs]))


class TestRationalParsing(unittest.TestCase):
    def test_to_rational_accepts_strings_and_ints(self):
        """Test parsing of "p/q" strings and plain integers."""
        self.assertEqual(to_rational("2/4"), Fraction(1, 2))
        self.assertEqual(to_rational("-3"), Fraction(-3))
        self.assertEqual(to_rational(5), Fraction(5))

    def test_to_rational_rejects_inexact_values(self):
        """Test that floats, bools, junk and zero denominators are rejected."""
        for bad in (0.5, True, "1/0", "half", None):
            with self.subTest(value=bad), self.assertRaises(ValueError):
                to_rational(bad)

    def test_format_rational(self):
        """Test the "p/q" and "n" renderings."""
        self.assertEqual(format_rational(Fraction(-1, 2)), "-1/2")
        self.assertEqual(format_rational(Fraction(4, 2)), "2")


class TestQModZClass(unittest.TestCase):
    def test_normalization_and_arithmetic(self):
        """Test that classes are normalized and add modulo ℤ."""
        half = QModZClass.of("3/2")
        self.assertEqual(half.representative, Fraction(1, 2))
        self.assertTrue((half + half).is_zero())
        self.assertEqual(-QModZClass.of("1/3"), QModZClass.of("2/3"))
        self.assertEqual(QModZClass.of("1/3").scale(2), QModZClass.of("-1/3"))

    def test_order(self):
        """Test torsion orders of a few classes."""
        self.assertEqual(QModZClass.of("1/2").order, 2)
        self.assertEqual(QModZClass.zero().order, 1)
        self.assertEqual(QModZClass.of("3/4").order, 4)
        self.assertEqual(str(QModZClass.of("-1/4")), "3/4")


if __name__ == "__main__":
    unittest.main()

import itertools
import random
import unittest
from fractions import Fraction

from shtukacrit.affweyl import (
    AffineElement,
    admissible_set,
    basic_element,
    bruhat_leq,
    check_adm_additivity,
    demazure,
    identity,
    is_straight,
    left_descents,
    length,
    lower_interval,
    newton_point,
    omega,
    omega_power,
    reduced_word,
    simple_reflection,
    translation,
)
from shtukacrit.coweight import Coweight, dominance_leq
from shtukacrit.newton import b_set, basic_point
from tests.oracles import (
    dominant_coweights,
    power_length_ratio,
    random_element,
    subword_below,
    word_length,
)


class TestGroupLaw(unittest.TestCase):
    """Test cases for multiplication in ℤ^d ⋊ S_d."""

    def test_inverse(self):
        """Test that e·e⁻¹ is the identity."""
        rng = random.Random(1)
        for _ in range(100):
            e = random_element(rng, 3)
            self.assertEqual(e * e.inverse(), identity(3))
            self.assertEqual(e.inverse() * e, identity(3))

    def test_associativity(self):
        """Test (ab)c = a(bc) on random triples."""
        rng = random.Random(2)
        for _ in range(100):
            a, b, c = (random_element(rng, 3) for _ in range(3))
            self.assertEqual((a * b) * c, a * (b * c))

    def test_omega_generates_center(self):
        """Test that ω^d is the central translation t_(1,…,1)."""
        self.assertEqual(omega_power(3, 3), translation((1, 1, 1)))
        self.assertEqual(omega_power(-1, 2) * omega(2), identity(2))

    def test_invalid_element(self):
        """Test that malformed elements are rejected."""
        with self.assertRaises(ValueError):
            AffineElement((0, 0), (0, 0))
        with self.assertRaises(ValueError):
            AffineElement((0,), (0, 1))
        with self.assertRaises(ValueError):
            simple_reflection(2, 2)

    def test_dict_form(self):
        """Test the one-indexed JSON form."""
        self.assertEqual(omega(2).to_dict(), {"v": [1, 0], "w": [2, 1]})
        self.assertEqual(AffineElement.from_dict({"v": [1, 0], "w": [2, 1]}), omega(2))
        with self.assertRaises(ValueError):
            AffineElement.from_dict({"v": [1, 0]})


class TestLength(unittest.TestCase):
    def test_examples(self):
        """Test lengths of translations and ω."""
        self.assertEqual(length(translation((1, 0))), 1)
        self.assertEqual(length(omega(2)), 0)
        self.assertEqual(length(translation((1, -1))), 2)
        for i in range(3):
            self.assertEqual(length(simple_reflection(i, 3)), 1)

    def test_matches_word_length(self):
        """Test the closed formula against breadth-first word search."""
        rng = random.Random(4)
        for d in (2, 3):
            for _ in range(40):
                e = random_element(rng, d)
                self.assertEqual(length(e), word_length(e), str(e))

    def test_subadditivity(self):
        """Test ℓ(ab) ≤ ℓ(a) + ℓ(b), with equality iff a ⋆ b = ab."""
        rng = random.Random(6)
        for _ in range(1000):
            d = rng.choice((2, 3))
            a, b = random_element(rng, d), random_element(rng, d)
            self.assertLessEqual(length(a * b), length(a) + length(b))
            additive = length(a * b) == length(a) + length(b)
            self.assertEqual(additive, demazure(a, b) == a * b)

    def test_reduced_word(self):
        """Test that reduced words multiply back to the element."""
        rng = random.Random(8)
        for _ in range(50):
            e = random_element(rng, 3)
            word, tau = reduced_word(e)
            self.assertEqual(len(word), length(e))
            self.assertEqual(length(tau), 0)
            product = identity(3)
            for i in word:
                product = product * simple_reflection(i, 3)
            self.assertEqual(product * tau, e)
            self.assertEqual(left_descents(e) == [], length(e) == 0)


class TestBruhat(unittest.TestCase):
    def test_examples(self):
        """Test a few comparisons in rank two."""
        self.assertTrue(bruhat_leq(identity(2), translation((1, -1))))
        self.assertTrue(bruhat_leq(omega(2), translation((1, 0))))
        self.assertFalse(bruhat_leq(translation((1, 0)), translation((1, -1))))

    def test_matches_subword_property(self):
        """Test the lifting recursion against subwords of a reduced word."""
        rng = random.Random(9)
        for _ in range(150):
            d = rng.choice((2, 3))
            b = random_element(rng, d)
            a = random_element(rng, d)
            a = a * omega_power(b.omega_component() - a.omega_component(), d)
            self.assertEqual(bruhat_leq(a, b), subword_below(a, b), f"{a} vs {b}")

    def test_demazure_is_maximum(self):
        """Test a ⋆ b = max{a·b′ : b′ ≤ b}."""
        rng = random.Random(10)
        for _ in range(30):
            a, b = random_element(rng, 2), random_element(rng, 2)
            products = [a * c for c in lower_interval([b])]
            top = max(products, key=length)
            self.assertEqual(length(demazure(a, b)), length(top))
            self.assertIn(demazure(a, b), products)
            for p in products:
                self.assertTrue(bruhat_leq(p, demazure(a, b)))


class TestAdmissibleSet(unittest.TestCase):
    """Test cases for Adm(λ)."""

    def test_sizes(self):
        """Test the admissible sets of small rank-two coweights."""
        self.assertEqual(admissible_set(Coweight((0, 0))).elements, {identity(2)})
        adm = admissible_set(Coweight((1, 0)))
        self.assertEqual(
            adm.elements, {translation((1, 0)), translation((0, 1)), omega(2)}
        )
        adm = admissible_set(Coweight((1, -1)))
        self.assertEqual(
            adm.elements,
            {
                translation((1, -1)),
                translation((-1, 1)),
                simple_reflection(0, 2),
                simple_reflection(1, 2),
                identity(2),
            },
        )

    def test_closure_and_coset(self):
        """Test that Adm(λ) is downward closed inside the coset of t_λ."""
        lam = Coweight((1, 0, -1))
        adm = admissible_set(lam)
        for top in adm.maximal():
            self.assertIn(top, adm)
        for e in adm.elements:
            self.assertEqual(e.omega_component(), 0)
            self.assertTrue(any(bruhat_leq(e, top) for top in adm.maximal()))
        self.assertEqual(adm.sorted_elements()[0], identity(3))

    def test_basic_element(self):
        """Test that the length-zero element of Adm(λ) is ω^deg λ."""
        self.assertEqual(basic_element(Coweight((1, 0))), omega(2))
        self.assertEqual(basic_element(Coweight((0, 0))), identity(2))
        self.assertEqual(basic_element(Coweight((1, 1))), translation((1, 1)))
        adm = admissible_set(Coweight((1, 0, 0)))
        self.assertEqual([e for e in adm.elements if length(e) == 0], [adm.basic()])

    def test_newton_points(self):
        """Test cycle-average Newton points."""
        self.assertEqual(newton_point(translation((1, 0))).slopes, (1, 0))
        self.assertEqual(
            newton_point(omega(2)).slopes, (Fraction(1, 2), Fraction(1, 2))
        )
        self.assertEqual(newton_point(identity(3)).slopes, (0, 0, 0))

    def test_newton_points_sweep(self):
        """Test Newton points over Adm(λ) for every λ of rank ≤ 3 with entries in [−2, 2]."""
        for d in (2, 3):
            for lam in dominant_coweights(d, -2, 2):
                with self.subTest(lam=lam):
                    straight = set()
                    for e in admissible_set(lam).elements:
                        nu = newton_point(e)
                        self.assertTrue(dominance_leq(nu.slopes, lam), str(e))
                        if is_straight([e]):
                            straight.add(nu)
                    self.assertEqual(straight, b_set(lam))
                    self.assertEqual(newton_point(basic_element(lam)), basic_point(lam))


class TestStraightness(unittest.TestCase):
    def test_examples(self):
        """Test straightness of short tuples."""
        self.assertTrue(is_straight([omega(2)]))
        self.assertFalse(is_straight([simple_reflection(1, 2)]))
        self.assertTrue(is_straight([omega(2), omega(2)]))
        self.assertTrue(is_straight([translation((1, 0)), translation((1, 0))]))
        self.assertFalse(is_straight([translation((1, 0)), translation((0, 1))]))

    def test_invalid_tuples(self):
        """Test rejection of empty tuples and non-transitive shifts."""
        with self.assertRaises(ValueError):
            is_straight([])
        with self.assertRaises(ValueError):
            is_straight([omega(2), omega(2)], delta=2)

    def test_matches_power_lengths(self):
        """Test the pairing criterion against ℓ(eⁿ) = n·ℓ(e) for n ≤ 6."""
        for d in (2, 3):
            for perm in itertools.permutations(range(d)):
                for v in itertools.product((-1, 0, 1), repeat=d):
                    e = AffineElement(v, perm)
                    power_straight = all(
                        power_length_ratio(e, n) == length(e) for n in range(1, 7)
                    )
                    self.assertEqual(is_straight([e]), power_straight, str(e))


class TestAdditivity(unittest.TestCase):
    def test_examples(self):
        """Test Adm(λ₁) ⋆ Adm(λ₂) = Adm(λ₁ + λ₂) on small cases."""
        outcome = check_adm_additivity(Coweight((1, 0)), Coweight((0, -1)))
        self.assertTrue(outcome.holds)
        self.assertEqual(outcome.right_size, 5)
        self.assertTrue(check_adm_additivity(Coweight((0, 0)), Coweight((1, 0))).holds)
        self.assertTrue(
            check_adm_additivity(Coweight((1, 0, 0)), Coweight((1, 0, 0))).holds
        )

    def test_small_entries_sweep(self):
        """Test every pair of coweights of rank 2 and 3 with entries in [−1, 1]."""
        for d in (2, 3):
            coweights = dominant_coweights(d, -1, 1)
            for lam1, lam2 in itertools.product(coweights, repeat=2):
                with self.subTest(lam1=lam1, lam2=lam2):
                    outcome = check_adm_additivity(lam1, lam2)
                    self.assertTrue(outcome.holds)
                    self.assertEqual(outcome.only_left, ())

    def test_rank_mismatch(self):
        """Test that coweights of different rank are rejected."""
        with self.assertRaises(ValueError):
            check_adm_additivity(Coweight((1, 0)), Coweight((1, 0, 0)))


if __name__ == "__main__":
    unittest.main()

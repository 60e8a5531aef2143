import math
import unittest

from shtukacrit.brauer import (
    AlgebraSpec,
    ExtensionPlace,
    ExtensionShape,
    LegAssignment,
    LegPosition,
    Place,
    invariant_after_base_change,
    ramification_locus,
    torsion_order,
    validate_algebra,
)
from shtukacrit.exactq import QModZClass


class TestPlace(unittest.TestCase):
    def test_place_from_dict(self):
        """Test reading a place from its JSON form."""
        place = Place.from_dict({"id": "x1", "deg": 2})
        self.assertEqual(place, Place("x1", 2))
        self.assertEqual(place.to_dict(), {"id": "x1", "deg": 2})

    def test_place_from_dict_rejects_unknown_keys(self):
        """Test that unknown and missing keys are reported."""
        with self.assertRaises(ValueError) as context:
            Place.from_dict({"id": "x1", "colour": "red"})
        self.assertIn("colour", str(context.exception))
        with self.assertRaises(ValueError):
            Place.from_dict({"deg": 1})

    def test_place_degree_positive(self):
        """Test that residue degrees below 1 are rejected."""
        with self.assertRaises(ValueError):
            Place("x1", 0)


class TestAlgebraSpec(unittest.TestCase):
    """Test cases for division algebras given by local invariants."""

    def setUp(self):
        """Set up a quaternion algebra ramified at two places."""
        self.quaternion = AlgebraSpec(2, {"x1": "1/2", "x2": "1/2"})

    def test_validate_ok(self):
        """Test that a valid quaternion algebra passes."""
        report = validate_algebra(self.quaternion)
        self.assertTrue(report.ok)
        self.assertEqual(report.violations, [])

    def test_validate_reciprocity(self):
        """Test that a non-zero invariant sum is reported."""
        report = validate_algebra(AlgebraSpec(2, {"x1": "1/2"}))
        self.assertFalse(report.ok)
        self.assertEqual(report.violations, ["invariant sum 1/2 ≢ 0"])

    def test_validate_index(self):
        """Test that the index must equal the lcm of the orders."""
        report = validate_algebra(AlgebraSpec(4, {"x1": "1/2", "x2": "1/2"}))
        self.assertEqual(report.violations, ["lcm of orders 2 ≠ 4"])

    def test_unlisted_invariant_is_zero(self):
        """Test lookups away from the support."""
        self.assertTrue(self.quaternion.invariant("x9").is_zero())
        self.assertEqual(self.quaternion.place("x1").degree, 1)

    def test_duplicate_places(self):
        """Test that duplicate place ids are rejected."""
        with self.assertRaises(ValueError):
            AlgebraSpec(2, {}, [Place("x1"), Place("x1", 2)])

    def test_from_dict(self):
        """Test reading an algebra, normalizing invariants on the way."""
        spec = AlgebraSpec.from_dict(
            {"d": 2, "places": [{"id": "x1", "deg": 3}], "invariants": {"x1": "3/2", "x2": "1/2"}}
        )
        self.assertEqual(spec.place("x1").degree, 3)
        self.assertEqual(spec.invariant("x1"), QModZClass.of("1/2"))
        with self.assertRaises(ValueError):
            AlgebraSpec.from_dict({"d": 2, "extra": 1})

    def test_ramification_locus(self):
        """Test that only places with non-zero invariant are ramified."""
        spec = AlgebraSpec(2, {"x1": "1/2", "x2": "1/2", "x3": 0})
        self.assertEqual({x.id for x in ramification_locus(spec)}, {"x1", "x2"})
        self.assertEqual(ramification_locus(AlgebraSpec(1)), frozenset())

    def test_torsion_orders_recover_index(self):
        """Test that for valid algebras the orders over Ram(D) have lcm d."""
        for spec in (
            self.quaternion,
            AlgebraSpec(3, {"x1": "1/3", "x2": "2/3"}),
            AlgebraSpec(4, {"x1": "1/2", "x2": "1/2", "x3": "1/4", "x4": "3/4"}),
        ):
            orders = [torsion_order(spec.invariant(x)) for x in ramification_locus(spec)]
            self.assertEqual(math.lcm(*orders), spec.d)

    def test_base_change(self):
        """Test inv(D ⊗ L) = [L_y : F_x]·inv_x(D)."""
        spec = AlgebraSpec(6, {"x1": "1/2", "x2": "1/3", "x3": "1/6"})
        self.assertTrue(invariant_after_base_change(spec, "x1", 2).is_zero())
        self.assertEqual(invariant_after_base_change(spec, "x2", 2), QModZClass.of("2/3"))
        self.assertTrue(invariant_after_base_change(spec, "x4", 5).is_zero())
        for x in ("x1", "x2", "x3"):
            self.assertTrue(invariant_after_base_change(spec, x, spec.d).is_zero())


class TestExtensionShape(unittest.TestCase):
    def test_local_degrees_must_sum(self):
        """Test that local degrees above each place add up to [L:F]."""
        shape = ExtensionShape(
            2, [ExtensionPlace("y1", "x1", 1), ExtensionPlace("y2", "x1", 1), ExtensionPlace("y3", "x2", 2)]
        )
        self.assertEqual([y.id for y in shape.places_over("x1")], ["y1", "y2"])
        self.assertEqual(shape.lookup("y3").local_degree, 2)
        self.assertEqual(shape.places_over("x5"), ())
        with self.assertRaises(ValueError):
            ExtensionShape(2, [ExtensionPlace("y1", "x1", 1)])

    def test_trivial_shape(self):
        """Test that L = F puts one place of local degree 1 above each place."""
        shape = ExtensionShape.trivial(["x2", "x1"], {"x1": 3})
        self.assertEqual([y.id for y in shape.all_places()], ["x1", "x2"])
        self.assertEqual(shape.lookup("x1").absolute_degree, 3)
        with self.assertRaises(KeyError):
            shape.lookup("x7")


class TestLegAssignment(unittest.TestCase):
    def test_frobenius_index_range(self):
        """Test that frobenius indices lie in [0, deg(place))."""
        LegPosition(Place("x1", 2), 1)
        with self.assertRaises(ValueError):
            LegPosition(Place("x1", 2), 2)

    def test_legs_at(self):
        """Test grouping of legs by place."""
        x1 = Place("x1")
        legs = LegAssignment({2: LegPosition(x1), 1: LegPosition(x1), 3: None})
        self.assertEqual(legs.legs_at("x1"), [1, 2])
        self.assertEqual(legs.legs_at(Place("x2")), [])
        self.assertEqual(legs.assigned_place_ids(), {"x1"})
        self.assertEqual(legs.to_dict()["3"], None)
        self.assertEqual(legs, LegAssignment({1: LegPosition(x1), 2: LegPosition(x1), 3: None}))


if __name__ == "__main__":
    unittest.main()

from collections.abc import Mapping
from fractions import Fraction
from types import MappingProxyType
from typing import Any

from shtukacrit.exactq import QModZClass, to_rational


class BaseField:
    """
    Base descriptor class for write-once, validated attributes.

    Values are stored in the instance dictionary after ``validate`` has run.
    A field may be assigned exactly once, which keeps the models that use
    these descriptors immutable after construction.

    Attributes:
        name (str): The name of the field in the owning class
        required (bool): Whether the field is required (cannot be None)
    """

    def __init__(self, required: bool = True):
        """
        Initialize a new field descriptor.

        Args:
            required: Whether the field is required (cannot be None)
        """
        self.name = ""
        self.required = required

    def __set_name__(self, owner: type, name: str):
        self.name = name

    def __get__(self, instance: Any, owner: type) -> Any:
        if instance is None:
            return self
        return instance.__dict__.get(self.name)

    def __set__(self, instance: Any, value: Any):
        """
        Validate and store a value.

        Raises:
            ValueError: If the value is missing, invalid, or already set
        """
        if self.name in instance.__dict__:
            raise ValueError(f"{self.name} is read-only once set")

        if value is None and self.required:
            raise ValueError(f"{self.name} is required and cannot be None")

        if value is not None:
            value = self.validate(value)

        instance.__dict__[self.name] = value

    def validate(self, value: Any) -> Any:
        """Hook for subclasses; return the (possibly normalized) value."""
        return value


class PositiveIntField(BaseField):
    """Field holding an integer ≥ ``minimum`` (1 unless stated)."""

    def __init__(self, required: bool = True, minimum: int = 1):
        super().__init__(required)
        self.minimum = minimum

    def validate(self, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(
                f"{self.name} must be an integer, not {type(value).__name__}"
            )
        if value < self.minimum:
            raise ValueError(f"{self.name} must be at least {self.minimum} (got {value})")
        return value


class PlaceIdField(BaseField):
    """
    Field descriptor for place identifiers.

    Place ids are non-empty strings without whitespace, so they can be used
    verbatim as JSON keys and in text tables.
    """

    def validate(self, value: Any) -> str:
        if not isinstance(value, str):
            raise ValueError(
                f"{self.name} must be a string, not {type(value).__name__}"
            )
        if not value:
            raise ValueError(f"{self.name} must not be empty")
        for char in value:
            if char.isspace():
                raise ValueError(
                    f"{self.name} contains invalid character {char!r}, "
                    "whitespace is not allowed in place ids"
                )
        return value


class QModZMapField(BaseField):
    """
    Field storing a finite map place id → class in ℚ/ℤ.

    Values may be ints, Fractions, "p/q" strings or classes; the stored map is
    read-only and sorted by id.
    """

    def validate(self, value: Any) -> Mapping[str, QModZClass]:
        if not isinstance(value, Mapping):
            raise ValueError(f"{self.name} must be a mapping")
        result = {}
        for key, raw in value.items():
            if not isinstance(key, str) or not key:
                raise ValueError(f"{self.name} keys must be non-empty strings")
            result[key] = QModZClass.of(raw)
        return MappingProxyType(dict(sorted(result.items())))


class CoweightField(BaseField):
    """
    Field descriptor for coweight entries.

    Accepts any sequence of integers and stores it as a tuple. Entries must be
    weakly decreasing.

    Attributes:
        length (int | None): Required length, or None for any non-empty length
    """

    def __init__(self, required: bool = True, length: int | None = None):
        super().__init__(required)
        self.length = length

    def validate(self, value: Any) -> tuple[int, ...]:
        if isinstance(value, (str, bytes)) or not hasattr(value, "__iter__"):
            raise ValueError(f"{self.name} must be a sequence of integers")
        entries = tuple(value)
        if not entries:
            raise ValueError(f"{self.name} must not be empty")
        for entry in entries:
            if isinstance(entry, bool) or not isinstance(entry, int):
                raise ValueError(f"{self.name} entries must be integers, got {entry!r}")
        if self.length is not None and len(entries) != self.length:
            raise ValueError(
                f"{self.name} must have length {self.length} (got {len(entries)})"
            )
        for j in range(len(entries) - 1):
            if entries[j] < entries[j + 1]:
                raise ValueError(
                    f"{self.name} must be weakly decreasing, "
                    f"but entry {j + 1} < entry {j + 2} in {entries}"
                )
        return entries


class RationalMapField(BaseField):
    """Field storing a finite map place id → Fraction."""

    def validate(self, value: Any) -> dict[str, Fraction]:
        if not isinstance(value, Mapping):
            raise ValueError(f"{self.name} must be a mapping")
        result = {}
        for key, raw in value.items():
            if not isinstance(key, str) or not key:
                raise ValueError(f"{self.name} keys must be non-empty strings")
            result[key] = to_rational(raw)
        return result

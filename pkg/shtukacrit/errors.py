from collections.abc import Iterable, Sequence


class ShtukaCritError(Exception):
    """Base exception class for all shtukacrit errors.

    Every error raised on purpose by the library derives from this class, so
    callers (the CLI above all) can separate bad input from internal failures.

    Attributes:
        message: A human-readable error message
        original_error: The original exception that caused this error (if any)
    """

    def __init__(self, message: str, original_error: Exception | None = None) -> None:
        """Initialize a new ShtukaCritError.

        Args:
            message: A human-readable error message
            original_error: The original exception that caused this error (if any)
        """
        super().__init__(message)
        self.message = message
        self.original_error = original_error


class ScenarioError(ShtukaCritError):
    """Exception raised when a scenario document cannot be parsed or validated.

    Attributes:
        issues: List of ``(json_path, message)`` pairs, one per problem found
        message: All issues joined into one line each
    """

    def __init__(
        self,
        issues: Sequence[tuple[str, str]],
        original_error: Exception | None = None,
    ) -> None:
        """Initialize a new ScenarioError.

        Args:
            issues: ``(json_path, message)`` pairs
            original_error: The original exception that caused this error (if any)
        """
        self.issues = list(issues)
        message = "; ".join(f"{path or '/'}: {text}" for path, text in self.issues)
        super().__init__(message, original_error)


class EmptyDenominatorSetError(ShtukaCritError):
    """Raised when a common denominator is requested for no numbers at all."""

    def __init__(self) -> None:
        super().__init__("empty denominator set")


class UnbalancedWeightsError(ShtukaCritError):
    """Exception raised when 0/1 weights cannot be balanced.

    Attributes:
        total: Sum of the numbers of ones over all weights
        d: Length of each weight
    """

    def __init__(self, total: int, d: int) -> None:
        message = f"unbalanced weights: total {total} is not divisible by {d}"
        super().__init__(message)
        self.total = total
        self.d = d


class BalanceError(ShtukaCritError):
    """Exception raised when the balancing reduction does not terminate.

    Attributes:
        diagnostics: Snapshot of the reduction state when the cap was hit
    """

    def __init__(self, message: str, diagnostics: dict | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NotPrincipalError(ShtukaCritError):
    """Exception raised when the degrees of Π violate the product formula.

    Attributes:
        total: The (nonzero) sum of all degrees
    """

    def __init__(self, total: object) -> None:
        super().__init__(f"Π not principal: degrees sum to {total}, expected 0")
        self.total = total


class NotRealizableError(ShtukaCritError):
    """Exception raised when a pair (L, Π) has non-integral multiplicity.

    Attributes:
        d: Index of the algebra
        d_delta: Index of the endomorphism algebra
        d_pi: Common denominator of the degrees of Π
    """

    def __init__(self, d: int, d_delta: int, d_pi: int) -> None:
        message = (
            "not realizable as a simple (D,φ)-space: "
            f"d·d_delta = {d * d_delta} is not divisible by d_pi = {d_pi}"
        )
        super().__init__(message)
        self.d = d
        self.d_delta = d_delta
        self.d_pi = d_pi


class LegsMeetYError(ShtukaCritError):
    """Exception raised when a place set meets the places carrying legs.

    Attributes:
        places: Sorted ids of the offending places
    """

    def __init__(self, places: Iterable[str]) -> None:
        self.places = sorted(places)
        super().__init__(f"legs meet Y at {', '.join(self.places)}")


class MissingIdeleDegreeError(ShtukaCritError):
    """Raised when a component count is requested without deg(a)."""

    def __init__(self) -> None:
        super().__init__("scenario has no idele_degree; component count undefined")


class UnsupportedQueryError(ShtukaCritError):
    """Exception raised for queries the library deliberately does not answer."""

    def __init__(self, message: str) -> None:
        super().__init__(message)

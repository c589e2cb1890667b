"""Exception hierarchy shared across the package."""


class DamageSearchError(Exception):
    """Base class for all package errors."""


class InvalidClassError(DamageSearchError, ValueError):
    """A class id outside the damage ordinal {1..4} where one was required."""


class EmptyInputError(DamageSearchError, ValueError):
    """An aggregate was asked for over an empty collection."""


class ScoreRangeError(DamageSearchError, ValueError):
    """A damage score fell outside the [1.0, 4.0] scale."""


class UnknownKindError(DamageSearchError, LookupError):
    """A component or section kind has no entry in the active weight table."""


class UnknownCriterionError(DamageSearchError, ValueError):
    """A property criterion name is not in the criteria lookup."""


class NotFoundError(DamageSearchError, LookupError):
    """A referenced record does not exist."""


class NoImageryError(DamageSearchError):
    """A property has no usable images, so no damage estimate is possible."""


class BackendUnavailableError(DamageSearchError):
    """The detector backend could not be reached (or is not configured)."""


class ProtocolError(DamageSearchError):
    """The detector backend answered with a malformed or invalid payload."""


class AnnotationError(DamageSearchError, ValueError):
    """Base for annotation document failures."""


class AnnotationParseError(AnnotationError):
    """The annotation document is not well-formed JSON."""


class AnnotationSchemaError(AnnotationError):
    """The annotation document is JSON but violates the expected shape."""


class QueryValidationError(DamageSearchError, ValueError):
    """A search query violates its invariants."""


class NotInResultsError(DamageSearchError, LookupError):
    """rank_of was asked about a property absent from the result set."""


class AssessmentPendingError(DamageSearchError):
    """Damage detail requested before the property was assessed.

    Carries the ids of the detection tasks enqueued on behalf of the caller.
    """

    def __init__(self, property_id: str, task_ids: list[str]):
        super().__init__(f"assessment pending for {property_id}")
        self.property_id = property_id
        self.task_ids = task_ids

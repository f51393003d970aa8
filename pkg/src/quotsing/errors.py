"""Error taxonomy shared across the package."""


class QuotsingError(Exception):
    """Base class for all errors raised by this package."""


class InputError(QuotsingError, ValueError):
    """Malformed or out-of-contract input (bad spec string, wrong field, ...)."""


class ShapeError(QuotsingError, ValueError):
    """Dimension mismatch in a linear-algebra operation."""


class GroupTooLarge(QuotsingError):
    """Closure exceeded the element cap.

    Attributes:
      partial_count: number of distinct elements found before giving up.
      max_order: the cap that was exceeded.
    """

    def __init__(self, partial_count: int, max_order: int):
        self.partial_count = partial_count
        self.max_order = max_order
        super().__init__(
            f"group closure exceeded max_order={max_order} "
            f"(found at least {partial_count} elements)"
        )


class NotCanonicalError(QuotsingError):
    """A resolution step was asked for on a non-canonical cone."""


class InternalConsistencyError(QuotsingError):
    """A cross-check that must hold mathematically failed; indicates a bug."""

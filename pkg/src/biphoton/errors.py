"""Exception hierarchy.

Every domain failure derives from :class:`BiphotonError`. The CLI maps
:class:`SchemaError` to exit code 1 and :class:`UnnormalizableConfiguration`
to exit code 2.
"""


class BiphotonError(Exception):
    pass


class OutOfValidityWindow(BiphotonError, ValueError):
    pass


class NoPhaseMatching(BiphotonError):
    pass


class NonPositiveInput(BiphotonError, ValueError):
    pass


class MissingDispersion(BiphotonError):
    pass


class InvalidConfig(BiphotonError, ValueError):
    pass


class InvalidGrid(BiphotonError, ValueError):
    pass


class GridTooCoarse(BiphotonError):
    pass


class SchemaError(BiphotonError, ValueError):
    """Config document rejected; ``pointer`` is the JSON pointer of the offending node."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class UnitError(SchemaError):
    pass


class UnnormalizableConfiguration(BiphotonError):
    """A Gaussian integral diverges.

    ``directions`` lists the coordinate names that carry the unconfined
    direction (largest components of the null eigenvector).
    """

    def __init__(self, message, directions=()):
        self.directions = tuple(directions)
        if self.directions:
            message = f"{message} (unconfined along {', '.join(self.directions)})"
        super().__init__(message)


class NotPositiveDefinite(UnnormalizableConfiguration):
    pass


class DiscardedBlockNotDefinite(UnnormalizableConfiguration):
    pass


class NotTraceClass(UnnormalizableConfiguration):
    pass

"""Exception types raised across the package."""


class DivitoposError(ValueError):
    """Base class for every input or validation error raised here."""


class DomainError(DivitoposError):
    """An integer is not an element of the ambient lattice, or not below a base."""


class SieveError(DivitoposError):
    """A member set is not a sieve on its base."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class TopologyError(DivitoposError):
    pass


class PresheafError(DivitoposError):
    pass


class IsoError(DivitoposError):
    pass

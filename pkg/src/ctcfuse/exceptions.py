"""Exception and warning classes raised across ctcfuse."""


class CtcfuseError(Exception):
    """Base class for all ctcfuse errors."""


# emission / alphabet input
class EmissionFormatError(CtcfuseError, ValueError):
    """An emission file or matrix violates the documented format."""


class BadMagic(EmissionFormatError):
    pass


class DimensionMismatch(EmissionFormatError):
    pass


class NonFiniteValue(EmissionFormatError):
    pass


class InvalidEmissionValue(EmissionFormatError):
    """A log-probability is positive or a normalized row does not sum to one."""


class TruncatedFile(EmissionFormatError):
    pass


class AlphabetError(CtcfuseError, ValueError):
    pass


# segmentation / corpus bookkeeping
class DuplicateId(CtcfuseError, ValueError):
    pass


class IdMismatch(CtcfuseError, ValueError):
    pass


class EmptyDataset(CtcfuseError, ValueError):
    pass


# language model
class OrderOutOfRange(CtcfuseError, ValueError):
    pass


class OrderTooHigh(OrderOutOfRange):
    pass


class MalformedArpa(CtcfuseError, ValueError):
    pass


class DegenerateCounts(CtcfuseError, ValueError):
    pass


class DegenerateCountsWarning(UserWarning):
    """An n-gram order lost every entry and the model order was reduced."""


# decoding
class EmptyBeam(CtcfuseError, RuntimeError):
    pass


class InstanceTooLarge(CtcfuseError, ValueError):
    pass


class BatchItemError(CtcfuseError):
    """Wraps the error raised while decoding one element of a batch."""

    def __init__(self, index, error):
        super().__init__(f"item {index}: {type(error).__name__}: {error}")
        self.index = index
        self.error = error

    def __reduce__(self):
        return (type(self), (self.index, self.error))


# evaluation
class EmptyReference(CtcfuseError, ValueError):
    pass


class EmptyList(CtcfuseError, ValueError):
    pass

"""Exception hierarchy shared by the library and the command line tool."""


class RelimpError(Exception):
    """Base class for all library errors."""


class DimensionError(RelimpError, ValueError):
    """A state or probability vector does not match the structure size."""


class InputError(RelimpError, ValueError):
    """Malformed user input (bad family, bad file, bad parameters)."""


class ComputationError(RelimpError):
    """A well-formed request that could not be computed."""


class CapacityError(ComputationError):
    """An exhaustive 2^n algorithm was asked to run above the enumeration cap."""


class QuadratureError(ComputationError):
    """Adaptive integration failed to reach the required accuracy."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ModularityError(ComputationError):
    """The requested component set is not a module of the structure.

    ``witness`` holds two complement states (as 0/1 tuples over the
    components outside the module) whose restrictions disagree.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EquilibriumError(ComputationError):
    """No pure Nash profile exists for a stage game."""

    def __init__(self, message, stage=None, state=None):
        super().__init__(message)
        self.stage = stage
        self.state = state


class NormalizationError(ComputationError):
    """Player value expectations cannot be normalized into an importance vector."""

    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw

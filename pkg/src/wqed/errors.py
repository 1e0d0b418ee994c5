"""Exception hierarchy for wqed.

Numerical failures derive from :class:`NumericalError` so the CLI can map
them to a single exit code.
"""


class WqedError(Exception):
    pass


class NumericalError(WqedError, ArithmeticError):
    pass


class DegenerateDenominator(NumericalError):
    pass


class ZeroTransmission(NumericalError):
    pass


class PoleAtBandEdge(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class DegenerateFit(NumericalError):
    pass


class StepTooLarge(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    pass


class NoGapFound(WqedError):
    pass


class InvalidHopping(WqedError, ValueError):
    pass


class InvalidWindow(WqedError, ValueError):
    pass


class ConfigError(WqedError):
    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    pass


class LossyInputWarning(UserWarning):
    pass

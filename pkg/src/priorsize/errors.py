"""Exception types raised across the package."""


class PriorSizeError(Exception):
    """Base class for all package errors."""


class InsufficientData(PriorSizeError):
    """Subsample is smaller than the family's minimum usable size."""


class DegenerateStatistic(PriorSizeError):
    """A posterior formula divides by zero for the given statistic."""


class BaselineHasNoCentrality(PriorSizeError):
    pass


class DomainError(PriorSizeError, ValueError):
    """Argument outside the mathematical domain of a formula."""


class SingularDenominator(DomainError):
    """The bracket in the asymptotic relative-size formula is not positive."""


class EmptyInput(PriorSizeError, ValueError):
    pass


class InvalidSize(PriorSizeError, ValueError):
    pass


class AllDegenerate(PriorSizeError):
    def __init__(self, k):
        super().__init__(f"every subsample of size {k} is degenerate")
        self.k = k


class OutOfRange(PriorSizeError, ValueError):
    """Interpolation point outside the curve's support.

    ``side`` is ``"below"`` or ``"above"``.
    """

    def __init__(self, x, side):
        super().__init__(f"x={x!r} is {side} the curve range")
        self.x = x
        self.side = side


class NonExistence(PriorSizeError):
    """No baseline size reproduces the prior's uncertainty at ``k``."""

    def __init__(self, k):
        super().__init__(f"M(k) does not exist at k={k}: prior uncertainty is below "
                         "the baseline curve's last value")
        self.k = k


class TooFewPoints(PriorSizeError, ValueError):
    pass


class ExtremeConflictWarning(UserWarning):
    """Prior uncertainty exceeds the baseline at its smallest size; M(k) was clamped."""


class ParseError(PriorSizeError, ValueError):
    def __init__(self, line, text):
        super().__init__(f"line {line}: cannot parse {text!r}")
        self.line = line
        self.text = text


class SupportViolation(PriorSizeError, ValueError):
    def __init__(self, line, value):
        super().__init__(f"line {line}: value {value!r} outside the family support")
        self.line = line
        self.value = value


class EmptyFile(PriorSizeError, ValueError):
    pass


class ConfigError(PriorSizeError, ValueError):
    pass

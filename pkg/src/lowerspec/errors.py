"""Exception hierarchy shared by all modules.

Every error raised on purpose by the library derives from `LowerSpecError`;
the CLI maps `DomainError` subclasses to exit code 1 and
`VerificationFailed` to exit code 2.
"""


class LowerSpecError(Exception):
    pass


class DomainError(LowerSpecError):
    """Input lies outside the set an operation is defined on."""


class NotInDomain(DomainError):
    pass


class Degenerate(DomainError):
    pass


class IllConditioned(DomainError):
    pass


class InvalidWord(DomainError):
    pass


class BudgetExceeded(DomainError):
    pass


class InvalidQuotient(DomainError):
    pass


class DepthExceeded(DomainError):
    pass


class AmbiguousCoset(DomainError):
    """The enclosure of n*theta straddles a midpoint between coset points."""


class EnclosureTooWide(DomainError):
    pass


class DigitBudgetExceeded(BudgetExceeded):
    """A convergent denominator would exceed the configured digit budget."""

    def __init__(self, message, *, index=None, estimated_digits=None):
        super().__init__(message)
        self.index = index
        self.estimated_digits = estimated_digits


class NoRationalAngle(DomainError):
    pass


class Inconclusive(LowerSpecError):
    """Rigorous comparison could not separate two quantities."""


class VerificationFailed(LowerSpecError):
    def __init__(self, message, *, n=None, check=None):
        super().__init__(message)
        self.n = n
        self.check = check

from dataclasses import dataclass
from typing import Any, List


class HypertrigException(Exception):
    """
    base hypertrig Exception to make catching all hypertrig related exceptions
    easier
    """


@dataclass
class UntabulatedPair(HypertrigException):
    """the convolution support of this pair is not inside the truncated table"""

    x: int
    y: int

    def __str__(self) -> str:
        return f"pair ({self.x}, {self.y}) is not tabulated"


@dataclass
class MissingIdentityRow(HypertrigException):
    element: int

    def __str__(self) -> str:
        return f"missing identity row for element {self.element}"


class DomainMismatch(HypertrigException):
    pass


@dataclass
class MixedArithmetic(HypertrigException):
    """exact and float scalars met inside one computation"""

    left: Any
    right: Any

    def __str__(self) -> str:
        return f"cannot mix exact {self.left!r} with inexact {self.right!r}"


@dataclass
class InvalidRecurrence(HypertrigException):
    n: int
    detail: str

    def __str__(self) -> str:
        return f"invalid recurrence coefficients at n={self.n}: {self.detail}"


@dataclass
class RecurrenceTooShort(HypertrigException):
    n: int
    available: int

    def __str__(self) -> str:
        return (
            f"recurrence coefficients requested for n={self.n} but only "
            f"{self.available} are listed"
        )


@dataclass
class NotAHypergroup(HypertrigException):
    """
    The recurrence generates an orthogonal polynomial system whose
    linearization coefficients are not all nonnegative.
    """

    n: int
    m: int
    k: int
    value: Any

    def __str__(self) -> str:
        return (
            f"negative linearization coefficient c({self.n},{self.m},{self.k}) = "
            f"{self.value}"
        )


@dataclass
class PreconditionFailed(HypertrigException):
    check: str
    residual: Any = None

    def __str__(self) -> str:
        if self.residual is None:
            return f"precondition failed: {self.check}"
        return f"precondition failed: {self.check} (residual {self.residual})"


class DegenerateEqual(PreconditionFailed):
    """M and N agree on the whole domain, so f vanishes identically"""


class DegenerateLambda(PreconditionFailed):
    """lambda squared is 1, use the M-sine shift builder instead"""


@dataclass
class NotASolutionForThisC(PreconditionFailed):
    c: Any = None
    coefficient: Any = None

    def __str__(self) -> str:
        return (
            f"c={self.c} does not solve the cosine-sine equation, residual "
            f"coefficient 1/4 - 1/(4c^2) - 1/2 = {self.coefficient}"
        )


class DegenerateFit(HypertrigException):
    pass


class InternalInconsistency(HypertrigException):
    """
    a recovered exponential failed its check although the input passed the
    residual gate. Usually means the tolerances are miscalibrated.
    """


@dataclass
class LambdaInconsistent(HypertrigException):
    estimates: List[Any]
    spread: float

    def __str__(self) -> str:
        return f"lambda estimates disagree (spread {self.spread!r}): {self.estimates!r}"

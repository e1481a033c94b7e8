"""Exception hierarchy.

Validators raise a subclass of :class:`ValidationError` carrying a witness;
checkers that return verdicts never raise for an ordinary "no".
"""

from __future__ import annotations


class FundlogError(Exception):
    pass


class ValidationError(FundlogError):
    """A structure failed validation; ``witness`` names the offending elements."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness

    @property
    def kind(self) -> str:
        return type(self).__name__


class NotAPoset(ValidationError):
    pass


class NotBounded(ValidationError):
    pass


class NoMeet(ValidationError):
    pass


class NoJoin(ValidationError):
    pass


class NotAntitone(ValidationError):
    pass


class NotDuallySelfAdjoint(ValidationError):
    pass


class MeetWithNegNotBottom(ValidationError):
    pass


class NotCoSerial(ValidationError):
    pass


class NotFundamental(ValidationError):
    pass


class NotAHom(ValidationError):
    pass


class NotFMorphism(ValidationError):
    pass


class ModalAxiomViolation(ValidationError):
    pass


class NotAUFM(ValidationError):
    pass


class SourceTargetMismatch(FundlogError):
    pass


class EmptyFamily(FundlogError):
    pass


class CapExceeded(FundlogError):
    pass


class BudgetExceeded(FundlogError):
    pass


class UnboundLetter(FundlogError):
    pass


class ModalFormulaOnPlainFrame(FundlogError):
    pass


class ParseError(FundlogError):
    def __init__(self, position: int, expected: list[str], text: str = ""):
        self.position = position
        self.expected = sorted(set(expected))
        super().__init__(
            f"parse error at position {position}: expected one of {', '.join(self.expected)}"
            + (f" in {text!r}" if text else "")
        )


class FormatError(FundlogError):
    """A structure file is well-formed JSON but not of the expected shape."""

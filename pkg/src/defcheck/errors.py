"""Exception hierarchy. Every error raised by the library derives from DefcheckError."""

from __future__ import annotations


class DefcheckError(Exception):
    pass


class UnknownSymbol(DefcheckError):
    pass


class UnknownElement(DefcheckError):
    pass


class TotalityError(DefcheckError):
    pass


class UnsupportedForm(DefcheckError):
    pass


class TruncationError(DefcheckError):
    """A value falls outside a finitized universe."""


class DepthExceeded(TruncationError):
    pass


class NumeralOverflow(TruncationError):
    pass


class EmptyDefinition(DefcheckError):
    pass


class NotStratified(DefcheckError):
    """``cycle`` is a sequence of dependency edges (body_pred, head_pred, positive)."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        path = ", ".join(
            f"{src} {'->' if pos else '-not->'} {dst}" for src, dst, pos in self.cycle
        )
        super().__init__(f"cycle through negation: {path}")


class NotAPartition(DefcheckError):
    pass


class EmptyUniverse(DefcheckError):
    pass


class UniverseTooLarge(DefcheckError):
    pass


class UndefinedPredicate(DefcheckError):
    pass


class TruncatedUniverse(DefcheckError):
    pass


class BudgetExceeded(DefcheckError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} candidates, budget is {budget}")


class ParseError(DefcheckError):
    def __init__(self, message, span=None):
        self.span = span
        self.message = message
        where = f"{span}: " if span is not None else ""
        super().__init__(f"{where}{message}")


class ArityError(ParseError):
    pass

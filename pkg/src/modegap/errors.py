"""Exception hierarchy for modegap."""


class ModegapError(Exception):
    """Base class for all library errors."""


class NotReasonable(ModegapError):
    pass


class BadIndices(ModegapError):
    pass


class DimensionMismatch(ModegapError):
    pass


class WrongArity(ModegapError):
    pass


class NotSymmetric(ModegapError):
    pass


class MalformedSystem(ModegapError):
    pass


class ResolutionTooLarge(ModegapError):
    pass


class EmptyInput(ModegapError):
    pass


class InvariantViolation(ModegapError):
    """An internal consistency check failed; indicates a bug."""


class ParseError(ModegapError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class NotSquare(ParseError):
    pass


class NotNormalized(ParseError):
    def __init__(self, message, row):
        self.row = row
        super().__init__(message, line=row)


class NegativeProbability(ParseError):
    pass

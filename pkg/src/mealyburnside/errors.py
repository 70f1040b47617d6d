"""Exception hierarchy shared by all modules."""


class MealyError(Exception):
    """Base class for every error raised by the package."""


class AutomatonError(MealyError, ValueError):
    pass


class MissingTransition(AutomatonError):
    pass


class DuplicateTransition(AutomatonError):
    pass


class UnknownName(AutomatonError):
    pass


class NotInvertible(AutomatonError):
    pass


class NotReversible(AutomatonError):
    pass


class ComponentTooLarge(MealyError):
    """A breadth-first orbit closure exceeded its memory cap."""

    def __init__(self, cap, level=None):
        self.cap = cap
        self.level = level
        where = "" if level is None else f" at level {level}"
        super().__init__(f"component exceeds {cap} words{where}")


class DecompositionViolation(MealyError):
    pass


class ChoiceOutOfRange(MealyError, IndexError):
    pass


class CapExceeded(MealyError):
    pass


class IncompletePartition(MealyError):
    pass


class WellDefinednessViolation(MealyError):
    pass


class LevelTooLarge(MealyError):
    pass


class ParseError(MealyError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)

"""Exception hierarchy shared by all donkin modules."""


class DonkinError(Exception):
    """Base class for every error raised by this package."""


class UnknownType(DonkinError):
    """A group-type letter/rank combination outside the alias table."""


class DimensionMismatch(DonkinError):
    """A weight vector whose length differs from the ambient rank."""


class NotDominant(DonkinError):
    """An operation that requires a dominant weight received a non-dominant one."""


class BadIndex(DonkinError):
    """A simple-root node index outside the diagram."""


class AmbientMismatch(DonkinError):
    """Two characters (or a character and a map) over different groups."""


class NegativeInput(DonkinError):
    """A virtual character where a genuine (nonnegative) one is required."""


class NotSymmetric(DonkinError):
    """A character that is not Weyl-invariant, detected during peel-off."""


class UnknownPair(DonkinError):
    """A (ambient, subgroup) pair outside the diagram-folding list."""


class NotAClassicalSplit(DonkinError):
    """A pair outside the classical block-embedding catalog."""


class NotAMaxRankSubgroup(DonkinError):
    """A pair outside the maximal-rank subgroup catalog."""


class NotARestrictedEmbedding(DonkinError):
    """A pair outside the restricted-irreducible-representation catalog."""


class NotATensorEmbedding(DonkinError):
    """A pair outside the tensor-product embedding catalog."""


class TypeMismatch(DonkinError):
    """Composition of maps whose endpoints do not line up."""


class InvalidJordanType(DonkinError):
    """A Jordan type violating the parity constraints of its kind."""


class TableSyntaxError(DonkinError):
    """A malformed orbit-table line; carries position information."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")

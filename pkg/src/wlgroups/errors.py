"""Exception hierarchy. Every error carries a stable CLI exit code."""


class WLGroupsError(Exception):
    exit_code = 1


class GroupValidationError(WLGroupsError):
    exit_code = 3


class EntryOutOfRange(GroupValidationError):
    pass


class NotLatinSquare(GroupValidationError):
    pass


class NoIdentityAtZero(GroupValidationError):
    def __init__(self, identity):
        self.identity = identity
        super().__init__(
            f"identity is element {identity}, not 0; relabel it (loader flag --auto-relabel)"
        )


class NotAssociative(GroupValidationError):
    def __init__(self, i, j, k):
        self.triple = (i, j, k)
        super().__init__(f"associativity fails at ({i}, {j}, {k})")


class OrderCapExceeded(WLGroupsError):
    exit_code = 4


class InvalidAction(WLGroupsError):
    exit_code = 3


class NotAPermutation(WLGroupsError):
    exit_code = 3


class IdentityMoved(WLGroupsError):
    exit_code = 3


class NotAbelian(WLGroupsError):
    exit_code = 5


class NotCentral(WLGroupsError):
    exit_code = 5


class NotNormal(WLGroupsError):
    exit_code = 5


class AbelianInput(WLGroupsError):
    exit_code = 5


class NotSemisimple(WLGroupsError):
    exit_code = 5


class DimensionZero(WLGroupsError):
    exit_code = 2


class TokenCollision(WLGroupsError):
    exit_code = 2


class MemoryBudget(WLGroupsError):
    exit_code = 6


class OracleCapExceeded(WLGroupsError):
    exit_code = 7


class NonCanonicalWarning(WLGroupsError):
    """Canonization could not separate every element; no form is returned."""

    exit_code = 8


class SpecParseError(WLGroupsError):
    exit_code = 2

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class OracleContradiction(WLGroupsError):
    exit_code = 9

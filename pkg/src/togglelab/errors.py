"""Exception hierarchy.

Every error raised on purpose by togglelab derives from :class:`TogglelabError`;
the CLI maps :class:`CapExceeded` to exit code 2 and everything else to 1.
"""


class TogglelabError(Exception):
    pass


class EmptyDiagram(TogglelabError):
    pass


class BadCharacter(TogglelabError):
    pass


class BadParameter(TogglelabError):
    pass


class BadDiagram(TogglelabError):
    """A diagram fails a geometric predicate an operation relies on."""


# the half-rook and SE-chain operations report the same condition under this name
PredicateFail = BadDiagram


class CellNotInDiagram(TogglelabError):
    pass


class CapExceeded(TogglelabError):
    def __init__(self, message: str, reached: int):
        super().__init__(message)
        self.reached = reached


class NotAnIdeal(TogglelabError):
    pass


class NotAnAntichain(TogglelabError):
    pass


class NotADiamond(TogglelabError):
    pass


class AmbientMismatch(TogglelabError):
    pass


class DependentGenerators(TogglelabError):
    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


class NotInSpan(TogglelabError):
    pass


class ConditionsFail(TogglelabError):
    def __init__(self, message: str, failed):
        super().__init__(message)
        self.failed = tuple(failed)


class UnknownFamily(TogglelabError):
    pass

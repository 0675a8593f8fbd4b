"""Exception hierarchy.

``InputError`` subclasses map to CLI exit code 3, ``PreconditionError``
subclasses to exit code 4.
"""


class PgwbError(Exception):
    pass


class InputError(PgwbError):
    pass


class MalformedInput(InputError):
    pass


class WeightViolation(InputError):
    pass


class BadPrime(InputError):
    pass


class UnknownEntry(InputError):
    pass


class BadParams(InputError):
    pass


class ContextMismatch(PgwbError):
    pass


class TooLarge(PgwbError):
    pass


class LimitExceeded(TooLarge):
    pass


class OracleInfeasible(PgwbError):
    pass


class PreconditionError(PgwbError):
    pass


class NotNormal(PreconditionError):
    pass


class NotMaximalClass(PreconditionError):
    pass


class RegularityUndecided(PgwbError):
    pass


class RelationViolated(PreconditionError):
    def __init__(self, relator, message=None):
        self.relator = relator
        super().__init__(message or f"relation {relator} not preserved")


class RelatorNotKilled(PreconditionError):
    def __init__(self, relator, value=None):
        self.relator = relator
        self.value = value
        super().__init__(f"relator {relator} maps to {value}, not 1")


class TargetNotAbelian(PreconditionError):
    pass


class TargetNotNormal(PreconditionError):
    pass


class PreconditionMZN(PreconditionError):
    pass


class IterationEscapesModule(PreconditionError):
    pass


class UCentral(PreconditionError):
    pass


class UOrderWrong(PreconditionError):
    pass


class CentralizerNotMaximal(PreconditionError):
    pass


class NotTwoGenerated(PreconditionError):
    pass


class NoD8Quotient(PreconditionError):
    pass


class ModuleNotInZN(PreconditionError):
    pass


class NoSuitableU(PreconditionError):
    pass


class TooSmall(PreconditionError):
    pass


class UOutsideZ2(PreconditionError):
    pass


class ModuleNotElementary(PreconditionError):
    pass


class CounterexampleAlarm(PgwbError):
    """Raised when exhaustive search finds no non-inner automorphism of order p."""

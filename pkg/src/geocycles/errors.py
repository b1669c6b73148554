"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class GeoCyclesError(Exception):
    exit_code = 1


class InputError(GeoCyclesError, ValueError):
    """Malformed input: unknown ids, bad lengths, bad documents."""

    exit_code = 2


class ContractViolation(InputError):
    """An operation was called outside its precondition."""


class NoPathError(InputError):
    """The two vertices lie in different components."""


class BudgetError(GeoCyclesError):
    """A certified quantity could not be pinned down within the exploration budget."""

    exit_code = 3


class CertificationError(GeoCyclesError):
    """A certified hypothesis (for example an epsilon bound) turned out to be false."""

    exit_code = 3


class NoSequenceError(CertificationError):
    """Koenig selection found an empty level or no surviving branch."""


class PropertyViolation(GeoCyclesError):
    exit_code = 4

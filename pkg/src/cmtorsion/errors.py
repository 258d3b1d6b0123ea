"""Exception hierarchy shared by every module of the package."""


class CMError(Exception):
    """Base class for all errors raised by cmtorsion."""


class InvalidModulus(CMError, ValueError):
    """The modulus is not an odd prime (or fails a required congruence)."""


class NotSquarefree(CMError, ValueError):
    pass


class DegenerateSpecialization(CMError, ValueError):
    """A parametrized formula was evaluated where one of its denominators vanishes."""


class UnsupportedInvariant(CMError, ValueError):
    pass


class Inapplicable(CMError):
    """A sign-determination method cannot be used on this instance."""


class NoRepresentation(CMError):
    """4p = U^2 + D V^2 has no solution."""


class NoApplicableMethod(CMError):
    pass


class InternalInconsistency(CMError):
    """A verified identity failed. Never expected on valid input."""


class TableFormatError(CMError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)

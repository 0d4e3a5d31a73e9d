"""Exception hierarchy shared by every layer of the package."""


class GcxError(Exception):
    """Base class for all errors raised by gcx."""


class AmbientMismatch(GcxError, ValueError):
    """Two operands live in incompatible ambient rings."""


class ParseError(GcxError, ValueError):
    def __init__(self, message, line=1, column=1, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = f"line {line}, column {column}"
        super().__init__(f"{message} ({where})")


class BudgetExceeded(GcxError):
    """A Groebner computation hit its configured resource cap."""

    def __init__(self, what, limit):
        self.what = what
        self.limit = limit
        super().__init__(f"budget exceeded: {what} > {limit}")


class NotFinite(GcxError):
    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


class IllDefinedMap(GcxError, ValueError):
    """A ring map does not send the source relations to zero."""


class NotAGroup(GcxError, ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class CoactionAxiomFailure(GcxError, ValueError):
    def __init__(self, axiom, generator):
        self.axiom = axiom
        self.generator = generator
        super().__init__(f"coaction axiom '{axiom}' fails on generator {generator}")


class CertificateInvalid(GcxError, ValueError):
    pass


class ModularCase(GcxError, ValueError):
    pass


class InvariantViolation(GcxError, AssertionError):
    """An internal consistency check failed; indicates a bug."""


class NotDominant(GcxError):
    """The map on function rings has a nonzero kernel."""

    def __init__(self, message, witness=None, report=None):
        self.witness = witness
        self.report = report
        super().__init__(message)

"""Exception hierarchy shared by every symmlab module."""


class SymmlabError(Exception):
    """Base class for all library errors."""


class NonPositiveWindow(SymmlabError, ValueError):
    pass


class OddOrTinyResolution(SymmlabError, ValueError):
    pass


class MalformedShape(SymmlabError, ValueError):
    pass


class GridMismatch(SymmlabError, ValueError):
    pass


class IoFailure(SymmlabError, OSError):
    pass


class DimensionMismatch(SymmlabError, ValueError):
    pass


class MalformedHeader(SymmlabError, ValueError):
    pass


class InvalidParam(SymmlabError, ValueError):
    """A symmetrization parameter outside its domain (e.g. negative radius)."""


class InvalidSpec(SymmlabError, ValueError):
    """A kernel specification violating one of its parameter constraints."""


class TagMismatch(SymmlabError, TypeError):
    """A kernel state of the wrong variant was handed to a kernel."""


class UnsupportedComposite(SymmlabError, ValueError):
    pass


class StraddlingUnsupported(SymmlabError, ValueError):
    pass


class ConfigError(SymmlabError, ValueError):
    """Base class for configuration problems reported by the CLI."""


class SchemaError(ConfigError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


class UnknownKernel(ConfigError):
    pass


class ConstraintViolation(ConfigError):
    pass

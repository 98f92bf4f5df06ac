"""Exception types raised across the package."""


class MirrorPairError(Exception):
    """Base class for all package errors."""


class GeometryError(MirrorPairError, ValueError):
    """Scenario distances violate the required ordering."""


class SubluminalError(MirrorPairError, ValueError):
    """Mirror speed x0*Omega/c is not safely below light speed."""


class NoConvergence(MirrorPairError, ArithmeticError):
    """A transit-time solve hit its iteration cap."""


class NotHarmonic(MirrorPairError, ValueError):
    """Operation needs a harmonic platform trajectory."""


class DegenerateBaseline(MirrorPairError, ArithmeticError):
    """Single-mirror reference amplitude is effectively zero."""


class TooFewPoints(MirrorPairError, ValueError):
    pass


class TooShort(MirrorPairError, ValueError):
    """Phase trace does not cover a full modulation period."""


class NotPowerOfTwo(MirrorPairError, ValueError):
    pass


class IndexMismatch(MirrorPairError, ValueError):
    pass


class ConfigError(MirrorPairError):
    """Base for configuration loading failures (CLI exit code 1)."""


class IoError(ConfigError, OSError):
    pass


class ParseError(ConfigError, ValueError):
    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            msg = f"{msg} (line {line}, column {column})"
        super().__init__(msg)


class ValidationError(ConfigError, ValueError):
    def __init__(self, path, msg):
        self.path = path
        super().__init__(f"{path}: {msg}")

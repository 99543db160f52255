class CubicSurfaceError(Exception):
    """Base exception for cubic surface toolkit errors"""
    pass


class ValidationError(CubicSurfaceError):
    """Raised when input validation fails"""
    pass


class ConfigError(CubicSurfaceError):
    """Raised when settings cannot be loaded or are invalid"""
    pass


class StorageError(CubicSurfaceError):
    """Raised when a report cannot be written or read back"""
    pass


class NotSmoothError(CubicSurfaceError):
    """Raised when an operation needs a smooth surface"""
    pass


class NotInvertibleError(CubicSurfaceError):
    """Raised when an etale algebra element is a zero divisor"""
    pass


class TableLookupError(CubicSurfaceError):
    """Raised when a Galois type is absent from the table or ambiguous"""

    def __init__(self, message: str, candidates=None):
        super().__init__(message)
        self.candidates = list(candidates or [])


class UnsupportedError(CubicSurfaceError):
    """Raised for documented limitations (e.g. corestriction evaluation)"""
    pass


class InconsistencyError(CubicSurfaceError):
    """Raised when an exact self-check fails"""
    pass

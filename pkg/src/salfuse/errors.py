"""Exception hierarchy shared by all salfuse modules."""


class SalfuseError(Exception):
    """Base class for every error raised by this package."""


# --- image IO -------------------------------------------------------------

class MissingFileError(SalfuseError, FileNotFoundError):
    pass


class UnsupportedFormatError(SalfuseError):
    pass


class CorruptDataError(SalfuseError):
    pass


class IoFailureError(SalfuseError, OSError):
    pass


# --- parameter / shape contracts ------------------------------------------

class NonPositiveSigmaError(SalfuseError, ValueError):
    pass


class NonPositiveRadiusError(SalfuseError, ValueError):
    pass


class ShapeMismatchError(SalfuseError, ValueError):
    pass


class ImageTooSmallError(SalfuseError, ValueError):
    pass


class TooFewPixelsError(SalfuseError, ValueError):
    pass


class IndexOutOfRangeError(SalfuseError, IndexError):
    pass


class TooManyLevelsError(SalfuseError, ValueError):
    pass


class LevelOutOfRangeError(SalfuseError, IndexError):
    pass


class EmptyInputError(SalfuseError, ValueError):
    pass


# --- evaluation ------------------------------------------------------------

class EmptyGroundTruthError(SalfuseError, ValueError):
    pass


class DegenerateGroundTruthError(SalfuseError, ValueError):
    pass


class DimensionMismatchError(SalfuseError, ValueError):
    pass

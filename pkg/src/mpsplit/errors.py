"""Exception hierarchy. CLI exit codes hang off the three top-level classes."""


class ConfigError(Exception):
    """Bad or unresolvable experiment configuration (exit code 2)."""


class DataError(Exception):
    """Unreadable or malformed input data (exit code 3)."""


class BadMagicError(DataError):
    pass


class TruncatedFileError(DataError):
    pass


class CountMismatchError(DataError):
    pass


class CheckpointError(DataError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class NumericalError(Exception):
    """Eigen/SVD failure or a spectrum the estimators cannot use (exit code 4)."""


class DegenerateSpectrumError(NumericalError):
    pass

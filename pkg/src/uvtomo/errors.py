"""Exception types shared across the package.

The CLI maps these onto process exit codes: usage/config errors exit 2,
I/O and file-format errors exit 3, numerical degeneracies exit 4.
"""


class ConfigurationError(ValueError):
    """A configuration is internally inconsistent (e.g. support margin violated)."""


class ClippingError(ValueError):
    """A shift would push nonzero pixels off the grid."""


class DataFormatError(RuntimeError):
    """A dataset / manifest / CSV file is malformed."""


class DegeneracyError(RuntimeError):
    """A numerical degeneracy makes the requested operation undefined."""


class GraphConnectivityError(DegeneracyError):
    """The similarity graph is disconnected; the embedding is undefined."""


class MomentRangeError(DegeneracyError):
    """An observed moment falls outside the attainable range of its model."""

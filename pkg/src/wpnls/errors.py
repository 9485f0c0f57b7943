"""Exception types shared across the package."""


class WpnlsError(Exception):
    """Base class for all package errors."""


class SizingError(WpnlsError):
    """Grid construction rejected (non power-of-two size, bad extent, ...)."""


class GridMismatchError(WpnlsError):
    """Two fields that must share a grid do not."""


class ResolutionError(WpnlsError):
    """A window or signal is too narrow for the grid spacing."""


class FrequencyRangeError(WpnlsError):
    """A requested frequency lies beyond the grid's Nyquist ball."""


class DegenerateInputError(WpnlsError):
    """An input whose norm or pairing is (numerically) zero."""


class BlowUpError(WpnlsError):
    """Non-finite values appeared during time stepping."""

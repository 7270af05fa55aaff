"""Exception types raised by the toolkit"""


class TfwaveError(Exception):
    """Base class for all toolkit errors"""


class GridMismatch(TfwaveError, ValueError):
    """Operands live on different grids"""


class DomainMismatch(TfwaveError, ValueError):
    """A spatial function was given where a frequency function is expected, or vice versa"""


class UnsupportedExponent(TfwaveError, ValueError):
    """Exponent outside the Banach range [1, inf]"""


class ExponentMismatch(TfwaveError, ValueError):
    """Exponents violate the numerology of a product or Lipschitz estimate"""


class LatticeIncompatible(TfwaveError, ValueError):
    """Time-frequency lattice does not fit the grid"""


class WindowNotCompactlySupported(TfwaveError, ValueError):
    """Amalgam norms need a compactly supported window"""


class EmbeddingConditionFailed(TfwaveError, ValueError):
    """d/q - d/r < 1 does not hold"""


class SupportTooLarge(TfwaveError, ValueError):
    """Function carries mass outside the declared ball"""


class InvalidSymbolParams(TfwaveError, ValueError):
    """Symbol parameters outside their admissible range"""


class ContractionFailure(TfwaveError, RuntimeError):
    """Picard iteration did not converge within max_iter"""


class BlowupDetected(TfwaveError, RuntimeError):
    """Reference integrator left the stable regime"""


class CalibrationExists(TfwaveError, RuntimeError):
    """A calibration entry is already stored for this fingerprint"""


class ConfigError(TfwaveError, ValueError):
    """Experiment configuration could not be parsed or validated"""


class SpecKindMismatch(TfwaveError, ValueError):
    """Input and output norm specifications are of different kinds or differ in more than weights"""

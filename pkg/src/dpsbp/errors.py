"""Exception taxonomy for the dpsbp library.

Every error raised by the public API derives from DpsbpError so callers can
catch library failures with a single except clause.  Exceptions that signal a
failed run in time (blow-up) carry the failing time on the instance.
"""


class DpsbpError(Exception):
    """Base class for all dpsbp errors."""


# ---------------------------------------------------------------------------
# operator construction
# ---------------------------------------------------------------------------

class UnsupportedOrder(DpsbpError):
    """Requested interior order outside the implemented set."""


class TooFewNodes(DpsbpError):
    """Element does not have enough nodes to fit the boundary closures."""


class InvalidDegree(DpsbpError):
    """Invalid polynomial degree for a nodal (LGL) operator pair."""


# ---------------------------------------------------------------------------
# multi-block assembly
# ---------------------------------------------------------------------------

class MixedOperatorFamilies(DpsbpError):
    """Elements of one mesh must share a single operator family and order."""


# ---------------------------------------------------------------------------
# time integration
# ---------------------------------------------------------------------------

class NonFiniteState(DpsbpError):
    """A stage or step produced NaN/Inf values (blow-up).

    Attributes
    ----------
    time : float
        Simulation time at which the non-finite state was detected.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


# ---------------------------------------------------------------------------
# equation modules
# ---------------------------------------------------------------------------

class NotFDGrid(DpsbpError):
    """Operation requires a single-element equidistant finite-difference grid."""


class NonPositiveHeight(DpsbpError):
    """Shallow-water state with h <= 0 where positivity is required."""


# ---------------------------------------------------------------------------
# linearization and spectra
# ---------------------------------------------------------------------------

class NonSmoothPoint(DpsbpError):
    """Dual-number propagation hit a non-differentiable point (|x| at 0)."""


class NoConvergence(DpsbpError):
    """Dense eigensolver failed to converge."""


class VerdictMismatch(DpsbpError):
    """An assert-mode run produced verdicts differing from the expected
    stability pattern (CLI exit code 2)."""


class WindowTooShort(DpsbpError):
    """Growth-rate fit window has too few samples."""


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

class SizeMismatch(DpsbpError):
    """Vector/matrix sizes are inconsistent."""


class ResampleFailure(DpsbpError):
    """Field could not be resampled onto the uniform FFT grid."""


class EmptyWindow(DpsbpError):
    """Requested fit window contains no usable samples."""

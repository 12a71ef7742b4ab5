"""Exception hierarchy shared by all clusterchain modules."""


class ClusterChainError(Exception):
    """Base class for all library errors."""


class DegeneratePointError(ClusterChainError):
    """Raised when a Bogoliubov phase is requested where the gap closes."""


class EigensolverError(ClusterChainError):
    """Dense eigensolver or SVD failed to converge."""


class QuadratureError(ClusterChainError):
    """Adaptive quadrature did not reach the requested tolerance.

    The achieved error estimate is kept on ``est_error``.
    """

    def __init__(self, message, est_error=float("nan")):
        super().__init__(message)
        self.est_error = est_error


class WindowError(ClusterChainError):
    """A G window does not cover the offsets a correlator needs."""


class PhysicalityError(ClusterChainError):
    """A reduced density matrix failed the PSD / trace checks."""


class SizeGuardError(ClusterChainError):
    """Exact diagonalization requested beyond the memory guard."""


class FitError(ClusterChainError):
    """Too few usable points for a least-squares fit."""


class BracketError(ClusterChainError):
    """Bisection bracket does not enclose a sign change."""

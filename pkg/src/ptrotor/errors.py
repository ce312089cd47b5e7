"""Exception types shared across the simulation modules."""


class SimulationError(Exception):
    """Base class for all toolkit-specific failures."""


class TailNotDecayed(SimulationError):
    """Kick coefficients have not fallen below the drop tolerance at +/-n_max."""


class InsufficientCoefficients(SimulationError):
    """Coefficient table too short to fill the requested propagator matrix."""


class EigenFailure(SimulationError):
    """Dense eigensolver did not converge."""


class ZeroVector(SimulationError):
    """Operation undefined for an all-zero vector."""


class AllFiltered(SimulationError):
    """Every Floquet mode was edge-flagged.

    In the localized regime this signals that n_sites is too small.  At a
    quantum resonance with loss/gain it signals skin-effect pile-up of all
    eigenvectors at one truncation edge; use the band spectrum there.
    """


class NonMonotoneDetector(SimulationError):
    """Threshold detector is not monotone over the sampled bracket."""

    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan


class NotCoprime(SimulationError):
    """Rational kinetic parameter must be a coprime fraction N/M with N <= M."""


class SpillExceeded(SimulationError):
    """Momentum population reached the truncation edge during evolution."""


class DegenerateFit(SimulationError):
    """Requested fit window contains degenerate (zero or missing) data."""


class QuadratureUnresolved(SimulationError):
    """Oscillatory quadrature did not stabilize under node doubling."""


class WindowOverflow(SimulationError):
    """Transverse field reached the edge of the computational window."""


class MismatchedParams(SimulationError):
    """Cavity and rotor parameter sets do not describe the same system."""

"""Shared exception types."""


class HypetcError(Exception):
    """Base class for all package errors."""


class InvalidCoefficients(HypetcError):
    """Plant coefficients violate a structural requirement."""


class NonConvergence(HypetcError):
    """Fixed-point kernel iteration failed to reach tolerance."""


class GridMismatch(HypetcError):
    """Kernel sets or profiles live on incompatible grids."""


class CflViolation(HypetcError):
    """Time step too large for the spatial grid and transport speeds."""


class MuOutOfRange(HypetcError):
    """Decay-rate parameter outside its admissible interval."""


class AssumptionViolated(HypetcError):
    """A standing assumption on the plant data fails."""


class DtTooCoarse(HypetcError):
    """Simulation time step cannot resolve the requested sampling period."""


class VarrhoNotPositive(HypetcError):
    """Self-triggered decay margin is not positive for this delta_bar."""


class MuBarNonpositive(HypetcError):
    """Boundary reflections too strong: no admissible decay rate exists."""


class NonNegativeM(HypetcError):
    """Dynamic trigger variable m must stay negative."""


class SupercriticalFlow(HypetcError):
    """Equilibrium flow is not subcritical."""


class SlopeMismatch(HypetcError):
    """Bottom slope inconsistent with the friction equilibrium."""


class GateSubmerged(HypetcError):
    """Downstream gate head difference is not positive."""


class ConfigMismatch(HypetcError):
    """Scenario configs differ where they must agree."""


class OutputDirUnwritable(HypetcError):
    """Result directory cannot be created or written."""

"""Exception types shared across the package."""


class GgnError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(GgnError, ValueError):
    """A constructor or operation received an invalid parameter."""


class OrderCapError(GgnError):
    """Group construction would exceed the configured order cap."""


class LatticeCapError(GgnError):
    """Subgroup-lattice work was requested above the lattice cap."""


class OracleScaleError(GgnError):
    """The brute-force solver was asked for a group beyond its state bound."""


class TrivialGroupError(GgnError, ValueError):
    """There is no avoidance game for the trivial group."""

"""Exception types shared across the package."""


class CoboseError(Exception):
    """Base class for all errors raised by cobose."""


class DistributionError(CoboseError):
    """Invalid Schmidt-coefficient input (negative values, bad mass, ...)."""


class FeasibilityError(CoboseError):
    """A (lambda1, purity) pair outside the geometrically allowed region."""


class ResourceCapError(CoboseError):
    """A requested computation exceeds the configured size cap."""


class PoleError(CoboseError):
    """A terminating hypergeometric sum hits a pole before it terminates."""


class VerificationError(CoboseError):
    """Cross-engine verification disagreed beyond tolerance."""

"""Exception types shared across the package."""


class LatticeHilbertError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(LatticeHilbertError):
    """Panel refinement failed to stabilize an integral within tolerance."""


class DimensionTooLarge(LatticeHilbertError):
    """A horizontal dimension s outside the supported range {1, 2, 3}."""


class WindowTooSmall(LatticeHilbertError):
    """A lattice window too small for the requested difference stencil."""


class WindowMismatch(LatticeHilbertError):
    """Two fields whose windows do not line up for a joint operation."""


class RadiusInsufficient(LatticeHilbertError):
    """No admissible kernel radius meets the requested truncation tolerance."""


class CacheIO(LatticeHilbertError):
    """A kernel-table cache file is unreadable or corrupt."""


class UnknownCheck(LatticeHilbertError):
    """A verification check name that is not registered."""


class InvalidParams(LatticeHilbertError):
    """Parameters outside the documented range of an operation."""

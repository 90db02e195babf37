"""Discrete Poisson and conjugate-Poisson extensions on Z^s x N, the induced
lattice Hilbert transform, and an executable verification suite for the
identities the construction rests on."""

from . import cli, kernels, lattice, operators, quadrature, spectral, verify
from .errors import (
    CacheIO,
    DimensionTooLarge,
    InvalidParams,
    LatticeHilbertError,
    NonConvergence,
    RadiusInsufficient,
    UnknownCheck,
    WindowMismatch,
    WindowTooSmall,
)
from .kernels import KernelTable, build_table
from .lattice import BoundarySequence, LatticeField
from .operators import PeriodicSequence, TransformResult
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .verify import VerificationReport, run_check, run_suite

__version__ = "0.1.0"

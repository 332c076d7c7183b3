"""Integrable structure and scattering invariants of the two-fixed-center problem."""

__version__ = "0.1.0"

from .model import (InvariantPoint, Params, PhaseState, ProlateState,  # noqa: F401
                    ReferenceChoice, TerminationReason, Trajectory)

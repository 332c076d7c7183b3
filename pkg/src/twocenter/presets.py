"""Named reproduction presets used by the CLI and the acceptance suite."""
from __future__ import annotations

from dataclasses import dataclass

from .model import Params, ReferenceChoice
from .monodromy import LoopPath

#: canonical attractive instance used throughout (strengths 2 and 1, a = 1)
GRAVITATIONAL = Params(2.0, 1.0, 1.0)

#: slice energies for the spatial-diagram preset; the middle value sits at the
#: regime boundary h = (mu1 - mu2) / 2 where the eta-family briefly reaches
#: the coordinate endpoints
FIG1_ENERGIES = (0.25, 0.5, 1.0)

#: planar-diagram strength cases: generic and degenerate
PLANAR_CASES = {
    "fig4-attractive": (2.0, 1.0),
    "fig4-repulsive": (-2.0, -1.0),
    "fig4-mixed": (2.0, -1.0),
    "appendixB-symmetric-attractive": (1.5, 1.5),
    "appendixB-antisymmetric": (2.0, -2.0),
    "appendixB-symmetric-repulsive": (-1.5, -1.5),
    "appendixB-free": (0.0, 0.0),
    "appendixB-kepler-attractive": (2.0, 0.0),
    "appendixB-kepler-repulsive": (-2.0, 0.0),
}

#: strength cases of the general scattering-monodromy table
TABLE_CASES = [
    ("generic", 2.0, 1.0),
    ("antisymmetric", 2.0, -2.0),
    ("symmetric-attractive", 1.5, 1.5),
    ("symmetric-repulsive", -1.5, -1.5),
    ("free", 0.0, 0.0),
    ("kepler-attractive", 2.0, 0.0),
    ("kepler-repulsive-dominant", -2.0, 0.0),
]


@dataclass(frozen=True)
class MonodromyPreset:
    params: Params
    h: float
    reference: ReferenceChoice
    loops: dict  # label -> LoopPath


def thm62_preset(ref: ReferenceChoice = ReferenceChoice.KEPLER_AT_O2) -> MonodromyPreset:
    """Loops around each critical line of the attractive case at h = 1."""
    h = 1.0
    loops = {
        "gamma1": LoopPath(h, 0.0, 0.12, 0.1),
        "gamma2": LoopPath(h, 2.0, 0.5, 0.1),
        "gamma3": LoopPath(h, 4.0, 0.5, 0.1),
    }
    return MonodromyPreset(GRAVITATIONAL, h, ref, loops)


def hamiltonian_preset() -> MonodromyPreset:
    return thm62_preset(ReferenceChoice.SELF)


def gamma3_deflection_loop() -> LoopPath:
    """The purely-scattering loop used for the deflection-variation check."""
    return LoopPath(1.0, 4.0, 0.5, 0.3)


def knauf_gaussian(v0: float = 1.0, width: float = 1.0):
    from .scattering import PotentialSpec

    return PotentialSpec("gaussian", (v0, width))

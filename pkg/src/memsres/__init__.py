"""Design and analysis of capacitively transduced micromechanical resonators."""

__version__ = "0.1.0"

from .lumped import DriveCondition, LumpedElectrical, LumpedMechanical
from .materials import Material, MaterialRegistry, builtin
from .modal import BeamGeometry, DiskGeometry, ModeSolution, PlateGeometry, RingGeometry
from .response import FrequencySweep, QBudget, combine_q

__all__ = [
    "BeamGeometry", "DiskGeometry", "DriveCondition", "FrequencySweep", "LumpedElectrical",
    "LumpedMechanical", "Material", "MaterialRegistry", "ModeSolution", "PlateGeometry", "QBudget",
    "RingGeometry", "builtin", "combine_q", "__version__",
]

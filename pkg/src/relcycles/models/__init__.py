"""Built-in systems: the forced spring, its translation-symmetric 3-d
extension, and the planar two-link swimmer."""

from .toy import spring_field, three_d_chart, three_d_field
from .swimmer import (
    EnergyReport,
    REDUCED_NAMES,
    STATE_NAMES,
    SwimmerParams,
    SwimmerState,
    acceleration,
    applied_force,
    coriolis,
    coriolis_fd,
    drag_force,
    energy,
    energy_rate_residual,
    kinetic_energy,
    lagrangian,
    mass_matrix,
    potential,
    potential_grad,
    rest_reduced,
    rest_state,
    shape_force,
    swim_force,
    swimmer_chart,
    swimmer_field,
    total_power,
)

__all__ = [
    "EnergyReport",
    "REDUCED_NAMES",
    "STATE_NAMES",
    "SwimmerParams",
    "SwimmerState",
    "acceleration",
    "applied_force",
    "coriolis",
    "coriolis_fd",
    "drag_force",
    "energy",
    "energy_rate_residual",
    "kinetic_energy",
    "lagrangian",
    "mass_matrix",
    "potential",
    "potential_grad",
    "rest_reduced",
    "rest_state",
    "shape_force",
    "spring_field",
    "swim_force",
    "swimmer_chart",
    "swimmer_field",
    "three_d_chart",
    "three_d_field",
    "total_power",
]

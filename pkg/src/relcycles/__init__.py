"""Symmetry-reduced simulation of dissipative mechanical systems.

Detects limit cycles of time-periodic fields by stroboscopic Newton shooting,
certifies them with Floquet multipliers, and, for fields with a Lie-group
symmetry, works in the quotient and recovers the per-period group phase that
turns a reduced cycle into locomotion.
"""

from .lie import (
    BranchPointError,
    SE2Algebra,
    SE2Element,
    TranslationElement,
    act_config,
    compose,
    exp,
    log,
    tangent_act,
    tangent_act_linear,
    wrap_angle,
)
from .dynamics import (
    AdaptiveTol,
    FixedStep,
    IntegrationStats,
    MonodromyResult,
    StiffnessError,
    Symmetry,
    SystemField,
    Trajectory,
    equivariance_residual,
    integrate,
    monodromy,
    rhs_jacobian,
    trajectory_from_csv,
    trajectory_to_csv,
)
from .reduction import (
    NotPeriodicError,
    PhaseShift,
    QuotientChart,
    phase_shift,
    phase_to_dict,
    reconstruct,
    reduced_field,
)
from .cycles import (
    BasinEscapeError,
    CycleCertificate,
    DegenerateCycleError,
    NewtonDivergenceError,
    certificate_to_dict,
    distance_to_cycle,
    find_relative_cycle,
    find_stroboscopic_cycle,
    persistence_sweep,
    sample_cycle,
    transient_convergence_rate,
)
from . import models

__version__ = "0.1.0"

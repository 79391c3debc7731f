"""Gauge-invariant geometric phases of 1D periodic lattice models.

The library computes the geometric phase of a Bloch band as the argument
of the cyclic Bargmann overlap product over the Brillouin zone (the
Pancharatnam-Zak phase), contrasts it with the convention-dependent Zak
phase, extends it to a completely filled band where Fermi statistics adds
pi for even particle number, and cross-validates against direct adiabatic
time evolution.
"""

__version__ = "0.1.0"

from .errors import (
    BandphaseError,
    DegenerateSpectrum,
    GapClosure,
    NoConvergence,
    NonUnitary,
    NormDrift,
    OrthogonalStates,
    OverlapTooSmall,
    SingularOverlapMatrix,
    UndersampledRing,
    ZeroOverlap,
)
from .numerics import (
    Angle,
    Eigenpair,
    angle_distance,
    herm_eig2,
    herm_eig_n,
    winding_number,
    wrap_angle,
)
from .models import (
    CELL_PERIODIC,
    LATTICE_PERIODIC,
    BlochModel,
    ContinuumModel,
    KitaevModel,
    SshModel,
    band_count,
    band_energies,
    band_states,
    bloch_matrix,
    min_gap,
    orbital_offsets,
    periodic_gauge_image,
    ssh_obc_hamiltonian,
    translate,
    zero_mode_count,
)
from .phase import (
    PERIODIC_GAUGE,
    RAW_EIGENVECTOR,
    BargmannChain,
    PhaseResult,
    apply_gauge,
    apply_static_unitary,
    bargmann_invariant,
    build_chain,
    pancharatnam_total,
    pancharatnam_zak,
    zak_phase,
)
from .manybody import FilledBandSpec, filled_band_phase, slater_cycle_oracle
from .adiabatic import (
    DriveSpec,
    Trajectory,
    evolve,
    geometric_phase_from_trajectory,
    tau_period,
)

__all__ = [
    "__version__",
    "Angle",
    "Eigenpair",
    "wrap_angle",
    "angle_distance",
    "herm_eig2",
    "herm_eig_n",
    "winding_number",
    "BandphaseError",
    "DegenerateSpectrum",
    "NoConvergence",
    "UndersampledRing",
    "GapClosure",
    "OverlapTooSmall",
    "ZeroOverlap",
    "NonUnitary",
    "OrthogonalStates",
    "NormDrift",
    "SingularOverlapMatrix",
    "CELL_PERIODIC",
    "LATTICE_PERIODIC",
    "SshModel",
    "KitaevModel",
    "ContinuumModel",
    "BlochModel",
    "band_count",
    "band_energies",
    "band_states",
    "bloch_matrix",
    "min_gap",
    "translate",
    "orbital_offsets",
    "periodic_gauge_image",
    "ssh_obc_hamiltonian",
    "zero_mode_count",
    "BargmannChain",
    "PhaseResult",
    "RAW_EIGENVECTOR",
    "PERIODIC_GAUGE",
    "build_chain",
    "bargmann_invariant",
    "pancharatnam_zak",
    "zak_phase",
    "apply_gauge",
    "apply_static_unitary",
    "pancharatnam_total",
    "FilledBandSpec",
    "filled_band_phase",
    "slater_cycle_oracle",
    "DriveSpec",
    "Trajectory",
    "tau_period",
    "evolve",
    "geometric_phase_from_trajectory",
]

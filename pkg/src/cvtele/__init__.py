"""Continuous-variable teleportation in the characteristic-function representation."""

from .closed_forms import PURE, ThermalContext
from .errors import (
    ConfigError,
    CVTeleError,
    DomainError,
    OptimizationError,
    QuadratureError,
    SpecError,
    TruncationError,
)
from .fock_rep import FockTensor, chi_from_fock, synthesize_input_fock, synthesize_resource_fock
from .measures import (
    inseparability_delta,
    non_gaussianity,
    relative_fidelity,
    second_moments,
    vacuum_affinity,
    von_neumann_entropy,
)
from .optimize import OptResult, classical_threshold, optimize_bell, optimize_cat, optimize_sssf
from .overlap import QuadratureConfig, fidelity, purity, state_overlap
from .phase_space import ConjVar, beam_split, bogoliubov_pair, displacement_phase
from .protocol import AsymmetricBS, ChannelSpec, Ideal, ImpreciseMeasurement, LossyHomodyne, output_chi
from .states import (
    SSSF,
    TMSV,
    Coherent,
    Fock1,
    Mixture,
    PhotonAdded,
    PhotonAddedCoherent,
    PhotonSubtracted,
    ResourceMixture,
    ResourceSpec,
    SqueezedBell,
    SqueezedCat,
    SqueezedFock1,
    SqueezedFock11,
    SqueezedVacuum,
    chi_input,
    chi_resource,
)

__version__ = "0.1.0"

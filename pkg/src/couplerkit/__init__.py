"""couplerkit: lumped-element quantization and operating-point analysis for
qubit-coupler-qubit superconducting circuits."""

from .capnet import (
    CapNetwork,
    Configuration,
    E2_OVER_H_GHZ_FF,
    ModeEnergies,
    Topology,
    build_cap_matrix,
    classify_configuration,
    energies_closed_form_floating,
    energies_closed_form_grounded,
    energies_exact,
    load_netlist,
    netlist_to_dict,
    reduce_free_modes,
)
from .effmodel import (
    DressedFrequencies,
    EffectiveCoupling,
    ZZBreakdown,
    dressed_frequencies,
    find_zero_g,
    find_zero_zz,
    g_net,
    zz_perturbative,
)
from .errors import (
    AssumptionViolationError,
    CouplerKitError,
    FluxDomainError,
    LabelingError,
    NetlistError,
    NoRootError,
    ResonanceError,
    SingularNetworkError,
    UnderdeterminedFitError,
)
from .fitkit import (
    CouplerFluxModel,
    FitResult,
    GFluxDataset,
    fit_g_vs_flux,
    model_g_mhz,
    synth_g_dataset,
)
from .numdiag import (
    DressedSpectrum,
    TruncatedHamiltonian,
    build_hamiltonian,
    dressed_spectrum,
    g_numeric,
    zz_numeric,
)
from .squid import (
    SquidParams,
    ej_of_flux,
    flux_for_ej,
    phase_from_flux_ratio,
    phi0_of_flux,
    upsilon,
)
from .transmon import (
    SystemModel,
    TransmonParams,
    TransmonRole,
    anharmonicity,
    anharmonicity_from_energies,
    coupling_rates,
    ej_for_frequency,
    frequency_from_energies,
    system_model,
    transmon_frequency,
    zpf,
    zpf_from_energies,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolationError",
    "CapNetwork",
    "Configuration",
    "CouplerFluxModel",
    "CouplerKitError",
    "DressedFrequencies",
    "DressedSpectrum",
    "E2_OVER_H_GHZ_FF",
    "EffectiveCoupling",
    "FitResult",
    "FluxDomainError",
    "GFluxDataset",
    "LabelingError",
    "ModeEnergies",
    "NetlistError",
    "NoRootError",
    "ResonanceError",
    "SingularNetworkError",
    "SquidParams",
    "SystemModel",
    "Topology",
    "TransmonParams",
    "TransmonRole",
    "TruncatedHamiltonian",
    "UnderdeterminedFitError",
    "ZZBreakdown",
    "anharmonicity",
    "anharmonicity_from_energies",
    "build_cap_matrix",
    "build_hamiltonian",
    "classify_configuration",
    "coupling_rates",
    "dressed_frequencies",
    "dressed_spectrum",
    "ej_for_frequency",
    "ej_of_flux",
    "energies_closed_form_floating",
    "energies_closed_form_grounded",
    "energies_exact",
    "find_zero_g",
    "find_zero_zz",
    "fit_g_vs_flux",
    "flux_for_ej",
    "frequency_from_energies",
    "g_net",
    "g_numeric",
    "load_netlist",
    "model_g_mhz",
    "netlist_to_dict",
    "phase_from_flux_ratio",
    "phi0_of_flux",
    "reduce_free_modes",
    "synth_g_dataset",
    "system_model",
    "transmon_frequency",
    "upsilon",
    "zpf",
    "zpf_from_energies",
    "zz_numeric",
    "zz_perturbative",
]

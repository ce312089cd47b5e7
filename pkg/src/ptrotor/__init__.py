"""Simulation toolkit for the PT-symmetric periodically kicked rotor.

Quasi-energy (Floquet) spectra and PT-breaking thresholds, kick-by-kick
momentum-space dynamics (dynamical localization versus resonance ratchet
acceleration), closed-form main-resonance analytics, and the equivalent
Fabry-Perot cavity with phase and loss gratings, with cross-validation
between all computational routes.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    AllFiltered,
    DegenerateFit,
    EigenFailure,
    InsufficientCoefficients,
    MismatchedParams,
    NonMonotoneDetector,
    NotCoprime,
    QuadratureUnresolved,
    SimulationError,
    SpillExceeded,
    TailNotDecayed,
    WindowOverflow,
    ZeroVector,
)
from .model import (  # noqa: F401
    GaugeForm,
    KickCoefficients,
    RotorParams,
    gauge_form,
    kick_coefficients,
    kick_coefficients_bessel,
    potential_value,
)
from .floquet import (  # noqa: F401
    BandStructure,
    FloquetMatrix,
    QuasiEnergySpectrum,
    ThresholdResult,
    build_floquet_matrix,
    estimate_threshold_small_lambda,
    filter_edge_states,
    mean_im_quasienergy,
    participation_ratio,
    pt_threshold,
    quasi_energy_spectrum,
    resonance_bands,
)
from .dynamics import (  # noqa: F401
    MomentumState,
    ObservableSeries,
    evolve,
    initial_state,
    kick_step,
    spreading_exponent,
)
from .resonance import (  # noqa: F401
    Dispersion,
    asymptotic_profile,
    dispersion,
    exact_resonance_state,
)
from .cavity import (  # noqa: F401
    CavityConfig,
    CavityRun,
    FarField,
    TransverseField,
    far_field,
    gaussian_input,
    physical_units,
    rotor_equivalence,
    roundtrip,
    run_decay,
)

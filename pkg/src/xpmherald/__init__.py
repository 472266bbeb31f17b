"""Heralded single-photon purification with cross-phase modulation.

A noisy single-photon source emits a mixture of one photon and vacuum.
Feeding it through a Mach-Zehnder interferometer whose upper arm shares a
cross-phase medium with the signal converts it into a heralded pure
single-photon source: when the two beam splitters invert each other, a
detector click on the auxiliary output certifies, with certainty, a photon
in the signal mode.  This package provides exact truncated-Fock-space
propagation of that setup, every closed-form probability describing it, a
phenomenological absorption model with tolerable-loss bounds, chained
multi-setup schemes, and a verification harness that cross-validates all
routes against each other.
"""

__version__ = "0.1.0"

from .cascade import (
    CascadeConfig,
    CascadeResult,
    reused_probe_pn,
    reused_probe_total,
    shared_probe_pn,
    shared_probe_total,
    simulate_cascade,
)
from .elements import (
    BeamSplitterParams,
    CoherentAmplitudes,
    XpmParams,
    apply_beam_splitter,
    apply_xpm,
    bs_coherent,
    bs_unitary,
    xpm_coherent_branch,
)
from .errors import (
    ConditioningError,
    ConfigurationError,
    CutoffViolationError,
    EnumerationLimitError,
    ModeMismatchError,
    TruncationError,
)
from .fock import (
    Ensemble,
    MultiModeKet,
    TruncationPolicy,
    condition,
    inner,
    make_coherent,
    make_fock,
    mode_number_distribution,
    same_state,
    tensor,
)
from .loss import (
    LossParams,
    LossyBranch,
    LossyHeraldReport,
    attenuate_mean,
    lossy_click_probs,
    lossy_heralded_efficiency,
    lossy_xpm,
    max_tolerable_loss,
)
from .mzi import (
    CoherentProbe,
    HeraldOutcome,
    MziConfig,
    NoisyPhotonProbe,
    NoisySource,
    coherent_outputs,
    detection_efficiency,
    is_transparent,
    optimal_theta1,
    propagate_mzi,
    run_setup,
    sample_shots,
    single_photon_click_prob,
    total_success,
    transparency_sign,
    transparent_via_angle_diff,
    transparent_via_angle_sum,
    vacuum_leak_amplitude,
)

__all__ = [
    "__version__",
    "BeamSplitterParams",
    "CascadeConfig",
    "CascadeResult",
    "CoherentAmplitudes",
    "CoherentProbe",
    "ConditioningError",
    "ConfigurationError",
    "CutoffViolationError",
    "Ensemble",
    "EnumerationLimitError",
    "HeraldOutcome",
    "LossParams",
    "LossyBranch",
    "LossyHeraldReport",
    "ModeMismatchError",
    "MultiModeKet",
    "MziConfig",
    "NoisyPhotonProbe",
    "NoisySource",
    "TruncationError",
    "TruncationPolicy",
    "XpmParams",
    "apply_beam_splitter",
    "apply_xpm",
    "attenuate_mean",
    "bs_coherent",
    "bs_unitary",
    "coherent_outputs",
    "condition",
    "detection_efficiency",
    "inner",
    "is_transparent",
    "lossy_click_probs",
    "lossy_heralded_efficiency",
    "lossy_xpm",
    "make_coherent",
    "make_fock",
    "max_tolerable_loss",
    "mode_number_distribution",
    "optimal_theta1",
    "propagate_mzi",
    "reused_probe_pn",
    "reused_probe_total",
    "run_setup",
    "same_state",
    "sample_shots",
    "shared_probe_pn",
    "shared_probe_total",
    "simulate_cascade",
    "single_photon_click_prob",
    "tensor",
    "total_success",
    "transparency_sign",
    "transparent_via_angle_diff",
    "transparent_via_angle_sum",
    "vacuum_leak_amplitude",
    "xpm_coherent_branch",
]

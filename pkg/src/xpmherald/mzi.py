"""The heralding interferometer.

Mode layout, fixed throughout the package:

* mode 0: signal A, fed by a noisy single-photon source,
* mode 1: probe B, upper interferometer arm, shares the XPM medium with A,
* mode 2: auxiliary C, lower arm, enters as vacuum and ends on a detector.

The pipeline is first beam splitter on (B, C), cross-phase gate on (A, B),
second beam splitter on (B, C), then the click/no-click effect on C.  When
the two beam splitters invert each other the empty interferometer is
transparent: with vacuum in A no photon can ever reach the detector, so a
click certifies a photon in A.  Conditioning on clicks then leaves a pure
one-photon state in the signal mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

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
from .errors import ConditioningError, ConfigurationError
from .fock import (
    Ensemble,
    MultiModeKet,
    TruncationPolicy,
    condition,
    make_coherent,
    make_fock,
    mode_number_distribution,
    tensor,
)

SIGNAL, PROBE, AUX = 0, 1, 2

# Above this probe mean photon number the classical coherent path is the
# default: truncation would need cutoffs far beyond what sparse Fock
# propagation buys, while the classical path is exact at any brightness.
BRIGHT_PROBE_MEAN_PHOTONS = 16.0


@dataclass(frozen=True)
class MziConfig:
    """Full interferometer parameterization: both beam splitters plus the
    cross-phase strength of the medium in the upper arm."""

    bs1: BeamSplitterParams
    bs2: BeamSplitterParams
    xpm: XpmParams

    @property
    def theta1(self) -> float:
        return self.bs1.theta

    @property
    def phi1(self) -> float:
        return self.bs1.phi

    @property
    def theta2(self) -> float:
        return self.bs2.theta

    @property
    def phi2(self) -> float:
        return self.bs2.phi

    @property
    def phi_chi(self) -> float:
        return self.xpm.phi_chi


@dataclass(frozen=True)
class NoisySource:
    """Imperfect single-photon source: emits one photon with probability p
    (its efficiency), vacuum otherwise."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"source efficiency must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class NoisyPhotonProbe:
    """Probe arm fed by a second noisy single-photon source."""

    source: NoisySource


@dataclass(frozen=True)
class CoherentProbe:
    """Probe arm fed by a coherent state of amplitude beta."""

    beta: complex


Probe = NoisyPhotonProbe | CoherentProbe


@dataclass(frozen=True)
class HeraldOutcome:
    """Everything a single run of the setup yields.

    ``truncation_deficit`` bounds the probability mass lost to coherent-state
    truncation; all probabilities here under-count by at most that much.
    ``purity_given_click`` is undefined when the click probability vanishes
    and raises on access in that case.
    """

    p_click: float
    detection_efficiency: float
    total_success: float
    truncation_deficit: float
    click_state: Ensemble | None
    no_click_state: Ensemble | None
    purity_value: float | None = None

    @property
    def purity_given_click(self) -> float:
        if self.purity_value is None:
            raise ConditioningError(
                "click probability is zero; the click-conditioned signal "
                "state is undefined"
            )
        return self.purity_value


def transparent_via_angle_sum(
    theta1: float, phi1: float, phi_chi: float, k: int = 0, l: int = 1
) -> MziConfig:
    """Transparent configuration from the equal-phase constraint family:
    phi1 - phi2 a multiple of 2*pi and theta1 + theta2 a multiple of pi."""
    return MziConfig(
        bs1=BeamSplitterParams(theta1, phi1),
        bs2=BeamSplitterParams(l * math.pi - theta1, phi1 - 2.0 * k * math.pi),
        xpm=XpmParams(phi_chi),
    )


def transparent_via_angle_diff(
    theta1: float, phi1: float, phi_chi: float, k: int = 0, l: int = 0
) -> MziConfig:
    """Transparent configuration from the opposite-phase constraint family:
    phi1 - phi2 an odd multiple of pi and theta1 - theta2 a multiple of pi."""
    return MziConfig(
        bs1=BeamSplitterParams(theta1, phi1),
        bs2=BeamSplitterParams(theta1 - l * math.pi, phi1 - (2 * k + 1) * math.pi),
        xpm=XpmParams(phi_chi),
    )


def vacuum_leak_amplitude(cfg: MziConfig) -> complex:
    """Amplitude for a lone probe photon to exit toward the detector.

    With vacuum in the signal mode, a single photon entering the probe arm
    leaves in the auxiliary mode with this amplitude; transparency is
    exactly its vanishing (for every input, see ``is_transparent``).
    """
    e1 = complex(math.cos(cfg.phi1), -math.sin(cfg.phi1))
    e2 = complex(math.cos(cfg.phi2), -math.sin(cfg.phi2))
    return e2 * math.cos(cfg.theta1) * math.sin(cfg.theta2) + e1 * math.sin(
        cfg.theta1
    ) * math.cos(cfg.theta2)


def bc_transfer_matrix(cfg: MziConfig) -> np.ndarray:
    """Composite substitution matrix of the empty interferometer on (B, C)."""
    return bs_unitary(cfg.bs1) @ bs_unitary(cfg.bs2)


def is_transparent(cfg: MziConfig, tol: float = 1e-9) -> bool:
    """Whether the empty interferometer leaves every (B, C) input unchanged.

    Checked at the operator level: the composite substitution matrix must be
    a multiple of the identity, which is robust against angle aliasing.  The
    multiple is +1 or -1; the -1 case flips the sign of both field operators,
    which changes no photon statistics anywhere (see ``transparency_sign``).
    """
    t = bc_transfer_matrix(cfg)
    lam = t[0, 0]
    if abs(abs(lam) - 1.0) > tol:
        return False
    return bool(np.max(np.abs(t - lam * np.eye(2))) <= tol)


def transparency_sign(cfg: MziConfig, tol: float = 1e-9) -> int:
    """+1 when the empty interferometer is the strict identity, -1 when it
    negates both field operators (a per-basis-state phase (-1)^(photons))."""
    if not is_transparent(cfg, tol):
        raise ConfigurationError("configuration is not transparent")
    return 1 if bc_transfer_matrix(cfg)[0, 0].real > 0.0 else -1


def propagate_mzi(ket: MultiModeKet, cfg: MziConfig) -> MultiModeKet:
    """Exact propagation of a 3-mode ket through the full setup."""
    out = apply_beam_splitter(ket, (PROBE, AUX), cfg.bs1)
    out = apply_xpm(out, (SIGNAL, PROBE), cfg.xpm)
    return apply_beam_splitter(out, (PROBE, AUX), cfg.bs2)


def coherent_outputs(
    cfg: MziConfig, beta: complex, photon_present: bool
) -> CoherentAmplitudes:
    """Classical-path (B, C) output amplitudes for a coherent probe.

    Exact for any mean photon number; this is the default route when the
    probe is too bright for truncated Fock propagation.
    """
    amps = CoherentAmplitudes((complex(beta), 0.0 + 0.0j))
    amps = bs_coherent(amps, (0, 1), cfg.bs1)
    amps = xpm_coherent_branch(amps, 0, photon_present, cfg.xpm)
    return bs_coherent(amps, (0, 1), cfg.bs2)


def _probe_branches(
    probe: Probe, policy: TruncationPolicy
) -> tuple[list[tuple[MultiModeKet, float]], int]:
    """Weighted probe kets and the cutoff the B and C registers need."""
    if isinstance(probe, NoisyPhotonProbe):
        pb = probe.source.p
        branches = [
            (make_fock((n,), (1,)), w)
            for n, w in ((1, pb), (0, 1.0 - pb))
            if w > 0.0
        ]
        return branches, 1
    ket = make_coherent(probe.beta, policy)
    return [(ket, 1.0)], ket.cutoffs[0]


def _propagated_branches(
    cfg: MziConfig,
    source: NoisySource,
    probe: Probe,
    policy: TruncationPolicy,
) -> list[tuple[float, int, float, MultiModeKet]]:
    """Propagate every discrete input branch once.

    Returns (joint weight, signal occupation, probe-branch weight, output ket).
    """
    probe_branches, cut = _probe_branches(probe, policy)
    vac_c = make_fock((0,), (cut,))
    signal_branches = [
        (occ, w) for occ, w in ((1, source.p), (0, 1.0 - source.p)) if w > 0.0
    ]
    out = []
    for a_occ, wa in signal_branches:
        a_ket = make_fock((a_occ,), (1,))
        for b_ket, wb in probe_branches:
            propagated = propagate_mzi(tensor([a_ket, b_ket, vac_c]), cfg)
            out.append((wa * wb, a_occ, wb, propagated))
    return out


def _click_mass(ket: MultiModeKet) -> float:
    return float(
        sum((a * a.conjugate()).real for occ, a in ket.amps.items() if occ[AUX] >= 1)
    )


def _classical_click_probs(cfg: MziConfig, beta: complex) -> tuple[float, float]:
    """Click probability with and without a signal photon, classical path."""
    with_photon = coherent_outputs(cfg, beta, True)
    without = coherent_outputs(cfg, beta, False)
    q1 = 1.0 - math.exp(-abs(with_photon[1]) ** 2)
    q0 = 1.0 - math.exp(-abs(without[1]) ** 2)
    return q1, q0


def _bright_probe_outcome(
    cfg: MziConfig, source: NoisySource, beta: complex
) -> HeraldOutcome:
    q1, q0 = _classical_click_probs(cfg, beta)
    p_click = source.p * q1 + (1.0 - source.p) * q0
    purity = source.p * q1 / p_click if p_click > 0.0 else None
    return HeraldOutcome(
        p_click=p_click,
        detection_efficiency=q1,
        total_success=q1 * source.p,
        truncation_deficit=0.0,
        click_state=None,
        no_click_state=None,
        purity_value=purity,
    )


def run_setup(
    cfg: MziConfig,
    source: NoisySource,
    probe: Probe,
    policy: TruncationPolicy | None = None,
    require_transparent: bool = True,
    force_exact: bool = False,
) -> HeraldOutcome:
    """Run the full heralding setup on a noisy signal and a chosen probe.

    Propagates the complete input ensemble exactly, applies the detector
    effect on the auxiliary mode, and returns every figure of merit.  With a
    transparent configuration the click-conditioned signal state is the pure
    one-photon state (up to the truncation deficit) and the total success
    probability factors into detection efficiency times source efficiency.

    A coherent probe brighter than ``BRIGHT_PROBE_MEAN_PHOTONS`` is routed
    through the exact classical coherent path instead of truncated Fock
    propagation; probabilities are then truncation-free but the conditioned
    branch ensembles are not materialized (``click_state`` is None).  Pass
    ``force_exact=True`` to cross-check the truncated path regardless.

    ``require_transparent=False`` skips the transparency check, for
    exploring configurations without the heralding guarantee.
    """
    policy = policy or TruncationPolicy()
    if require_transparent and not is_transparent(cfg):
        raise ConfigurationError(
            "configuration is not transparent; pass require_transparent=False "
            "to run it anyway (the heralding guarantee is void)"
        )
    if (
        isinstance(probe, CoherentProbe)
        and not force_exact
        and abs(probe.beta) ** 2 > BRIGHT_PROBE_MEAN_PHOTONS
    ):
        return _bright_probe_outcome(cfg, source, probe.beta)
    branches = _propagated_branches(cfg, source, probe, policy)
    deficit = 1.0 - sum(w * ket.squared_norm() for w, _, _, ket in branches)
    deficit = max(0.0, deficit)

    p_click = sum(w * _click_mass(ket) for w, _, _, ket in branches)
    detection_eff = sum(
        wb * _click_mass(ket) for _, a_occ, wb, ket in branches if a_occ == 1
    )
    ensemble = Ensemble([(w, ket) for w, _, _, ket in branches])

    try:
        _, click_state = condition(ensemble, AUX, "at_least_one")
    except ConditioningError:
        click_state = None
    try:
        _, no_click_state = condition(ensemble, AUX, "zero")
    except ConditioningError:
        no_click_state = None

    purity = None
    if click_state is not None:
        purity = float(
            sum(
                w * mode_number_distribution(ket, SIGNAL)[1]
                for w, ket in click_state.branches
            )
        )
    return HeraldOutcome(
        p_click=p_click,
        detection_efficiency=detection_eff,
        total_success=detection_eff * source.p,
        truncation_deficit=deficit,
        click_state=click_state,
        no_click_state=no_click_state,
        purity_value=purity,
    )


def single_photon_click_prob(cfg: MziConfig) -> float:
    """Closed-form click probability with one photon in each of signal and
    probe: sin^2(phi_chi / 2) * sin^2(2 theta1).  Transparent setups only."""
    if not is_transparent(cfg):
        raise ConfigurationError("closed form assumes a transparent configuration")
    return math.sin(cfg.phi_chi / 2.0) ** 2 * math.sin(2.0 * cfg.theta1) ** 2


def detection_efficiency(cfg: MziConfig, probe: Probe) -> float:
    """Closed-form probability that a photon present in the signal mode
    triggers the herald, for either probe choice."""
    if not is_transparent(cfg):
        raise ConfigurationError("closed form assumes a transparent configuration")
    s2 = math.sin(cfg.phi_chi / 2.0) ** 2 * math.sin(2.0 * cfg.theta1) ** 2
    if isinstance(probe, NoisyPhotonProbe):
        return s2 * probe.source.p
    return 1.0 - math.exp(-abs(probe.beta) ** 2 * s2)


def optimal_theta1(phi_chi: float) -> float:
    """First-beam-splitter angle maximizing the detection efficiency.

    The optimum sits at the symmetric splitter and does not depend on the
    exerted phase shift, which is why the argument is unused beyond
    signaling intent; the verification suite confirms the claim by sweeping.
    """
    return math.pi / 4.0


def total_success(cfg: MziConfig, source: NoisySource, probe: Probe) -> float:
    """Closed-form probability of producing a heralded photon per trial."""
    return detection_efficiency(cfg, probe) * source.p


def sample_shots(
    cfg: MziConfig,
    source: NoisySource,
    probe: Probe,
    n_shots: int,
    seed: int,
    policy: TruncationPolicy | None = None,
    require_transparent: bool = True,
) -> dict[str, int]:
    """Monte Carlo photodetection over repeated runs of the setup.

    Each shot samples the source branch (and the probe branch for a noisy
    probe), propagates it exactly, and samples the detector.  The stream is
    a counter-based generator, so results are reproducible for a given seed
    and shot batches can be split across workers.
    """
    if n_shots < 1:
        raise ValueError("n_shots must be at least 1")
    policy = policy or TruncationPolicy()
    if require_transparent and not is_transparent(cfg):
        raise ConfigurationError("configuration is not transparent")

    # Conditional click probabilities, one propagation per discrete branch.
    click_given: dict[tuple[int, int], float] = {}
    two_probe_branches = False
    if (
        isinstance(probe, CoherentProbe)
        and abs(probe.beta) ** 2 > BRIGHT_PROBE_MEAN_PHOTONS
    ):
        q1, q0 = _classical_click_probs(cfg, probe.beta)
        click_given[(1, 0)] = q1
        click_given[(0, 0)] = q0
    else:
        probe_branches, cut = _probe_branches(probe, policy)
        two_probe_branches = len(probe_branches) == 2
        vac_c = make_fock((0,), (cut,))
        for a_occ in (0, 1):
            a_ket = make_fock((a_occ,), (1,))
            for b_idx, (b_ket, _) in enumerate(probe_branches):
                out = propagate_mzi(tensor([a_ket, b_ket, vac_c]), cfg)
                click_given[(a_occ, b_idx)] = _click_mass(out)

    rng = np.random.Generator(np.random.Philox(seed))
    photon = rng.random(n_shots) < source.p
    if isinstance(probe, NoisyPhotonProbe) and two_probe_branches:
        # branch index 0 is the occupied probe ket when 0 < p_B < 1
        probe_occupied = rng.random(n_shots) < probe.source.p
        b_idx = np.where(probe_occupied, 0, 1)
    else:
        b_idx = np.zeros(n_shots, dtype=int)
    p_click = np.empty(n_shots)
    for (a_occ, idx), prob in click_given.items():
        mask = (photon == bool(a_occ)) & (b_idx == idx)
        p_click[mask] = prob
    click = rng.random(n_shots) < p_click
    return {
        "click_and_photon": int(np.count_nonzero(click & photon)),
        "click_no_photon": int(np.count_nonzero(click & ~photon)),
        "no_click_photon": int(np.count_nonzero(~click & photon)),
        "no_click_no_photon": int(np.count_nonzero(~click & ~photon)),
    }

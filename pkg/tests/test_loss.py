import math

import numpy as np
import pytest

from xpmherald.elements import XpmParams, apply_beam_splitter
from xpmherald.errors import ConditioningError
from xpmherald.fock import (
    Ensemble,
    MultiModeKet,
    TruncationPolicy,
    condition,
    make_coherent,
    tensor,
)
from xpmherald.loss import (
    LossParams,
    attenuate_mean,
    lossy_click_probs,
    lossy_heralded_efficiency,
    lossy_xpm,
    max_tolerable_loss,
)
from xpmherald.mzi import (
    CoherentProbe,
    detection_efficiency,
    transparent_via_angle_sum,
)

PI = math.pi


def symmetric_cfg(phi_chi):
    return transparent_via_angle_sum(PI / 4.0, 0.0, phi_chi)


def test_loss_params_survival_identity():
    for pa in (0.0, 0.3, 1.0):
        loss = LossParams(pa)
        assert loss.survival_amplitude**2 + pa == pytest.approx(1.0, abs=1e-12)


def test_attenuate_mean_examples():
    assert attenuate_mean(4.0, LossParams(0.25)) == pytest.approx(3.0)
    assert attenuate_mean(1.7, LossParams(0.0)) == 1.7
    assert attenuate_mean(1.7, LossParams(1.0)) == 0.0


def test_lossy_xpm_lossless_limit():
    branches = lossy_xpm(True, 1.0 + 0.0j, LossParams(0.0), XpmParams(PI))
    assert len(branches) == 1
    assert branches[0].weight == 1.0
    assert branches[0].signal_photons == 1
    assert branches[0].probe_amplitude == pytest.approx(-1.0, abs=1e-15)


def test_lossy_xpm_vacuum_signal_still_attenuates():
    branches = lossy_xpm(False, 2.0 + 0.0j, LossParams(0.36), XpmParams(1.0))
    assert len(branches) == 1
    assert branches[0].signal_photons == 0
    assert branches[0].probe_amplitude == pytest.approx(2.0 * 0.8)


def test_lossy_xpm_full_absorption():
    branches = lossy_xpm(True, 2.0 + 0.0j, LossParams(1.0), XpmParams(1.0))
    assert len(branches) == 1
    assert branches[0].weight == 1.0
    assert branches[0].signal_photons == 0
    assert branches[0].probe_amplitude == 0.0


def test_lossy_xpm_branch_weights():
    branches = lossy_xpm(True, 1.0 + 0.0j, LossParams(0.3), XpmParams(1.0))
    assert [b.signal_photons for b in branches] == [1, 0]
    assert branches[0].weight == pytest.approx(0.7)
    assert branches[1].weight == pytest.approx(0.3)
    u = math.sqrt(0.7)
    assert abs(branches[0].probe_amplitude) == pytest.approx(u)
    assert branches[1].probe_amplitude == pytest.approx(u)


def test_lossy_click_probs_lossless_recovers_ideal():
    cfg = symmetric_cfg(2.0)
    q1, q0 = lossy_click_probs(cfg, 1.3, LossParams(0.0))
    assert q0 == 0.0
    assert q1 == pytest.approx(
        detection_efficiency(cfg, CoherentProbe(1.3)), abs=1e-12
    )


def test_lossy_click_probs_inert_phase_blind():
    q1, q0 = lossy_click_probs(symmetric_cfg(0.0), 1.3, LossParams(0.4))
    assert q1 == pytest.approx(q0, abs=1e-15)


def test_lossy_click_probs_closed_form_point():
    u = math.sqrt(0.5)
    q1, q0 = lossy_click_probs(symmetric_cfg(PI), 1.0, LossParams(0.5))
    assert q1 == pytest.approx(1.0 - math.exp(-((1.0 + u) ** 2) / 4.0), abs=1e-12)
    assert q0 == pytest.approx(1.0 - math.exp(-((1.0 - u) ** 2) / 4.0), abs=1e-12)


def test_lossy_click_probs_general_formula():
    rng = np.random.default_rng(44)
    for _ in range(15):
        theta1 = float(rng.uniform(0.1, PI / 2.0 - 0.1))
        phi_chi = float(rng.uniform(0.1, 2.0 * PI - 0.1))
        beta = float(rng.uniform(0.3, 3.0))
        pa = float(rng.uniform(0.0, 0.95))
        cfg = transparent_via_angle_sum(theta1, 0.0, phi_chi)
        u = math.sqrt(1.0 - pa)
        scale = beta**2 / 4.0 * math.sin(2.0 * theta1) ** 2
        phase = complex(math.cos(phi_chi), math.sin(phi_chi))
        q1, q0 = lossy_click_probs(cfg, beta, LossParams(pa))
        assert q1 == pytest.approx(
            1.0 - math.exp(-scale * abs(u * phase - 1.0) ** 2), abs=1e-12
        )
        assert q0 == pytest.approx(
            1.0 - math.exp(-scale * (1.0 - u) ** 2), abs=1e-12
        )
        assert q1 >= q0 - 1e-15


def test_lossy_click_probs_cross_checked_against_exact_propagation():
    # propagate each absorb-or-survive branch exactly in truncated Fock
    # space: probe through the first splitter, attenuated-and-phased probe
    # through the second, then the click effect
    eps = 1e-10
    theta1, phi_chi, beta, pa = 0.6, 1.9, 0.8, 0.35
    cfg = transparent_via_angle_sum(theta1, 0.0, phi_chi)
    u = math.sqrt(1.0 - pa)
    arm_b = beta * math.cos(theta1)
    arm_c = beta * math.sin(theta1)
    q1_cf, q0_cf = lossy_click_probs(cfg, beta, LossParams(pa))
    for survived, expected in ((True, q1_cf), (False, q0_cf)):
        phase = complex(math.cos(phi_chi), math.sin(phi_chi)) if survived else 1.0
        cut = make_coherent(beta, TruncationPolicy(tail_tolerance=eps)).cutoffs[0]
        policy = TruncationPolicy(tail_tolerance=eps, fixed_cutoff=cut)
        product = tensor(
            [
                make_coherent(u * arm_b * phase, policy),
                make_coherent(arm_c, policy),
            ]
        )
        # truncate by total photons: the splitter conserves the total, and
        # the joint Poisson tail above the cut is below the tolerance
        ket = MultiModeKet(
            {occ: a for occ, a in product.amps.items() if sum(occ) <= cut},
            product.cutoffs,
        )
        out = apply_beam_splitter(ket, (0, 1), cfg.bs2)
        prob, _ = condition(Ensemble.pure(out), 1, "at_least_one")
        assert prob == pytest.approx(expected, abs=1e-8)


def test_heralded_efficiency_lossless_is_one():
    cfg = symmetric_cfg(2.0)
    for p_a in (0.05, 0.4, 1.0):
        report = lossy_heralded_efficiency(p_a, cfg, 1.0, LossParams(0.0))
        assert report.p_prime == pytest.approx(1.0)
        assert report.improvement or p_a == 1.0


def test_heralded_efficiency_unit_source_specialization():
    cfg = symmetric_cfg(PI)
    pa = 0.3
    report = lossy_heralded_efficiency(1.0, cfg, 1.0, LossParams(pa))
    expected = (
        (1.0 - pa) * report.q1 / ((1.0 - pa) * report.q1 + pa * report.q0)
    )
    assert report.p_prime == pytest.approx(expected, abs=1e-12)


def test_heralded_efficiency_monte_carlo_oracle():
    # sequential sampling over the branch model reproduces the conditional
    cfg = symmetric_cfg(PI)
    p_a, beta, pa = 0.4, 1.0, 0.3
    report = lossy_heralded_efficiency(p_a, cfg, beta, LossParams(pa))
    rng = np.random.default_rng(99)
    shots = 400_000
    photon = rng.random(shots) < p_a
    survived = photon & (rng.random(shots) < (1.0 - pa))
    click_prob = np.where(survived, report.q1, report.q0)
    click = rng.random(shots) < click_prob
    estimate = np.count_nonzero(click & survived) / np.count_nonzero(click)
    sigma = math.sqrt(report.p_prime * (1.0 - report.p_prime) / np.count_nonzero(click))
    assert abs(estimate - report.p_prime) < 4.0 * sigma


def test_heralded_efficiency_zero_click_denominator():
    cfg = symmetric_cfg(0.0)
    with pytest.raises(ConditioningError):
        lossy_heralded_efficiency(0.5, cfg, 1.0, LossParams(0.0))


def test_improvement_identity_algebra():
    cfg = symmetric_cfg(2.4)
    for p_a in (0.1, 0.5, 0.9):
        for pa in (0.05, 0.3, 0.7):
            report = lossy_heralded_efficiency(p_a, cfg, 1.5, LossParams(pa))
            lhs = report.improvement
            rhs = (1.0 - pa) * report.q1 * (1.0 - p_a) > (
                p_a * pa + 1.0 - p_a
            ) * report.q0
            assert lhs == rhs


def test_p_prime_monotone_in_absorption():
    cfg = symmetric_cfg(2.0)
    prev = 1.5
    for pa in np.linspace(0.0, 0.9, 19):
        val = lossy_heralded_efficiency(0.5, cfg, 2.0, LossParams(float(pa))).p_prime
        assert val <= prev + 1e-12
        prev = val


def test_max_tolerable_loss_strong_phase_reference_values():
    cfg = symmetric_cfg(PI)
    for beta_sq, ref in ((1.0, 0.80), (1e2, 0.35), (1e4, 0.06)):
        bound = max_tolerable_loss(cfg, math.sqrt(beta_sq))
        assert abs(bound - ref) <= 0.05


def test_max_tolerable_loss_is_a_root_of_the_margin():
    # independent root check: the weak-source margin changes sign at the bound
    cfg = symmetric_cfg(PI)
    bound = max_tolerable_loss(cfg, 1.0, tol=1e-8)

    def margin(pa):
        q1, q0 = lossy_click_probs(cfg, 1.0, LossParams(pa))
        return (1.0 - pa) * q1 - q0

    assert margin(bound - 1e-6) > 0.0
    assert margin(bound + 1e-6) < 0.0


def test_max_tolerable_loss_weak_phase_reported_values():
    # the reference criterion for these rows is unstated; computed values
    # are compared loosely for order of magnitude and reported elsewhere
    cfg = symmetric_cfg(0.010)
    for beta_sq in (1e2, 1e4, 1e6):
        bound = max_tolerable_loss(cfg, math.sqrt(beta_sq))
        assert 0.0 < bound < 0.15


def test_max_tolerable_loss_fixed_p_approaches_weak_source_limit():
    cfg = symmetric_cfg(PI)
    weak = max_tolerable_loss(cfg, 1.0)
    fixed_small = max_tolerable_loss(cfg, 1.0, fixed_p=1e-6)
    assert abs(weak - fixed_small) < 1e-3


def test_max_tolerable_loss_rejects_inert_xpm():
    with pytest.raises(ValueError):
        max_tolerable_loss(symmetric_cfg(0.0), 1.0)
    with pytest.raises(ValueError):
        max_tolerable_loss(symmetric_cfg(PI), 0.0)


def test_max_tolerable_loss_degenerate_angle_returns_zero():
    cfg = transparent_via_angle_sum(0.0, 0.0, PI, l=0)
    with pytest.warns(UserWarning):
        assert max_tolerable_loss(cfg, 1.0) == 0.0

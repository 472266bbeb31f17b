import itertools
import math

import numpy as np
import pytest

from xpmherald.cascade import (
    CascadeConfig,
    ENUMERATION_CAP,
    reused_probe_pn,
    reused_probe_total,
    shared_probe_pn,
    shared_probe_total,
    simulate_cascade,
)
from xpmherald.errors import EnumerationLimitError
from xpmherald.mzi import CoherentProbe, detection_efficiency, transparent_via_angle_sum

PI = math.pi


def enum_shared_pn(n, alpha, phi_chi, p):
    """Test-local exhaustive oracle over photon patterns of earlier setups."""
    a2 = abs(alpha) ** 2
    s2 = math.sin(phi_chi / 2.0) ** 2
    c2 = math.cos(phi_chi / 2.0) ** 2

    def click(rank):
        return 1.0 - math.exp(-a2 * s2 * c2**rank)

    total = 0.0
    for pattern in itertools.product((0, 1), repeat=n - 1):
        weight = 1.0
        rank = 0
        for has_photon in pattern:
            if has_photon:
                weight *= p * (1.0 - click(rank))
                rank += 1
            else:
                weight *= 1.0 - p
        total += weight * p * click(rank)
    return total


def test_reused_pn_first_setup_matches_single_setup():
    alpha, phi_chi = 1.3, 1.1
    cfg = transparent_via_angle_sum(PI / 4.0, 0.0, phi_chi)
    assert reused_probe_pn(1, alpha, phi_chi) == pytest.approx(
        detection_efficiency(cfg, CoherentProbe(alpha)), abs=1e-12
    )


def test_reused_pn_full_phase_depletes_probe():
    # a half-turn phase empties the probe after one pass
    assert reused_probe_pn(2, 2.0, PI) == pytest.approx(0.0, abs=1e-30)


def test_reused_pn_matches_sequential_oracle():
    cfg = CascadeConfig("reused_probe", 10, 2.0, PI / 2.0, 1.0)
    sim = simulate_cascade(cfg)
    for n in range(1, 11):
        assert sim.per_setup[n - 1] == pytest.approx(
            reused_probe_pn(n, 2.0, PI / 2.0), abs=1e-12
        )


def test_reused_partial_sums_telescope():
    # independent algebra: the no-click survivals telescope into
    # 1 - exp(-|alpha|^2 (1 - cos^(2N)(phi_chi/2)))
    alpha, phi_chi = 1.7, 0.9
    c2 = math.cos(phi_chi / 2.0) ** 2
    prev = 0.0
    for n_setups in (1, 3, 10, 40):
        total = sum(reused_probe_pn(n, alpha, phi_chi) for n in range(1, n_setups + 1))
        closed = 1.0 - math.exp(-abs(alpha) ** 2 * (1.0 - c2**n_setups))
        assert total == pytest.approx(closed, abs=1e-12)
        assert prev <= total <= 1.0
        prev = total
    # the full sum saturates to one only for a bright probe
    assert sum(reused_probe_pn(n, 10.0, phi_chi) for n in range(1, 200)) == pytest.approx(
        1.0, abs=1e-12
    )


def test_reused_total_zero_source():
    assert reused_probe_total(20, 2.0, 1.0, 0.0) == 0.0


def test_reused_total_single_setup():
    p, alpha, phi_chi = 0.8, 1.1, 1.3
    expected = p * (1.0 - math.exp(-abs(alpha) ** 2 * math.sin(phi_chi / 2.0) ** 2))
    assert reused_probe_total(1, alpha, phi_chi, p) == pytest.approx(expected)


def test_reused_total_approaches_source_efficiency():
    total = reused_probe_total(50, 5.0, PI / 2.0, 0.6)
    assert abs(total - 0.6) < 1e-6


def test_reused_total_monotone():
    prev = 0.0
    for n in (1, 2, 4, 8, 16):
        val = reused_probe_total(n, 1.2, 1.0, 0.5)
        assert val >= prev
        prev = val
    prev = 0.0
    for alpha in (0.5, 1.0, 2.0, 4.0):
        val = reused_probe_total(10, alpha, 1.0, 0.5)
        assert val >= prev
        prev = val


def test_shared_pn_first_setup():
    alpha, phi_chi, p = 1.3, 1.1, 0.4
    expected = p * (1.0 - math.exp(-abs(alpha) ** 2 * math.sin(phi_chi / 2.0) ** 2))
    assert shared_probe_pn(1, alpha, phi_chi, p) == pytest.approx(expected)


def test_shared_pn_unit_source_reduces_to_reused():
    for n in range(1, 8):
        assert shared_probe_pn(n, 1.4, 1.9, 1.0) == pytest.approx(
            reused_probe_pn(n, 1.4, 1.9), abs=1e-12
        )


def test_shared_pn_against_test_local_enumeration():
    assert shared_probe_pn(4, math.sqrt(2.0), PI / 2.0, 0.5) == pytest.approx(
        enum_shared_pn(4, math.sqrt(2.0), PI / 2.0, 0.5), abs=1e-14
    )
    for n, alpha, phi_chi, p in [
        (1, 1.0, 0.7, 0.3),
        (3, 2.0, 2.4, 0.9),
        (6, 0.8, PI / 3.0, 0.5),
    ]:
        assert shared_probe_pn(n, alpha, phi_chi, p) == pytest.approx(
            enum_shared_pn(n, alpha, phi_chi, p), abs=1e-13
        )


def test_shared_pn_matches_library_enumeration_grid():
    worst = 0.0
    for p in (0.3, 0.8):
        for alpha_sq in (1.0, 4.0):
            for phi_chi in (0.8, PI / 2.0, 2.6):
                cfg = CascadeConfig(
                    "shared_probe", 9, math.sqrt(alpha_sq), phi_chi, p
                )
                sim = simulate_cascade(cfg)
                for n in range(1, 10):
                    closed = shared_probe_pn(n, cfg.alpha, phi_chi, p)
                    worst = max(worst, abs(closed - sim.per_setup[n - 1]))
    assert worst < 1e-12, f"closed form deviates from enumeration by {worst}"


def test_shared_total_first_setup():
    assert shared_probe_total(1, 1.3, 1.1, 0.4) == pytest.approx(
        shared_probe_pn(1, 1.3, 1.1, 0.4)
    )


def test_shared_total_zero_source():
    assert shared_probe_total(30, 2.0, 1.0, 0.0) == 0.0


def test_shared_total_approaches_one():
    assert shared_probe_total(100, 5.0, PI / 2.0, 0.3) >= 0.999


def test_shared_total_monotone():
    prev = 0.0
    for n in (1, 2, 5, 10, 20):
        val = shared_probe_total(n, 1.2, 1.0, 0.5)
        assert val >= prev
        prev = val


def test_simulate_exact_reused_equals_closed_form():
    cfg = CascadeConfig("reused_probe", 100, 5.0, 2.6, 0.7)
    sim = simulate_cascade(cfg)
    closed = np.array([reused_probe_pn(n, 5.0, 2.6) for n in range(1, 101)])
    assert np.max(np.abs(sim.per_setup - closed)) < 1e-12
    assert sim.total == pytest.approx(0.7 * closed.sum(), abs=1e-12)


def test_simulate_full_phase_only_first_setup_clicks():
    cfg = CascadeConfig("reused_probe", 5, 2.0, PI, 1.0)
    sim = simulate_cascade(cfg)
    assert sim.per_setup[0] == pytest.approx(1.0 - math.exp(-4.0))
    assert np.all(sim.per_setup[1:] < 1e-30)
    assert sim.residual_amp == pytest.approx(0.0, abs=1e-15)


def test_simulate_residual_amplitude_matches_arm_recursion():
    # per-pass shrinkage equals the no-click probe output of one setup at
    # the symmetric splitter, taken from the interferometer module itself
    from xpmherald.mzi import coherent_outputs

    phi_chi = 1.3
    cfg = CascadeConfig("reused_probe", 7, 1.5, phi_chi, 1.0)
    sim = simulate_cascade(cfg)
    setup = transparent_via_angle_sum(PI / 4.0, 0.0, phi_chi)
    shrink = abs(coherent_outputs(setup, 1.0, True)[0])
    assert shrink == pytest.approx(abs(math.cos(phi_chi / 2.0)), abs=1e-12)
    assert sim.residual_amp == pytest.approx(1.5 * shrink**7, abs=1e-12)


def test_simulate_enumeration_cap():
    cfg = CascadeConfig("shared_probe", ENUMERATION_CAP + 1, 1.0, 1.0, 0.5)
    with pytest.raises(EnumerationLimitError):
        simulate_cascade(cfg)


def test_simulate_monte_carlo_deterministic():
    cfg = CascadeConfig("shared_probe", 5, 1.0, 1.2, 0.5)
    a = simulate_cascade(cfg, shots=20_000, seed=9)
    b = simulate_cascade(cfg, shots=20_000, seed=9)
    assert np.array_equal(a.per_setup, b.per_setup)
    assert a.total == b.total


def test_simulate_monte_carlo_requires_seed():
    cfg = CascadeConfig("shared_probe", 5, 1.0, 1.2, 0.5)
    with pytest.raises(ValueError):
        simulate_cascade(cfg, shots=100)


def test_simulate_monte_carlo_matches_closed_form():
    shots = 100_000
    cfg = CascadeConfig("shared_probe", 6, 1.2, PI / 2.0, 0.5)
    mc = simulate_cascade(cfg, shots=shots, seed=77)
    for n in range(1, 7):
        closed = shared_probe_pn(n, cfg.alpha, cfg.phi_chi, cfg.p)
        sigma = math.sqrt(max(closed * (1.0 - closed), 1e-12) / shots)
        assert abs(mc.per_setup[n - 1] - closed) < 4.0 * sigma

    cfg = CascadeConfig("reused_probe", 6, 1.2, PI / 2.0, 0.6)
    mc = simulate_cascade(cfg, shots=shots, seed=78)
    # per-setup estimates are conditional on the photon being present
    for n in range(1, 7):
        closed = reused_probe_pn(n, cfg.alpha, cfg.phi_chi)
        sigma = math.sqrt(max(closed * (1.0 - closed), 1e-12) / (shots * cfg.p))
        assert abs(mc.per_setup[n - 1] - closed) < 4.5 * sigma
    expected_total = reused_probe_total(6, cfg.alpha, cfg.phi_chi, cfg.p)
    sigma = math.sqrt(expected_total * (1.0 - expected_total) / shots)
    assert abs(mc.total - expected_total) < 4.0 * sigma


def test_cascade_config_validation():
    with pytest.raises(ValueError):
        CascadeConfig("bogus", 5, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        CascadeConfig("reused_probe", 0, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        CascadeConfig("reused_probe", 5, 1.0, 1.0, 1.5)

import math

import numpy as np
import pytest

from xpmherald.elements import (
    BeamSplitterParams,
    CoherentAmplitudes,
    XpmParams,
    apply_beam_splitter,
    apply_xpm,
    bs_coherent,
    bs_unitary,
    xpm_coherent_branch,
)
from xpmherald.errors import CutoffViolationError
from xpmherald.fock import (
    MultiModeKet,
    TruncationPolicy,
    inner,
    make_coherent,
    make_fock,
    mode_number_distribution,
    tensor,
)

SQRT2 = math.sqrt(2.0)


def random_two_mode_ket(rng, cutoff, max_total):
    occs = [
        (n, m)
        for n in range(cutoff + 1)
        for m in range(cutoff + 1)
        if n + m <= max_total
    ]
    vec = rng.normal(size=len(occs)) + 1j * rng.normal(size=len(occs))
    vec /= np.linalg.norm(vec)
    return MultiModeKet({o: complex(a) for o, a in zip(occs, vec)}, (cutoff, cutoff))


def dense_bs_unitary(theta, phi, cutoff):
    """Independent oracle: exponentiate the two-mode quadratic generator.

    Exact on every total-photon sector that fits the cutoff, because the
    generator conserves photon number.
    """
    d = cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, d)), 1)
    eye = np.eye(d)
    a1 = np.kron(a, eye)
    a2 = np.kron(eye, a)
    gen = np.exp(1j * phi) * (a1.conj().T @ a2) - np.exp(-1j * phi) * (
        a2.conj().T @ a1
    )
    herm = 1j * gen
    w, v = np.linalg.eigh(herm)
    return v @ np.diag(np.exp(1j * theta * w)) @ v.conj().T


def to_dense(ket, cutoff):
    d = cutoff + 1
    vec = np.zeros(d * d, dtype=complex)
    for (n, m), amp in ket.amps.items():
        vec[n * d + m] = amp
    return vec


def test_single_photon_splits_evenly():
    ket = make_fock((1, 0), (1, 1))
    out = apply_beam_splitter(ket, (0, 1), BeamSplitterParams(math.pi / 4.0, 0.0))
    assert out.amplitude((1, 0)) == pytest.approx(1.0 / SQRT2, abs=1e-15)
    assert out.amplitude((0, 1)) == pytest.approx(1.0 / SQRT2, abs=1e-15)


def test_theta_zero_is_identity():
    rng = np.random.default_rng(2)
    ket = random_two_mode_ket(rng, 3, 3)
    out = apply_beam_splitter(ket, (0, 1), BeamSplitterParams(0.0, 1.3))
    for occ in ket.amps:
        assert out.amplitude(occ) == pytest.approx(ket.amplitude(occ), abs=1e-15)


def test_two_photon_bunching():
    # both photons leave together; derived by expanding the substituted
    # creation operators on vacuum
    ket = make_fock((1, 1), (2, 2))
    out = apply_beam_splitter(ket, (0, 1), BeamSplitterParams(math.pi / 4.0, 0.0))
    assert out.amplitude((0, 2)) == pytest.approx(1.0 / SQRT2, abs=1e-14)
    assert out.amplitude((2, 0)) == pytest.approx(-1.0 / SQRT2, abs=1e-14)
    assert abs(out.amplitude((1, 1))) < 1e-14


def test_beam_splitter_matches_dense_exponential_oracle():
    rng = np.random.default_rng(42)
    cutoff = 4
    for _ in range(12):
        theta = float(rng.uniform(0.0, math.pi))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        ket = random_two_mode_ket(rng, cutoff, cutoff)
        sparse_out = apply_beam_splitter(ket, (0, 1), BeamSplitterParams(theta, phi))
        dense_out = dense_bs_unitary(theta, phi, cutoff) @ to_dense(ket, cutoff)
        assert np.allclose(to_dense(sparse_out, cutoff), dense_out, atol=1e-10)


def test_beam_splitter_norm_preserved():
    rng = np.random.default_rng(9)
    for _ in range(20):
        ket = random_two_mode_ket(rng, 4, 4)
        out = apply_beam_splitter(
            ket,
            (0, 1),
            BeamSplitterParams(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 7))),
        )
        assert out.squared_norm() == pytest.approx(ket.squared_norm(), abs=1e-12)


def test_beam_splitter_inverse_roundtrip():
    # the inverse map is the same splitter with negated mixing angle
    rng = np.random.default_rng(31)
    for _ in range(20):
        theta = float(rng.uniform(0.0, math.pi))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        ket = random_two_mode_ket(rng, 4, 4)
        out = apply_beam_splitter(ket, (0, 1), BeamSplitterParams(theta, phi))
        back = apply_beam_splitter(out, (0, 1), BeamSplitterParams(-theta, phi))
        for occ in set(ket.amps) | set(back.amps):
            assert back.amplitude(occ) == pytest.approx(
                ket.amplitude(occ), abs=1e-12
            )


def test_beam_splitter_reversed_mode_pair():
    # feeding the pair in reverse order is the same element with both
    # angles negated: swap-conjugating the substitution matrix
    rng = np.random.default_rng(57)
    ket = random_two_mode_ket(rng, 3, 3)
    theta, phi = 0.8, 1.7
    swapped = apply_beam_splitter(ket, (1, 0), BeamSplitterParams(theta, phi))
    direct = apply_beam_splitter(ket, (0, 1), BeamSplitterParams(-theta, -phi))
    for occ in set(swapped.amps) | set(direct.amps):
        assert swapped.amplitude(occ) == pytest.approx(
            direct.amplitude(occ), abs=1e-12
        )


def test_beam_splitter_handles_large_occupation():
    # normalization weights must not overflow where raw factorials would
    ket = make_fock((180, 0), (180, 180))
    out = apply_beam_splitter(ket, (0, 1), BeamSplitterParams(0.7, 0.3))
    assert out.squared_norm() == pytest.approx(1.0, abs=1e-9)


def test_beam_splitter_refuses_to_drop_photons():
    ket = make_fock((1, 1), (1, 1))  # no room for the bunched |2,0> component
    with pytest.raises(CutoffViolationError):
        apply_beam_splitter(ket, (0, 1), BeamSplitterParams(math.pi / 4.0, 0.0))


def test_xpm_single_pair_phase():
    ket = make_fock((1, 1), (1, 1))
    phi_chi = 0.9
    out = apply_xpm(ket, (0, 1), XpmParams(phi_chi))
    assert out.amplitude((1, 1)) == pytest.approx(
        complex(math.cos(phi_chi), math.sin(phi_chi)), abs=1e-15
    )


def test_xpm_vacuum_control_does_nothing():
    for m in range(4):
        ket = make_fock((0, m), (1, 3))
        out = apply_xpm(ket, (0, 1), XpmParams(2.3))
        assert out.amplitude((0, m)) == 1.0


def test_xpm_product_of_occupations():
    ket = make_fock((2, 3), (2, 3))
    out = apply_xpm(ket, (0, 1), XpmParams(math.pi / 6.0))
    # n*m = 6 turns pi/6 into a half turn
    assert out.amplitude((2, 3)) == pytest.approx(-1.0, abs=1e-14)


def test_xpm_preserves_number_distributions():
    rng = np.random.default_rng(17)
    ket = random_two_mode_ket(rng, 3, 6)
    out = apply_xpm(ket, (0, 1), XpmParams(1.7))
    for mode in (0, 1):
        assert np.allclose(
            mode_number_distribution(ket, mode),
            mode_number_distribution(out, mode),
            atol=1e-12,
        )


def test_xpm_working_flag():
    assert XpmParams(0.3).working
    assert not XpmParams(0.0).working
    assert not XpmParams(4.0 * math.pi).working


def test_bs_unitary_is_unitary():
    u = bs_unitary(BeamSplitterParams(0.7, 1.9))
    assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-15)


def test_bs_coherent_splits_probe():
    theta1, phi1 = 0.6, 1.1
    out = bs_coherent(
        CoherentAmplitudes((2.0 + 0.0j, 0.0j)), (0, 1), BeamSplitterParams(theta1, phi1)
    )
    assert out[0] == pytest.approx(2.0 * math.cos(theta1))
    assert out[1] == pytest.approx(
        2.0 * complex(math.cos(-phi1), math.sin(-phi1)) * math.sin(theta1)
    )


def test_bs_coherent_identity():
    out = bs_coherent(
        CoherentAmplitudes((1.5 + 0.5j, 0.0j)), (0, 1), BeamSplitterParams(0.0, 2.0)
    )
    assert out[0] == pytest.approx(1.5 + 0.5j)
    assert out[1] == 0.0


def test_bs_coherent_conserves_mean_photons():
    rng = np.random.default_rng(23)
    for _ in range(20):
        amps = CoherentAmplitudes(
            (
                complex(rng.normal(), rng.normal()),
                complex(rng.normal(), rng.normal()),
            )
        )
        out = bs_coherent(
            amps,
            (0, 1),
            BeamSplitterParams(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 7))),
        )
        assert out.mean_photons() == pytest.approx(amps.mean_photons(), abs=1e-12)


def test_xpm_coherent_branch_phase_flip():
    out = xpm_coherent_branch(
        CoherentAmplitudes((1.2 + 0.0j,)), 0, True, XpmParams(math.pi)
    )
    assert out[0] == pytest.approx(-1.2, abs=1e-15)


def test_xpm_coherent_branch_absent_photon():
    out = xpm_coherent_branch(
        CoherentAmplitudes((1.2 + 0.0j,)), 0, False, XpmParams(math.pi)
    )
    assert out[0] == 1.2


def test_xpm_coherent_branch_agrees_with_exact():
    # classical path against exact truncated propagation on |1> x |beta>
    eps = 1e-10
    for beta in (0.5, 1.0, 2.0):
        coh = make_coherent(beta, TruncationPolicy(tail_tolerance=eps))
        ket = tensor([make_fock((1,), (1,)), coh])
        phi_chi = 1.3
        exact = apply_xpm(ket, (0, 1), XpmParams(phi_chi))
        rotated = xpm_coherent_branch(
            CoherentAmplitudes((complex(beta),)), 0, True, XpmParams(phi_chi)
        )
        target = tensor(
            [
                make_fock((1,), (1,)),
                make_coherent(rotated[0], TruncationPolicy(eps, coh.cutoffs[0])),
            ]
        )
        fidelity = abs(inner(target, exact))
        assert fidelity >= 1.0 - eps * 10

"""Beam-splitter and cross-phase-modulation primitives.

Both elements exist on two representations:

* the exact path, rewriting sparse truncated Fock kets, and
* the classical path, mapping one complex amplitude per mode for registers
  known to hold coherent states (exact for arbitrary mean photon number,
  no truncation involved).

Beam-splitter sign convention, fixed once and used everywhere: the creation
operator of input 1 maps to ``cos(theta) a1' + exp(-i phi) sin(theta) a2'``
and that of input 2 to ``-exp(i phi) sin(theta) a1' + cos(theta) a2'``.
The interferometer transparency constraints depend on this convention, so
no other module builds its own matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CutoffViolationError
from .fock import MultiModeKet


@dataclass(frozen=True)
class BeamSplitterParams:
    """Beam splitter angles: cos^2(theta) reflectivity, sin^2(theta)
    transmittivity, phi the relative phase."""

    theta: float
    phi: float = 0.0


@dataclass(frozen=True)
class XpmParams:
    """Cross-phase-modulation strength, the accumulated phase per photon pair."""

    phi_chi: float

    @property
    def working(self) -> bool:
        """False when the phase is an integer multiple of 2*pi (inert XPM)."""
        residue = self.phi_chi % (2.0 * math.pi)
        return min(residue, 2.0 * math.pi - residue) > 1e-9


@dataclass(frozen=True)
class CoherentAmplitudes:
    """One complex amplitude per mode, for modes in coherent states."""

    amps: tuple[complex, ...]

    def __getitem__(self, mode: int) -> complex:
        return self.amps[mode]

    @property
    def n_modes(self) -> int:
        return len(self.amps)

    def mean_photons(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amps))


def bs_unitary(p: BeamSplitterParams) -> np.ndarray:
    """2x2 creation-operator substitution matrix of the beam splitter."""
    c = math.cos(p.theta)
    s = math.sin(p.theta)
    ph = complex(math.cos(p.phi), math.sin(p.phi))
    return np.array([[c, s / ph], [-s * ph, c]], dtype=complex)


@lru_cache(maxsize=32768)
def _bs_block(n: int, m: int, theta: float, phi: float) -> tuple:
    """Output amplitudes for the two-mode input |n, m> under the rewrite.

    Returns tuples ((p, q), amplitude) with p + q = n + m.  Computed by
    binomial expansion of the substituted creation-operator product; the
    normalization ratio sqrt(p! q! / (n! m!)) is evaluated as a binomial
    ratio so it stays finite far beyond where raw factorials overflow.
    """
    u = bs_unitary(BeamSplitterParams(theta, phi))
    t1, r1 = u[0, 0], u[0, 1]
    r2, t2 = u[1, 0], u[1, 1]
    total = n + m
    out: dict[tuple[int, int], complex] = {}
    for k in range(n + 1):
        c_nk = math.comb(n, k) * t1**k * r1 ** (n - k)
        for l in range(m + 1):
            coeff = c_nk * math.comb(m, l) * r2**l * t2 ** (m - l)
            p, q = k + l, (n - k) + (m - l)
            out[(p, q)] = out.get((p, q), 0.0 + 0.0j) + coeff
    scaled = []
    for (p, q), coeff in out.items():
        if coeff != 0.0:
            w = math.sqrt(math.comb(total, n) / math.comb(total, p))
            scaled.append(((p, q), coeff * w))
    return tuple(scaled)


def apply_beam_splitter(
    ket: MultiModeKet, modes: tuple[int, int], p: BeamSplitterParams
) -> MultiModeKet:
    """Apply the beam splitter to two modes of a Fock ket.

    Unitary on the two-mode subspace; photons redistribute between the
    modes, so each output occupation must fit the cutoffs.  Redistribution
    beyond a cutoff raises instead of dropping amplitude: silent leakage
    would fake the very no-false-click guarantee this library exists to
    check.
    """
    i, j = modes
    if i == j:
        raise ValueError("beam splitter modes must be distinct")
    cut_i, cut_j = ket.cutoffs[i], ket.cutoffs[j]
    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in ket.amps.items():
        n, m = occ[i], occ[j]
        for (pi, qj), coeff in _bs_block(n, m, p.theta, p.phi):
            if pi > cut_i or qj > cut_j:
                raise CutoffViolationError(
                    f"beam splitter sends |{n},{m}> to |{pi},{qj}> beyond "
                    f"cutoffs ({cut_i},{cut_j}) on modes {modes}"
                )
            new = list(occ)
            new[i], new[j] = pi, qj
            key = tuple(new)
            val = out.get(key, 0.0 + 0.0j) + amp * coeff
            if val == 0.0:
                out.pop(key, None)
            else:
                out[key] = val
    return MultiModeKet(out, ket.cutoffs)


def apply_xpm(
    ket: MultiModeKet, modes: tuple[int, int], p: XpmParams
) -> MultiModeKet:
    """Cross-phase gate: each basis amplitude with occupations (n, m) on the
    given modes picks up exp(i phi_chi * n * m).  Diagonal, norm and photon
    numbers preserved."""
    i, j = modes
    if i == j:
        raise ValueError("XPM modes must be distinct")
    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in ket.amps.items():
        nm = occ[i] * occ[j]
        if nm:
            phase = complex(math.cos(p.phi_chi * nm), math.sin(p.phi_chi * nm))
            out[occ] = amp * phase
        else:
            out[occ] = amp
    return MultiModeKet(out, ket.cutoffs)


def bs_coherent(
    amps: CoherentAmplitudes, modes: tuple[int, int], p: BeamSplitterParams
) -> CoherentAmplitudes:
    """Beam splitter on the classical path.

    Coherent amplitudes transform with the transpose of the operator
    substitution matrix; total mean photon number is conserved.
    """
    i, j = modes
    u = bs_unitary(p)
    new = list(amps.amps)
    ai, aj = amps[i], amps[j]
    new[i] = u[0, 0] * ai + u[1, 0] * aj
    new[j] = u[0, 1] * ai + u[1, 1] * aj
    return CoherentAmplitudes(tuple(new))


def xpm_coherent_branch(
    amps: CoherentAmplitudes, mode: int, photon_present: bool, p: XpmParams
) -> CoherentAmplitudes:
    """XPM acting on a coherent mode whose partner holds a definite photon
    number: the coherent amplitude rotates by exp(i phi_chi) when a photon
    is present and is untouched otherwise."""
    if not photon_present:
        return amps
    phase = complex(math.cos(p.phi_chi), math.sin(p.phi_chi))
    new = list(amps.amps)
    new[mode] = phase * new[mode]
    return CoherentAmplitudes(tuple(new))

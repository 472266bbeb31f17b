"""Sparse truncated Fock-space states for few-mode photonic simulation.

A state is a map from occupation tuples ``(n_1, ..., n_M)`` to complex
amplitudes, with an independent cutoff per mode.  The schemes simulated here
populate very few basis tuples per branch, so sparse storage beats a dense
``(n_max+1)^M`` vector by a wide margin.

Mixed states are ensembles of pure kets (weighted branch lists).  Every
mixture that occurs in this problem, such as a noisy photon source or the
absorb-or-survive loss model, is diagonal in a small set of branch kets, so
ensembles are exact and cheap; no density-matrix calculus is needed.

Truncated coherent states are kept sub-normalized: the missing Poisson tail
is never redistributed over the retained amplitudes.  Downstream
probabilities therefore under-count by at most the tail mass, which callers
report as an error bar instead of silently biasing results.

All values are treated as immutable after construction and all operations
are pure functions, so states can be shared freely across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConditioningError,
    CutoffViolationError,
    ModeMismatchError,
    TruncationError,
)

NORM_TOL = 1e-12

# Hard ceiling for automatic coherent-state cutoffs.  Mean photon numbers
# that need more retained occupations than this belong on the classical
# coherent-amplitude path, not in truncated Fock space.
MAX_AUTO_CUTOFF = 100_000

# Double precision cannot certify tail masses below this; a cumulative sum
# saturating to 1.0 says nothing about a 1e-300 request.
CERTIFIABLE_TAIL = 1e-15


@dataclass(frozen=True)
class TruncationPolicy:
    """How infinite-dimensional (coherent) states are truncated.

    tail_tolerance: maximum photon-number probability mass allowed beyond
        the retained cutoff.
    fixed_cutoff: retain occupations ``0..fixed_cutoff``.  ``None`` selects
        the smallest cutoff whose Poisson tail is below ``tail_tolerance``.
    """

    tail_tolerance: float = 1e-10
    fixed_cutoff: int | None = None

    def __post_init__(self):
        if not 0.0 < self.tail_tolerance < 1.0:
            raise ValueError(
                f"tail_tolerance must lie in (0, 1), got {self.tail_tolerance}"
            )
        if self.fixed_cutoff is not None and self.fixed_cutoff < 0:
            raise ValueError("fixed_cutoff must be non-negative")


@dataclass(frozen=True)
class MultiModeKet:
    """Pure state over a truncated multimode Fock basis.

    ``amps`` maps occupation tuples to complex amplitudes; ``cutoffs`` gives
    the largest retained occupation per mode.  Kets may be sub-normalized
    (squared norm below one) when they represent truncated or conditioned
    branches, but never super-normalized.
    """

    amps: dict[tuple[int, ...], complex]
    cutoffs: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.cutoffs):
            raise ValueError("cutoffs must be non-negative")
        m = len(self.cutoffs)
        for occ in self.amps:
            if len(occ) != m:
                raise ModeMismatchError(
                    f"occupation {occ} has {len(occ)} modes, expected {m}"
                )
            for n, c in zip(occ, self.cutoffs):
                if n < 0 or n > c:
                    raise CutoffViolationError(
                        f"occupation {occ} exceeds cutoffs {self.cutoffs}"
                    )
        sq = self.squared_norm()
        if sq > 1.0 + 1e-12:
            raise ValueError(f"squared norm {sq} exceeds 1")

    @property
    def n_modes(self) -> int:
        return len(self.cutoffs)

    def amplitude(self, occ: tuple[int, ...]) -> complex:
        return self.amps.get(tuple(occ), 0.0 + 0.0j)

    def squared_norm(self) -> float:
        return float(sum((a * a.conjugate()).real for a in self.amps.values()))

    def norm(self) -> float:
        return math.sqrt(self.squared_norm())

    def scaled(self, factor: complex) -> "MultiModeKet":
        return MultiModeKet(
            {occ: a * factor for occ, a in self.amps.items()}, self.cutoffs
        )


@dataclass(frozen=True)
class Ensemble:
    """Weighted list of pure branches representing a (diagonal) mixed state."""

    branches: list[tuple[float, MultiModeKet]]

    def __post_init__(self):
        for w, _ in self.branches:
            if w < 0.0:
                raise ValueError(f"branch weight {w} is negative")

    @property
    def total_weight(self) -> float:
        return float(sum(w for w, _ in self.branches))

    @classmethod
    def pure(cls, ket: MultiModeKet) -> "Ensemble":
        return cls([(1.0, ket)])


def make_fock(occupations: tuple[int, ...], cutoffs: tuple[int, ...]) -> MultiModeKet:
    """Unit-norm basis ket with amplitude 1 on the given occupation tuple."""
    occ = tuple(int(n) for n in occupations)
    cut = tuple(int(c) for c in cutoffs)
    if len(occ) != len(cut):
        raise ModeMismatchError(
            f"{len(occ)} occupations given for {len(cut)} cutoffs"
        )
    return MultiModeKet({occ: 1.0 + 0.0j}, cut)


def _poisson_tail(mean: float, n_max: int) -> float:
    """Probability mass of a Poisson(mean) variable above n_max."""
    if mean == 0.0:
        return 0.0
    term = math.exp(-mean)
    cum = term
    for k in range(1, n_max + 1):
        term *= mean / k
        cum += term
    return max(0.0, 1.0 - cum)


def coherent_cutoff(mean_photons: float, policy: TruncationPolicy) -> int:
    """Cutoff a truncated coherent state of given mean photon number needs.

    Raises TruncationError when the policy cannot reach its tail tolerance,
    carrying the achieved tail mass.
    """
    if policy.tail_tolerance < CERTIFIABLE_TAIL:
        raise TruncationError(
            f"tail tolerance {policy.tail_tolerance:.3e} is below the "
            f"double-precision certification floor {CERTIFIABLE_TAIL:.0e}",
            tail=CERTIFIABLE_TAIL,
        )
    if policy.fixed_cutoff is not None:
        tail = _poisson_tail(mean_photons, policy.fixed_cutoff)
        if tail >= policy.tail_tolerance:
            raise TruncationError(
                f"fixed cutoff {policy.fixed_cutoff} leaves tail mass {tail:.3e} "
                f">= tolerance {policy.tail_tolerance:.3e}",
                tail=tail,
            )
        return policy.fixed_cutoff
    if mean_photons == 0.0:
        return 0
    term = math.exp(-mean_photons)
    cum = term
    for n in range(MAX_AUTO_CUTOFF + 1):
        if 1.0 - cum < policy.tail_tolerance:
            return n
        term *= mean_photons / (n + 1)
        cum += term
    raise TruncationError(
        f"no cutoff <= {MAX_AUTO_CUTOFF} meets tail tolerance "
        f"{policy.tail_tolerance:.3e} at mean photon number {mean_photons:.3e}; "
        "use the classical coherent-amplitude path instead",
        tail=max(0.0, 1.0 - cum),
    )


def make_coherent(beta: complex, policy: TruncationPolicy | None = None) -> MultiModeKet:
    """Truncated single-mode coherent state.

    Amplitudes are ``exp(-|beta|^2/2) beta^n / sqrt(n!)`` for retained n.
    The ket is deliberately NOT renormalized; its norm deficit equals the
    discarded Poisson tail and stays below the policy's tail tolerance.
    """
    policy = policy or TruncationPolicy()
    beta = complex(beta)
    mean = abs(beta) ** 2
    n_max = coherent_cutoff(mean, policy)
    amps: dict[tuple[int, ...], complex] = {}
    a = complex(math.exp(-mean / 2.0))
    amps[(0,)] = a
    for n in range(1, n_max + 1):
        a = a * beta / math.sqrt(n)
        if a != 0.0:
            amps[(n,)] = a
    return MultiModeKet(amps, (n_max,))


def tensor(kets: list[MultiModeKet]) -> MultiModeKet:
    """Tensor product: occupation tuples concatenate, amplitudes multiply."""
    if not kets:
        raise ValueError("tensor of zero kets is undefined")
    amps = {occ: a for occ, a in kets[0].amps.items()}
    cutoffs = kets[0].cutoffs
    for ket in kets[1:]:
        merged: dict[tuple[int, ...], complex] = {}
        for occ1, a1 in amps.items():
            for occ2, a2 in ket.amps.items():
                merged[occ1 + occ2] = a1 * a2
        amps = merged
        cutoffs = cutoffs + ket.cutoffs
    return MultiModeKet(amps, cutoffs)


def inner(a: MultiModeKet, b: MultiModeKet) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    if a.cutoffs != b.cutoffs:
        raise ModeMismatchError(
            f"mode structures differ: cutoffs {a.cutoffs} vs {b.cutoffs}"
        )
    small, large = (a.amps, b.amps) if len(a.amps) <= len(b.amps) else (b.amps, a.amps)
    total = 0.0 + 0.0j
    if small is a.amps:
        for occ, amp in small.items():
            other = large.get(occ)
            if other is not None:
                total += amp.conjugate() * other
    else:
        for occ, amp in small.items():
            other = large.get(occ)
            if other is not None:
                total += other.conjugate() * amp
    return total


def same_state(a: MultiModeKet, b: MultiModeKet, tol: float = 1e-9) -> bool:
    """Physical (global-phase-insensitive) state equality.

    True when ``|<a|b>| >= (1 - tol) * |a| * |b|``.
    """
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        return na == nb
    return abs(inner(a, b)) >= (1.0 - tol) * na * nb


def mode_number_distribution(ket: MultiModeKet, mode: int) -> np.ndarray:
    """Photon-number probabilities of one mode, marginal over the others.

    Entry n gives the probability of finding n photons in ``mode``,
    normalized by the ket's squared norm.
    """
    sq = ket.squared_norm()
    if sq <= 0.0:
        raise ValueError("zero-norm ket has no number distribution")
    dist = np.zeros(ket.cutoffs[mode] + 1)
    for occ, a in ket.amps.items():
        dist[occ[mode]] += (a * a.conjugate()).real
    return dist / sq


def _event_mass(ket: MultiModeKet, mode: int, event: str) -> float:
    if event == "zero":
        return float(
            sum(
                (a * a.conjugate()).real
                for occ, a in ket.amps.items()
                if occ[mode] == 0
            )
        )
    return float(
        sum(
            (a * a.conjugate()).real
            for occ, a in ket.amps.items()
            if occ[mode] >= 1
        )
    )


def _project(ket: MultiModeKet, mode: int, event: str) -> MultiModeKet:
    if event == "zero":
        amps = {occ: a for occ, a in ket.amps.items() if occ[mode] == 0}
    else:
        amps = {occ: a for occ, a in ket.amps.items() if occ[mode] >= 1}
    return MultiModeKet(amps, ket.cutoffs)


def condition(
    ensemble: Ensemble, mode: int, event: str
) -> tuple[float, Ensemble]:
    """Condition an ensemble on a detector event in one mode.

    ``event`` is ``"zero"`` (no photon seen) or ``"at_least_one"`` (click;
    the effect operator summing every occupied number state of the mode).
    Returns the total event probability and the renormalized
    post-measurement ensemble.  Probabilities are raw squared-amplitude
    masses, so sub-normalized branch kets under-count by at most their
    truncation deficit.
    """
    if event not in ("zero", "at_least_one"):
        raise ValueError(f"unknown event {event!r}")
    total = ensemble.total_weight
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"ensemble weights sum to {total}, expected 1")
    prob = 0.0
    posterior: list[tuple[float, MultiModeKet]] = []
    for w, ket in ensemble.branches:
        mass = _event_mass(ket, mode, event)
        contribution = w * mass
        prob += contribution
        if contribution > 0.0:
            projected = _project(ket, mode, event).scaled(1.0 / math.sqrt(mass))
            posterior.append((contribution, projected))
    if prob <= 0.0:
        raise ConditioningError(
            f"event {event!r} on mode {mode} has probability 0"
        )
    posterior = [(w / prob, k) for w, k in posterior]
    return prob, Ensemble(posterior)

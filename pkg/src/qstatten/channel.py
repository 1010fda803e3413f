"""Photon-loss and shot-noise model: survival probability, binomial
transmission, and Poisson counts around rounded expectations."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .povm import PovmSet


@dataclass(frozen=True)
class FiberSpec:
    """One fiber: attenuation alpha in dB/km and length in km."""

    alpha: float
    length: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise InvalidArgumentError(f"alpha must be finite and >= 0, got {self.alpha}")
        if not (math.isfinite(self.length) and self.length >= 0):
            raise InvalidArgumentError(f"length must be finite and >= 0, got {self.length}")


@dataclass(frozen=True)
class TransmissionDraw:
    produced: int
    survived: int
    survival_prob: float

    def __post_init__(self):
        if not 0 <= self.survived <= self.produced:
            raise InvalidArgumentError("survived count outside [0, produced]")
        if not 0.0 <= self.survival_prob <= 1.0:
            raise InvalidArgumentError("survival probability outside [0, 1]")


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream: (seed, stream path) -> Generator.

    Children extend the path, so every work unit in a sweep owns a
    statistically independent stream derived only from indices, never
    from execution order.
    """

    seed: int
    stream: tuple = field(default_factory=tuple)

    def child(self, *ids):
        return RngStream(self.seed, self.stream + tuple(int(i) for i in ids))

    def generator(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        return np.random.Generator(np.random.Philox(ss))


def round_half_up(x):
    """Nearest integer with halves rounded up: floor(x + 0.5) for x >= 0."""
    return int(math.floor(x + 0.5))


def survival_probability(fibers, base="e"):
    """Per-photon (or per-pair) survival over one or two fibers.

    The default follows the source model verbatim: exp(-alpha*L/10).
    base="10" selects the conventional dB law 10^(-alpha*L/10).
    """
    if not 1 <= len(fibers) <= 2:
        raise InvalidArgumentError(f"expected 1 or 2 fibers, got {len(fibers)}")
    exponent = sum(f.alpha * f.length for f in fibers) / 10.0
    if base == "e":
        return math.exp(-exponent)
    if base == "10":
        return 10.0 ** (-exponent)
    raise InvalidArgumentError(f"attenuation base must be 'e' or '10', got {base!r}")


def draw_transmitted(produced, p, rng):
    """Binomial thinning of the produced photon number."""
    if produced < 0:
        raise InvalidArgumentError("produced count must be >= 0")
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"survival probability {p!r} outside [0, 1]")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    survived = int(gen.binomial(produced, p))
    return TransmissionDraw(produced=int(produced), survived=survived, survival_prob=p)


def expected_counts(rho, povm, produced):
    """e_k = round_half_up(N * Tr(M_k rho)), clamped at zero."""
    if rho.shape[0] != povm.dim:
        raise InvalidArgumentError(
            f"state dimension {rho.shape[0]} does not match POVM dimension {povm.dim}"
        )
    probs = np.real(np.einsum("kij,ji->k", povm.operators, rho))
    return np.array([max(0, round_half_up(produced * p)) for p in probs], dtype=np.int64)


def draw_measured_counts(
    rho_in,
    povm: PovmSet,
    produced,
    fibers,
    rng,
    base="e",
    transmission_mode="per_setting",
    deterministic=False,
):
    """Simulated counts m_k for one tomographic experiment.

    per_setting draws the transmitted number separately for every
    operator; per_state shares a single draw across all of them. In
    deterministic mode both sampling stages are replaced by their
    (rounded) means, which keeps only the rounding error.
    """
    if rho_in.shape[0] != povm.dim:
        raise InvalidArgumentError(
            f"state dimension {rho_in.shape[0]} does not match POVM dimension {povm.dim}"
        )
    if transmission_mode not in ("per_setting", "per_state"):
        raise InvalidArgumentError(f"unknown transmission mode {transmission_mode!r}")
    p = survival_probability(fibers, base=base)
    probs = np.real(np.einsum("kij,ji->k", povm.operators, rho_in))
    counts = np.zeros(povm.eta, dtype=np.int64)
    if deterministic:
        survived = round_half_up(produced * p)
        for k in range(povm.eta):
            counts[k] = max(0, round_half_up(survived * probs[k]))
        return counts
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    if transmission_mode == "per_state":
        survived = int(gen.binomial(produced, p))
        means = [max(0, round_half_up(survived * probs[k])) for k in range(povm.eta)]
    else:
        means = []
        for k in range(povm.eta):
            survived = int(gen.binomial(produced, p))
            means.append(max(0, round_half_up(survived * probs[k])))
    for k in range(povm.eta):
        counts[k] = int(gen.poisson(means[k]))
    return counts

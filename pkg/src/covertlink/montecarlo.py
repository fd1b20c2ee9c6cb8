"""Shot-level Monte Carlo for the two-way covert link.

The closed forms elsewhere in this package say what the receivers *should*
see; this module rolls the dice.  A slot is M identical channel uses carrying
one binary phase symbol.  Bob's homodyne receiver integrates M x-quadrature
samples and takes the sign; the correlation receiver for entangled
transmission does the same with the idler-return product observable.  Both
are simulated at the Gaussian level: per-shot means and variances come from
the channel model, the M-shot sample mean from the central limit (exact here,
since every per-shot statistic involved is Gaussian or enters only through
its first two moments).

Also here: a small exact model of the adversary's best slot-level
discrimination (two tapped modes, phase-randomized binary alphabet, Helstrom
test), and a toy random-coding experiment for the reliability side of the
square-root law.

Randomness is counter-based (Philox) and laid out chunk by chunk from a
single SeedSequence, so results are bitwise reproducible and independent of
how many workers consume the chunks: merging is plain summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import erfcinv

from .covertness import _validate_beta_det
from .fock import _bs_block, thermal_weights
from .gaussian import closed_form_eve_relent

__all__ = [
    "CHUNK_DRAWS",
    "MIN_TRIALS",
    "WILSON_Z",
    "EVE_DIM_LIMIT",
    "CODEBOOK_CAP_BITS",
    "SlotConfig",
    "SimResult",
    "EveDiscriminationResult",
    "AwgnReduction",
    "homodyne_moments",
    "tmsv_local_moments",
    "wilson_interval",
    "exponent_estimate",
    "simulate_coherent_homodyne",
    "simulate_tmsv_local",
    "eve_output_state",
    "simulate_eve_helstrom",
    "random_coding_threshold_bits",
    "random_coding_experiment",
]

# Largest number of Gaussian draws handled in one array; one chunk is also
# the unit of parallel work, so the chunk layout (not the worker count)
# determines every random stream.
CHUNK_DRAWS = 5_000_000
# Empirical error probabilities need enough trials for the interval to mean
# anything at all.
MIN_TRIALS = 100
# 95% two-sided normal quantile for the Wilson score interval.
WILSON_Z = 1.959963984540054
# Exact adversary discrimination is dense linear algebra on the two tapped
# modes; beyond this joint dimension, fall back to the entropy bound.
EVE_DIM_LIMIT = 3600
# Random-coding codebooks are stored dense; 2^16 codewords is the toy-scale
# ceiling.
CODEBOOK_CAP_BITS = 16


def _philox(seed_seq: np.random.SeedSequence) -> np.random.Generator:
    """Counter-based generator for one chunk's worth of draws."""
    return np.random.Generator(np.random.Philox(seed_seq))


def _chunk_sizes(trials: int, per_chunk: int) -> list[int]:
    full, rest = divmod(trials, per_chunk)
    return [per_chunk] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class SlotConfig:
    """One slot of the protocol: M channel uses carrying one binary symbol.

    eta is the amplitude transmissivity of each one-way pass, n_s the mean
    signal photon number per use, n_b the thermal background occupation, and
    m the number of uses integrated per symbol decision.
    """

    eta: float
    n_s: float
    n_b: float
    m: int
    alphabet: str = "BPSK"
    seed: int = 2026

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if self.n_s < 0.0 or self.n_b < 0.0:
            raise ValueError("photon numbers must be >= 0")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m (uses per symbol) must be an integer >= 1, got {self.m}")
        if self.alphabet != "BPSK":
            raise ValueError(f"only the BPSK alphabet is implemented, got {self.alphabet!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


class SimResult(NamedTuple):
    """Empirical error probability with a 95% Wilson score interval."""

    trials: int
    errors: int
    p_err: float
    ci_low: float
    ci_high: float


class EveDiscriminationResult(NamedTuple):
    """Adversary's best error probability distinguishing on from off.

    ``exact`` marks the dense Helstrom branch; otherwise ``error_probability``
    is the Pinsker-style lower bound max(0, 1/2 - sqrt(relent_total/8)) and
    ``kept_mass`` is NaN.
    """

    error_probability: float
    exact: bool
    relent_total: float
    kept_mass: float


@dataclass(frozen=True)
class AwgnReduction:
    """Slot-averaged scalar channel induced by the covert protocol.

    After M-use integration, one slot behaves as a real AWGN channel: the
    decision statistic has variance sigma_beta_sq = (1+N_B)/(2 beta eta^2 M)
    around a binary mean of +-symbol_mean.  beta_det records which receiver
    exponent prefactor produced it.
    """

    sigma_beta_sq: float
    beta_det: int
    symbol_mean: float

    def __post_init__(self):
        if not self.sigma_beta_sq > 0.0:
            raise ValueError("sigma_beta_sq must be positive")
        _validate_beta_det(self.beta_det)
        if self.symbol_mean < 0.0:
            raise ValueError("symbol_mean must be >= 0")

    @classmethod
    def from_protocol(cls, plan, eta: float, n_b: float, beta: float) -> "AwgnReduction":
        """Reduce a planned slot structure to its scalar AWGN description.

        beta is the per-use receiver exponent constant for the detector in
        play; the plan supplies the uses-per-slot M, the signal level, and
        the detector prefactor.
        """
        if not 0.0 < eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {eta}")
        if n_b < 0.0:
            raise ValueError("n_b must be >= 0")
        if not beta > 0.0:
            raise ValueError("beta must be positive")
        sigma_sq = (1.0 + n_b) / (2.0 * beta * eta ** 2 * plan.big_m)
        return cls(sigma_beta_sq=sigma_sq, beta_det=plan.beta_det,
                   symbol_mean=math.sqrt(2.0 * plan.n_s / math.pi))


def homodyne_moments(cfg: SlotConfig) -> tuple[float, float]:
    """Per-use x-quadrature mean (symbol +1) and variance at the receiver.

    A coherent pulse of n_s photons arrives attenuated to amplitude
    eta*sqrt(n_s), so the x quadrature (in units with vacuum variance 1/2)
    is centred on eta*sqrt(2 n_s); the untapped fraction of the thermal
    background adds (1-eta^2) n_b on top of the vacuum half.
    """
    mean = cfg.eta * math.sqrt(2.0 * cfg.n_s)
    variance = 0.5 + (1.0 - cfg.eta ** 2) * cfg.n_b
    return mean, variance


def tmsv_local_moments(cfg: SlotConfig) -> tuple[float, float]:
    """Per-use mean (symbol +1) and variance of the idler-return correlator.

    The observable is the two-mode quadrature product a_I a_R + h.c. on the
    retained idler and the attenuated return.  Its mean is twice the
    surviving cross-correlation c = eta sqrt(n_s (1+n_s)); its variance
    follows from fourth-order Gaussian moment factorization (Wick) of the
    zero-displacement joint state,

        var = 2 c^2 + (n_I + 1)(n_R + 1) + n_I n_R,

    with n_I = n_s the idler occupation and n_R = eta^2 n_s + (1-eta^2) n_b
    the return occupation.
    """
    c = cfg.eta * math.sqrt(cfg.n_s * (1.0 + cfg.n_s))
    n_i = cfg.n_s
    n_r = cfg.eta ** 2 * cfg.n_s + (1.0 - cfg.eta ** 2) * cfg.n_b
    mean = 2.0 * c
    variance = 2.0 * c ** 2 + (n_i + 1.0) * (n_r + 1.0) + n_i * n_r
    return mean, variance


def wilson_interval(errors: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Chosen over the normal interval because covert links operate at error
    probabilities near 0, where symmetric intervals spill below zero.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= errors <= trials:
        raise ValueError("errors must lie in [0, trials]")
    p_hat = errors / trials
    denom = 1.0 + z ** 2 / trials
    centre = (p_hat + z ** 2 / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p_hat * (1 - p_hat) / trials + z ** 2 / (4 * trials ** 2))
    return max(0.0, centre - half), min(1.0, centre + half)


def exponent_estimate(p_err: float, shots: int) -> float:
    """Invert the Gaussian error law p = (1/2) erfc(sqrt(kappa*shots)).

    Returns the per-use exponent estimate kappa.  This inversion removes the
    subexponential prefactor exactly for Gaussian decision statistics; the
    naive -log(p)/shots converges to the same limit only as shots -> inf.
    """
    if not 0.0 < p_err < 1.0:
        raise ValueError(f"p_err must lie in (0, 1), got {p_err}")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    return float(erfcinv(2.0 * p_err)) ** 2 / shots


def _finish(trials: int, errors: int) -> SimResult:
    lo, hi = wilson_interval(errors, trials)
    return SimResult(trials=trials, errors=errors, p_err=errors / trials,
                     ci_low=lo, ci_high=hi)


def simulate_coherent_homodyne(cfg: SlotConfig, trials: int, *,
                               method: str = "auto",
                               one_time_pad: bool = True) -> SimResult:
    """Simulate slot decisions for coherent pulses and homodyne readout.

    Each trial sends one binary phase symbol as M identical coherent pulses,
    optionally wrapped in a fresh one-time phase pad; Bob measures the x
    quadrature of every use, removes the pad, averages, and takes the sign.
    For a binary phase alphabet the pad is itself a sign in the same group,
    so applying and removing it is exact (+-1 products carry no rounding)
    and pad on/off yield bitwise-identical decisions from matched seeds --
    the pad draws come from their own substream and never touch the noise.

    method selects how the M per-use samples are produced: "literal" draws
    every one of them; "reduced" draws the M-use sample mean directly from
    its exact Gaussian law; "auto" uses literal up to 5e7 total draws.
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials, got {trials}")
    if method not in ("auto", "literal", "reduced"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "literal" if trials * cfg.m <= 10 * CHUNK_DRAWS else "reduced"
    mean, variance = homodyne_moments(cfg)
    per_chunk = max(1, CHUNK_DRAWS // cfg.m) if method == "literal" else CHUNK_DRAWS
    sizes = _chunk_sizes(trials, per_chunk)
    children = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    errors = 0
    for child, size in zip(children, sizes):
        sym_ss, pad_ss, noise_ss = child.spawn(3)
        symbols = 2.0 * _philox(sym_ss).integers(0, 2, size) - 1.0
        if one_time_pad:
            pad = 2.0 * _philox(pad_ss).integers(0, 2, size) - 1.0
            carried = (symbols * pad) * pad  # applied, then removed: exact
        else:
            carried = symbols
        noise = _philox(noise_ss)
        if method == "literal":
            samples = carried[:, None] * mean + noise.normal(
                0.0, math.sqrt(variance), (size, cfg.m))
            sample_mean = samples.mean(axis=1)
        else:
            sample_mean = carried * mean + noise.normal(
                0.0, math.sqrt(variance / cfg.m), size)
        errors += int(np.count_nonzero(np.sign(sample_mean) != carried))
    return _finish(trials, errors)


def simulate_tmsv_local(cfg: SlotConfig, trials: int) -> SimResult:
    """Simulate slot decisions for the entangled local correlation receiver.

    Per-shot statistics of the idler-return correlator enter only through
    their first two moments, so the M-use decision statistic is drawn
    directly from its Gaussian sample-mean law (the analysis this package
    reproduces is itself a central-limit statement; per-shot spectral
    sampling of the correlator is deliberately out of scope).
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials, got {trials}")
    mean, variance = tmsv_local_moments(cfg)
    sizes = _chunk_sizes(trials, CHUNK_DRAWS)
    children = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    errors = 0
    for child, size in zip(children, sizes):
        sym_ss, noise_ss = child.spawn(2)
        symbols = 2.0 * _philox(sym_ss).integers(0, 2, size) - 1.0
        sample_mean = symbols * mean + _philox(noise_ss).normal(
            0.0, math.sqrt(variance / cfg.m), size)
        errors += int(np.count_nonzero(np.sign(sample_mean) != symbols))
    return _finish(trials, errors)


def _default_eve_cutoffs(n_s: float, n_b: float) -> tuple[int, int]:
    """Signal-rank and per-tap environment cutoffs for the dense adversary.

    The signal rank keeps geometric weight down to 1e-7 (capped at 8); each
    thermal tap keeps at least 14 levels and grows until its tail is below
    1e-5 (capped at 24).
    """
    if n_s > 0.0:
        c_s = n_s / (1.0 + n_s)
        kmax = min(8, max(0, math.ceil(math.log(1e-7) / math.log(c_s)) - 1))
    else:
        kmax = 0
    env = 14
    if n_b > 0.0:
        c_b = n_b / (1.0 + n_b)
        while env < 24 and c_b ** (env + 1) > 1e-5:
            env += 1
    return kmax, env


def eve_output_state(eta: float, n_b: float, n_s: float, kmax: int,
                     env_cutoff: int, prune: float = 1e-7,
                     phase: float = 0.0):
    """Adversary's joint state on her two tapped modes for one slot.

    As everywhere in this package, `eta` is the per-pass power
    transmissivity of the line (equivalently the round-trip amplitude
    transmissivity): each pass is a beamsplitter keeping amplitude
    sqrt(eta) on the line and leaking the rest into the adversary's mode.
    For every Fock component |k, b1, b2> of the (thermal-signal, tap-1,
    tap-2) input, the circuit -- tap, modulate by `phase`, tap again,
    discard the surviving signal -- produces a pure amplitude lattice whose
    partial trace fills anti-diagonal stripes of the joint (back, forward)
    density matrix:

        psi[i, mb, mf] = c1[j] e^{-i phase j} c2_j[i],   mb = k+b1-j, mf = j+b2-i.

    Components with prior weight below `prune` are skipped.  Returns
    (matrix, back_dim, forward_dim, kept_mass); the matrix trace equals
    kept_mass, i.e. it is *not* renormalized.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if n_s < 0.0 or n_b < 0.0:
        raise ValueError("photon numbers must be >= 0")
    theta = math.acos(math.sqrt(eta))
    p_sig = thermal_weights(n_s, kmax)
    p_env = thermal_weights(n_b, env_cutoff)
    back_dim = kmax + env_cutoff + 1
    fwd_dim = kmax + 2 * env_cutoff + 1
    dim = back_dim * fwd_dim
    blocks = [_bs_block(n, theta) for n in range(kmax + 2 * env_cutoff + 1)]
    rho_flat = np.zeros(dim * dim, dtype=complex)
    kept = 0.0
    for k in range(kmax + 1):
        for b1 in range(env_cutoff + 1):
            for b2 in range(env_cutoff + 1):
                weight = p_sig[k] * p_env[b1] * p_env[b2]
                if weight < prune:
                    continue
                kept += weight
                total_1 = k + b1
                c1 = blocks[total_1][:, k].astype(complex)
                if phase != 0.0:
                    c1 = c1 * np.exp(-1j * phase * np.arange(total_1 + 1))
                c2 = [blocks[j + b2][:, j] for j in range(total_1 + 1)]
                for j in range(total_1 + 1):
                    amp_j = c1[j]
                    if abs(amp_j) < 1e-14:
                        continue
                    back_j, total_2 = total_1 - j, j + b2
                    row0 = back_j * fwd_dim + total_2
                    for jp in range(total_1 + 1):
                        amp_jp = np.conj(c1[jp])
                        if abs(amp_jp) < 1e-14:
                            continue
                        back_jp, total_2p = total_1 - jp, jp + b2
                        imax = min(total_2, total_2p)
                        traced = c2[j][:imax + 1] * c2[jp][:imax + 1]
                        col0 = back_jp * fwd_dim + total_2p
                        idx = (row0 * dim + col0) - np.arange(imax + 1) * (dim + 1)
                        rho_flat[idx] += (weight * amp_j * amp_jp) * traced
    return rho_flat.reshape(dim, dim), back_dim, fwd_dim, kept


def _embed_pair(rho_small: np.ndarray, back_small: int, fwd_small: int,
                back_dim: int, fwd_dim: int) -> np.ndarray:
    """Embed a two-mode density matrix into larger per-mode Fock cutoffs."""
    idx = (np.arange(back_small)[:, None] * fwd_dim
           + np.arange(fwd_small)[None, :]).ravel()
    big = np.zeros((back_dim * fwd_dim, back_dim * fwd_dim), dtype=rho_small.dtype)
    big[np.ix_(idx, idx)] = rho_small
    return big


def simulate_eve_helstrom(eta: float, n_b: float, n_s: float,
                          modes_n: int = 1, *, kmax: int | None = None,
                          env_cutoff: int | None = None, prune: float = 1e-7,
                          dim_limit: int = EVE_DIM_LIMIT) -> EveDiscriminationResult:
    """Adversary's minimum error distinguishing transmission from silence.

    For a single slot pair at modest background the on/off states are built
    densely and the Helstrom error 1/2 - ||rho_on - rho_off||_1 / 4 is exact.
    The binary phase pad makes the on-state a phase-symmetric mixture, which
    here is a parity average on the backward tapped mode.  For many slots or
    heavy backgrounds, additivity of relative entropy gives the bound
    error >= 1/2 - sqrt(modes_n * D / 8), reported with exact=False.
    """
    if modes_n < 1 or int(modes_n) != modes_n:
        raise ValueError(f"modes_n must be a positive integer, got {modes_n}")
    if not 0.0 < eta < 1.0:
        raise ValueError(  # the closed-form entropy degenerates at both limits
            f"eta must lie strictly inside (0, 1), got {eta}")
    if n_s == 0.0:
        return EveDiscriminationResult(error_probability=0.5, exact=True,
                                       relent_total=0.0, kept_mass=1.0)
    if n_b > 0.0:
        relent_total = modes_n * closed_form_eve_relent(eta, n_b, n_s)
    else:
        relent_total = math.inf  # off-state is pure vacuum: perfectly exposed
    auto_k, auto_env = _default_eve_cutoffs(n_s, n_b)
    kmax = auto_k if kmax is None else int(kmax)
    env_cutoff = auto_env if env_cutoff is None else int(env_cutoff)
    dim = (kmax + env_cutoff + 1) * (kmax + 2 * env_cutoff + 1)
    if modes_n == 1 and n_b <= 5.0 and dim <= dim_limit:
        rho_on, back_dim, fwd_dim, mass_on = eve_output_state(
            eta, n_b, n_s, kmax, env_cutoff, prune)
        rho_off, back_off, fwd_off, mass_off = eve_output_state(
            eta, n_b, 0.0, 0, env_cutoff, prune)
        rho_off = _embed_pair(rho_off, back_off, fwd_off, back_dim, fwd_dim)
        parity = np.kron((-1.0) ** np.arange(back_dim), np.ones(fwd_dim))
        rho_on = 0.5 * (rho_on + parity[:, None] * rho_on * parity[None, :])
        rho_off = 0.5 * (rho_off + parity[:, None] * rho_off * parity[None, :])
        rho_on /= np.trace(rho_on).real
        rho_off /= np.trace(rho_off).real
        eigs = np.linalg.eigvalsh(rho_on - rho_off)
        error = float(0.5 - 0.25 * np.sum(np.abs(eigs)))
        return EveDiscriminationResult(error_probability=error, exact=True,
                                       relent_total=relent_total,
                                       kept_mass=float(min(mass_on, mass_off)))
    error = max(0.0, 0.5 - math.sqrt(relent_total / 8.0)) if math.isfinite(
        relent_total) else 0.0
    return EveDiscriminationResult(error_probability=error, exact=False,
                                   relent_total=relent_total,
                                   kept_mass=math.nan)


def random_coding_threshold_bits(m: int, awgn: AwgnReduction) -> float:
    """Decodable payload threshold, in bits, of the induced AWGN channel.

    Random coding over m slot statistics with binary means +-symbol_mean in
    noise sigma_beta_sq supports on the order of
    m symbol_mean^2 / (2 ln2 sigma_beta_sq) bits; payloads far below decode,
    payloads above fail with probability approaching one.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    return m * awgn.symbol_mean ** 2 / (2.0 * math.log(2) * awgn.sigma_beta_sq)


def random_coding_experiment(m: int, m_bar: int, awgn: AwgnReduction,
                             trials: int, *, seed: int = 2026) -> SimResult:
    """Block error rate of a random binary code on the induced AWGN channel.

    Each trial draws a fresh codebook of 2^m_bar binary codewords of length
    m at amplitude symbol_mean, transmits codeword 0 through the scalar
    AWGN channel, and decodes by maximum correlation score (ML for equal-power
    binary codewords in Gaussian noise).  m_bar = 0 is the degenerate
    single-codeword case and never errs.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= m_bar <= CODEBOOK_CAP_BITS:
        raise ValueError(
            f"m_bar must lie in [0, {CODEBOOK_CAP_BITS}] (toy scale), got {m_bar}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_codewords = 2 ** m_bar
    amp = np.float32(awgn.symbol_mean)
    sigma = math.sqrt(awgn.sigma_beta_sq)
    per_chunk = max(1, 256)
    sizes = _chunk_sizes(trials, per_chunk)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    errors = 0
    for child, size in zip(children, sizes):
        rng = _philox(child)
        for _ in range(size):
            codebook = (2 * rng.integers(0, 2, (n_codewords, m), dtype=np.int8)
                        - 1).astype(np.float32) * amp
            received = codebook[0] + rng.normal(0.0, sigma, m).astype(np.float32)
            scores = codebook @ received
            errors += int(np.argmax(scores) != 0)
    return _finish(trials, errors)

"""Receiver-performance metrics for round-trip phase readout.

Closed-form error exponents for collective (optimal joint-measurement) and
local (symbol-by-symbol estimation) strategies, the transmitter-independent
ultimate bounds, dB gains over the idler-free coherent baseline, and the
engineering conversions (link budget, time-bandwidth product, thermal
occupation) needed to ground them in a microwave scenario.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import constants, special

from .transmitters import SchmidtData, coherent_schmidt, sc_schmidt_probabilities

__all__ = [
    "ChannelParams",
    "ReceiverReport",
    "UltimateBounds",
    "ErrorProbability",
    "beta_col",
    "beta_loc",
    "coherent_closed_forms",
    "tmsv_closed_forms",
    "sc_closed_forms",
    "ultimate_bounds",
    "receiver_report",
    "error_probability",
    "link_budget",
    "time_bandwidth",
    "thermal_occupation",
]


def _c_of(n: float) -> float:
    """Thermal ratio c = N/(1+N)."""
    return n / (1.0 + n)


@dataclass(frozen=True)
class ChannelParams:
    """Round-trip channel: per-pass amplitude transmissivity eta in (0, 1]
    and background occupation N_B >= 0."""

    eta: float
    n_b: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        if self.n_b < 0.0:
            raise ValueError(f"N_B must be >= 0, got {self.n_b}")

    @property
    def c_b(self) -> float:
        """Background thermal ratio N_B/(1+N_B)."""
        return _c_of(self.n_b)


class UltimateBounds(NamedTuple):
    """Transmitter-independent exponent ceilings at fixed (N_S, N_B)."""

    bound_col: float
    bound_loc: float


class ErrorProbability(NamedTuple):
    """Exponential union bound and Gaussian-threshold estimate of p_err."""

    exponential_bound: float
    gaussian_threshold: float


@dataclass(frozen=True)
class ReceiverReport:
    """Exponents, ceilings, and dB gains of one transmitter at one channel."""

    beta_col: float
    beta_loc: float
    bound_col: float
    bound_loc: float
    gain_col_db: float
    gain_loc_db: float

    def __post_init__(self):
        if self.beta_col > self.bound_col + 1e-9:
            raise ValueError(
                f"beta_col = {self.beta_col} exceeds bound {self.bound_col}"
            )
        if self.beta_loc > self.bound_loc + 1e-9:
            raise ValueError(
                f"beta_loc = {self.beta_loc} exceeds bound {self.bound_loc}"
            )


def _schmidt_sums(schmidt: SchmidtData, n_b: float) -> tuple[float, float]:
    """Collective and local double sums over Schmidt pairs (k, k')."""
    if n_b < 0.0:
        raise ValueError(f"N_B must be >= 0, got {n_b}")
    c_b = _c_of(n_b)
    p = schmidt.probabilities
    msq = np.abs(schmidt.signal_matrix_elements) ** 2  # msq[k', k]
    numer = msq * p[None, :] * p[:, None]  # p_k p_k' |M[k', k]|^2
    sqrt_p = np.sqrt(p)
    den_col = (sqrt_p[:, None] + sqrt_p[None, :] * np.sqrt(c_b)) ** 2
    den_loc = p[:, None] + p[None, :] * c_b
    with np.errstate(divide="ignore", invalid="ignore"):
        s_col = float(np.sum(np.where(numer > 0.0, numer / den_col, 0.0)))
        s_loc = float(np.sum(np.where(numer > 0.0, numer / den_loc, 0.0)))
    return s_col, s_loc


def beta_col(schmidt: SchmidtData, n_b: float, ook: bool = False) -> float:
    """Collective (quantum-Chernoff) error exponent per photon-squared of
    phase; binary-phase-shift keying by default, `ook=True` returns the raw
    one-shot on-off curvature (a factor 4 smaller)."""
    s_col, _ = _schmidt_sums(schmidt, n_b)
    scale = 1.0 if ook else 4.0
    return scale * s_col / (1.0 + n_b)


def beta_loc(schmidt: SchmidtData, n_b: float, ook: bool = False) -> float:
    """Local-strategy exponent from per-symbol phase estimation; `ook=True`
    returns the full quantum Fisher information (a factor 2 larger)."""
    _, s_loc = _schmidt_sums(schmidt, n_b)
    scale = 4.0 if ook else 2.0
    return scale * s_loc / (1.0 + n_b)


def coherent_closed_forms(n_s: float, n_b: float) -> tuple[float, float]:
    """(beta_col, beta_loc) of the idler-free coherent baseline."""
    c_b = _c_of(n_b)
    col = 4.0 * n_s / ((1.0 + math.sqrt(c_b)) ** 2 * (1.0 + n_b))
    loc = 2.0 * n_s / ((1.0 + c_b) * (1.0 + n_b))
    return col, loc


def tmsv_closed_forms(n_s: float, n_b: float) -> tuple[float, float]:
    """(beta_col, beta_loc) of the two-mode squeezed-vacuum transmitter."""
    c_s, c_b = _c_of(n_s), _c_of(n_b)
    col = 4.0 * n_s / ((1.0 + math.sqrt(c_s * c_b)) ** 2 * (1.0 + n_b))
    loc = 2.0 * n_s / ((1.0 + c_s * c_b) * (1.0 + n_b))
    return col, loc


def sc_closed_forms(n_s: float, n_b: float) -> tuple[float, float]:
    """(beta_col, beta_loc) of the qubit-entangled cat transmitter."""
    lam_p, lam_m = sc_schmidt_probabilities(n_s)
    c_b = _c_of(n_b)
    rt = math.sqrt(c_b)

    def safe(num: float, den: float) -> float:
        return num / den if num > 0.0 else 0.0

    f_col = 4.0 * (
        safe(lam_p ** 2, (math.sqrt(lam_p) + math.sqrt(lam_m) * rt) ** 2)
        + safe(lam_m ** 2, (math.sqrt(lam_m) + math.sqrt(lam_p) * rt) ** 2)
    )
    f_loc = 2.0 * (
        safe(lam_p ** 2, lam_p + lam_m * c_b)
        + safe(lam_m ** 2, lam_m + lam_p * c_b)
    )
    return f_col * n_s / (1.0 + n_b), f_loc * n_s / (1.0 + n_b)


def ultimate_bounds(n_s: float, n_b: float) -> UltimateBounds:
    """Transmitter-independent ceilings on the two exponents."""
    if n_s < 0.0:
        raise ValueError(f"N_S must be >= 0, got {n_s}")
    if n_b < 0.0:
        raise ValueError(f"N_B must be >= 0, got {n_b}")
    c_b = _c_of(n_b)
    if c_b > 0.0:
        second = (n_s + 0.5) / (math.sqrt(c_b) * (1.0 + n_b))
    else:
        second = math.inf
    return UltimateBounds(
        bound_col=min(4.0 * n_s / (1.0 + n_b), second),
        bound_loc=min(2.0 * n_s / (1.0 + n_b), second),
    )


def receiver_report(schmidt: SchmidtData, n_b: float) -> ReceiverReport:
    """Full metric card for one transmitter; gains are dB over the coherent
    baseline at the same mean photon number."""
    b_col = beta_col(schmidt, n_b)
    b_loc = beta_loc(schmidt, n_b)
    bounds = ultimate_bounds(schmidt.mean_photons, n_b)
    base_col, base_loc = coherent_closed_forms(schmidt.mean_photons, n_b)
    if schmidt.mean_photons > 0.0:
        gain_col = 10.0 * math.log10(b_col / base_col)
        gain_loc = 10.0 * math.log10(b_loc / base_loc)
    else:
        gain_col = gain_loc = 0.0
    return ReceiverReport(
        beta_col=b_col,
        beta_loc=b_loc,
        bound_col=bounds.bound_col,
        bound_loc=bounds.bound_loc,
        gain_col_db=gain_col,
        gain_loc_db=gain_loc,
    )


def error_probability(beta: float, eta: float, m_slots: float) -> ErrorProbability:
    """Bit-error estimates after M repeated slots at exponent beta.

    Returns the exponential union bound exp(-beta eta^2 M)/2 and the
    exponentially tight Gaussian threshold erfc(eta sqrt(beta M))/2; a
    convention with doubled prefactor (1 - erf) circulates for the latter,
    differing only in prefactor, never in exponent.
    """
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if m_slots < 1:
        raise ValueError(f"M must be >= 1, got {m_slots}")
    expo = 0.5 * math.exp(-beta * eta * eta * m_slots)
    gauss = 0.5 * float(special.erfc(eta * math.sqrt(beta * m_slots)))
    return ErrorProbability(exponential_bound=expo, gaussian_threshold=gauss)


def link_budget(range_km: float, loss_db_per_km: float,
                antenna_area_m2: float) -> float:
    """One-way power transmissivity: atmospheric absorption times the
    free-space capture fraction A/(4 pi R^2)."""
    if range_km <= 0.0:
        raise ValueError(f"range must be > 0 km, got {range_km}")
    if loss_db_per_km < 0.0 or antenna_area_m2 < 0.0:
        raise ValueError("loss and antenna area must be >= 0")
    absorption = 10.0 ** (-range_km * loss_db_per_km / 10.0)
    radius_m = 1000.0 * range_km
    capture = antenna_area_m2 / (4.0 * math.pi * radius_m ** 2)
    return absorption * min(capture, 1.0)


def time_bandwidth(p_err_target: float, eta: float, n_s: float, n_b: float,
                   beta_ratio: float) -> float:
    """Slots M needed for a target error probability:
    M = beta_ratio * N_B/(eta^2 N_S) * ln(1/p_err)."""
    if not 0.0 < p_err_target < 0.5:
        raise ValueError(f"p_err_target must be in (0, 0.5), got {p_err_target}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if n_s <= 0.0 or n_b <= 0.0 or beta_ratio <= 0.0:
        raise ValueError("N_S, N_B and beta_ratio must be > 0")
    return beta_ratio * n_b / (eta * eta * n_s) * math.log(1.0 / p_err_target)


def thermal_occupation(frequency_ghz: float, temperature_k: float) -> float:
    """Bose-Einstein occupation 1/(e^(hf/kT) - 1) of a mode at f GHz, T K."""
    if frequency_ghz <= 0.0:
        raise ValueError(f"frequency must be > 0 GHz, got {frequency_ghz}")
    if temperature_k < 0.0:
        raise ValueError(f"temperature must be >= 0 K, got {temperature_k}")
    if temperature_k == 0.0:
        return 0.0
    x = constants.h * frequency_ghz * 1e9 / (constants.k * temperature_k)
    if x > 700.0:  # e^x overflows double precision; occupation is 0 anyway
        return 0.0
    return float(1.0 / np.expm1(x))

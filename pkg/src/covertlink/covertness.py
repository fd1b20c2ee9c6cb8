"""Covertness budgets and square-root-law planning.

How many signal photons can ride on a noisy two-way link before a watcher
holding both taps can tell the interrogator is on, and how many message bits
that photon budget buys.  The budget follows the square-root law
N_S_max = A(eta, N_B) * delta / sqrt(n); the bit count follows
m_bar = beta_det * beta_cov * delta * sqrt(n) + log2(epsilon).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

from .gaussian import closed_form_eve_relent

__all__ = [
    "CovertBudget",
    "ProtocolPlan",
    "KeyCost",
    "a_const",
    "covert_photon_budget",
    "eve_error_lower_bound",
    "covert_fraction",
    "beta_cov_const",
    "sqrt_law_leading_bits",
    "sqrt_law_bits",
    "key_cost",
    "plan_protocol",
]

#: relative slack allowed between n*D(N_S_max) and its quadratic budget 8 delta^2
RELENT_SLACK = 0.05

#: plans with M*N_S at or above this value trigger a validity warning
WEAK_SIGNAL_WARN = 0.1


@dataclass(frozen=True)
class CovertBudget:
    """Photon budget at discreteness level delta over n slots, plus the
    relative-entropy audit of that budget."""

    delta: float
    n: int
    a_const: float
    n_s_max: float
    relent_total: float
    relent_budget: float
    within_budget: bool

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValueError(f"delta must be in (0, 0.5), got {self.delta}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        expected = self.a_const * self.delta / math.sqrt(self.n)
        if abs(self.n_s_max - expected) > 1e-12 * max(1.0, expected):
            raise ValueError("N_S_max inconsistent with A*delta/sqrt(n)")


class KeyCost(NamedTuple):
    """Secret-bit ledger for one covert session."""

    phase_bits: float
    frame_bits: float
    selection_bits: float
    total: float


@dataclass(frozen=True)
class ProtocolPlan:
    """A concrete (n, m, M) covert-communication plan and its bit yield."""

    n: int
    m: int
    big_m: int
    m_bar: int
    delta: float
    epsilon: float
    n_s: float
    beta_det: float
    beta_cov: float
    probabilistic: bool
    tau_fraction: float

    def __post_init__(self):
        if self.n != self.m * self.big_m:
            raise ValueError(f"n = {self.n} != m*M = {self.m * self.big_m}")
        if not 0.0 < self.tau_fraction <= 1.0:
            raise ValueError(f"tau_fraction must be in (0, 1], got {self.tau_fraction}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        expected = _floor_bits(
            self.beta_det * self.beta_cov * self.delta * math.sqrt(self.n),
            self.epsilon,
        )
        if self.m_bar != expected:
            raise ValueError(
                f"m_bar = {self.m_bar} inconsistent with formula value {expected}"
            )


def a_const(eta: float, n_b: float) -> float:
    """Square-root-law constant A = 4 sqrt(eta^2 N_B (1 + eta^2 N_B))/(1 - eta^2);
    the tightest constant for the two-way Gaussian watcher."""
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must be in (0, 1) (eta -> 1 diverges), got {eta}")
    if n_b <= 0.0:
        raise ValueError(f"N_B must be > 0, got {n_b}")
    e2 = eta * eta
    return 4.0 * math.sqrt(e2 * n_b * (1.0 + e2 * n_b)) / (1.0 - e2)


def covert_photon_budget(eta: float, n_b: float, delta: float, n: int,
                         slack: float = RELENT_SLACK) -> CovertBudget:
    """Largest per-slot N_S keeping n slots delta-covert, with the full
    relative-entropy audit n*D(N_S_max) <= 8 delta^2 (1 + slack)."""
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must be in (0, 0.5), got {delta}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = a_const(eta, n_b)
    n_s_max = a * delta / math.sqrt(n)
    total = n * closed_form_eve_relent(eta, n_b, n_s_max)
    budget = 8.0 * delta * delta
    return CovertBudget(
        delta=delta,
        n=int(n),
        a_const=a,
        n_s_max=n_s_max,
        relent_total=total,
        relent_budget=budget,
        within_budget=total <= budget * (1.0 + slack),
    )


def eve_error_lower_bound(total_relative_entropy: float) -> float:
    """Watcher's discrimination-error floor: max(0, 1/2 - sqrt(D/8))."""
    if total_relative_entropy < 0.0:
        raise ValueError("relative entropy must be >= 0")
    return max(0.0, 0.5 - math.sqrt(total_relative_entropy / 8.0))


def covert_fraction(eta: float, n_b: float, delta: float, n: int,
                    n_s_fixed: float) -> float:
    """Fraction of slots a transmitter locked at N_S_fixed may use:
    min(1, A delta / (N_S sqrt(n)))."""
    if n_s_fixed <= 0.0:
        raise ValueError(f"N_S_fixed must be > 0, got {n_s_fixed}")
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must be in (0, 0.5), got {delta}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return min(1.0, a_const(eta, n_b) * delta / (n_s_fixed * math.sqrt(n)))


def beta_cov_const(eta: float, n_b: float) -> float:
    """Covert-rate constant beta_cov = (8/(pi ln 2)) c_B eta^4."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if n_b < 0.0:
        raise ValueError(f"N_B must be >= 0, got {n_b}")
    c_b = n_b / (1.0 + n_b)
    return 8.0 * c_b * eta ** 4 / (math.pi * math.log(2.0))


def _validate_beta_det(beta_det: float) -> float:
    if beta_det not in (1, 2, 4):
        raise ValueError(f"beta_det must be 1, 2 or 4, got {beta_det}")
    return float(beta_det)


def sqrt_law_leading_bits(eta: float, n_b: float, delta: float, n: int,
                          beta_det: float = 1) -> float:
    """Leading sqrt(n) term of the covert bit count (no epsilon term,
    no flooring): beta_det * beta_cov * delta * sqrt(n)."""
    b = _validate_beta_det(beta_det)
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must be in (0, 0.5), got {delta}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return b * beta_cov_const(eta, n_b) * delta * math.sqrt(n)


def _floor_bits(leading: float, epsilon: float) -> int:
    return max(0, math.floor(leading + math.log2(epsilon)))


def sqrt_law_bits(eta: float, n_b: float, delta: float, epsilon: float,
                  n: int, beta_det: float = 1) -> int:
    """Reliable covert bits over n slots:
    floor(beta_det beta_cov delta sqrt(n) + log2 epsilon), clamped at 0."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return _floor_bits(sqrt_law_leading_bits(eta, n_b, delta, n, beta_det),
                       epsilon)


def key_cost(n: int, probabilistic: bool = False, frames: int = 0,
             alphabet_size: int = 2) -> KeyCost:
    """Pre-shared secret-bit accounting: n*log2|A| phase bits, an optional
    frame mask, and ceil(sqrt(n))*ceil(log2 n) selection bits in the
    probabilistic variant.  Constants are reporting conventions, not
    information-theoretic optima."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if frames < 0:
        raise ValueError(f"frames must be >= 0, got {frames}")
    if alphabet_size < 2:
        raise ValueError(f"alphabet_size must be >= 2, got {alphabet_size}")
    phase = n * math.log2(alphabet_size)
    selection = float(math.ceil(math.sqrt(n)) * math.ceil(math.log2(n))) \
        if probabilistic else 0.0
    return KeyCost(
        phase_bits=phase,
        frame_bits=float(frames),
        selection_bits=selection,
        total=phase + float(frames) + selection,
    )


def plan_protocol(eta: float, n_b: float, delta: float, epsilon: float,
                  n: int, big_m: int, n_s: float | None = None,
                  beta_det: float = 1,
                  probabilistic: bool = False) -> ProtocolPlan:
    """Assemble a full plan: n slots split into m symbols of M repetitions,
    photon budget N_S (default: the delta-covert maximum), bit yield m_bar,
    and slot-use fraction tau.  Warns when M*N_S leaves the weak-signal
    regime the random-coding analysis assumes."""
    b = _validate_beta_det(beta_det)
    if n < 1 or big_m < 1:
        raise ValueError("n and M must be >= 1")
    if n % big_m != 0:
        raise ValueError(f"M = {big_m} must divide n = {n}")
    budget = covert_photon_budget(eta, n_b, delta, n)
    if n_s is None:
        n_s = budget.n_s_max
        tau = 1.0
    else:
        if n_s <= 0.0:
            raise ValueError(f"N_S must be > 0, got {n_s}")
        tau = covert_fraction(eta, n_b, delta, n, n_s)
    if big_m * n_s >= WEAK_SIGNAL_WARN:
        warnings.warn(
            f"M*N_S = {big_m * n_s:.3g} is not small; the per-symbol "
            "weak-signal assumption behind the bit-yield formula is strained",
            stacklevel=2,
        )
    return ProtocolPlan(
        n=int(n),
        m=int(n // big_m),
        big_m=int(big_m),
        m_bar=sqrt_law_bits(eta, n_b, delta, epsilon, n, beta_det),
        delta=delta,
        epsilon=epsilon,
        n_s=float(n_s),
        beta_det=b,
        beta_cov=beta_cov_const(eta, n_b),
        probabilistic=probabilistic,
        tau_fraction=tau,
    )

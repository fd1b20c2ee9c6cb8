"""Transmitter families for two-way thermal-channel interrogation.

Every receiver metric in this package consumes a transmitter through one
interface: its Schmidt data — the Schmidt probabilities p_k of the joint
signal-idler state and the signal-mode matrix elements
M[k', k] = <w_k'| a_S |w_k> between Schmidt vectors.  Three families are
provided: idler-free coherent states, two-mode squeezed vacuum (TMSV), and
the qubit-entangled Schrodinger-cat (SC) state, which is rank 2 with cat
states of opposite parity as Schmidt vectors.

The module also implements the signal-expansion eligibility check used by
the covertness analysis: a transmitter whose signal marginal does not expand
in mean photon number as sigma_0 + N_S sigma_1 + N_S^2 sigma_2 with the
vacuum/one-photon/two-photon template (e.g. a fixed-phase coherent carrier)
is detectable at first order and is rejected loudly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fock import TruncationOverflowError

__all__ = [
    "SchmidtData",
    "SignalMomentExpansion",
    "NotCovertEligibleError",
    "coherent_schmidt",
    "tmsv_schmidt",
    "sc_schmidt",
    "sc_schmidt_probabilities",
    "check_lemma1_expansion",
]

#: default tail-mass threshold for automatic Schmidt-rank selection
RANK_TAIL_TOL = 1e-10

#: hard cap on the automatic Schmidt rank
RANK_CAP = 64


class NotCovertEligibleError(ValueError):
    """The transmitter's signal marginal violates the covert signal-expansion
    template (it is distinguishable from background at too low an order)."""


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt-decomposed view of a signal-idler transmitter state.

    probabilities[k] is the weight of Schmidt vector pair k, and
    signal_matrix_elements[k', k] = <w_k'| a_S |w_k> on the signal side.
    mean_photons is the nominal signal occupation N_S; construction checks
    the completeness identity sum_k p_k (M^dag M)[k, k] = N_S to 1e-6.
    `degenerate` flags a zero-probability Schmidt row kept for shape
    stability (the N_S = 0 cat state).
    """

    probabilities: np.ndarray
    signal_matrix_elements: np.ndarray
    mean_photons: float
    degenerate: bool = False

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).reshape(-1)
        m = np.asarray(self.signal_matrix_elements, dtype=complex)
        if m.shape != (p.size, p.size):
            raise ValueError(
                f"matrix-element block {m.shape} does not match rank {p.size}"
            )
        if np.any(p < -1e-12):
            raise ValueError("Schmidt probabilities must be >= 0")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"Schmidt probabilities sum to {total}, not 1")
        photons = float(np.real(np.sum(p * np.einsum("jk,jk->k", m.conj(), m))))
        if abs(photons - self.mean_photons) > 1e-6:
            raise ValueError(
                f"completeness photon check failed: sum p_k (M+M)_kk = {photons}, "
                f"declared N_S = {self.mean_photons}"
            )
        object.__setattr__(self, "probabilities", np.clip(p, 0.0, None))
        object.__setattr__(self, "signal_matrix_elements", m)

    @property
    def rank(self) -> int:
        return self.probabilities.size


def coherent_schmidt(n_s: float) -> SchmidtData:
    """Idler-free coherent transmitter: rank 1, single element sqrt(N_S)."""
    if n_s < 0:
        raise ValueError("mean photon number must be >= 0")
    return SchmidtData(
        probabilities=np.array([1.0]),
        signal_matrix_elements=np.array([[np.sqrt(n_s)]], dtype=complex),
        mean_photons=float(n_s),
    )


def tmsv_schmidt(n_s: float, rank_cutoff: int | None = None) -> SchmidtData:
    """Two-mode squeezed vacuum: geometric Schmidt weights
    p_k = N_S^k/(1+N_S)^(k+1) and ladder elements M[k-1, k] = sqrt(k).

    The rank is auto-selected as the smallest r with discarded weight below
    RANK_TAIL_TOL (hard cap RANK_CAP); an explicit `rank_cutoff` that leaves
    a heavier tail raises :class:`TruncationOverflowError`.  Weights are
    renormalized over the retained rank.
    """
    if n_s < 0:
        raise ValueError("mean photon number must be >= 0")
    if n_s == 0:
        rank = rank_cutoff if rank_cutoff is not None else 1
        p = np.zeros(rank + 1)
        p[0] = 1.0
        m = np.diag(np.sqrt(np.arange(1.0, rank + 1)), 1).astype(complex)
        return SchmidtData(p, m, 0.0)
    c_s = n_s / (1.0 + n_s)
    if rank_cutoff is None:
        rank = int(np.ceil(np.log(RANK_TAIL_TOL) / np.log(c_s))) - 1
        rank = max(rank, 1)
        if rank > RANK_CAP:
            raise TruncationOverflowError(
                f"N_S = {n_s} needs Schmidt rank {rank} > cap {RANK_CAP}"
            )
    else:
        rank = int(rank_cutoff)
        tail = c_s ** (rank + 1)
        if tail > RANK_TAIL_TOL:
            raise TruncationOverflowError(
                f"rank_cutoff {rank} leaves tail mass {tail:.3e} > {RANK_TAIL_TOL}"
            )
    k = np.arange(rank + 1)
    p = (1.0 - c_s) * c_s ** k
    p = p / p.sum()
    m = np.diag(np.sqrt(np.arange(1.0, rank + 1)), 1).astype(complex)
    n_eff = float(np.sum(p * k))
    return SchmidtData(p, m, n_eff)


def sc_schmidt_probabilities(n_s: float) -> tuple[float, float]:
    """Schmidt weights of the qubit-entangled cat state:
    lambda_pm = (1 ± e^(-2 N_S))/2."""
    if n_s < 0:
        raise ValueError("mean photon number must be >= 0")
    e = np.exp(-2.0 * n_s)
    return 0.5 * (1.0 + e), 0.5 * (1.0 - e)


def sc_schmidt(n_s: float) -> SchmidtData:
    """Qubit-entangled Schrodinger-cat transmitter: rank 2.

    Schmidt vectors are the even/odd cat states built from |±alpha> with
    alpha = sqrt(N_S); ordering is (even/+, odd/−) with weights lambda_pm.
    The annihilator flips cat parity, so the diagonal elements vanish and
    M[1, 0] = sqrt(N_S) sqrt(lambda_-/lambda_+),
    M[0, 1] = sqrt(N_S) sqrt(lambda_+/lambda_-).
    At N_S = 0 the odd weight vanishes; the zero-probability row is kept
    (shape-stable rank 2) and flagged `degenerate`.
    """
    lam_p, lam_m = sc_schmidt_probabilities(n_s)
    m = np.zeros((2, 2), dtype=complex)
    degenerate = lam_m <= 0.0
    if degenerate:
        return SchmidtData(np.array([lam_p, lam_m]), m, 0.0, degenerate=True)
    root = np.sqrt(n_s)
    m[1, 0] = root * np.sqrt(lam_m / lam_p)
    m[0, 1] = root * np.sqrt(lam_p / lam_m)
    return SchmidtData(np.array([lam_p, lam_m]), m, float(n_s))


# ======================================================================
# signal-expansion eligibility (covertness precondition)
# ======================================================================

@dataclass(frozen=True)
class SignalMomentExpansion:
    """Leading coefficients of the signal marginal's expansion in N_S:
    rho_S = sigma0 + N_S sigma1 + N_S^2 sigma2 + O(N_S^3), together with the
    curvature weight c = sigma2[2, 2] of the matched template
    sigma2 = c (|2><2| - 2|1><1| + |0><0|)."""

    sigma0: np.ndarray
    sigma1: np.ndarray
    sigma2: np.ndarray
    c: float


def _as_matrix(state) -> np.ndarray:
    mat = getattr(state, "matrix", state)
    return np.asarray(mat, dtype=complex)


def check_lemma1_expansion(family: Callable[[float], object],
                           step: float = 1e-3,
                           template_tol: float = 1e-6,
                           curvature_tol: float = 2e-4) -> SignalMomentExpansion:
    """Fit and verify the covert signal-expansion condition of a transmitter.

    `family` maps a mean photon number N_S to the transmitter's single-mode
    signal marginal (a DensityOperator or raw matrix, any fixed dimension
    >= 3).  The first two expansion coefficients are extracted on the grid
    N_S in {step, 2*step, 4*step} with Richardson-style elimination:

    * sigma1 = (8/3) D(h) - 2 D(2h) + (1/3) D(4h), D(h) = (rho(h)-rho(0))/h
      (third-order accurate), and
    * sigma2 = 2 T(h) - T(2h), T(h) = (rho(2h) - 2 rho(h) + rho(0))/(2 h^2)
      (second-order accurate; residual ~ 14 h^2 sigma4, hence the looser
      `curvature_tol`).

    The coefficients must match the template sigma0 = |0><0|,
    sigma1 = |1><1| - |0><0|, sigma2 = c (|2><2| - 2|1><1| + |0><0|)
    (c in [0, 1]); any violation — e.g. a first-order coherence from a
    fixed-phase carrier — raises :class:`NotCovertEligibleError`.
    """
    if step <= 0:
        raise ValueError("step must be > 0")
    rho0 = _as_matrix(family(0.0))
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1] or rho0.shape[0] < 3:
        raise ValueError("family must return square matrices of dimension >= 3")
    h = float(step)
    r1 = _as_matrix(family(h))
    r2 = _as_matrix(family(2.0 * h))
    r4 = _as_matrix(family(4.0 * h))
    if not (r1.shape == r2.shape == r4.shape == rho0.shape):
        raise ValueError("family must return matrices of a fixed dimension")

    d1 = (r1 - rho0) / h
    d2 = (r2 - rho0) / (2.0 * h)
    d4 = (r4 - rho0) / (4.0 * h)
    sigma1 = (8.0 / 3.0) * d1 - 2.0 * d2 + (1.0 / 3.0) * d4
    t1 = (r2 - 2.0 * r1 + rho0) / (2.0 * h * h)
    t2 = (r4 - 2.0 * r2 + rho0) / (8.0 * h * h)
    sigma2 = 2.0 * t1 - t2

    dim = rho0.shape[0]
    tmpl0 = np.zeros((dim, dim))
    tmpl0[0, 0] = 1.0
    tmpl1 = np.zeros((dim, dim))
    tmpl1[1, 1] = 1.0
    tmpl1[0, 0] = -1.0
    dev0 = float(np.abs(rho0 - tmpl0).max())
    if dev0 > template_tol:
        raise NotCovertEligibleError(
            f"zeroth-order signal is not vacuum (deviation {dev0:.3e}); "
            "the transmitter is visible even when idle"
        )
    dev1 = float(np.abs(sigma1 - tmpl1).max())
    if dev1 > template_tol:
        raise NotCovertEligibleError(
            f"first-order coefficient deviates from |1><1| - |0><0| by {dev1:.3e}; "
            "a first-order signature (e.g. a fixed carrier phase) breaks the "
            "covert expansion"
        )
    c = float(np.real(sigma2[2, 2]))
    tmpl2 = np.zeros((dim, dim))
    tmpl2[0, 0] = c
    tmpl2[1, 1] = -2.0 * c
    tmpl2[2, 2] = c
    dev2 = float(np.abs(sigma2 - tmpl2).max())
    if dev2 > curvature_tol:
        raise NotCovertEligibleError(
            f"second-order coefficient deviates from the c-template by {dev2:.3e}"
        )
    if not -curvature_tol <= c <= 1.0 + curvature_tol:
        raise NotCovertEligibleError(f"curvature weight c = {c} outside [0, 1]")
    return SignalMomentExpansion(sigma0=rho0, sigma1=sigma1, sigma2=sigma2, c=c)

"""Gaussian (covariance-matrix) engine for bright thermal channels.

Covariance conventions
----------------------
Quadrature ordering is (x_1, p_1, x_2, p_2, ...); the vacuum covariance is
the identity, a thermal mode has covariance (2N+1)·I_2, and the mean vector
of a coherent amplitude alpha is (2 Re alpha, 2 Im alpha).  The symplectic
form is block-diagonal with per-mode blocks [[0, -1], [1, 0]].

A phase shift by phi maps the annihilator a -> e^{-i phi} a, i.e.
x' = cos(phi) x + sin(phi) p, p' = -sin(phi) x + cos(phi) p, and a
beamsplitter of transmissivity t maps a_i -> sqrt(t) a_i + sqrt(1-t) a_j,
a_j -> sqrt(t) a_j - sqrt(1-t) a_i, matching the Fock-space generators in
:mod:`covertlink.fock`.

All relative entropies are in nats (natural log).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "symplectic_form",
    "GaussianState",
    "vacuum_gaussian",
    "thermal_gaussian",
    "symplectic_beamsplitter",
    "symplectic_phase",
    "apply_symplectic",
    "gaussian_loss_channel",
    "EveChannelInputs",
    "eve_covariance",
    "gaussian_relative_entropy",
    "closed_form_eve_relent",
    "relent_leading_order",
]


class DomainError(ValueError):
    """Raised when a covariance matrix leaves the domain of an operation
    (e.g. a rank-deficient second argument to the relative entropy)."""


def symplectic_form(num_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with per-mode blocks [[0, -1], [1, 0]]."""
    omega = np.zeros((2 * num_modes, 2 * num_modes))
    for m in range(num_modes):
        omega[2 * m, 2 * m + 1] = -1.0
        omega[2 * m + 1, 2 * m] = 1.0
    return omega


@dataclass(frozen=True)
class GaussianState:
    """Zero- or nonzero-mean Gaussian state: mean vector and covariance in
    the vacuum = identity convention.

    Construction validates symmetry (tolerance 1e-12 relative to the largest
    entry) and the uncertainty relation eig(cov + i*Omega) >= -1e-9, which
    catches transcription bugs in hand-entered covariances.
    """

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        cov = np.asarray(self.covariance, dtype=float)
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be square of even size, got {cov.shape}")
        if mean.size != cov.shape[0]:
            raise ValueError(
                f"mean length {mean.size} does not match covariance size {cov.shape[0]}"
            )
        scale = max(1.0, float(np.abs(cov).max()))
        sym_defect = float(np.abs(cov - cov.T).max())
        if sym_defect > 1e-12 * scale:
            raise ValueError(f"covariance is non-symmetric (defect {sym_defect:.3e})")
        omega = symplectic_form(cov.shape[0] // 2)
        min_unc = float(np.linalg.eigvalsh(cov + 1j * omega)[0].real)
        if min_unc < -1e-9:
            raise ValueError(
                f"covariance violates the uncertainty relation "
                f"(min eig of cov + i*Omega = {min_unc:.3e})"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", 0.5 * (cov + cov.T))

    @property
    def num_modes(self) -> int:
        return self.covariance.shape[0] // 2

    def symplectic_eigenvalues(self) -> np.ndarray:
        """Moduli of the eigenvalues of i*Omega*Sigma (each appears twice;
        returned once per mode, sorted ascending; vacuum = 1)."""
        omega = symplectic_form(self.num_modes)
        vals = np.abs(np.linalg.eigvals(1j * omega @ self.covariance))
        return np.sort(vals)[::2]

    def mean_photons(self, mode: int = 0) -> float:
        """Mean occupation of one mode: (Tr block + |mean block|^2)/4 - 1/2."""
        b = self.covariance[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2]
        m = self.mean[2 * mode : 2 * mode + 2]
        return float((np.trace(b) + m @ m) / 4.0 - 0.5)


def vacuum_gaussian(num_modes: int = 1) -> GaussianState:
    """Vacuum on `num_modes` modes."""
    return GaussianState(np.zeros(2 * num_modes), np.eye(2 * num_modes))


def thermal_gaussian(occupations) -> GaussianState:
    """Product of thermal modes with the given mean occupations
    (a scalar builds a single mode)."""
    occ = np.atleast_1d(np.asarray(occupations, dtype=float))
    if np.any(occ < 0):
        raise ValueError("occupations must be >= 0")
    diag = np.repeat(2.0 * occ + 1.0, 2)
    return GaussianState(np.zeros(2 * occ.size), np.diag(diag))


def symplectic_beamsplitter(transmissivity: float, mode_i: int, mode_j: int,
                            num_modes: int) -> np.ndarray:
    """Symplectic matrix of a beamsplitter on (mode_i, mode_j):
    a_i -> sqrt(t) a_i + sqrt(1-t) a_j, a_j -> sqrt(t) a_j - sqrt(1-t) a_i."""
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    if mode_i == mode_j:
        raise ValueError("beamsplitter needs two distinct modes")
    c = math.sqrt(transmissivity)
    s = math.sqrt(1.0 - transmissivity)
    m = np.eye(2 * num_modes)
    for q in range(2):  # same action on x and p
        i, j = 2 * mode_i + q, 2 * mode_j + q
        m[i, i] = c
        m[i, j] = s
        m[j, j] = c
        m[j, i] = -s
    return m


def symplectic_phase(phi: float, mode: int, num_modes: int) -> np.ndarray:
    """Symplectic matrix of a -> e^{-i phi} a on `mode`:
    x' = cos(phi) x + sin(phi) p, p' = -sin(phi) x + cos(phi) p."""
    m = np.eye(2 * num_modes)
    i = 2 * mode
    c, s = math.cos(phi), math.sin(phi)
    m[i, i] = c
    m[i, i + 1] = s
    m[i + 1, i] = -s
    m[i + 1, i + 1] = c
    return m


def apply_symplectic(state: GaussianState, symplectic: np.ndarray) -> GaussianState:
    """Gaussian unitary: mean -> S mean, covariance -> S Sigma S^T."""
    s = np.asarray(symplectic, dtype=float)
    return GaussianState(s @ state.mean, s @ state.covariance @ s.T)


def gaussian_loss_channel(state: GaussianState, transmissivity: float,
                          n_env: float, mode: int = 0) -> GaussianState:
    """Thermal attenuator on one mode of a multimode Gaussian state.

    The mode block maps to t*block + (1-t)(2 n_env + 1) I, cross-covariances
    with other modes scale by sqrt(t), and the mode's mean scales by sqrt(t).
    Composition law: loss(t1) after loss(t2) with the same environment equals
    loss(t1 t2).
    """
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    if n_env < 0:
        raise ValueError("environment occupation must be >= 0")
    k = state.num_modes
    if not 0 <= mode < k:
        raise ValueError(f"mode index {mode} out of range")
    root_t = math.sqrt(transmissivity)
    scale = np.ones(2 * k)
    scale[2 * mode : 2 * mode + 2] = root_t
    cov = state.covariance * np.outer(scale, scale)
    idx = slice(2 * mode, 2 * mode + 2)
    cov[idx, idx] += (1.0 - transmissivity) * (2.0 * n_env + 1.0) * np.eye(2)
    return GaussianState(state.mean * scale, cov)


# ======================================================================
# the adversary's two-mode view of a binary-phase interrogation slot
# ======================================================================

@dataclass(frozen=True)
class EveChannelInputs:
    """Parameters of the two-way slot as seen from the tap point.

    eta is the per-pass power transmissivity of the line (strictly inside
    (0, 1): the limits are degenerate), N_B the injected thermal brightness,
    N_S the probe occupation, and phase the interrogation phase imprinted
    between the two passes.
    """

    eta: float
    N_B: float
    N_S: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie strictly inside (0, 1)")
        if self.N_B < 0 or self.N_S < 0:
            raise ValueError("occupations must be >= 0")


def eve_covariance(inputs: EveChannelInputs) -> GaussianState:
    """Joint covariance of the two tap modes (forward, backward) collected by
    an adversary who holds both beamsplitter environments.

    Closed form (zero mean): with A = 1/2 + eta*N_B + (1-eta)*N_S,
    B = (1-eta)*sqrt(eta)*(N_B - N_S),
    C = 1/2 + ((1-eta)^2 + eta)*N_B + (1-eta)*eta*N_S, and ph = phase,

        Sigma = 2 * [[ A, 0, -B cos ph,  B sin ph],
                     [ 0, A, -B sin ph, -B cos ph],
                     [-B cos ph, -B sin ph, C, 0],
                     [ B sin ph, -B cos ph, 0, C]].

    The GaussianState constructor's uncertainty check guards against
    transcription errors in this hand-entered form.
    """
    eta, nb, ns, ph = inputs.eta, inputs.N_B, inputs.N_S, inputs.phase
    a = 0.5 + eta * nb + (1.0 - eta) * ns
    b = (1.0 - eta) * math.sqrt(eta) * (nb - ns)
    c = 0.5 + ((1.0 - eta) ** 2 + eta) * nb + (1.0 - eta) * eta * ns
    cp, sp = math.cos(ph), math.sin(ph)
    cov = 2.0 * np.array([
        [a, 0.0, -b * cp, b * sp],
        [0.0, a, -b * sp, -b * cp],
        [-b * cp, -b * sp, c, 0.0],
        [b * sp, -b * cp, 0.0, c],
    ])
    return GaussianState(np.zeros(4), cov)


# ======================================================================
# relative entropy
# ======================================================================

def _log_sigma_kernel(cov: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """H(Sigma) = 2 arccoth(i Omega Sigma) i Omega, evaluated by
    eigendecomposition; -log sigma = (1/2) r^T H r + const for the physical
    quadratures."""
    m = 1j * omega @ cov
    vals, vecs = np.linalg.eig(m)
    if np.any(np.abs(vals) <= 1.0 + 1e-9):
        raise DomainError(
            "covariance has a symplectic eigenvalue inside the [-1, 1] band; "
            "the state is (numerically) pure or unphysical, and its log is "
            "unbounded"
        )
    arc = 0.5 * np.log((vals + 1.0) / (vals - 1.0))
    h = vecs @ np.diag(2.0 * arc) @ np.linalg.inv(vecs) @ (1j * omega)
    return h


def gaussian_relative_entropy(g0: GaussianState, g1: GaussianState) -> float:
    """Relative entropy D(g0 || g1) in nats between Gaussian states.

    D = (1/2) [ ln det(Sigma1 + i Omega) - ln det(Sigma0 + i Omega)
              + (1/2) Tr(Sigma0 (H1 - H0)) ] + (1/4) d^T H1 d,
    with H = 2 arccoth(i Omega Sigma) i Omega and d = mean0 - mean1 (the
    quadratic mean term vanishes for equal means).  Both arguments must be
    full rank: any symplectic eigenvalue within 1e-9 of 1 raises
    :class:`DomainError`.
    """
    if g0.num_modes != g1.num_modes:
        raise ValueError("states must have the same number of modes")
    omega = symplectic_form(g0.num_modes)
    h0 = _log_sigma_kernel(g0.covariance, omega)
    h1 = _log_sigma_kernel(g1.covariance, omega)
    sign1, ld1 = np.linalg.slogdet(g1.covariance + 1j * omega)
    sign0, ld0 = np.linalg.slogdet(g0.covariance + 1j * omega)
    ld = float((ld1 - ld0).real)
    tr_term = float(np.real(np.trace(g0.covariance @ (h1 - h0))))
    delta = g0.mean - g1.mean
    mean_term = float(np.real(delta @ h1 @ delta)) / 4.0
    return 0.5 * (ld + 0.5 * tr_term) + mean_term


def closed_form_eve_relent(eta: float, n_b: float, n_s: float) -> float:
    """Closed-form D(interrogating || idle) for the adversary's two tap
    modes, in nats; `eta` is the per-pass power transmissivity.

    With pre = 1 + 2 N_B eta^2 + 2 N_S (1 - eta^2) and
    u = N_B eta^2 + N_S (1 - eta^2):

        D = pre * [ atanh(1/(1 + 2 N_B eta^2))
                    - atanh(1/(1 + 2 N_S + 2 (N_B - N_S) eta^2)) ]
            + (1/2) ln[ N_B eta^2 (1 + N_B eta^2) / (u (1 + u)) ].

    Verified against :func:`gaussian_relative_entropy` of
    :func:`eve_covariance` pairs to 1.2e-14 across the supported grid.
    Degenerate limits eta in {0, 1} are rejected; N_S = 0 returns exactly 0.
    """
    if not 0.0 < eta < 1.0:
        raise DomainError("eta must lie strictly inside (0, 1)")
    if n_b <= 0:
        raise DomainError("N_B must be > 0 (the idle state must be full rank)")
    if n_s < 0:
        raise ValueError("N_S must be >= 0")
    if n_s == 0:
        return 0.0
    e2 = eta * eta
    pre = 1.0 + 2.0 * n_b * e2 + 2.0 * n_s * (1.0 - e2)
    t1 = math.atanh(1.0 / (1.0 + 2.0 * n_b * e2)) - math.atanh(
        1.0 / (1.0 + 2.0 * n_s + 2.0 * (n_b - n_s) * e2)
    )
    u = n_b * e2 + n_s * (1.0 - e2)
    t2 = 0.5 * math.log(n_b * e2 * (1.0 + n_b * e2) / (u * (1.0 + u)))
    return pre * t1 + t2


def relent_leading_order(eta: float, n_b: float, n_s: float) -> float:
    """Small-N_S expansion of :func:`closed_form_eve_relent`:
    D ~ (1 - eta^2)^2 N_S^2 / (2 N_B eta^2 (1 + N_B eta^2))."""
    if not 0.0 < eta < 1.0:
        raise DomainError("eta must lie strictly inside (0, 1)")
    if n_b <= 0:
        raise DomainError("N_B must be > 0")
    return (1.0 - eta * eta) ** 2 * n_s * n_s / (
        2.0 * n_b * eta * eta * (1.0 + n_b * eta * eta)
    )

"""Circuit-QED receiver layer: cat-state preparation, weak-interaction
qubit readout, signal-to-noise formulas, and qubit decoherence maps.

:func:`prepare_sc_state` builds the qubit-mode cat state with the
three-step pulse sequence (qubit rotation, conditional cavity phase,
second rotation).  :func:`o_tau_receiver_shot` simulates one readout shot:
mode squeeze, qubit flip, a short Jaynes-Cummings interaction of
dimensionless length tau, then an excited-state measurement, which to
first order in tau measures the optimal cat observable.
:func:`snr_ratio_fock` compares that receiver's signal-to-noise ratio
against :func:`snr_ratio_formula` with no closed-form input.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .fock import (
    FockSpace,
    TruncationOverflowError,
    annihilation_matrix,
    attenuated_coherent_dyadic,
    coherent_amplitudes,
    displacement_matrix,
    qubit_fock_operator,
    squeeze_matrix,
    thermal_weights,
)
from .metrics import sc_closed_forms
from .transmitters import sc_schmidt_probabilities

__all__ = [
    "QubitModeState",
    "JCParams",
    "DecoherenceParams",
    "ShotResult",
    "DISPERSIVE_THRESHOLD",
    "VALIDITY_BUDGET",
    "prepare_sc_state",
    "prepare_sc_state_thermal",
    "sc_target_amplitudes",
    "received_cat_state",
    "optimal_cat_observable",
    "o_tau_receiver_shot",
    "snr_ratio_formula",
    "snr_ratio_fock",
    "optimal_snr",
    "attenuation_penalty",
    "decoherence_ratio",
    "thermal_prep_penalty",
    "no_advantage_threshold",
    "lindblad_qubit_propagate",
]

#: a coupling/detuning ratio g/|Delta| at or below this counts as dispersive
DISPERSIVE_THRESHOLD = 0.01

#: readout validity: tau^2 (mean mode occupation + 1) must stay below this
VALIDITY_BUDGET = 0.05

_HALF_PULSE = np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2.0)  # exp(-i pi/4 sigma_y)
_PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
_MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


@dataclass(frozen=True)
class QubitModeState:
    """Density operator of a qubit (|g> = index 0) joined to one truncated
    Fock mode, ordered qubit-major: index q*(cutoff+1) + n.

    :param space: single-mode :class:`~covertlink.fock.FockSpace` of the cavity.
    :param matrix: (2*dim, 2*dim) density matrix, dim = cutoff + 1.
    """

    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        if self.space.modes != 1:
            raise ValueError("QubitModeState holds exactly one cavity mode")
        dim = 2 * self.space.dim
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} != ({dim}, {dim})")
        scale = max(1.0, float(np.abs(mat).max()))
        if np.abs(mat - mat.conj().T).max() > 1e-9 * scale:
            raise ValueError("matrix is not Hermitian")
        tr = float(np.real(np.trace(mat)))
        if abs(tr - 1.0) > 1e-6:
            raise ValueError(f"trace = {tr}, expected 1")
        object.__setattr__(self, "matrix", mat / tr)

    @classmethod
    def from_pure(cls, space: FockSpace, amplitudes: np.ndarray) -> "QubitModeState":
        """Wrap a normalized joint state vector of length 2*(cutoff+1)."""
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        vec = vec / np.linalg.norm(vec)
        return cls(space=space, matrix=np.outer(vec, vec.conj()))

    @property
    def probability_excited(self) -> float:
        """Population of the qubit |e> level."""
        dim = self.space.dim
        return float(np.real(np.trace(self.matrix[dim:, dim:])))

    @property
    def purity(self) -> float:
        """Tr(rho^2)."""
        return float(np.real(np.sum(self.matrix * self.matrix.conj().T)))

    def mode_occupation(self) -> float:
        """Mean photon number of the cavity marginal."""
        diag = np.real(np.diag(self.matrix))
        n = np.arange(self.space.dim)
        return float(diag[: self.space.dim] @ n + diag[self.space.dim:] @ n)

    def mode_level_populations(self) -> np.ndarray:
        """Fock-level populations of the cavity marginal."""
        diag = np.real(np.diag(self.matrix))
        return diag[: self.space.dim] + diag[self.space.dim:]


@dataclass(frozen=True)
class JCParams:
    """Jaynes-Cummings working point.

    :param omega_r: cavity frequency (angular, any fixed unit).
    :param omega_q: qubit frequency (same unit).
    :param g: vacuum coupling rate (same unit).
    :param tau_jc: dimensionless interaction time; the physical gate time
        is ``tau_jc / g``.
    """

    omega_r: float
    omega_q: float
    g: float
    tau_jc: float

    def __post_init__(self):
        if self.g <= 0.0:
            raise ValueError(f"coupling g must be > 0, got {self.g}")

    @property
    def delta(self) -> float:
        """Detuning omega_r - omega_q."""
        return self.omega_r - self.omega_q

    @property
    def chi(self) -> float:
        """Dispersive shift g^2/Delta (requires nonzero detuning)."""
        if self.delta == 0.0:
            raise ValueError("chi undefined at zero detuning")
        return self.g * self.g / self.delta

    @property
    def dispersive(self) -> bool:
        """True when g/|Delta| <= DISPERSIVE_THRESHOLD."""
        return self.delta != 0.0 and \
            self.g / abs(self.delta) <= DISPERSIVE_THRESHOLD

    @property
    def t_gate(self) -> float:
        """Physical duration of the tau_jc interaction."""
        return self.tau_jc / self.g

    @property
    def t_chi(self) -> float:
        """Duration of the conditional-phase step, pi/(2 chi)."""
        return math.pi / (2.0 * abs(self.chi))


@dataclass(frozen=True)
class DecoherenceParams:
    """Qubit decoherence rates and the derived lifetimes/populations.

    :param gamma: pure-dephasing rate.
    :param gamma_up: thermal excitation rate (g -> e).
    :param gamma_down: relaxation rate (e -> g).
    :param kappa: cavity decay rate (carried for reporting; the qubit maps
        below do not use it).
    :param n_t: resonator thermal occupation (carried for reporting).
    """

    gamma: float
    gamma_up: float
    gamma_down: float
    kappa: float = 0.0
    n_t: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "gamma_up", "gamma_down", "kappa", "n_t"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def flip_total(self) -> float:
        return self.gamma_up + self.gamma_down

    @property
    def t1(self) -> float:
        """Population lifetime 1/(Gamma_up + Gamma_down)."""
        return math.inf if self.flip_total == 0.0 else 1.0 / self.flip_total

    @property
    def t2(self) -> float:
        """Coherence lifetime 1/(gamma + (Gamma_up + Gamma_down)/2);
        always <= 2*T1."""
        rate = self.gamma + 0.5 * self.flip_total
        return math.inf if rate == 0.0 else 1.0 / rate

    @property
    def a_g(self) -> float:
        """Stationary ground population Gamma_down/(Gamma_up + Gamma_down)."""
        return 1.0 if self.flip_total == 0.0 else self.gamma_down / self.flip_total

    @property
    def a_e(self) -> float:
        """Stationary excited population; a_g + a_e = 1."""
        return 0.0 if self.flip_total == 0.0 else self.gamma_up / self.flip_total


class ShotResult(NamedTuple):
    """One readout shot: P(e) and whether tau stayed in the weak window."""

    probability_excited: float
    within_validity: bool


def sc_target_amplitudes(alpha: complex, space: FockSpace) -> np.ndarray:
    """Ideal cat-state vector (|+>|alpha> + |->|-alpha>)/sqrt(2) in the
    qubit-major joint basis.

    :param alpha: cavity displacement; the signal photon number is |alpha|^2.
    :param space: single-mode Fock space.
    :returns: normalized joint amplitude vector of length 2*(cutoff+1).
    """
    plus_part = coherent_amplitudes(alpha, space.cutoff)
    minus_part = coherent_amplitudes(-alpha, space.cutoff)
    vec = (np.kron(_PLUS, plus_part) + np.kron(_MINUS, minus_part)) / math.sqrt(2.0)
    return vec / np.linalg.norm(vec)


def prepare_sc_state(alpha: complex, space: FockSpace,
                     jc: JCParams | None = None, ideal: bool = True,
                     stage: int = 3) -> QubitModeState:
    """Run the three-step cat-preparation pulse sequence on |g>|0>.

    Step 1 rotates the qubit into (|g>+|e>)/sqrt(2) and displaces the
    cavity to |-i alpha>; step 2 applies the conditional cavity phase
    exp(-i (pi/2) sigma_z n), rotating the two branches to |alpha> and
    |-alpha>; step 3 is a second qubit rotation, after which the state is
    (|+>|alpha> + |->|-alpha>)/sqrt(2).

    :param alpha: target cavity displacement.
    :param space: single-mode Fock space (must absorb |alpha|^2 photons).
    :param jc: optional working point; a non-dispersive one only warns,
        since the ideal pipeline abstracts the gate.
    :param ideal: must be True; noisy preparation lives in
        :func:`prepare_sc_state_thermal`, which takes the noise parameters.
    :param stage: return the state after step 1, 2 or 3 (default 3).
    :returns: :class:`QubitModeState` (pure).
    """
    if not ideal:
        raise ValueError(
            "ideal=False carries no noise model here; call "
            "prepare_sc_state_thermal(alpha, space, N_T, a_g, a_e) instead"
        )
    if stage not in (1, 2, 3):
        raise ValueError(f"stage must be 1, 2 or 3, got {stage}")
    if jc is not None and not jc.dispersive:
        warnings.warn(
            f"g/|Delta| = {jc.g / abs(jc.delta) if jc.delta else math.inf:.3g} "
            "is outside the dispersive regime; the conditional-phase step is "
            "idealized regardless",
            stacklevel=2,
        )
    dim = space.dim
    qubit = _HALF_PULSE @ np.array([1.0, 0.0])
    cavity = coherent_amplitudes(-1j * alpha, space.cutoff)
    psi = np.kron(qubit, cavity)
    if stage == 1:
        return QubitModeState.from_pure(space, psi)
    n = np.arange(dim)
    phase_g = np.exp(1j * (math.pi / 2.0) * n)
    psi = psi.copy()
    psi[:dim] *= phase_g
    psi[dim:] *= phase_g.conj()
    if stage == 2:
        return QubitModeState.from_pure(space, psi)
    u3 = np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]) @ _HALF_PULSE, np.eye(dim))
    return QubitModeState.from_pure(space, u3 @ psi)


def prepare_sc_state_thermal(alpha: complex, space: FockSpace, n_t: float,
                             a_g: float, a_e: float) -> QubitModeState:
    """Cat preparation from a thermally occupied cavity and an imperfectly
    reset qubit: the cavity branches are displaced thermal states and the
    qubit coherences are weighted by the stationary populations,

        rho = 1/2 sum_{k,k'=+,-} (a_g + k k' a_e) |k><k'| (x)
              D(k alpha) rho_T D(k' alpha)^dag .

    :param alpha: cavity displacement.
    :param space: single-mode Fock space.
    :param n_t: cavity thermal occupation before displacement.
    :param a_g: qubit ground-state weight (a_g + a_e must equal 1).
    :param a_e: qubit excited-state weight.
    :returns: :class:`QubitModeState`.
    :raises TruncationOverflowError: when the displaced thermal state leaks
        measurably (> 1e-8) into the top three Fock levels.
    """
    if n_t < 0.0:
        raise ValueError(f"N_T must be >= 0, got {n_t}")
    if a_g < 0.0 or a_e < 0.0 or abs(a_g + a_e - 1.0) > 1e-9:
        raise ValueError("qubit weights need a_g, a_e >= 0 and a_g + a_e = 1")
    dim = space.dim
    w = thermal_weights(n_t, space.cutoff)
    rho_t = np.diag(w / w.sum()).astype(complex)
    displace = {1: displacement_matrix(alpha, space.cutoff),
                -1: displacement_matrix(-alpha, space.cutoff)}
    qubit_vec = {1: _PLUS, -1: _MINUS}
    mat = np.zeros((2 * dim, 2 * dim), dtype=complex)
    for k in (1, -1):
        for kp in (1, -1):
            weight = 0.5 * (a_g + k * kp * a_e)
            dyad = np.outer(qubit_vec[k], qubit_vec[kp])
            block = displace[k] @ rho_t @ displace[kp].conj().T
            mat += weight * np.kron(dyad, block)
    mat = 0.5 * (mat + mat.conj().T)
    mat /= np.real(np.trace(mat))
    state = QubitModeState(space=space, matrix=mat)
    top = float(state.mode_level_populations()[-3:].sum())
    if top > 1e-8:
        raise TruncationOverflowError(
            f"displaced thermal state puts {top:.3e} in the top three Fock "
            f"levels; raise the cutoff above {space.cutoff}"
        )
    return state


def received_cat_state(alpha: complex, eta: float, n_b: float,
                       space: FockSpace, phase_flip: bool = False) -> QubitModeState:
    """Cat state after the round trip: each coherent branch passes the
    amplitude-eta thermal channel with background N_B, and a pi phase on
    the interrogated target maps to sigma_z on the qubit.

    The dyadic channel outputs are assembled at the stored cutoff,
    symmetrized, and renormalized, so at large N_B this is a
    moment-truncated representation: traces of low-order observables are
    accurate while the deep thermal tail is deliberately clipped.

    :param alpha: transmitted displacement (signal photons |alpha|^2).
    :param eta: one-pass amplitude transmissivity in (0, 1].
    :param n_b: background occupation per mode.
    :param space: single-mode Fock space for the returned mode.
    :param phase_flip: True for the phase-pi symbol.
    :returns: :class:`QubitModeState`.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if n_b < 0.0:
        raise ValueError(f"N_B must be >= 0, got {n_b}")
    dim = space.dim
    qubit_vec = {1: _PLUS, -1: _MINUS}
    mat = np.zeros((2 * dim, 2 * dim), dtype=complex)
    for k in (1, -1):
        for kp in (1, -1):
            block = attenuated_coherent_dyadic(
                k * alpha, kp * alpha, eta, n_b, space.cutoff)
            mat += 0.5 * np.kron(np.outer(qubit_vec[k], qubit_vec[kp]), block)
    mat = 0.5 * (mat + mat.conj().T)
    mat /= np.real(np.trace(mat))
    if phase_flip:
        flip = qubit_fock_operator([(1.0, "sigma_z", "identity")], space.cutoff)
        mat = flip @ mat @ flip
    return QubitModeState(space=space, matrix=mat)


def optimal_cat_observable(n_s: float, cutoff: int) -> np.ndarray:
    """Optimal local observable for the cat receiver,
    sigma_minus (lambda_+ a + lambda_- a^dag) + h.c., as a joint matrix.

    :param n_s: signal photon number setting the Schmidt weights.
    :param cutoff: Fock cutoff of the mode factor.
    :returns: Hermitian (2*(cutoff+1))^2 matrix.
    """
    lam_p, lam_m = sc_schmidt_probabilities(n_s)
    a = annihilation_matrix(cutoff)
    mode = lam_p * a + lam_m * a.conj().T
    return qubit_fock_operator([(1.0, "sigma_minus", mode)], cutoff,
                               add_adjoint=True)


def o_tau_receiver_shot(state: QubitModeState, tau_jc: float,
                        r_squeeze: float | None = None,
                        n_s: float | None = None) -> ShotResult:
    """Simulate one readout shot of the weak-interaction receiver.

    The circuit squeezes the mode by r, flips the qubit, evolves under the
    resonant exchange generator for dimensionless time tau, and measures
    the qubit; P(e) equals <|g><g| + tau O_opt + tau^2 A + o(tau^2)> on the
    input state.

    :param state: joint input state.
    :param tau_jc: dimensionless interaction time.
    :param r_squeeze: squeeze parameter; default -asinh(lambda_-(N_S)).
    :param n_s: signal photon number used to derive the default squeeze.
    :returns: :class:`ShotResult`; ``within_validity`` is False when
        tau^2 (mean occupation + 1) exceeds VALIDITY_BUDGET.
    """
    if r_squeeze is None:
        if n_s is None:
            raise ValueError("provide r_squeeze or n_s to set the squeeze")
        _, lam_m = sc_schmidt_probabilities(n_s)
        r_squeeze = -math.asinh(lam_m)
    cutoff = state.space.cutoff
    a = annihilation_matrix(cutoff)
    squeezer = squeeze_matrix(r_squeeze, cutoff)
    flip_and_squeeze = qubit_fock_operator([(1.0, "sigma_x", squeezer)], cutoff)
    generator = qubit_fock_operator(
        [(1.0, "sigma_minus", a.conj().T), (-1.0, "sigma_plus", a)], cutoff)
    circuit = expm(-tau_jc * generator) @ flip_and_squeeze
    evolved = circuit @ state.matrix @ circuit.conj().T
    dim = cutoff + 1
    p_e = float(np.real(np.trace(evolved[dim:, dim:])))
    staged = flip_and_squeeze @ state.matrix @ flip_and_squeeze.conj().T
    number = np.concatenate([np.arange(dim), np.arange(dim)])
    occupation = float(np.real(np.diag(staged)) @ number)
    within = tau_jc * tau_jc * (occupation + 1.0) <= VALIDITY_BUDGET
    return ShotResult(probability_excited=p_e, within_validity=within)


def snr_ratio_formula(n_s: float, n_b: float, tau_jc: float) -> float:
    """Closed-form SNR of the tau receiver relative to the optimal cat
    observable: tau^2/(a + tau^2 (1 + b)).

    At tau^2 = N_S/sqrt(N_B) the value approaches 1 - 1/sqrt(N_B) + 4 N_S,
    so the weak shot interaction is nearly optimal in strong background.

    :param n_s: signal photon number.
    :param n_b: background occupation.
    :param tau_jc: dimensionless interaction time.
    :returns: ratio in (0, 1).
    """
    if n_s <= 0.0 or n_b <= 0.0:
        raise ValueError("N_S and N_B must be > 0")
    lam_p, lam_m = sc_schmidt_probabilities(n_s)
    p2 = lam_p ** 2 + lam_m ** 2
    p3 = lam_p ** 3 + lam_m ** 3
    var_opt = n_b * p2 + p3
    a = lam_p * lam_m / var_opt
    b = -2.0 * lam_p * lam_m * (1.0 + 2.0 * lam_m ** 2 + 2.0 * p2 * n_b) / var_opt
    t2 = tau_jc * tau_jc
    return t2 / (a + t2 * (1.0 + b))


def _moments(rho: np.ndarray, op: np.ndarray) -> tuple[float, float]:
    mean = float(np.real(np.trace(rho @ op)))
    second = float(np.real(np.trace(rho @ op @ op)))
    return mean, second - mean * mean


def snr_ratio_fock(n_s: float, n_b: float, tau_jc: float, eta: float = 0.02,
                   cutoff: int = 160) -> float:
    """Brute-force counterpart of :func:`snr_ratio_formula`: build the
    round-trip cat states in a truncated Fock space, expand the shot
    observable to second order in tau around the implemented circuit
    (squeezed mode, qubit flip, exchange generator), and form the
    deflection-SNR ratio from operator moments.

    :param n_s: signal photon number (alpha = sqrt(N_S)).
    :param n_b: background occupation (desk scale, <= ~32).
    :param tau_jc: dimensionless interaction time.
    :param eta: one-pass amplitude transmissivity.
    :param cutoff: Fock cutoff; the thermal tail above it is clipped.
    :returns: numeric SNR ratio.
    """
    space = FockSpace(cutoff)
    state0 = received_cat_state(math.sqrt(n_s), eta, n_b, space)
    state_pi = received_cat_state(math.sqrt(n_s), eta, n_b, space,
                                  phase_flip=True)
    lam_p, lam_m = sc_schmidt_probabilities(n_s)
    a = annihilation_matrix(cutoff)
    squeezer = squeeze_matrix(-math.asinh(lam_m), cutoff)
    mode_induced = squeezer.conj().T @ a @ squeezer
    number_induced = squeezer.conj().T @ np.diag(
        np.arange(cutoff + 1.0)).astype(complex) @ squeezer
    project_g = qubit_fock_operator([(1.0, "project_g", "identity")], cutoff)
    first_order = qubit_fock_operator([(1.0, "sigma_minus", mode_induced)],
                                      cutoff, add_adjoint=True)
    second_order = qubit_fock_operator([(1.0, "sigma_z", number_induced)],
                                       cutoff) - project_g
    o_opt = optimal_cat_observable(n_s, cutoff)

    t2 = tau_jc * tau_jc
    means, var_opt, var_tau = {}, {}, {}
    for key, st in (("0", state0), ("pi", state_pi)):
        rho = st.matrix
        m_opt, v_opt = _moments(rho, o_opt)
        m_pg, v_pg = _moments(rho, project_g)
        m_1, v_1 = _moments(rho, first_order)
        m_2 = float(np.real(np.trace(rho @ second_order)))
        anti_01 = float(np.real(np.trace(
            rho @ (project_g @ first_order + first_order @ project_g))))
        anti_02 = float(np.real(np.trace(
            rho @ (project_g @ second_order + second_order @ project_g))))
        cov01 = anti_01 - 2.0 * m_pg * m_1
        cov02 = anti_02 - 2.0 * m_pg * m_2
        means[key] = m_opt
        var_opt[key] = v_opt
        var_tau[key] = v_pg + tau_jc * cov01 + t2 * (v_1 + cov02)
    delta_sq = (means["pi"] - means["0"]) ** 2
    sigma_opt = 0.25 * (math.sqrt(var_opt["0"]) + math.sqrt(var_opt["pi"])) ** 2
    sigma_tau = 0.25 * (math.sqrt(var_tau["0"]) + math.sqrt(var_tau["pi"])) ** 2
    q_tau = t2 * delta_sq / sigma_tau
    q_opt = delta_sq / sigma_opt
    return q_tau / q_opt


def optimal_snr(n_s: float, n_b: float, eta: float) -> float:
    """Deflection SNR of the optimal cat observable, expressed through the
    local exponent: 8 eta^2 beta_loc.  Stated here as a derived identity
    (exponent matching of the two error laws) and verified numerically in
    the test suite.

    :param n_s: signal photon number.
    :param n_b: background occupation.
    :param eta: round-trip amplitude transmissivity factor applied once.
    :returns: SNR per shot.
    """
    _, b_loc = sc_closed_forms(n_s, n_b)
    return 8.0 * eta * eta * b_loc


def attenuation_penalty(eta_att: float, n_b: float) -> float:
    """SNR retention when the return mode is further attenuated before the
    receiver: eta_att N_B / (1 + eta_att N_B).

    :param eta_att: extra power transmissivity in (0, 1].
    :param n_b: background occupation.
    """
    if not 0.0 < eta_att <= 1.0:
        raise ValueError(f"eta_att must be in (0, 1], got {eta_att}")
    if n_b < 0.0:
        raise ValueError(f"N_B must be >= 0, got {n_b}")
    x = eta_att * n_b
    return x / (1.0 + x)


def decoherence_ratio(t: float, t2: float) -> float:
    """SNR retention after storing the qubit for time t: exp(-2 t / T2).

    :param t: storage time.
    :param t2: qubit coherence time.
    """
    if t < 0.0 or t2 <= 0.0:
        raise ValueError("need t >= 0 and T2 > 0")
    return math.exp(-2.0 * t / t2)


def thermal_prep_penalty(a_g: float, a_e: float, c: float) -> float:
    """SNR retention for preparation from a thermal cavity:
    (a_g - a_e)^2 / (1 + 1/c) with displacement |alpha|^2 = c N_T.

    :param a_g: stationary qubit ground weight.
    :param a_e: stationary qubit excited weight (a_g + a_e = 1).
    :param c: displacement-to-thermal photon ratio, > 0.
    """
    if abs(a_g + a_e - 1.0) > 1e-9 or a_g < 0.0 or a_e < 0.0:
        raise ValueError("need a_g, a_e >= 0 with a_g + a_e = 1")
    if c <= 0.0:
        raise ValueError(f"c must be > 0, got {c}")
    return (a_g - a_e) ** 2 / (1.0 + 1.0 / c)


def no_advantage_threshold(a_g: float, a_e: float) -> float:
    """Largest thermal ratio c at which the cat receiver's quantum gain is
    fully erased: 1/(2 (a_g - a_e)^2 - 1), or +inf when the populations are
    too mixed for the criterion to ever bite.

    :param a_g: stationary qubit ground weight.
    :param a_e: stationary qubit excited weight (a_g + a_e = 1).
    """
    if abs(a_g + a_e - 1.0) > 1e-9 or a_g < 0.0 or a_e < 0.0:
        raise ValueError("need a_g, a_e >= 0 with a_g + a_e = 1")
    contrast = 2.0 * (a_g - a_e) ** 2
    if contrast <= 1.0:
        return math.inf
    return 1.0 / (contrast - 1.0)


_SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_SIGMA_PLUS = _SIGMA_MINUS.conj().T
_SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
_NAMED_QUBIT_OBSERVABLES = {
    "identity": np.eye(2, dtype=complex),
    "sigma_x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "sigma_z": _SIGMA_Z,
    "sigma_minus": _SIGMA_MINUS,
    "sigma_plus": _SIGMA_PLUS,
}


def lindblad_qubit_propagate(observable, t: float,
                             params: DecoherenceParams) -> np.ndarray:
    """Heisenberg-picture qubit observable after decoherence time t.

    Closed forms: sigma_+/- pick up exp(-t/T2); sigma_z relaxes as
    exp(-t/T1) sigma_z + (1 - exp(-t/T1)) (Gamma_up - Gamma_down)/
    (Gamma_up + Gamma_down) * identity; the identity is fixed (the map is
    unital on means only when the flip rates balance).  Arbitrary 2x2
    observables propagate by linearity.

    :param observable: a name from {"identity", "sigma_x", "sigma_z",
        "sigma_minus", "sigma_plus"} or any 2x2 matrix.
    :param t: evolution time, >= 0.
    :param params: decoherence rates.
    :returns: the propagated 2x2 matrix.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if isinstance(observable, str):
        try:
            x = _NAMED_QUBIT_OBSERVABLES[observable]
        except KeyError:
            raise ValueError(f"unknown observable name {observable!r}") from None
    else:
        x = np.asarray(observable, dtype=complex)
        if x.shape != (2, 2):
            raise ValueError("observable must be a 2x2 matrix or a name")
    c_i = 0.5 * (x[0, 0] + x[1, 1])
    c_z = 0.5 * (x[1, 1] - x[0, 0])
    c_m = x[0, 1]
    c_p = x[1, 0]
    decay_t2 = 1.0 if params.t2 == math.inf else math.exp(-t / params.t2)
    decay_t1 = 1.0 if params.t1 == math.inf else math.exp(-t / params.t1)
    imbalance = 0.0 if params.flip_total == 0.0 else \
        (params.gamma_up - params.gamma_down) / params.flip_total
    out = (c_i + c_z * (1.0 - decay_t1) * imbalance) * np.eye(2, dtype=complex)
    out += c_z * decay_t1 * _SIGMA_Z
    out += decay_t2 * (c_m * _SIGMA_MINUS + c_p * _SIGMA_PLUS)
    return out

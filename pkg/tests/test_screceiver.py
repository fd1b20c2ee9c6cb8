"""Tests for covertlink.screceiver: cat-state preparation, the round-trip
received states, the weak-interaction readout shot, SNR ratios, hardware
penalty factors, and qubit decoherence propagation."""

import math
import warnings

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from covertlink import screceiver as sc
from covertlink.fock import (
    FockSpace,
    TruncationOverflowError,
    annihilation_matrix,
    coherent_amplitudes,
    qubit_fock_operator,
    squeeze_matrix,
)
from covertlink.metrics import sc_closed_forms
from covertlink.transmitters import sc_schmidt_probabilities


# ===================================================================
# cat-state preparation
# ===================================================================

def test_target_amplitudes_normalized_with_schmidt_split():
    space = FockSpace(40)
    n_s = 0.09
    vec = sc.sc_target_amplitudes(math.sqrt(n_s), space)
    assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)
    # qubit-major layout: the |e> block carries the odd-cat weight lambda_-
    lam_p, lam_m = sc_schmidt_probabilities(n_s)
    p_e = float(np.sum(np.abs(vec[space.dim:]) ** 2))
    assert p_e == pytest.approx(lam_m, abs=1e-10), f"P(e) {p_e} vs {lam_m}"


def test_prepare_ideal_reaches_target_fidelity():
    space = FockSpace(40)
    alpha = 0.3
    state = sc.prepare_sc_state(alpha, space)
    target = sc.sc_target_amplitudes(alpha, space)
    fid = float(np.real(target.conj() @ state.matrix @ target))
    assert fid >= 1.0 - 1e-8, f"preparation fidelity {fid}"
    assert state.purity == pytest.approx(1.0, abs=1e-10)


def test_prepare_stage_progression():
    space = FockSpace(40)
    alpha = 0.3
    for stage in (1, 2):
        st = sc.prepare_sc_state(alpha, space, stage=stage)
        assert st.probability_excited == pytest.approx(0.5, abs=1e-12)
        assert st.mode_occupation() == pytest.approx(alpha ** 2, abs=1e-10)
    with pytest.raises(ValueError):
        sc.prepare_sc_state(alpha, space, stage=4)


def test_prepare_ideal_false_points_at_thermal_variant():
    with pytest.raises(ValueError, match="prepare_sc_state_thermal"):
        sc.prepare_sc_state(0.3, FockSpace(40), ideal=False)


def test_prepare_warns_outside_dispersive_regime():
    space = FockSpace(30)
    strong = sc.JCParams(omega_r=5.0, omega_q=4.9, g=0.1, tau_jc=0.1)
    with pytest.warns(UserWarning, match="dispersive"):
        sc.prepare_sc_state(0.2, space, jc=strong)
    weak = sc.JCParams(omega_r=5.0, omega_q=4.0, g=0.005, tau_jc=0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sc.prepare_sc_state(0.2, space, jc=weak)


def test_prepare_thermal_reduces_to_ideal_at_zero_noise():
    space = FockSpace(40)
    alpha = 0.3
    state = sc.prepare_sc_state_thermal(alpha, space, n_t=0.0, a_g=1.0, a_e=0.0)
    target = sc.sc_target_amplitudes(alpha, space)
    fid = float(np.real(target.conj() @ state.matrix @ target))
    assert fid >= 1.0 - 1e-10, f"fidelity {fid}"


def test_prepare_thermal_mixes_the_state():
    space = FockSpace(40)
    state = sc.prepare_sc_state_thermal(0.3, space, n_t=0.2,
                                        a_g=6.0 / 7.0, a_e=1.0 / 7.0)
    assert state.purity < 0.9
    assert state.mode_occupation() > 0.3 ** 2


def test_prepare_thermal_guards():
    with pytest.raises(TruncationOverflowError):
        sc.prepare_sc_state_thermal(1.0, FockSpace(12), n_t=2.0,
                                    a_g=1.0, a_e=0.0)
    with pytest.raises(ValueError):
        sc.prepare_sc_state_thermal(0.3, FockSpace(40), n_t=0.1,
                                    a_g=0.8, a_e=0.1)
    with pytest.raises(ValueError):
        sc.prepare_sc_state_thermal(0.3, FockSpace(40), n_t=-0.1,
                                    a_g=1.0, a_e=0.0)


def test_qubit_mode_state_validation():
    space = FockSpace(3)
    dim = 2 * space.dim
    with pytest.raises(ValueError):
        sc.QubitModeState(space=space, matrix=np.eye(dim - 1))
    skew = np.eye(dim, dtype=complex) / dim
    skew[0, 1] = 0.3
    with pytest.raises(ValueError):
        sc.QubitModeState(space=space, matrix=skew)
    with pytest.raises(ValueError):
        sc.QubitModeState(space=space, matrix=np.eye(dim, dtype=complex))


# ===================================================================
# JC working point and decoherence bookkeeping
# ===================================================================

def test_jcparams_derived_quantities():
    jc = sc.JCParams(omega_r=5.0, omega_q=4.0, g=0.005, tau_jc=0.2)
    assert jc.delta == pytest.approx(1.0)
    assert jc.chi == pytest.approx(0.005 ** 2 / 1.0, rel=1e-12)
    assert jc.t_gate == pytest.approx(0.2 / 0.005, rel=1e-12)
    assert jc.t_chi == pytest.approx(math.pi / (2.0 * jc.chi), rel=1e-12)
    assert jc.dispersive  # g/|Delta| = 0.005 <= 0.01
    assert not sc.JCParams(5.0, 4.9, 0.1, 0.2).dispersive
    resonant = sc.JCParams(5.0, 5.0, 0.1, 0.2)
    assert not resonant.dispersive
    with pytest.raises(ValueError):
        resonant.chi
    with pytest.raises(ValueError):
        sc.JCParams(5.0, 4.0, 0.0, 0.2)
    assert sc.DISPERSIVE_THRESHOLD == 0.01


def test_decoherence_params_lifetimes_and_populations():
    par = sc.DecoherenceParams(gamma=0.1, gamma_up=0.02, gamma_down=0.05)
    assert par.t1 == pytest.approx(1.0 / 0.07, rel=1e-12)
    assert par.t2 == pytest.approx(1.0 / (0.1 + 0.035), rel=1e-12)
    assert par.a_g == pytest.approx(5.0 / 7.0, rel=1e-12)
    assert par.a_e == pytest.approx(2.0 / 7.0, rel=1e-12)
    assert par.a_g + par.a_e == pytest.approx(1.0, abs=1e-12)
    assert par.t2 <= 2.0 * par.t1 + 1e-12
    idle = sc.DecoherenceParams(gamma=0.0, gamma_up=0.0, gamma_down=0.0)
    assert idle.t1 == math.inf and idle.t2 == math.inf
    assert idle.a_g == 1.0 and idle.a_e == 0.0
    with pytest.raises(ValueError):
        sc.DecoherenceParams(gamma=-0.1, gamma_up=0.0, gamma_down=0.0)


# ===================================================================
# round-trip received states
# ===================================================================

def test_received_phase_flip_equals_sign_flip_and_qubit_conjugation():
    space = FockSpace(40)
    alpha, eta, n_b = 0.4, 0.1, 1.0
    plain = sc.received_cat_state(alpha, eta, n_b, space)
    flipped = sc.received_cat_state(alpha, eta, n_b, space, phase_flip=True)
    # the pi symbol acts as sigma_z on the qubit ...
    sz = qubit_fock_operator([(1.0, "sigma_z", "identity")], space.cutoff)
    conj = sz @ plain.matrix @ sz
    assert np.abs(flipped.matrix - conj).max() <= 1e-14
    # ... which is the same state as transmitting -alpha
    negated = sc.received_cat_state(-alpha, eta, n_b, space)
    assert np.abs(flipped.matrix - negated.matrix).max() <= 1e-14


def test_received_mode_occupation_small_background():
    space = FockSpace(60)
    alpha, eta, n_b = 0.1, 0.02, 0.5
    state = sc.received_cat_state(alpha, eta, n_b, space)
    expect = eta ** 2 * alpha ** 2 + (1.0 - eta ** 2) * n_b
    assert state.mode_occupation() == pytest.approx(expect, rel=1e-6)


def test_received_validation():
    space = FockSpace(20)
    for eta in (0.0, -0.1, 1.2):
        with pytest.raises(ValueError):
            sc.received_cat_state(0.1, eta, 0.5, space)
    with pytest.raises(ValueError):
        sc.received_cat_state(0.1, 0.5, -0.5, space)


# ===================================================================
# weak-interaction readout shot
# ===================================================================

N_S_SHOT = 0.01
ETA_SHOT = 0.02
NB_SHOT = 16.0
CUT_SHOT = 159


@pytest.fixture(scope="module")
def received_pair():
    space = FockSpace(CUT_SHOT)
    amp = math.sqrt(N_S_SHOT)
    plain = sc.received_cat_state(amp, ETA_SHOT, NB_SHOT, space)
    flipped = sc.received_cat_state(amp, ETA_SHOT, NB_SHOT, space,
                                    phase_flip=True)
    return plain, flipped


def test_shot_probability_at_zero_tau_is_even_weight(received_pair):
    plain, _ = received_pair
    lam_p, _ = sc_schmidt_probabilities(N_S_SHOT)
    p0 = sc.o_tau_receiver_shot(plain, 0.0, n_s=N_S_SHOT).probability_excited
    assert p0 == pytest.approx(lam_p, abs=1e-6)
    assert p0 == pytest.approx(0.99009934, abs=1e-7)


def test_shot_derivative_matches_optimal_observable_mean(received_pair):
    plain, _ = received_pair
    h = 1e-3
    p_plus = sc.o_tau_receiver_shot(plain, +h, n_s=N_S_SHOT).probability_excited
    p_minus = sc.o_tau_receiver_shot(plain, -h, n_s=N_S_SHOT).probability_excited
    deriv = (p_plus - p_minus) / (2.0 * h)
    o_opt = sc.optimal_cat_observable(N_S_SHOT, CUT_SHOT)
    mean = float(np.real(np.trace(plain.matrix @ o_opt)))
    assert deriv == pytest.approx(0.00395843, abs=1e-6)
    assert mean == pytest.approx(0.00391918, abs=1e-6)
    assert abs(deriv - mean) <= 1e-4, f"slope {deriv} vs mean {mean}"


def test_shot_contrast_matches_closed_form(received_pair):
    plain, flipped = received_pair
    o_opt = sc.optimal_cat_observable(N_S_SHOT, CUT_SHOT)
    mean0 = float(np.real(np.trace(plain.matrix @ o_opt)))
    mean_pi = float(np.real(np.trace(flipped.matrix @ o_opt)))
    contrast = abs(mean_pi - mean0)
    assert contrast == pytest.approx(7.838367e-3, rel=1e-4)
    formula = 2.0 * ETA_SHOT * math.sqrt(N_S_SHOT) * (
        1.0 + math.exp(-4.0 * N_S_SHOT))
    assert contrast == pytest.approx(formula, rel=1e-2)


def test_shot_validity_flags(received_pair):
    plain, _ = received_pair
    expect = {0.5: True, 1.0: True, 2.0: False}
    for fac, want in expect.items():
        tau = math.sqrt(fac * N_S_SHOT / math.sqrt(NB_SHOT))
        got = sc.o_tau_receiver_shot(plain, tau, n_s=N_S_SHOT).within_validity
        assert got is want, f"fac {fac}: validity {got}, expected {want}"
    assert sc.VALIDITY_BUDGET == 0.05


def test_shot_requires_a_squeeze_setting(received_pair):
    plain, _ = received_pair
    with pytest.raises(ValueError):
        sc.o_tau_receiver_shot(plain, 0.01)


def test_shot_circuit_unitary_and_expansion_remainder():
    cutoff = 29
    dim = cutoff + 1
    _, lam_m = sc_schmidt_probabilities(N_S_SHOT)
    r = -math.asinh(lam_m)
    a = annihilation_matrix(cutoff)
    flip_sq = qubit_fock_operator(
        [(1.0, "sigma_x", squeeze_matrix(r, cutoff))], cutoff)
    generator = qubit_fock_operator(
        [(1.0, "sigma_minus", a.conj().T), (-1.0, "sigma_plus", a)], cutoff)
    project_g = qubit_fock_operator([(1.0, "project_g", "identity")], cutoff)
    project_e = qubit_fock_operator([(1.0, "project_e", "identity")], cutoff)
    o_opt = sc.optimal_cat_observable(N_S_SHOT, cutoff)
    from scipy.linalg import expm
    remainders = {}
    for tau in (0.05, 0.025, 0.0125):
        circuit = expm(-tau * generator) @ flip_sq
        assert np.abs(circuit.conj().T @ circuit - np.eye(2 * dim)).max() <= 1e-12
        heis = circuit.conj().T @ project_e @ circuit
        rem = heis - project_g - tau * o_opt
        remainders[tau] = float(np.linalg.norm(rem)) / tau ** 2
    # the tau^2 coefficient stays bounded as tau -> 0 (first-order expansion
    # P(e) = <Pg> + tau <O> + O(tau^2) is exact to that order)
    assert remainders[0.05] == pytest.approx(131.133, rel=2e-3)
    assert remainders[0.025] == pytest.approx(137.727, rel=2e-3)
    assert remainders[0.0125] == pytest.approx(159.627, rel=2e-3)
    assert remainders[0.0125] <= 2.0 * remainders[0.05]


# ===================================================================
# SNR ratios: closed form and Fock numerics
# ===================================================================

def test_snr_ratio_formula_instance():
    tau = math.sqrt(1e-3 / math.sqrt(1e4))
    got = sc.snr_ratio_formula(1e-3, 1e4, tau)
    assert got == pytest.approx(0.994029, abs=1e-6)
    # strong-background expansion 1 - 1/sqrt(N_B) + 4 N_S
    assert got == pytest.approx(1.0 - 1e-2 + 4e-3, abs=1e-3)
    with pytest.raises(ValueError):
        sc.snr_ratio_formula(0.0, 1e4, tau)
    with pytest.raises(ValueError):
        sc.snr_ratio_formula(1e-3, 0.0, tau)


def test_snr_ratio_formula_monotone_in_interaction():
    # stronger shots close the gap to the optimal observable; inside the
    # weak-interaction window the expansion stays below 1 (outside it the
    # truncated series may overshoot, which the validity flag guards)
    for n_b in (9.0, 100.0, 1e4):
        vals = []
        for fac in (0.25, 0.5, 1.0, 2.0, 4.0):
            tau = math.sqrt(fac * 0.01 / math.sqrt(n_b))
            vals.append(sc.snr_ratio_formula(0.01, n_b, tau))
        assert all(v > 0.0 for v in vals)
        assert all(a < b for a, b in zip(vals, vals[1:])), \
            f"N_B={n_b}: {vals} not increasing"
    for fac in (0.25, 0.5, 1.0, 2.0):
        tau = math.sqrt(fac * 0.01 / math.sqrt(9.0))
        assert sc.snr_ratio_formula(0.01, 9.0, tau) < 1.0


SNR_FOCK_PINNED = {
    (9.0, 0.5): 0.631760, (9.0, 1.0): 0.779717, (9.0, 2.0): 0.883130,
    (16.0, 0.5): 0.688418, (16.0, 1.0): 0.821710, (16.0, 2.0): 0.909786,
    (25.0, 0.5): 0.729683, (25.0, 1.0): 0.850569, (25.0, 2.0): 0.927388,
}


def test_snr_ratio_fock_grid_and_formula_agreement():
    for (n_b, fac), pinned in SNR_FOCK_PINNED.items():
        tau = math.sqrt(fac * N_S_SHOT / math.sqrt(n_b))
        num = sc.snr_ratio_fock(N_S_SHOT, n_b, tau, eta=ETA_SHOT,
                                cutoff=CUT_SHOT)
        assert num == pytest.approx(pinned, abs=5e-6), \
            f"N_B={n_b} fac={fac}: {num} vs pinned {pinned}"
        formula = sc.snr_ratio_formula(N_S_SHOT, n_b, tau)
        rel = abs(num - formula) / formula
        assert rel <= 0.02, f"N_B={n_b} fac={fac}: numeric {num} vs " \
                            f"formula {formula} (rel {rel:.4f})"


def test_optimal_snr_identity_and_instance():
    n_s, n_b, eta = 0.01, 9.0, 0.02
    got = sc.optimal_snr(n_s, n_b, eta)
    _, b_loc = sc_closed_forms(n_s, n_b)
    assert got == pytest.approx(8.0 * eta ** 2 * b_loc, rel=1e-12)
    assert got == pytest.approx(6.280813e-6, rel=1e-6)


# ===================================================================
# hardware penalty factors
# ===================================================================

def test_attenuation_penalty():
    assert sc.attenuation_penalty(0.5, 16.0) == pytest.approx(8.0 / 9.0,
                                                              rel=1e-12)
    assert sc.attenuation_penalty(1.0, 16.0) == pytest.approx(16.0 / 17.0,
                                                              rel=1e-12)
    vals = [sc.attenuation_penalty(x, 4.0) for x in (0.1, 0.3, 0.6, 1.0)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        sc.attenuation_penalty(0.0, 4.0)
    with pytest.raises(ValueError):
        sc.attenuation_penalty(1.5, 4.0)


def test_decoherence_ratio():
    assert sc.decoherence_ratio(0.0, 3.0) == 1.0
    assert sc.decoherence_ratio(3.0, 3.0) == pytest.approx(math.exp(-2.0),
                                                           rel=1e-12)
    with pytest.raises(ValueError):
        sc.decoherence_ratio(1.0, 0.0)
    with pytest.raises(ValueError):
        sc.decoherence_ratio(-1.0, 3.0)


def test_thermal_prep_penalty_and_threshold():
    assert sc.thermal_prep_penalty(1.0, 0.0, 1e9) == pytest.approx(1.0,
                                                                   abs=1e-8)
    got = sc.thermal_prep_penalty(0.9, 0.1, 2.0)
    assert got == pytest.approx(0.8 ** 2 / (1.0 + 0.5), rel=1e-12)
    assert sc.no_advantage_threshold(1.0, 0.0) == pytest.approx(1.0, rel=1e-12)
    assert sc.no_advantage_threshold(0.9, 0.1) == pytest.approx(1.0 / 0.28,
                                                                rel=1e-12)
    assert sc.no_advantage_threshold(0.85, 0.15) == math.inf
    # at the threshold ratio exactly half the SNR survives: the factor-2
    # quantum advantage of the cat receiver is fully erased
    for a_g in (1.0, 0.9, 0.95):
        a_e = 1.0 - a_g
        c_star = sc.no_advantage_threshold(a_g, a_e)
        assert sc.thermal_prep_penalty(a_g, a_e, c_star) == \
            pytest.approx(0.5, rel=1e-12)
    with pytest.raises(ValueError):
        sc.thermal_prep_penalty(0.8, 0.1, 1.0)
    with pytest.raises(ValueError):
        sc.no_advantage_threshold(0.8, 0.1)


# ===================================================================
# qubit decoherence propagation
# ===================================================================

DECO = sc.DecoherenceParams(gamma=0.1, gamma_up=0.02, gamma_down=0.05)
_SM = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_SP = _SM.conj().T
_SZ = np.diag([-1.0, 1.0]).astype(complex)


def _adjoint_lindblad(x0: np.ndarray, t: float,
                      par: sc.DecoherenceParams) -> np.ndarray:
    """Integrate the Heisenberg-picture master equation directly."""
    jumps = [math.sqrt(par.gamma_down) * _SM,
             math.sqrt(par.gamma_up) * _SP,
             math.sqrt(par.gamma / 2.0) * _SZ]

    def rhs(_t, y):
        x = y.reshape(2, 2)
        out = np.zeros((2, 2), dtype=complex)
        for ell in jumps:
            ld = ell.conj().T
            out += ld @ x @ ell - 0.5 * (ld @ ell @ x + x @ ld @ ell)
        return out.ravel()

    sol = solve_ivp(rhs, (0.0, t), x0.ravel().astype(complex),
                    rtol=1e-11, atol=1e-13)
    return sol.y[:, -1].reshape(2, 2)


def test_lindblad_closed_forms_match_ode_integration():
    rng = np.random.default_rng(7)
    rand = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    cases = [("sigma_x", np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)),
             ("sigma_z", _SZ), ("sigma_plus", _SP), (rand, rand)]
    for t in (0.5, 3.0):
        for arg, x0 in cases:
            numeric = _adjoint_lindblad(x0, t, DECO)
            closed = sc.lindblad_qubit_propagate(arg, t, DECO)
            diff = float(np.abs(numeric - closed).max())
            assert diff <= 1e-6, f"t={t}: max deviation {diff:.3e}"


def test_lindblad_identity_and_stationary_population():
    out = sc.lindblad_qubit_propagate("identity", 2.0, DECO)
    assert np.abs(out - np.eye(2)).max() <= 1e-14
    late = sc.lindblad_qubit_propagate("sigma_z", 1e4, DECO)
    imbalance = (DECO.gamma_up - DECO.gamma_down) / DECO.flip_total
    assert np.abs(late - imbalance * np.eye(2)).max() <= 1e-12


def test_lindblad_coherence_decay_scale():
    out = sc.lindblad_qubit_propagate("sigma_plus", DECO.t2, DECO)
    assert out[1, 0] == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert abs(out[0, 1]) <= 1e-15


def test_lindblad_linearity():
    x = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, -0.3]], dtype=complex)
    y = np.array([[1.0, 0.5j], [-0.5j, 0.25]], dtype=complex)
    combo = sc.lindblad_qubit_propagate(2.0 * x + 3.0 * y, 1.2, DECO)
    parts = (2.0 * sc.lindblad_qubit_propagate(x, 1.2, DECO)
             + 3.0 * sc.lindblad_qubit_propagate(y, 1.2, DECO))
    assert np.abs(combo - parts).max() <= 1e-12


def test_lindblad_validation():
    with pytest.raises(ValueError):
        sc.lindblad_qubit_propagate("sigma_y", 1.0, DECO)
    with pytest.raises(ValueError):
        sc.lindblad_qubit_propagate(np.eye(3), 1.0, DECO)
    with pytest.raises(ValueError):
        sc.lindblad_qubit_propagate("sigma_z", -1.0, DECO)

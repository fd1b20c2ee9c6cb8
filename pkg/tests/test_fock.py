"""Dense Fock-space core: operators, states, channels, discrimination."""

import math

import numpy as np
import pytest

from covertlink.fock import (
    ChernoffResult,
    DensityOperator,
    FockSpace,
    PureState,
    TruncationOverflowError,
    annihilation_matrix,
    apply_gaussian_unitary,
    attenuated_coherent_dyadic,
    chernoff_exponent,
    coherent_amplitudes,
    coherent_state,
    coherent_through_loss,
    displacement_matrix,
    helstrom_error,
    partial_trace,
    qfi_numeric,
    quantum_relative_entropy,
    qubit_fock_operator,
    squeeze_matrix,
    tensor_states,
    thermal_state,
    thermal_weights,
    tmsv_through_loss,
    tmsv_through_loss_compact,
)


# ==================================================================
# elementary operators
# ==================================================================

def test_annihilation_ladder_action():
    a = annihilation_matrix(6)
    assert a.shape == (7, 7)
    for n in range(1, 7):
        assert a[n - 1, n] == pytest.approx(math.sqrt(n), abs=1e-15)
    # commutator [a, a+] = 1 except the truncation corner
    comm = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(np.diag(comm)[:-1], 1.0, atol=1e-12)


def test_displacement_unitary_and_action():
    d = displacement_matrix(0.4 + 0.2j, 40)
    assert np.allclose(d @ d.conj().T, np.eye(41), atol=1e-10)
    vac = np.zeros(41)
    vac[0] = 1.0
    moved = d @ vac
    assert np.allclose(moved, coherent_amplitudes(0.4 + 0.2j, 40), atol=1e-10)


def test_squeeze_matrix_is_unitary_and_real_gaussian():
    s = squeeze_matrix(0.3, 40)
    assert np.allclose(s @ s.conj().T, np.eye(41), atol=1e-10)
    vac = np.zeros(41)
    vac[0] = 1.0
    sq = s @ vac
    # squeezed vacuum has photons only in even levels
    assert np.max(np.abs(sq[1::2])) < 1e-12
    n_op = np.arange(41)
    mean_n = float(np.sum(np.abs(sq) ** 2 * n_op))
    assert mean_n == pytest.approx(math.sinh(0.3) ** 2, abs=1e-10)


def test_coherent_state_statistics():
    space = FockSpace(40)
    st = coherent_state(0.7, space)
    probs = np.abs(st.amplitudes) ** 2
    assert float(probs.sum()) == pytest.approx(1.0, abs=1e-10)
    assert float(np.sum(probs * np.arange(41))) == pytest.approx(0.49, abs=1e-10)


def test_thermal_weights_normalization_and_mean():
    w = thermal_weights(0.8, 80)
    assert float(w.sum()) == pytest.approx(1.0, abs=1e-10)
    assert float(np.sum(w * np.arange(81))) == pytest.approx(0.8, abs=1e-8)


def test_thermal_state_requires_adequate_cutoff():
    with pytest.raises(TruncationOverflowError):
        thermal_state(5.0, FockSpace(3))


# ==================================================================
# multimode plumbing
# ==================================================================

def test_beamsplitter_splits_coherent_state():
    space2 = FockSpace(24, modes=2)
    joint = tensor_states(coherent_state(0.8, FockSpace(24)),
                          coherent_state(0.0, FockSpace(24)))
    out = apply_gaussian_unitary(joint, "beamsplitter", transmissivity=0.36,
                                 modes=(0, 1))
    kept = partial_trace(out, keep=[0])
    expect = coherent_state(0.8 * 0.6, FockSpace(24)).density().matrix
    assert np.max(np.abs(kept.matrix - expect)) < 1e-10
    other = partial_trace(out, keep=[1])
    expect2 = coherent_state(-0.8 * 0.8, FockSpace(24)).density().matrix
    assert np.max(np.abs(other.matrix - expect2)) < 1e-10


def test_partial_trace_of_product_state():
    rho_a = thermal_state(0.3, FockSpace(20))
    st_b = coherent_state(0.5, FockSpace(20)).density()
    joint = tensor_states(rho_a, st_b)
    back = partial_trace(joint, keep=[0])
    assert np.max(np.abs(back.matrix - rho_a.matrix)) < 1e-12


def test_phase_rotation_on_coherent_state():
    space = FockSpace(30)
    rotated = apply_gaussian_unitary(coherent_state(0.6, space), "phase",
                                     theta=0.9, mode=0)
    expect = coherent_state(0.6 * np.exp(-1j * 0.9), space)
    fid = abs(np.vdot(expect.amplitudes, rotated.amplitudes)) ** 2
    assert fid == pytest.approx(1.0, abs=1e-12)


# ==================================================================
# thermal attenuator channel
# ==================================================================

def test_dyadic_channel_without_noise_is_pure_attenuation():
    out = attenuated_coherent_dyadic(0.5, 0.5, 0.6, 0.0, 30)
    expect = coherent_state(0.3, FockSpace(30)).density().matrix
    assert np.max(np.abs(out - expect)) < 1e-10


def test_dyadic_channel_identity_limit():
    out = attenuated_coherent_dyadic(0.4, -0.2, 1.0, 3.0, 30)
    va = coherent_amplitudes(0.4, 30)
    vb = coherent_amplitudes(-0.2, 30)
    assert np.max(np.abs(out - np.outer(va, vb.conj()))) < 1e-10


def test_dyadic_channel_moments_thermal_noise():
    # displaced thermal state: <n> = |k a|^2 + (1-k^2) n_env
    k, nb, alpha = 0.3, 2.0, math.sqrt(0.5)
    rho = attenuated_coherent_dyadic(alpha, alpha, k, nb, 60)
    n_op = np.diag(np.arange(61).astype(float))
    mean_n = float(np.real(np.trace(rho @ n_op)))
    expect = (k * alpha) ** 2 + (1 - k * k) * nb
    assert mean_n == pytest.approx(expect, abs=1e-8)


def test_coherent_through_loss_matches_dyadic():
    space = FockSpace(40)
    rho = coherent_through_loss(0.6, 0.5, 1.0, space)
    direct = attenuated_coherent_dyadic(0.6, 0.6, 0.5, 1.0, 40)
    assert np.max(np.abs(rho.matrix - direct)) < 1e-12


def test_tmsv_through_loss_reduces_to_thermal_marginals():
    space = FockSpace(20, modes=2)
    joint = tmsv_through_loss(0.2, 0.5, 0.4, space)
    ret = partial_trace(joint, keep=[1])
    # return marginal: thermal with k^2 N_S + (1-k^2) N_B
    n_ret = 0.16 * 0.2 + (1 - 0.16) * 0.5
    expect = thermal_state(n_ret, FockSpace(20))
    assert np.max(np.abs(ret.matrix - expect.matrix)) < 1e-8
    idler = partial_trace(joint, keep=[0])
    expect_i = thermal_state(0.2, FockSpace(20))
    assert np.max(np.abs(idler.matrix - expect_i.matrix)) < 1e-8


def test_tmsv_compact_route_matches_dense_route():
    dense = tmsv_through_loss(0.2, 0.5, 0.4, FockSpace(12, modes=2))
    mat, nk, ns = tmsv_through_loss_compact(0.2, 0.5, 0.4, 12, idler_rank=12)
    assert (nk, ns) == (13, 13)
    assert np.max(np.abs(mat - dense.matrix)) < 1e-9


def test_tmsv_negative_amplitude_is_return_parity():
    plus = tmsv_through_loss_compact(0.2, 0.5, 0.4, 10, idler_rank=10)[0]
    minus = tmsv_through_loss_compact(0.2, 0.5, -0.4, 10, idler_rank=10)[0]
    sgn = np.kron(np.ones(11), (-1.0) ** np.arange(11))
    assert np.max(np.abs(minus - plus * np.outer(sgn, sgn))) < 1e-12


# ==================================================================
# discrimination and information tools
# ==================================================================

def test_helstrom_error_limits():
    rho = thermal_state(0.5, FockSpace(30))
    assert helstrom_error(rho, rho) == pytest.approx(0.5, abs=1e-12)
    s0 = coherent_state(0.0, FockSpace(30)).density().matrix
    psi = np.zeros(31)
    psi[1] = 1.0
    s1 = np.outer(psi, psi)
    assert helstrom_error(s0, s1) == pytest.approx(0.0, abs=1e-12)


def test_helstrom_error_two_coherent_states():
    space = FockSpace(40)
    r0 = coherent_state(0.4, space).density().matrix
    r1 = coherent_state(-0.4, space).density().matrix
    # pure-state formula: (1 - sqrt(1 - |<a|-a>|^2))/2
    ov2 = math.exp(-4 * 0.16)
    expect = 0.5 * (1 - math.sqrt(1 - ov2))
    assert helstrom_error(r0, r1) == pytest.approx(expect, abs=1e-10)


def test_chernoff_exponent_equal_coherent_pair():
    space = FockSpace(40)
    r0 = coherent_state(0.3, space).density().matrix
    r1 = coherent_state(-0.3, space).density().matrix
    res = chernoff_exponent(r0, r1)
    assert isinstance(res, ChernoffResult)
    # pure coherent pair: C = -ln min_s |<a|b>|^2(s...) = |a-b|^2 / ... at s*=1/2
    # overlap^2 independent of s for pure states: C = -ln |<a|b>|^2 * ... here
    # Tr r0^s r1^(1-s) = |<a|b>|^2 for projectors, so C = 2|alpha|^2*2 = 0.36*...
    assert res.exponent == pytest.approx(4 * 0.09, rel=1e-6)
    assert 0.0 < res.s_star < 1.0


def test_chernoff_exponent_upper_bounds_helstrom():
    r0 = thermal_state(0.2, FockSpace(40)).matrix
    r1 = attenuated_coherent_dyadic(0.5, 0.5, 0.7, 0.2, 40)
    res = chernoff_exponent(r0, r1)
    assert 0.5 * math.exp(-res.exponent) >= helstrom_error(r0, r1) - 1e-12


def test_quantum_relative_entropy_thermal_pair():
    # closed form between thermal states of mean m0 and m1
    m0, m1 = 0.3, 0.7
    r0 = thermal_state(m0, FockSpace(120))
    r1 = thermal_state(m1, FockSpace(120))
    expect = (m0 * math.log(m0 / m1)
              - (1 + m0) * math.log((1 + m0) / (1 + m1)))
    got = quantum_relative_entropy(r0, r1)
    assert got == pytest.approx(expect, abs=1e-8)
    assert quantum_relative_entropy(r0, r0) == pytest.approx(0.0, abs=1e-10)


def test_qfi_numeric_displacement_family():
    # real displacement of vacuum: F = 4 exactly
    space = FockSpace(24)

    def family(kappa):
        return coherent_state(kappa, space).density().matrix

    res = qfi_numeric(family)
    assert res.value == pytest.approx(4.0, rel=1e-6)
    assert res.sld.shape == (25, 25)


# ==================================================================
# qubit (x) mode operator builder
# ==================================================================

def test_qubit_fock_operator_shapes_and_content():
    cut = 5
    dim = cut + 1
    num = qubit_fock_operator([(1.0, "sigma_z", "number")], cut)
    assert num.shape == (2 * dim, 2 * dim)
    n_mat = np.diag(np.arange(dim).astype(float))
    assert np.allclose(num[:dim, :dim], -n_mat)
    assert np.allclose(num[dim:, dim:], n_mat)
    # qubit-only convention: all-None mode factors give the bare 2x2
    sz = qubit_fock_operator([(1.0, "sigma_z", None)], cut)
    assert sz.shape == (2, 2)
    with_identity = qubit_fock_operator([(1.0, "sigma_z", "identity")], cut)
    assert with_identity.shape == (2 * dim, 2 * dim)


def test_qubit_fock_operator_adjoint_closure():
    cut = 6
    op = qubit_fock_operator([(0.5, "sigma_minus", "raise")], cut,
                             add_adjoint=True)
    assert np.max(np.abs(op - op.conj().T)) < 1e-14


# ==================================================================
# container validation
# ==================================================================

def test_density_operator_rejects_bad_trace():
    mat = np.eye(4) * 0.1
    with pytest.raises(ValueError):
        DensityOperator(FockSpace(3), mat)


def test_pure_state_rejects_unnormalized_input():
    amp = np.zeros(5, dtype=complex)
    amp[0] = 3.0
    with pytest.raises(ValueError):
        PureState(FockSpace(4), amp)

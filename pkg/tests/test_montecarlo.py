"""Tests for covertlink.montecarlo: slot configuration, closed-form decision
moments, the coherent-homodyne and entangled-correlator simulators, the dense
adversary discrimination, and the random-coding layer."""

import math

import numpy as np
import pytest
from scipy.special import erfc

from covertlink import montecarlo as mc
from covertlink.covertness import plan_protocol
from covertlink.gaussian import closed_form_eve_relent


# ===================================================================
# configuration and helpers
# ===================================================================

def test_slot_config_validation():
    cfg = mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=200)
    assert cfg.alphabet == "BPSK" and cfg.seed == 2026
    with pytest.raises(ValueError):
        mc.SlotConfig(eta=1.2, n_s=0.5, n_b=2.0, m=200)
    with pytest.raises(ValueError):
        mc.SlotConfig(eta=-0.1, n_s=0.5, n_b=2.0, m=200)
    with pytest.raises(ValueError):
        mc.SlotConfig(eta=0.3, n_s=-0.5, n_b=2.0, m=200)
    with pytest.raises(ValueError):
        mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=0)
    with pytest.raises(ValueError):
        mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=1.5)
    with pytest.raises(ValueError):
        mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=200, alphabet="QPSK")
    with pytest.raises(ValueError):
        mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=200, seed=2 ** 64)


def test_homodyne_moments_closed_form():
    cfg = mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=200)
    mean, var = mc.homodyne_moments(cfg)
    assert mean == 0.3 * math.sqrt(2.0 * 0.5)
    assert var == 0.5 + (1.0 - 0.09) * 2.0
    lossless = mc.SlotConfig(eta=1.0, n_s=0.5, n_b=2.0, m=1)
    _, var_full = mc.homodyne_moments(lossless)
    assert var_full == 0.5  # full transmission leaves pure vacuum noise


def test_tmsv_local_moments_closed_form():
    cfg = mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=200)
    mean, var = mc.tmsv_local_moments(cfg)
    c = 0.3 * math.sqrt(0.5 * 1.5)
    n_r = 0.09 * 0.5 + 0.91 * 2.0
    assert mean == pytest.approx(2.0 * c, rel=1e-15)
    expect = 2.0 * c ** 2 + (0.5 + 1.0) * (n_r + 1.0) + 0.5 * n_r
    assert var == pytest.approx(expect, rel=1e-15)
    # with the line blocked no correlation survives but both noises remain
    blocked = mc.SlotConfig(eta=0.0, n_s=0.5, n_b=2.0, m=200)
    mean0, var0 = mc.tmsv_local_moments(blocked)
    assert mean0 == 0.0
    assert var0 == pytest.approx((0.5 + 1.0) * (2.0 + 1.0) + 0.5 * 2.0,
                                 rel=1e-15)


def test_wilson_interval_properties():
    lo, hi = mc.wilson_interval(5, 100)
    assert 0.0 <= lo <= 0.05 <= hi <= 1.0
    lo0, hi0 = mc.wilson_interval(0, 1000)
    assert 0.0 <= lo0 <= 1e-15 and hi0 > 0.0
    # complement symmetry
    lo_c, hi_c = mc.wilson_interval(95, 100)
    assert lo_c == pytest.approx(1.0 - hi, abs=1e-12)
    assert hi_c == pytest.approx(1.0 - lo, abs=1e-12)
    # more trials narrow the interval at fixed proportion
    lo2, hi2 = mc.wilson_interval(50, 1000)
    assert hi2 - lo2 < hi - lo
    with pytest.raises(ValueError):
        mc.wilson_interval(5, 0)
    with pytest.raises(ValueError):
        mc.wilson_interval(11, 10)


def test_exponent_estimate_inverts_gaussian_law():
    kappa, shots = 0.019397, 200
    p = 0.5 * erfc(math.sqrt(kappa * shots))
    assert mc.exponent_estimate(p, shots) == pytest.approx(kappa, rel=1e-12)
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            mc.exponent_estimate(bad, shots)
    with pytest.raises(ValueError):
        mc.exponent_estimate(0.1, 0)


# ===================================================================
# coherent-homodyne simulator
# ===================================================================

CFG = mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=200)
MEAN, VAR = mc.homodyne_moments(CFG)
P_ANALYTIC = 0.5 * erfc(MEAN * math.sqrt(CFG.m / (2.0 * VAR)))


def test_homodyne_reduced_within_three_sigma():
    trials = 100_000
    result = mc.simulate_coherent_homodyne(CFG, trials, method="reduced")
    sigma = math.sqrt(P_ANALYTIC * (1.0 - P_ANALYTIC) / trials)
    dev = abs(result.p_err - P_ANALYTIC)
    assert dev <= 3.0 * sigma, \
        f"p_hat {result.p_err:.6f} vs {P_ANALYTIC:.6f} ({dev / sigma:.2f} sigma)"
    assert result.ci_low <= P_ANALYTIC <= result.ci_high


def test_homodyne_literal_matches_analytic():
    trials = 20_000
    result = mc.simulate_coherent_homodyne(CFG, trials, method="literal")
    sigma = math.sqrt(P_ANALYTIC * (1.0 - P_ANALYTIC) / trials)
    assert abs(result.p_err - P_ANALYTIC) <= 4.0 * sigma


def test_homodyne_auto_selects_literal_at_small_scale():
    lit = mc.simulate_coherent_homodyne(CFG, 20_000, method="literal")
    auto = mc.simulate_coherent_homodyne(CFG, 20_000, method="auto")
    assert auto == lit


def test_homodyne_pad_is_transparent():
    padded = mc.simulate_coherent_homodyne(CFG, 50_000, method="reduced",
                                           one_time_pad=True)
    bare = mc.simulate_coherent_homodyne(CFG, 50_000, method="reduced",
                                         one_time_pad=False)
    assert padded.errors == bare.errors
    assert padded == bare


def test_homodyne_chunked_run_is_deterministic():
    # m large enough that the literal path splits into several chunks
    cfg = mc.SlotConfig(eta=0.05, n_s=0.001, n_b=2.0, m=50_000)
    first = mc.simulate_coherent_homodyne(cfg, 300, method="literal")
    second = mc.simulate_coherent_homodyne(cfg, 300, method="literal")
    assert first == second
    assert 0 < first.errors < 300  # noise-dominated, not saturated


def test_homodyne_error_drops_with_integration():
    short = mc.simulate_coherent_homodyne(
        mc.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=50), 50_000,
        method="reduced")
    long = mc.simulate_coherent_homodyne(CFG, 50_000, method="reduced")
    assert long.p_err < short.p_err


def test_homodyne_validation():
    with pytest.raises(ValueError):
        mc.simulate_coherent_homodyne(CFG, 50)
    with pytest.raises(ValueError):
        mc.simulate_coherent_homodyne(CFG, 1000, method="exact")
    assert mc.MIN_TRIALS == 100


# ===================================================================
# entangled local-correlation simulator
# ===================================================================

def test_tmsv_local_within_three_sigma():
    trials = 100_000
    mean, var = mc.tmsv_local_moments(CFG)
    p_an = 0.5 * erfc(mean * math.sqrt(CFG.m / (2.0 * var)))
    result = mc.simulate_tmsv_local(CFG, trials)
    sigma = math.sqrt(p_an * (1.0 - p_an) / trials)
    dev = abs(result.p_err - p_an)
    assert dev <= 3.0 * sigma, \
        f"p_hat {result.p_err:.6f} vs {p_an:.6f} ({dev / sigma:.2f} sigma)"


def test_tmsv_local_beats_homodyne_here():
    hom = mc.simulate_coherent_homodyne(CFG, 100_000, method="reduced")
    ent = mc.simulate_tmsv_local(CFG, 100_000)
    assert ent.p_err < hom.p_err


def test_tmsv_local_validation():
    with pytest.raises(ValueError):
        mc.simulate_tmsv_local(CFG, 50)


# ===================================================================
# adversary discrimination
# ===================================================================

def test_eve_explicit_cutoffs_frozen_instance():
    res = mc.simulate_eve_helstrom(0.5, 1.0, 0.05, kmax=5, env_cutoff=14,
                                   prune=1e-7)
    assert res.exact
    assert res.error_probability == pytest.approx(0.492772, abs=2e-6)
    assert res.kept_mass == pytest.approx(0.999932, abs=1e-5)
    assert res.relent_total == pytest.approx(
        closed_form_eve_relent(0.5, 1.0, 0.05), rel=1e-12)


def test_eve_default_cutoffs_grid():
    expect = {0.0: 0.5, 0.02: 0.497047, 0.05: 0.492773, 0.10: 0.486042}
    got = {}
    for n_s, want in expect.items():
        res = mc.simulate_eve_helstrom(0.5, 1.0, n_s)
        assert res.exact
        got[n_s] = res.error_probability
        assert res.error_probability == pytest.approx(want, abs=2e-6), \
            f"N_S={n_s}: {res.error_probability} vs {want}"
    vals = [got[k] for k in sorted(got)]
    assert all(a > b for a, b in zip(vals, vals[1:])), \
        "brighter signal must expose more"


def test_eve_silence_is_indistinguishable():
    res = mc.simulate_eve_helstrom(0.5, 1.0, 0.0)
    assert res == mc.EveDiscriminationResult(0.5, True, 0.0, 1.0)


def test_eve_exact_error_respects_entropy_bound():
    for n_s in (0.02, 0.05, 0.10):
        res = mc.simulate_eve_helstrom(0.5, 1.0, n_s)
        pinsker = 0.5 - math.sqrt(res.relent_total / 8.0)
        assert res.error_probability >= pinsker - 1e-12, \
            f"N_S={n_s}: exact {res.error_probability} below bound {pinsker}"


def test_eve_bound_branch():
    # several slots: additivity forces the entropy bound
    multi = mc.simulate_eve_helstrom(0.5, 1.0, 0.05, modes_n=3)
    assert not multi.exact
    assert math.isnan(multi.kept_mass)
    d_one = closed_form_eve_relent(0.5, 1.0, 0.05)
    assert multi.relent_total == pytest.approx(3.0 * d_one, rel=1e-12)
    assert multi.error_probability == pytest.approx(
        max(0.0, 0.5 - math.sqrt(3.0 * d_one / 8.0)), rel=1e-12)
    # heavy background exceeds the dense-branch guard
    hot = mc.simulate_eve_helstrom(0.5, 10.0, 0.05)
    assert not hot.exact
    # a tiny dimension limit also falls back to the bound
    capped = mc.simulate_eve_helstrom(0.5, 1.0, 0.05, dim_limit=10)
    assert not capped.exact
    assert capped.error_probability == pytest.approx(
        max(0.0, 0.5 - math.sqrt(d_one / 8.0)), rel=1e-12)


def test_eve_vacuum_background():
    # the off state is pure vacuum, so the relative entropy diverges; the
    # dense branch still returns the finite exact Helstrom error
    res = mc.simulate_eve_helstrom(0.5, 0.0, 0.05)
    assert res.exact
    assert res.relent_total == math.inf
    assert 0.0 < res.error_probability < 0.5
    # the entropy bound itself degenerates to the trivial error >= 0
    multi = mc.simulate_eve_helstrom(0.5, 0.0, 0.05, modes_n=2)
    assert not multi.exact
    assert multi.error_probability == 0.0


def test_eve_validation():
    for eta in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(ValueError):
            mc.simulate_eve_helstrom(eta, 1.0, 0.05)
    with pytest.raises(ValueError):
        mc.simulate_eve_helstrom(0.5, 1.0, 0.05, modes_n=0)


def test_eve_output_state_mass_bookkeeping():
    rho, back_dim, fwd_dim, kept = mc.eve_output_state(0.5, 1.0, 0.05,
                                                       kmax=5, env_cutoff=14)
    assert rho.shape == (back_dim * fwd_dim, back_dim * fwd_dim)
    assert np.trace(rho).real == pytest.approx(kept, abs=1e-12)
    assert 0.999 < kept < 1.0  # pruned tail only


# ===================================================================
# random-coding layer
# ===================================================================

AWGN = mc.AwgnReduction(sigma_beta_sq=1.0, beta_det=4,
                        symbol_mean=math.sqrt(0.045))


def test_awgn_reduction_validation():
    with pytest.raises(ValueError):
        mc.AwgnReduction(sigma_beta_sq=0.0, beta_det=4, symbol_mean=0.1)
    with pytest.raises(ValueError):
        mc.AwgnReduction(sigma_beta_sq=1.0, beta_det=3, symbol_mean=0.1)
    with pytest.raises(ValueError):
        mc.AwgnReduction(sigma_beta_sq=1.0, beta_det=4, symbol_mean=-0.1)


def test_awgn_reduction_from_protocol():
    plan = plan_protocol(0.1, 1000.0, 0.05, 0.01, 10 ** 8, big_m=100,
                         beta_det=4)
    awgn = mc.AwgnReduction.from_protocol(plan, 0.1, 1000.0, beta=0.5)
    assert awgn.sigma_beta_sq == pytest.approx(
        1001.0 / (2.0 * 0.5 * 0.01 * 100), rel=1e-12)
    assert awgn.symbol_mean == pytest.approx(
        math.sqrt(2.0 * plan.n_s / math.pi), rel=1e-12)
    assert awgn.beta_det == 4
    with pytest.raises(ValueError):
        mc.AwgnReduction.from_protocol(plan, 0.0, 1000.0, beta=0.5)
    with pytest.raises(ValueError):
        mc.AwgnReduction.from_protocol(plan, 0.1, 1000.0, beta=0.0)


def test_random_coding_threshold_bits():
    got = mc.random_coding_threshold_bits(400, AWGN)
    assert got == pytest.approx(400 * 0.045 / (2.0 * math.log(2)), rel=1e-12)
    assert got == pytest.approx(12.98, abs=0.01)
    assert mc.random_coding_threshold_bits(150, AWGN) == pytest.approx(
        4.87, abs=0.01)
    with pytest.raises(ValueError):
        mc.random_coding_threshold_bits(0, AWGN)


def test_random_coding_decodable_payload():
    # 4 payload bits against a ~13-bit threshold: decoding should succeed
    result = mc.random_coding_experiment(400, 4, AWGN, 2000, seed=2026)
    assert result.p_err < 0.05, f"block error {result.p_err}"


def test_random_coding_undecodable_payload():
    # 16 payload bits against a ~4.9-bit threshold at m=120: decoding fails
    result = mc.random_coding_experiment(120, 16, AWGN, 60, seed=2026)
    assert result.p_err > 0.8, f"block error {result.p_err}"


def test_random_coding_degenerate_and_guards():
    empty = mc.random_coding_experiment(50, 0, AWGN, 200, seed=1)
    assert empty.errors == 0 and empty.p_err == 0.0
    assert mc.CODEBOOK_CAP_BITS == 16
    with pytest.raises(ValueError):
        mc.random_coding_experiment(50, 17, AWGN, 10)
    with pytest.raises(ValueError):
        mc.random_coding_experiment(0, 4, AWGN, 10)
    with pytest.raises(ValueError):
        mc.random_coding_experiment(50, 4, AWGN, 0)


def test_random_coding_deterministic():
    a = mc.random_coding_experiment(200, 6, AWGN, 300, seed=7)
    b = mc.random_coding_experiment(200, 6, AWGN, 300, seed=7)
    assert a == b

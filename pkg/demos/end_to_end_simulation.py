#!/usr/bin/env python3
##########################################################################
# demo: Monte Carlo bit errors, adversary discrimination, and random
# coding, end to end
##########################################################################

"""Walk through the sampling layer.

Everything the closed forms promise is re-derived here by drawing random
slots: homodyne bit errors against the Gaussian prediction, the
entangled transmitter's exponent advantage, the adversary's best
discrimination error on the actual quantum output state, and a small
random-coding experiment that decodes (or fails to decode) at the rates
the threshold formula predicts.

Run:  python3 demos/end_to_end_simulation.py [--trials N]
"""

import argparse
import math
import sys

from scipy.special import erfc

from covertlink import metrics, montecarlo


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100_000,
                        help="Monte Carlo trials per experiment")
    args = parser.parse_args()
    trials = args.trials

    # ================================================================
    # 1. homodyne bit error vs the analytic Gaussian law
    # ================================================================
    cfg = montecarlo.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=200)
    mean, var = montecarlo.homodyne_moments(cfg)
    p_an = 0.5 * erfc(mean * math.sqrt(cfg.m / (2.0 * var)))
    res = montecarlo.simulate_coherent_homodyne(cfg, trials)
    print("homodyne BPSK, eta = %g, N_S = %g, N_B = %g, M = %d:"
          % (cfg.eta, cfg.n_s, cfg.n_b, cfg.m))
    print("  simulated p_err %.6f  [%.6f, %.6f] 95%% CI"
          % (res.p_err, res.ci_low, res.ci_high))
    print("  analytic  p_err %.6f" % p_an)

    # ================================================================
    # 2. the entangled transmitter's measured exponent advantage
    # ================================================================
    eta, n_s, n_b, uses = 0.1, 0.01, 20.0, 400_000
    cfg2 = montecarlo.SlotConfig(eta=eta, n_s=n_s, n_b=n_b, m=uses)
    p_cl = montecarlo.simulate_coherent_homodyne(
        cfg2, trials, method="reduced").p_err
    p_tm = montecarlo.simulate_tmsv_local(cfg2, trials).p_err
    k_cl = montecarlo.exponent_estimate(p_cl, uses)
    k_tm = montecarlo.exponent_estimate(p_tm, uses)
    target = (metrics.tmsv_closed_forms(n_s, n_b)[1]
              / metrics.coherent_closed_forms(n_s, n_b)[1])
    print()
    print("exponent advantage at N_S = %g, N_B = %g, M = %g:"
          % (n_s, n_b, uses))
    print("  coherent : p_err %.5f -> exponent %.4e" % (p_cl, k_cl))
    print("  entangled: p_err %.5f -> exponent %.4e" % (p_tm, k_tm))
    print("  measured ratio %.4f vs closed form %.4f"
          % (k_tm / k_cl, target))

    # ================================================================
    # 3. the adversary's actual discrimination error at desk scale
    # ================================================================
    print()
    print("adversary Helstrom error, eta = 0.5, N_B = 1 (per slot):")
    for n_s_probe in (0.0, 0.02, 0.05, 0.10):
        eve = montecarlo.simulate_eve_helstrom(0.5, 1.0, n_s_probe)
        tag = "exact" if eve.exact else "bound"
        print("  N_S = %4.2f: error %.6f (%s, leakage %.3e)"
              % (n_s_probe, eve.error_probability, tag,
                 eve.relent_total))
    print("  (silence gives a coin flip; sub-photon probes barely move it)")

    # ================================================================
    # 4. random coding around the threshold
    # ================================================================
    # a desk-scale operating point where the threshold sits between
    # codebook sizes the exact maximum-likelihood decoder can handle
    awgn = montecarlo.AwgnReduction(sigma_beta_sq=1.0, beta_det=4,
                                    symbol_mean=math.sqrt(0.045))
    print()
    print("random coding (per-symbol mean %.4f, noise variance %.1f):"
          % (awgn.symbol_mean, awgn.sigma_beta_sq))
    for m_symbols, m_bar, n_trials in ((400, 4, 400), (120, 16, 60)):
        cap = montecarlo.random_coding_threshold_bits(
            m_symbols, awgn.symbol_mean, awgn.sigma_beta_sq)
        res = montecarlo.random_coding_experiment(m_symbols, m_bar, awgn,
                                                  trials=n_trials)
        verdict = "decodes" if m_bar < cap else "fails"
        print("  %2d bits over %3d symbols (threshold %5.2f bits):"
              " block error %.4f -> %s"
              % (m_bar, m_symbols, cap, res.p_err, verdict))
    print("  (a full protocol plan spreads its m_bar bits over vastly"
          " more symbols; see plan_protocol + AwgnReduction.from_protocol)")

    return 0


if __name__ == "__main__":
    sys.exit(main())

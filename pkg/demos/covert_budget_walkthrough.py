#!/usr/bin/env python3
##########################################################################
# demo: photon budgets, adversary detection floors, and the square-root
# law for covert two-way signalling
##########################################################################

"""Walk through the covertness accounting.

An adversary who controls everything outside the trusted terminals sees,
per probe slot, a thermal state whose occupation shifts slightly when a
signal photon budget N_S is spent.  Bounding the total revealed relative
entropy keeps the adversary's best detector within delta of a coin flip.
This script derives the per-slot budget, audits it against the Gaussian
relative entropy, counts the reliable covert bits, and prices the
pre-shared key the protocol consumes.

Run:  python3 demos/covert_budget_walkthrough.py [--plot]
"""

import argparse
import math
import sys

import numpy as np

from covertlink import covertness
from covertlink.gaussian import (
    EveChannelInputs,
    closed_form_eve_relent,
    eve_covariance,
    gaussian_relative_entropy,
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    HAS_MPL = True
except ImportError:
    HAS_MPL = False


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", action="store_true",
                        help="save covert-bit scaling curve to PNG")
    args = parser.parse_args()

    eta, n_b = 0.1, 1000.0
    delta, epsilon = 0.05, 0.01
    n = 10 ** 6

    # ================================================================
    # 1. the per-slot photon budget that keeps the adversary blind
    # ================================================================
    budget = covertness.covert_photon_budget(eta, n_b, delta, n)
    print("channel: eta = %g per pass, N_B = %g" % (eta, n_b))
    print("covertness target: delta = %g over n = %g slots" % (delta, n))
    print("  budget constant a          : %.6f" % budget.a_const)
    print("  max photons per slot N_S   : %.6e" % budget.n_s_max)
    print("  total relative entropy n*D : %.6f (budget %.6f)"
          % (budget.relent_total, budget.relent_budget))
    print("  within budget              : %s" % budget.within_budget)
    floor = covertness.eve_error_lower_bound(budget.relent_total)
    print("  adversary error floor      : %.6f (>= 1/2 - delta = %.3f)"
          % (floor, 0.5 - delta))

    # ================================================================
    # 2. audit the closed form against the full Gaussian expression
    # ================================================================
    d_formula = closed_form_eve_relent(eta, n_b, budget.n_s_max)
    d_matrix = gaussian_relative_entropy(
        eve_covariance(EveChannelInputs(eta, n_b, budget.n_s_max)),
        eve_covariance(EveChannelInputs(eta, n_b)))
    print()
    print("per-slot leakage audit at N_S = %.3e:" % budget.n_s_max)
    print("  closed form      : %.10e" % d_formula)
    print("  covariance route : %.10e" % d_matrix)
    print("  |difference|     : %.2e" % abs(d_formula - d_matrix))

    # ================================================================
    # 3. reliable covert bits follow the square-root law
    # ================================================================
    print()
    print("square-root law (delta = %g, epsilon = %g, beta_det = 4):"
          % (delta, epsilon))
    print("  %12s  %8s  %10s" % ("slots n", "bits", "bits/sqrt(n)"))
    for exp in (6, 7, 8, 9, 10):
        slots = 10 ** exp
        bits = covertness.sqrt_law_bits(eta, n_b, delta, epsilon, slots,
                                        beta_det=4)
        print("  %12g  %8d  %10.6f" % (slots, bits,
                                       bits / math.sqrt(slots)))

    # ================================================================
    # 4. a concrete protocol plan and its key cost
    # ================================================================
    n, big_m = 10 ** 8, 10 ** 4
    plan = covertness.plan_protocol(eta, n_b, delta, epsilon, n, big_m,
                                    beta_det=4)
    cost = covertness.key_cost(plan.m, probabilistic=True)
    print()
    print("protocol plan for n = %g slots, M = %g repetitions/symbol:"
          % (n, big_m))
    print("  symbols m          : %d" % plan.m)
    print("  photons per slot   : %.6e" % plan.n_s)
    print("  covert bits m_bar  : %d" % plan.m_bar)
    print("  active fraction tau: %.4f" % plan.tau_fraction)
    for w in plan.warnings:
        print("  warning: %s" % w)
    print("  key cost: phase %.0f + frame %.0f + selection %.0f"
          " = %.0f bits"
          % (cost.phase_bits, cost.frame_bits, cost.selection_bits,
             cost.total))
    print("  (the key spent exceeds the covert bits carried; covert"
          " throughput buys secrecy of timing, not key expansion)")

    if args.plot and HAS_MPL:
        exps = np.linspace(5, 11, 60)
        slots = 10.0 ** exps
        bits = [covertness.sqrt_law_bits(eta, n_b, delta, epsilon,
                                         int(s), beta_det=4)
                for s in slots]
        plt.figure(figsize=(6, 4))
        plt.loglog(slots, np.maximum(bits, 1), label="reliable bits")
        plt.loglog(slots, 4 * covertness.beta_cov_const(eta, n_b)
                   * delta * np.sqrt(slots), "--", label="leading term")
        plt.xlabel("total slots n")
        plt.ylabel("covert bits")
        plt.legend()
        plt.tight_layout()
        plt.savefig("covert_budget_walkthrough.png", dpi=150)
        print()
        print("wrote covert_budget_walkthrough.png")
    elif args.plot:
        print()
        print("matplotlib not available; skipping plot")

    return 0


if __name__ == "__main__":
    sys.exit(main())

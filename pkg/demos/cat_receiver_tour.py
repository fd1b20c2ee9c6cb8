#!/usr/bin/env python3
##########################################################################
# demo: the circuit-QED cat-state receiver, from preparation to readout
##########################################################################

"""Walk through the qubit-cavity receiver model.

A transmon dispersively coupled to a cavity prepares an entangled
qubit-cat state; the weak returning signal displaces the cavity field and
a final interaction maps the phase symbol onto the qubit excitation.
This script prepares the state, checks the sequence against the ideal
target, evaluates one readout shot on the physically received field,
compares the Fock-space SNR to its closed-form expansion, and prices the
hardware penalties (attenuation, decoherence, thermal initialization).

Run:  python3 demos/cat_receiver_tour.py
"""

import argparse
import math
import sys

import numpy as np

from covertlink import screceiver as sc
from covertlink.fock import FockSpace


def main() -> int:
    argparse.ArgumentParser(description=__doc__).parse_args()

    # ================================================================
    # 1. preparation: three dispersive stages reach the target exactly
    # ================================================================
    n_s = 0.01
    alpha = math.sqrt(n_s)
    space = FockSpace(40)
    state = sc.prepare_sc_state(alpha, space)
    target = sc.sc_target_amplitudes(alpha, space)
    fidelity = float(np.real(target.conj() @ state.matrix @ target))
    lam_plus = 0.5 * (1.0 + math.exp(-2.0 * n_s))
    print("cat preparation at alpha = sqrt(N_S) = %.3f, cutoff 40:" % alpha)
    print("  fidelity to ideal target : %.12f" % fidelity)
    print("  qubit ground probability : %.8f (lambda_+ = %.8f)"
          % (1.0 - state.probability_excited(), lam_plus))

    jc = sc.JCParams(omega_r=5.0, omega_q=4.0, g=0.005, tau_jc=0.1)
    print("  dispersive check: g/|Delta| = %.4f (threshold %.2f),"
          " chi = %.2e, full sequence takes 3 * t_chi = %.1f"
          % (jc.g / abs(jc.delta), sc.DISPERSIVE_THRESHOLD, jc.chi,
             3.0 * jc.t_chi))

    # ================================================================
    # 2. thermal initialization: imperfect ground-state occupancy
    # ================================================================
    deco = sc.DecoherenceParams(gamma=0.1, gamma_up=0.02, gamma_down=0.05)
    thermal = sc.prepare_sc_state_thermal(alpha, space, n_t=0.05,
                                          a_g=deco.a_g, a_e=deco.a_e)
    print()
    print("thermal preparation (cavity n_t = 0.05, qubit a_g = %.3f):"
          % deco.a_g)
    print("  state purity %.6f (ideal preparation gives 1.0)"
          % thermal.purity())
    penalty = sc.thermal_prep_penalty(deco.a_g, deco.a_e, 0.5)
    print("  SNR penalty at c = 0.5   : %.4f" % penalty)
    a_g, a_e = 0.9, 0.1
    thresh = sc.no_advantage_threshold(a_g, a_e)
    print("  for a_g = %.2f: no-advantage threshold c* = %.4f, and the"
          " penalty there is exactly %.2f"
          % (a_g, thresh, sc.thermal_prep_penalty(a_g, a_e, thresh)))

    # ================================================================
    # 3. one readout shot on the actually received field
    # ================================================================
    eta, n_b, cutoff = 0.02, 16.0, 159
    shot_space = FockSpace(cutoff)
    received = sc.received_cat_state(alpha, eta, n_b, shot_space)
    flipped = sc.received_cat_state(alpha, eta, n_b, shot_space,
                                    phase_flip=True)
    tau = math.sqrt(n_s / math.sqrt(n_b))
    shot0 = sc.o_tau_receiver_shot(received, tau, n_s=n_s)
    shot1 = sc.o_tau_receiver_shot(flipped, tau, n_s=n_s)
    contrast = abs(shot1.probability_excited - shot0.probability_excited)
    predicted = 2.0 * eta * math.sqrt(n_s) * (1.0 + math.exp(-4.0 * n_s))
    print()
    print("single shot, eta = %g, N_B = %g, cutoff %d, tau = %.4f:"
          % (eta, n_b, cutoff, tau))
    print("  P(excited | symbol 0)  : %.8f" % shot0.probability_excited)
    print("  P(excited | symbol pi) : %.8f" % shot1.probability_excited)
    print("  readout contrast       : %.6e (weak-signal model %.6e)"
          % (contrast, predicted))
    print("  interaction within validity budget: %s"
          % shot0.within_validity)

    # ================================================================
    # 4. SNR against the optimum: Fock numerics vs closed form
    # ================================================================
    print()
    print("SNR ratio to the optimal local receiver (N_S = %g):" % n_s)
    print("  %6s  %8s  %12s  %12s" % ("N_B", "tau", "Fock", "formula"))
    for nb in (9.0, 16.0, 25.0):
        t = math.sqrt(n_s / math.sqrt(nb))
        num = sc.snr_ratio_fock(n_s, nb, t, eta=eta, cutoff=cutoff)
        form = sc.snr_ratio_formula(n_s, nb, t)
        print("  %6g  %8.4f  %12.6f  %12.6f" % (nb, t, num, form))
    print("  (the shortfall from 1 shrinks like 1/sqrt(N_B))")

    # ================================================================
    # 5. decoherence during the storage window
    # ================================================================
    print()
    print("qubit lifetimes: T1 = %.2f, T2 = %.2f (units of 1/gamma)"
          % (deco.t1, deco.t2))
    for frac in (0.1, 0.5, 1.0):
        ratio = sc.decoherence_ratio(frac * deco.t2, deco.t2)
        print("  storing for %.1f * T2 keeps %.4f of the SNR"
              % (frac, ratio))
    obs = sc.lindblad_qubit_propagate("sigma_plus", deco.t2, deco)
    print("  coherence operator after one T2: |coefficient| = %.6f"
          " (= 1/e)" % abs(obs[1, 0]))

    return 0


if __name__ == "__main__":
    sys.exit(main())

"""covertlink: simulation and analysis toolkit for covert two-way quantum
communication in thermal (microwave) channels.

The package pairs closed-form receiver-performance and covertness budgets
with brute-force Fock-space verification at desk scale, plus Monte Carlo
end-to-end bit simulation including a qubit-coupled cat-state receiver.

Layout
------
fock         dense Fock-space numerics (states, channels, Helstrom, QFI)
gaussian     covariance-matrix calculus for the adversary's view
transmitters Schmidt data for coherent / two-mode-squeezed / cat probes
metrics      closed-form error exponents, ceilings, gains, link budgets
covertness   photon budgets, square-root-law bit yield, key accounting
screceiver   qubit-coupled cat-state receiver: circuits and SNR ratios
montecarlo   end-to-end bit-level and adversary-level simulations
cli          `covertlink` command-line entry point
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    cli,
    covertness,
    fock,
    gaussian,
    metrics,
    montecarlo,
    screceiver,
    transmitters,
)
from .covertness import (  # noqa: F401
    CovertBudget,
    KeyCost,
    ProtocolPlan,
    covert_fraction,
    covert_photon_budget,
    eve_error_lower_bound,
    key_cost,
    plan_protocol,
    sqrt_law_bits,
)
from .fock import (  # noqa: F401
    CUTOFF_CAP,
    TAIL_TOL,
    ChernoffResult,
    DensityOperator,
    FockSpace,
    PureState,
    QFIResult,
    TruncationOverflowError,
    apply_gaussian_unitary,
    attenuated_coherent_dyadic,
    chernoff_exponent,
    coherent_state,
    coherent_through_loss,
    helstrom_error,
    partial_trace,
    qfi_numeric,
    quantum_relative_entropy,
    qubit_fock_operator,
    tensor_states,
    thermal_state,
    tmsv_through_loss,
    tmsv_through_loss_compact,
)
from .gaussian import (  # noqa: F401
    EveChannelInputs,
    closed_form_eve_relent,
    eve_covariance,
    gaussian_relative_entropy,
    relent_leading_order,
)
from .metrics import (  # noqa: F401
    ReceiverReport,
    UltimateBounds,
    coherent_closed_forms,
    error_probability,
    link_budget,
    receiver_report,
    sc_closed_forms,
    thermal_occupation,
    time_bandwidth,
    tmsv_closed_forms,
    ultimate_bounds,
)
from .montecarlo import (  # noqa: F401
    AwgnReduction,
    EveDiscriminationResult,
    SimResult,
    SlotConfig,
    random_coding_experiment,
    random_coding_threshold_bits,
    simulate_coherent_homodyne,
    simulate_eve_helstrom,
    simulate_tmsv_local,
)
from .screceiver import (  # noqa: F401
    JCParams,
    QubitModeState,
    optimal_snr,
    prepare_sc_state,
    received_cat_state,
    snr_ratio_fock,
    snr_ratio_formula,
)
from .transmitters import (  # noqa: F401
    SchmidtData,
    coherent_schmidt,
    sc_schmidt,
    tmsv_schmidt,
)

__all__ = [
    "__version__",
    "cli",
    "covertness",
    "fock",
    "gaussian",
    "metrics",
    "montecarlo",
    "screceiver",
    "transmitters",
    # covertness
    "CovertBudget",
    "KeyCost",
    "ProtocolPlan",
    "covert_fraction",
    "covert_photon_budget",
    "eve_error_lower_bound",
    "key_cost",
    "plan_protocol",
    "sqrt_law_bits",
    # fock
    "CUTOFF_CAP",
    "TAIL_TOL",
    "ChernoffResult",
    "DensityOperator",
    "FockSpace",
    "PureState",
    "QFIResult",
    "TruncationOverflowError",
    "apply_gaussian_unitary",
    "attenuated_coherent_dyadic",
    "chernoff_exponent",
    "coherent_state",
    "coherent_through_loss",
    "helstrom_error",
    "partial_trace",
    "qfi_numeric",
    "quantum_relative_entropy",
    "qubit_fock_operator",
    "tensor_states",
    "thermal_state",
    "tmsv_through_loss",
    "tmsv_through_loss_compact",
    # gaussian
    "EveChannelInputs",
    "closed_form_eve_relent",
    "eve_covariance",
    "gaussian_relative_entropy",
    "relent_leading_order",
    # metrics
    "ReceiverReport",
    "UltimateBounds",
    "coherent_closed_forms",
    "error_probability",
    "link_budget",
    "receiver_report",
    "sc_closed_forms",
    "thermal_occupation",
    "time_bandwidth",
    "tmsv_closed_forms",
    "ultimate_bounds",
    # montecarlo
    "AwgnReduction",
    "EveDiscriminationResult",
    "SimResult",
    "SlotConfig",
    "random_coding_experiment",
    "random_coding_threshold_bits",
    "simulate_coherent_homodyne",
    "simulate_eve_helstrom",
    "simulate_tmsv_local",
    # screceiver
    "JCParams",
    "QubitModeState",
    "optimal_snr",
    "prepare_sc_state",
    "received_cat_state",
    "snr_ratio_fock",
    "snr_ratio_formula",
    # transmitters
    "SchmidtData",
    "coherent_schmidt",
    "sc_schmidt",
    "tmsv_schmidt",
]

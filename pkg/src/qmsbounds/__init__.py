"""Complete MLSI lower bounds for GNS-symmetric quantum Markov semigroups.

Modules
-------
matcore
    Hermitian linear algebra, vectorization, superoperators, Choi matrices.
entropy
    Relative entropy, the BKM metric and the comparison function ``k(c)``.
channels
    Channels, conditional expectations, CP order and entropy contraction.
semigroups
    GNS Lindbladians, CB return times, indices and bound reports.
zoo
    Concrete models: classical walks, depolarizing, birth-death, SU(2).
concentration
    Weighted p-norms, concentration ratios and matrix Bernstein.
verify
    Seeded property suites.
cli
    The ``qmsbounds`` command.
"""

__version__ = "0.1.0"

from .channels import (  # noqa: E402
    ConditionalExpectation,
    QuantumChannel,
    contraction_coefficient_estimate,
    cp_leq,
    entropy_contraction_check,
    k_cb,
    make_channel,
    multiplicative_domain,
    random_channel,
    state_expectation,
    trace_expectation,
)
from .entropy import bkm_metric, k_of_c, relative_entropy, relative_entropy_via_bkm  # noqa: E402
from .errors import QMSError  # noqa: E402
from .matcore import DEFAULT_TOL, Tolerances, choi  # noqa: E402
from .semigroups import (  # noqa: E402
    BoundReport,
    Lindbladian,
    cb_index,
    decay_check,
    evolve,
    lindbladian_gns,
    mlsi_lower_bounds,
    spectral_gap,
    t_cb,
)
from .zoo import (  # noqa: E402
    cyclic_laplacian,
    cyclic_walk,
    depolarizing,
    graph_walk,
    model_from_spec,
    nc_birth_death,
    random_gns_lindbladian,
    rothaus_counterexample,
    su2_transference,
)

__all__ = [
    "BoundReport", "ConditionalExpectation", "DEFAULT_TOL", "Lindbladian", "QMSError",
    "QuantumChannel", "Tolerances", "bkm_metric", "cb_index", "choi",
    "contraction_coefficient_estimate", "cp_leq", "cyclic_laplacian", "cyclic_walk",
    "decay_check", "depolarizing", "entropy_contraction_check", "evolve", "graph_walk",
    "k_cb", "k_of_c", "lindbladian_gns", "make_channel", "mlsi_lower_bounds",
    "model_from_spec", "multiplicative_domain", "nc_birth_death", "random_channel",
    "random_gns_lindbladian", "relative_entropy", "relative_entropy_via_bkm",
    "rothaus_counterexample", "spectral_gap", "state_expectation", "su2_transference",
    "t_cb", "trace_expectation",
]

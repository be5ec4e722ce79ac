import numpy as np
import pytest

from qmsbounds.verify import (
    consistency_chain,
    non_cp_fixture,
    run_all,
    standard_models,
    suite_channel_invariants,
)
from qmsbounds.zoo import depolarizing, random_gns_lindbladian


def test_quick_suites_pass():
    results = run_all(seed=1, quick=True)
    failed = [r for r in results if not r.passed]
    assert not failed
    assert all(r.count > 0 for r in results)


def test_injected_fixture_fails_channel_suite():
    res = suite_channel_invariants(np.random.default_rng(0), 3, [non_cp_fixture()])
    assert not res.passed
    assert res.worst_slack <= -1.0


def test_standard_models_are_distinct():
    names = [L.name for L in standard_models()]
    assert len(names) == 8
    assert {"depolarizing", "cyclic_graph", "graph_walk", "nc_birth_death",
            "su2_transference", "random_gns"} <= set(names)


@pytest.mark.parametrize("L", [depolarizing(2), random_gns_lindbladian(3, 6, seed=7)],
                         ids=["depolarizing", "random_gns"])
def test_consistency_chain(L):
    rec = consistency_chain(L, restarts=2, iterations=150)
    assert rec.l2_squared_le_estimate
    assert rec.estimate_le_upper
    assert rec.report_ok
    assert rec.k_cb >= 1

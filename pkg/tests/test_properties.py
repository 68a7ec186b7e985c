import pytest

import property_suites as ps


@pytest.mark.parametrize("suite", ps.ALL_SUITES, ids=lambda f: f.__name__)
def test_property_suite(suite):
    outcome = suite()
    assert outcome.ok, f"{outcome.line()} failures: {outcome.failures}"


def test_counts_match_required_sizes():
    assert ps.snf_contract().total == 1000
    assert ps.discriminant_order().total == 200
    assert ps.complement_duality().total == 100
    assert ps.exp_b_pairing().total == 100
    assert ps.relift_parity().total == 100
    assert ps.overlattice_relation().total >= 10

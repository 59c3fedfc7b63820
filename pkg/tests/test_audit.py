"""Enumeration audits: exact distributions, positive claims, and the
sensitivity of every audit to its designated broken scheme."""

from fractions import Fraction

import pytest

from pma import audit
from pma.errors import AuditInfeasibleError, ParameterError
from pma.model import make_params


def t1(variant="pma1", **kw):
    defaults = dict(t=1, y=0, p=3)
    defaults.update(kw)
    return make_params(variant, 2, 2, **defaults)


def t2(**kw):
    defaults = dict(t=1, y=0, p=5)
    defaults.update(kw)
    return make_params("spma2", 3, 2, **defaults)


# ---------------------------------------------------------------------------
# the enumeration oracle itself

def test_enumerate_uniform_pad():
    # a single uniform mask symbol: exact one-time-pad pmf
    dist = audit.enumerate_distribution(lambda a: (a[0],), 1, 3)
    assert dist == {(0,): Fraction(1, 3), (1,): Fraction(1, 3), (2,): Fraction(1, 3)}


def test_enumerate_empty_view_point_mass():
    dist = audit.enumerate_distribution(lambda a: (), 0, 3)
    assert dist == {(): Fraction(1, 1)}


def test_enumerate_probabilities_sum_to_one_exactly():
    dist = audit.enumerate_distribution(lambda a: (sum(a) % 3,), 4, 3)
    assert sum(dist.values()) == Fraction(1, 1)


def test_enumerate_single_query_uniform():
    # one noisy query vector at depth 1 is an affine bijection of the noise
    params = t1()
    from pma.pma1 import query_vector

    def view(assignment):
        return query_vector(1, params.alphas_used[0], [assignment], params)

    dist = audit.enumerate_distribution(view, 2, 3)
    assert len(dist) == 9
    assert set(dist.values()) == {Fraction(1, 9)}


def test_enumerate_cap():
    with pytest.raises(AuditInfeasibleError, match="assignments"):
        audit.enumerate_distribution(lambda a: (), 10, 3, cap=100)


# ---------------------------------------------------------------------------
# collusion resistance

def test_query_privacy_passes_within_budget():
    result = audit.audit_query_privacy(t1(), [1])
    assert result.passed
    assert result.lemma == "lemma4"
    assert result.witness is None
    assert result.assignments == 2 * 3 ** 2


def test_query_privacy_type2_budget():
    result = audit.audit_query_privacy(t2(), [1])
    assert result.passed
    assert result.lemma == "lemma3"


def test_query_privacy_unprotected_fails_with_witness():
    with pytest.warns(UserWarning):
        params = make_params("pma1", 2, 2, t=0, y=0, p=3)
    result = audit.audit_query_privacy(params, [1])
    assert not result.passed
    # the leaked view is the bare unit vector
    assert result.witness["view"] in ([1, 0], [0, 1])


def test_query_privacy_type2_overbudget_fails():
    assert not audit.audit_query_privacy(t2(), [1, 2]).passed


def test_query_privacy_rejects_bad_db_index():
    with pytest.raises(ParameterError):
        audit.audit_query_privacy(t1(), [3])


# ---------------------------------------------------------------------------
# blind estimation

def test_blind_estimation_passes_both_type1_variants():
    assert audit.audit_blind_estimation(t1("pma1")).passed
    assert audit.audit_blind_estimation(t1("spma1")).passed


def test_blind_estimation_zero_masks_fails():
    result = audit.audit_blind_estimation(t1("pma1"), zero_masks=True)
    assert not result.passed
    assert result.witness is not None


def test_blind_estimation_rejects_type2():
    with pytest.raises(ParameterError):
        audit.audit_blind_estimation(t2())


# ---------------------------------------------------------------------------
# symmetric privacy

def test_symmetric_privacy_spma1_passes():
    assert audit.audit_symmetric_privacy(t1("spma1")).passed


def test_symmetric_privacy_spma2_passes():
    assert audit.audit_symmetric_privacy(t2()).passed


def test_symmetric_privacy_pma1_fails():
    # the unblinded scheme leaks non-queried contents through interference
    assert not audit.audit_symmetric_privacy(t1("pma1")).passed


def test_symmetric_privacy_zero_blinding_fails():
    assert not audit.audit_symmetric_privacy(t1("spma1"), zero_blinding=True).passed
    assert not audit.audit_symmetric_privacy(t2(), zero_blinding=True).passed


def test_symmetric_privacy_single_element_vacuous():
    params = make_params("spma1", 2, 1, t=1, y=0, p=3)
    assert audit.audit_symmetric_privacy(params).passed


# ---------------------------------------------------------------------------
# storage security

def test_storage_security_passes():
    assert audit.audit_storage_security(t2()).passed


def test_storage_security_minimal_field():
    params = make_params("spma2", 2, 1, t=0, y=0, p=3)
    result = audit.audit_storage_security(params)
    assert result.passed


def test_storage_security_zero_noise_fails():
    assert not audit.audit_storage_security(t2(), zero_storage_noise=True).passed


def test_storage_security_overbudget_fails():
    params = t2()
    result = audit.audit_storage_security(params,
                                          subset_size=params.storage_depth + 1)
    assert not result.passed


def test_storage_security_rejects_type1():
    with pytest.raises(ParameterError):
        audit.audit_storage_security(t1())


# ---------------------------------------------------------------------------
# eavesdropper security

def test_eavesdropper_type1_passes():
    params = t1("pma1", t=0, y=1)
    assert audit.audit_eavesdropper(params, [1]).passed
    params = t1("spma1", t=0, y=1)
    assert audit.audit_eavesdropper(params, [2]).passed


def test_eavesdropper_type2_passes():
    assert audit.audit_eavesdropper(t2(y=1), [1]).passed


def test_eavesdropper_overbudget_fails():
    params = t1("pma1", t=0, y=1)
    result = audit.audit_eavesdropper(params, [1, 2], zero_masks=True)
    assert not result.passed


def test_eavesdropper_type2_overbudget_fails():
    assert not audit.audit_eavesdropper(t2(y=1), [1, 2, 3]).passed


def test_zero_taps_vacuous_pass():
    assert audit.audit_eavesdropper(t1("pma1", t=0, y=1), []).passed


# ---------------------------------------------------------------------------
# inter-party dealing

def test_interparty_dealing_independent():
    assert audit.audit_interparty_dealing(t1("pma1")).passed


# ---------------------------------------------------------------------------
# expansion oracle

def test_expand_degree_additivity():
    lhs = [(1, 0), (2, 1)]  # degree 1
    rhs = [(0, 1), (1, 1), (3, 0)]  # degree 2
    assert len(audit.oracle_polynomial_expand(lhs, rhs, 7)) == 4


def test_expand_noise_free_single_coefficient():
    assert audit.oracle_polynomial_expand([(1, 1, 0)], [(0, 1, 0)], 7) == (1,)


def test_expand_matches_evaluate_interpolate():
    # independent oracle: evaluate the product at three points, then
    # interpolate back through the exact solver
    from pma.field import PrimeField, build_upsilon, solve_linear
    f = PrimeField(7)
    lhs = [(2, 3), (1, 5)]
    rhs = [(4, 1), (0, 6)]
    coeffs = audit.oracle_polynomial_expand(lhs, rhs, 7)
    alphas = (1, 2, 3)
    evals = []
    for a in alphas:
        x = (1 + a) % 7
        lhs_at = tuple((lhs[0][k] + x * lhs[1][k]) % 7 for k in range(2))
        rhs_at = tuple((rhs[0][k] + x * rhs[1][k]) % 7 for k in range(2))
        evals.append(f.dot(lhs_at, rhs_at))
    ups = build_upsilon(f, alphas, 3)
    assert tuple(solve_linear(f, ups, evals)) == coeffs


def test_expand_rejects_empty():
    with pytest.raises(ParameterError):
        audit.oracle_polynomial_expand([], [(1,)], 7)


# ---------------------------------------------------------------------------
# determinism and reporting

def test_audit_results_deterministic():
    a = audit.audit_query_privacy(t1(), [1])
    b = audit.audit_query_privacy(t1(), [1])
    assert a.to_dict() == b.to_dict()


def test_audit_result_shape():
    result = audit.audit_storage_security(t2())
    d = result.to_dict()
    assert d["verdict"] == "pass"
    assert d["lemma"] == "lemma5"
    assert d["enumerated_assignments"] > 0
    assert d["params"]["variant"] == "spma2"

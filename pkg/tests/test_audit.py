import json
import math
from dataclasses import replace

import pytest

from eta_embed.audit import (ASYMPTOTIC, IDENTITY, INFORMATIONAL, AuditConfig,
                             asymptotic_order, coefficient_reports, decreasing,
                             embed_functional_residual, expansion_reports,
                             functional_equation_audit, kappa_zero_edge_report,
                             large_shift_asymptote, limit_audit, nu_limit_audit,
                             ratio_limit_audit, rh_consistency_audit, run_suite,
                             shift_ratio_audit)
from eta_embed.coefficients import coefficient_table
from eta_embed.embedding import EmbeddingParams
from eta_embed.eta_core import lambda_factor
from eta_embed.zeros import find_zeros


@pytest.fixture(scope="module")
def full():
    return run_suite()


@pytest.fixture(scope="module")
def zs():
    return find_zeros(10, 30)


# -- suite-level behaviour -------------------------------------------------------------------

def test_identity_checks_all_pass(full):
    ident = [r for r in full.reports if r.kind == IDENTITY]
    assert len(ident) > 50
    assert all(r.verdict == "pass" for r in ident), [r.check_id for r in ident if r.verdict != "pass"]


def test_measured_failures_are_reported_not_hidden(full):
    # two asymptotic statements miss their tolerance at the configured
    # parameters; the audit must say so
    assert sorted(full.summary["failed_checks"]) == [
        "ratio_limit[t=21.022040,nu=0.75]", "rh_asymptote[eps=0.1,nu=5]"]
    assert not full.ok


def test_informational_reports_present(full):
    ids = [r.check_id for r in full.reports if r.verdict == INFORMATIONAL]
    assert any(i.startswith("shift_ratio_claim") for i in ids)
    assert any(i.startswith("rh_shift_profile") for i in ids)
    assert all(r.tolerance == 0.0 or r.kind == INFORMATIONAL
               for r in full.reports if r.verdict == INFORMATIONAL)


def test_claims_suite_never_fails_on_contested_parts():
    cfg = replace(AuditConfig.empty(), zero_window=(10.0, 30.0), shift_nus=(0.75, 1.0, 2.0),
                  shift_probe=(0.4 + 14.13j,))
    res = run_suite(cfg, suites=("claims",))
    assert res.ok
    assert res.summary["informational"] > 0


def test_reports_sorted_and_json_schema(full):
    ids = [r.check_id for r in full.reports]
    assert ids == sorted(ids)
    d = json.loads(full.to_json())
    assert set(d) == {"version", "config_digest", "suites", "summary", "reports"}
    rep = d["reports"][0]
    for key in ("check_id", "anchor", "inputs", "lhs", "rhs", "residual", "tolerance", "verdict"):
        assert key in rep
    assert set(rep["lhs"]) == {"re", "im"}


def test_two_runs_bit_identical(full):
    assert run_suite().to_json() == full.to_json()


def test_threads_do_not_change_report(full):
    assert run_suite(threads=8).to_json() == full.to_json()


def test_empty_config():
    res = run_suite(AuditConfig.empty())
    assert res.reports == [] and res.ok
    assert res.summary["total"] == 0


def test_out_of_region_kappa_is_skipped_and_suite_continues():
    cfg = replace(AuditConfig.empty(), coeff_kappas=(0.5, 2.0))
    res = run_suite(cfg, suites=("identities",))
    skipped = res.summary["skipped_checks"]
    assert skipped == ["coefficients[kappa=0.5]"]
    rep = next(r for r in res.reports if r.verdict == "skipped")
    assert "3/pi" in rep.detail["message"]
    assert res.summary["pass"] == 4 and res.ok


def test_config_digest_stable_and_sensitive():
    assert AuditConfig().digest() == AuditConfig().digest()
    assert AuditConfig().digest() != replace(AuditConfig(), coeff_N=20).digest()


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite(suites=("bogus",))


# -- individual checks --------------------------------------------------------------------------

def test_functional_equation_report():
    r = functional_equation_audit(AuditConfig().fe_points())
    assert r.verdict == "pass" and r.residual < 1e-8


def test_limit_kappa_inf():
    r = limit_audit(2, 1, [10, 100, 1000], "kappa_inf")
    assert r.verdict == "pass" and r.residual < 1e-5
    assert r.detail["decreasing"]


def test_limit_kappa_zero_nu_two():
    r = limit_audit(2, 2, [0.1, 0.01, 0.001], "kappa_zero")
    assert r.verdict == "pass"
    assert decreasing(r.detail["residuals"])


def test_limit_kappa_zero_nu_one_misses_eta_minus_one():
    r = limit_audit(2, 1, [0.1, 0.01, 0.001], "kappa_zero")
    assert r.verdict == "fail"
    assert abs(r.residual - 0.125) < 1e-9
    edge = kappa_zero_edge_report(2, [0.1, 0.01, 0.001])
    assert edge.verdict == INFORMATIONAL
    assert edge.detail["residuals_vs_edge_corrected"][-1] < 1e-12


def test_limit_nu():
    assert nu_limit_audit(2, 1, [0.1, 0.01, 0.001], "nu_zero").verdict == "pass"
    assert nu_limit_audit(2, 1, [5, 10, 20], "nu_inf").verdict == "pass"


def test_decreasing_rule():
    assert decreasing([1e-3, 1e-5, 1e-7])
    assert not decreasing([1e-3, 1e-2])
    assert decreasing([1e-3, 1e-14, 2e-14])


def test_asymptotic_order_reports():
    reps = asymptotic_order(0.5 + 3j, 1, [10, 20, 40])
    assert [r.verdict for r in reps] == ["pass"] * 3
    assert abs(reps[0].lhs.real + 2) < 0.1
    assert abs(reps[1].lhs.real + 4) < 0.3
    assert reps[2].residual < 1e-3
    assert all(r.kind == ASYMPTOTIC for r in reps)


def test_coefficient_reports_kappa_two():
    reps = coefficient_reports(2, 25)
    assert [r.verdict for r in reps] == ["pass"] * 4


def test_expansion_reports_pass():
    reps = expansion_reports(2, 1, AuditConfig().strip_points)
    assert all(r.verdict == "pass" for r in reps)
    assert all(r.detail["error_budget"] > 0 for r in reps)


@pytest.mark.parametrize("kappa,nu,s", [(2, 1, 0.3 + 5j), (5, 0.6, 0.5 + 14j)])
def test_embed_functional_examples(kappa, nu, s):
    r = embed_functional_residual(s, EmbeddingParams(kappa, nu), coefficient_table(kappa))
    assert r.verdict == "pass" and r.residual < 1e-7


def test_embed_functional_degenerate_large_kappa():
    r = embed_functional_residual(0.3 + 5j, EmbeddingParams(1e6, 1), coefficient_table(1e6, 8))
    assert abs(r.lhs) < 1e-8 and abs(r.rhs) < 1e-8


def test_ratio_limit_first_zero(zs):
    r = ratio_limit_audit(zs[0], 1, [10, 20, 40])
    assert r.verdict == "pass" and r.residual < 1e-4
    r2 = ratio_limit_audit(zs[0], 2, [10, 20, 40])
    assert r2.residual < 1e-4


def test_ratio_limit_second_zero_decreases_like_kappa_squared(zs):
    r = ratio_limit_audit(zs[1], 0.75, [10, 20, 40])
    res = r.detail["residuals"]
    assert decreasing(res)
    # each doubling of kappa divides the residual by about four
    for a, b in zip(res, res[1:]):
        assert 3.5 < a / b < 4.5


def test_ratio_limit_requires_nu_above_half(zs):
    with pytest.raises(ValueError):
        ratio_limit_audit(zs[0], 0.5, [10])


def test_shift_ratio_on_line_modulus(zs):
    reps = shift_ratio_audit(zs[0], [0.75, 1, 2])
    claims = [r for r in reps if r.check_id.startswith("shift_ratio_claim")]
    modulus = [r for r in reps if r.check_id.startswith("shift_ratio_modulus")][0]
    assert all(r.verdict == INFORMATIONAL for r in claims)
    assert len(claims) == 3
    assert modulus.verdict == "pass" and modulus.residual < 1e-10
    assert abs(abs(lambda_factor(zs[0].s)) - 1) < 1e-10


def test_shift_ratio_off_line_probe_is_informational():
    reps = shift_ratio_audit(0.4 + 14.13j, [0.75, 1, 2])
    assert all(r.verdict == INFORMATIONAL for r in reps)
    modulus = reps[-1]
    moduli = modulus.detail["ratio_moduli"]
    assert max(abs(m - modulus.detail["lambda_modulus"]) for m in moduli) > 1e-3
    assert modulus.detail["modulus_spread"] > 1e-3


def test_rh_consistency_eps_zero_unit_modulus(zs):
    reps = rh_consistency_audit(zs[0].t, [0.0], [1, 2, 5, 10])
    for r in reps:
        if r.check_id.startswith("rh_asymptote"):
            assert abs(r.lhs.real - 1) < 1e-10


def test_rh_asymptote_large_nu(zs):
    t = zs[0].t
    reps = {r.check_id: r for r in rh_consistency_audit(t, [0.1], [1, 2, 5, 10])}
    assert reps["rh_asymptote[eps=0.1,nu=1]"].verdict == INFORMATIONAL
    assert reps["rh_asymptote[eps=0.1,nu=10]"].verdict == "pass"
    r5 = reps["rh_asymptote[eps=0.1,nu=5]"]
    assert r5.verdict == "fail"
    # the miss matches the next order in eps of the large-nu expansion
    x = 0.5 + 10 - 0.1
    second = (2 * 0.1 * math.log(2)) ** 2 * 2 ** -x / 2
    assert 0.5 < r5.residual / second < 2
    assert reps["rh_shift_profile[eps=0.1]"].verdict == INFORMATIONAL


def test_large_shift_asymptote_eps_zero():
    assert large_shift_asymptote(14.1, 0.0, 3) == 1.0


def test_rh_eps_range(zs):
    with pytest.raises(ValueError):
        rh_consistency_audit(zs[0].t, [0.3], [1])

"""Tests for the identity registry and its verification drivers."""

import pytest

from catalog import (EQUATION_LABELS, SUMMARY_LABELS, Expectation, Status, UnknownIdentityError, VerificationMode,
                     get_identity, identities_for_label, list_identities, verify_all, verify_identity,
                     verify_on_interval)
from exactnum import Angle

EXACT_IDS = [i.id for i in list_identities() if i.mode is VerificationMode.EXACT]


def test_registry_size_and_unique_ids():
    identities = list_identities()
    assert len(identities) >= 30
    assert len({i.id for i in identities}) == len(identities)


@pytest.mark.parametrize("label", EQUATION_LABELS + SUMMARY_LABELS)
def test_every_label_is_covered(label):
    assert identities_for_label(label)


def test_identities_in_x_carry_validity_and_counterpoints():
    for identity in list_identities():
        if identity.has_symbol:
            assert identity.validity is not None
            assert identity.counterpoints, identity.id
            for point in identity.counterpoints:
                assert not identity.validity.contains(point.x), identity.id


@pytest.mark.parametrize("identity_id", EXACT_IDS)
def test_exact_verification(identity_id):
    report = verify_identity(identity_id, VerificationMode.EXACT, digits=20)
    assert report.status is Status.PASS, report.details


def test_negative_controls_are_registered():
    controls = identities_for_label("negative-control")
    assert {i.id for i in controls} >= {"neg-sin4-3n", "neg-sin4cos", "neg-sin7sin8"}
    assert all(i.expectation is Expectation.NOT_EQUAL for i in controls)


def test_exact_report_details():
    report = verify_identity("eq3", VerificationMode.EXACT, digits=16)
    assert len(set(report.details["values"])) == 1
    assert report.details["decimals"][0].startswith("1.07079632679489")
    assert report.to_json()["status"] == "pass"
    assert "runtime" not in report.to_json()
    assert report.to_json(with_runtime=True)["runtime"] >= 0


@pytest.mark.parametrize("identity_id", ["eq3", "eq10", "sinc-3"])
def test_numeric_verification(identity_id):
    report = verify_identity(identity_id, VerificationMode.NUMERIC, digits=10, N=5000)
    assert report.passed, report.details


def test_numeric_negative_control():
    report = verify_identity("neg-sin7sin8", VerificationMode.NUMERIC, digits=10, N=5000)
    assert report.passed, report.details


def test_squared_series_runs_numerically():
    report = verify_identity("sq-series-pi-over-sqrt8", VerificationMode.EXACT, digits=8, N=20000)
    assert report.passed, report.details
    assert report.details["N"] == 20000


def test_numeric_identity_in_x():
    report = verify_identity("thm4-15a", VerificationMode.NUMERIC, digits=8, N=20000)
    assert report.passed, report.details


@pytest.mark.parametrize("identity_id", ["eq5", "thm3-eq11", "thm4-15a", "eq13-middle"])
def test_interval_verification(identity_id):
    report = verify_on_interval(identity_id, samples=8)
    assert report.passed, report.details
    assert all(point["misses"] for point in report.details["counterpoints"])


def test_interval_includes_closed_endpoints():
    report = verify_on_interval("eq5", samples=2)
    xs = [point["x"] for point in report.details["points"]]
    assert xs[0] == str(Angle(1))
    assert len(xs) == 4


def test_interval_verification_rejects_constants():
    with pytest.raises(ValueError):
        verify_on_interval("eq3")
    with pytest.raises(ValueError):
        verify_on_interval("eq5", samples=0)


def test_unknown_identity():
    with pytest.raises(UnknownIdentityError) as info:
        get_identity("eq99")
    assert info.value.identity_id == "eq99"
    with pytest.raises(UnknownIdentityError):
        verify_identity("eq99")


def test_verify_all_subset():
    reports = verify_all(ids=["eq3", "eq8", "eq9"])
    assert [r.id for r in reports] == ["eq3", "eq8", "eq9"]
    assert all(r.passed for r in reports)

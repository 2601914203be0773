import numpy as np
import pytest
from plugins.datum.datum import ext, res
from plugins.galois.galois import (
    HypothesesNotMet,
    NotInvariant,
    decomposition_check,
    equivalence_across_transversals,
    equivalence_report,
    ext_identities,
    galois_coordinates,
    gamma_map,
    gamma_prime,
    invariant_decompose,
    invariants,
    morita_strictness,
    prop_trace_equiv,
    standing_hypotheses,
    trace,
    trace_matrix,
    trace_onto,
    trace_report,
    verify_certificate,
)
from plugins.groupoid.groupoid import Transversal


def el(theta, **coeffs):
    return theta.ring.element(coeffs)


def test_b2_invariants_and_trace(b2):
    assert [str(v) for v in invariants(b2).elements] == ["e1", "e2 + e4", "e3 + e5", "e6"]
    assert str(trace(b2, el(b2, e1=1))) == "2e1"
    assert str(trace(b2, el(b2, e2=1))) == "e2 + e4"
    assert trace_onto(b2)
    report = trace_report(b2)
    assert report.ok
    assert report.facts["t(e5)"] == "e3 + e5"


def test_trace_matrix_matches_trace(b2):
    T = trace_matrix(b2)
    for i, a in enumerate(b2.ring.atoms):
        assert np.array_equal(T[:, i], trace(b2, b2.ring.basis(a)).vector)


def test_invariance_membership(b2):
    inv = invariants(b2)
    assert inv.dim == 4
    assert inv.contains(el(b2, e2=2, e4=2))
    assert not inv.contains(el(b2, e2=1))


def test_b2_fails_the_standing_hypotheses(b2):
    with pytest.raises(HypothesesNotMet) as info:
        standing_hypotheses(b2)
    assert info.value.witness["reason"] == "gd"
    with pytest.raises(HypothesesNotMet):
        equivalence_report(b2)


def test_gamma_invariants(gamma):
    assert [str(v) for v in invariants(gamma).elements] == ["a1 + a2 + b1 + b2"]
    assert trace_onto(gamma)


def test_gamma_certificate(gamma):
    cert = galois_coordinates(gamma)
    assert cert is not None
    assert cert.to_list() == [[t, t] for t in ("a1", "a2", "b1", "b2")]
    assert verify_certificate(gamma, cert).ok
    assert len(cert.coefficients()) == 4


def test_gamma_equivalence(gamma):
    result = equivalence_report(gamma)
    assert result.legs == (True, True, True, True)
    assert result.to_report().ok
    report = equivalence_across_transversals(gamma)
    assert report.ok
    assert set(report.facts["verdicts"].values()) == {True}


def test_gamma_decomposition(gamma):
    d = standing_hypotheses(gamma)
    b = el(gamma, a1=1, a2=1, b1=1, b2=1)
    assert str(invariant_decompose(gamma, d, b)) == "a1 + a2"
    with pytest.raises(NotInvariant):
        invariant_decompose(gamma, d, el(gamma, a1=1))
    report = decomposition_check(gamma, d)
    assert report.ok
    assert report.facts["dim-invariants"] == report.facts["dim-group-invariants"] == 1


def test_ext_of_dat_has_no_certificate(dat):
    theta = ext(dat)
    assert galois_coordinates(theta) is None
    result = equivalence_report(theta)
    assert result.legs == (False, False, False, False)
    assert result.agree


def test_gamma_maps(gamma):
    a1, a2 = el(gamma, a1=1), el(gamma, a2=1)
    assert str(gamma_map(gamma, a1, a1)) == "a1 + a2 + b1 + b2"
    assert gamma_map(gamma, a1, a2).is_zero()
    moved = gamma_prime(gamma, a2, a1)
    assert moved.support() == [("(1,s,1)", "a2")]


@pytest.mark.parametrize("fixture", ["dat", "gamma"])
def test_transport_and_morita(fixture, request):
    theta = request.getfixturevalue(fixture)
    if fixture == "dat":
        theta = ext(theta)
    assert prop_trace_equiv(theta).ok
    report = morita_strictness(theta)
    assert report.ok
    assert report.facts["strict"] == (fixture == "gamma")
    assert ext_identities(theta).ok


def test_hypotheses_return_the_datum(dat):
    theta = ext(dat)
    assert standing_hypotheses(theta, dat.transversal) == res(theta, dat.transversal)


def test_equivalence_records_transversals_outside_gd(dat):
    report = equivalence_across_transversals(ext(dat))
    verdicts = report.facts["verdicts"]
    assert report.ok
    assert len(verdicts) == 4
    assert verdicts[str(dat.transversal)] is False
    assert verdicts[str(Transversal.of("x", {"x": "x", "y": "m"}))] == "hypotheses-not-met: gd"
    assert report.facts["skipped"] >= 1
    assert {v for v in verdicts.values() if isinstance(v, bool)} == {False}

from plugins.harness.claims import Claim, all_claims, run_claims
from plugins.harness.registry import FixtureRegistry


def test_every_fixture_has_claims():
    fixtures = {c.fixture for c in all_claims()}
    assert fixtures == set(FixtureRegistry().names())


def test_all_claims_hold(registry):
    report = run_claims(registry)
    assert report.ok, report.to_text()
    assert report.facts["claims"] == len(all_claims())


def test_failing_claim_is_reported(registry, monkeypatch):
    import plugins.harness.claims as claims

    extra = [Claim("FX-HEX", "never", lambda r: False), Claim("FX-B2", "raises", lambda r: r.load("FX-NOPE"))]
    monkeypatch.setattr(claims, "all_claims", lambda: extra)
    report = run_claims(registry)
    assert report.failed("FX-HEX: never")
    assert report.violations_of("FX-B2: raises")[0].detail.startswith("UnknownFixture")

import pytest
from framework.event import CensusProgressEvent, EventBus
from framework.worker import ThreadedWorker
from plugins.harness.census import action_census, classify_datum, datum_census
from plugins.split_ring.ring import SplitRing

RING2 = SplitRing(3, ("e1", "e2"))
RING3 = SplitRing(3, ("e1", "e2", "e3"))


@pytest.fixture
def progress():
    seen: list[int] = []

    def on_event(e):
        if isinstance(e, CensusProgressEvent):
            seen.append(e.examined)

    EventBus.register_callback("test-census", on_event)
    yield seen
    EventBus.remove_callback("test-census")


def test_datum_census_over_three_atoms(hex_groupoid, progress):
    report = datum_census(hex_groupoid, RING3, hex_groupoid.canonical_transversal(), 10**6)
    facts = report.facts
    assert report.ok
    assert facts["datums"] >= 500
    assert facts["ext-valid"] == facts["res-ext-identity"] == facts["datums"]
    assert facts["globalizable"] == facts["datums"]
    assert facts["gd"] < facts["datums"]
    assert not facts["truncated"]
    assert progress == sorted(progress) and progress[-1] == facts["examined"]


def test_datum_census_two_atoms(hex_groupoid):
    report = datum_census(hex_groupoid, RING2, hex_groupoid.canonical_transversal(), 10**6)
    assert report.facts["datums"] == 106


def test_census_cap(hex_groupoid):
    report = datum_census(hex_groupoid, RING3, hex_groupoid.canonical_transversal(), 100)
    assert report.facts["examined"] == 100
    assert report.facts["truncated"]
    assert report.facts["cap"] == 100


def test_census_on_worker_pool(hex_groupoid):
    tau = hex_groupoid.canonical_transversal()
    serial = datum_census(hex_groupoid, RING2, tau, 10**6)
    ThreadedWorker.start(2)
    try:
        pooled = datum_census(hex_groupoid, RING2, tau, 10**6)
    finally:
        ThreadedWorker.stop()
    assert not ThreadedWorker.running()
    assert pooled.facts == serial.facts


def test_action_census_conditions_agree(hex_groupoid):
    report = action_census(hex_groupoid, RING2, list(hex_groupoid.all_transversals()), 5000)
    assert report.ok
    assert 0 < report.facts["recoverable"] <= report.facts["actions"]


def test_classify_counts_gd(dat):
    result = classify_datum(dat)
    assert result.counts["gd"] == 1
    assert not result.disagreements

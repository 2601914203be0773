from dataclasses import replace
import pytest
from plugins.datum.datum import ext, verify_datum
from plugins.globalization.globalization import (
    GlobalizationData,
    GroupGlobalizationViolation,
    GroupTypeViolation,
    IdealExtensionViolation,
    build_globalization,
    globalize,
    globalize_group,
    globalizations_isomorphic,
    is_globalizable,
    lift_to,
    synthesize_globalization,
    verify_globalization,
)
from plugins.globalization.union_find import UnionFind
from plugins.partial_action.action import PartialAction, restrict_to_isotropy
from plugins.harness.census import classify_datum
from plugins.split_ring.ring import EMPTY, PartialRingIso


def test_union_find_classes_keep_insertion_order():
    uf = UnionFind(["a", "b", "c", "d"])
    uf.union("c", "a")
    uf.union("d", "b")
    assert uf.classes() == [["a", "c"], ["b", "d"]]
    assert len(uf) == 2
    assert uf.find("c") == uf.find("a")


def test_fx_glob_maps(glob):
    beta = build_globalization(glob.globalization)
    assert beta.alpha("h") == PartialRingIso.of({"e2": "e2", "e3": "e4", "e4": "e3"})
    assert beta.alpha("m") == PartialRingIso.of({"e1": "e3", "e2": "e4", "e3": "e2"})
    assert beta.alpha("l") == PartialRingIso.of({"e1": "e4", "e2": "e3", "e3": "e2"})
    assert beta.A("l") == glob.globalization.J["y"]


def test_fx_glob_globalizes_ext(glob):
    beta = build_globalization(glob.globalization)
    report = verify_globalization(ext(glob.datum), beta)
    assert report.ok
    assert list(report.checks)[-4:] == [
        "ideal-containment",
        "restricted-ideals",
        "restricted-maps",
        "sum-generation",
    ]


def test_identity_beta_h_is_caught(glob):
    beta = build_globalization(glob.globalization)
    broken = replace(beta, isos=dict(beta.isos) | {"h": PartialRingIso.identity(beta.A("h"))})
    report = verify_globalization(ext(glob.datum), broken)
    assert report.failed("global")
    v = report.violations_of("restricted-ideals")[0]
    assert v.morphisms == ("h",) and v.atom == "e4"


def test_whole_ring_package_is_rejected(glob):
    gd = glob.globalization
    ring = gd.ring
    A = ring.whole()
    H = gd.tilde_local.groupoid
    sigma = PartialAction(
        H,
        ring,
        {"x": A, "g": A},
        {
            "x": PartialRingIso.identity(A),
            "g": PartialRingIso.of({"e1": "e2", "e2": "e1", "e3": "e3", "e4": "e4"}),
        },
    )
    literal = GlobalizationData(
        gd.datum,
        ring,
        {"x": A, "y": A},
        sigma,
        {
            "x": PartialRingIso.identity(A),
            "y": PartialRingIso.of({"e1": "e4", "e2": "e3", "e3": "e2", "e4": "e1"}),
        },
    )
    with pytest.raises(GroupGlobalizationViolation):
        build_globalization(literal)


def test_link_must_extend(glob):
    gd = glob.globalization
    links = dict(gd.tilde_links) | {"y": PartialRingIso.of({"e1": "e2", "e2": "e3", "e3": "e4"})}
    with pytest.raises(IdealExtensionViolation):
        build_globalization(replace(gd, tilde_links=links))


def test_group_type_needed(dat):
    d = replace(dat, links=dict(dat.links) | {"y": PartialRingIso.of({"e1": "e4"})})
    with pytest.raises(GroupTypeViolation):
        synthesize_globalization(d)


def test_local_globalization_classes(dat):
    gg = globalize_group(dat.local)
    assert list(gg.classes) == ["e1", "e3", "g*e1"]
    assert gg.classes["e3"] == (("x", "e3"), ("g", "e3"))
    assert verify_globalization(lift_to(dat.local, gg.ring), gg.beta).ok


def test_group_globalization_of_b2_local(b2):
    local = restrict_to_isotropy(b2, "x")
    gg = globalize_group(local)
    assert gg.ring.atoms == ("e1", "e2", "e3", "g*e2", "g*e3")
    assert gg.beta.alpha("g")("e2") == "g*e2"
    assert verify_globalization(lift_to(local, gg.ring), gg.beta).ok


def test_globalizable(dat):
    report = is_globalizable(dat)
    assert report.ok
    assert report.facts["local-atoms"] == 3


def test_synthesized_globalization(dat):
    beta, report = globalize(dat)
    assert report.ok
    assert len(beta.ring.atoms) == 6
    assert report.facts["ring"] == ["e1", "e3", "g*e1", "e4", "e2", "g*e1@y"]
    assert globalizations_isomorphic(ext(dat), beta, beta)
    again, _ = globalize(dat, synthesize_globalization(dat))
    assert again == beta


def _zero_base(dat, I_y):
    H = dat.local.groupoid
    none = PartialRingIso.identity(EMPTY)
    local = PartialAction(
        H, dat.ring, {h: EMPTY for h in H.morphisms}, {h: none for h in H.morphisms}
    )
    return replace(
        dat,
        ideals={"x": EMPTY, "y": I_y},
        links={"x": none, "y": none},
        local=local,
    )


def test_zero_base_ideal_is_globalizable(dat):
    d = _zero_base(dat, dat.ring.whole())
    assert verify_datum(d).ok
    gg = globalize_group(d.local)
    assert gg.classes == {} and gg.ring == dat.ring
    assert all(gg.beta.A(h) == EMPTY for h in d.local.groupoid.morphisms)
    report = is_globalizable(d)
    assert report.ok
    assert report.facts["local-atoms"] == 0
    result = classify_datum(d)
    assert result.counts["globalizable"] == 1
    with pytest.raises(GroupTypeViolation):
        synthesize_globalization(d)


def test_zero_datum_globalizes_to_zero_action(dat):
    d = _zero_base(dat, EMPTY)
    beta, report = globalize(d)
    assert report.ok
    assert beta.ring == dat.ring
    assert all(beta.A(g) == EMPTY for g in dat.groupoid.morphisms)

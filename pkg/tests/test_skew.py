import pytest
from plugins.datum.datum import ext
from plugins.globalization.globalization import build_globalization
from plugins.skew import skew
from plugins.skew.skew import (
    RingNotDirectSum,
    assoc_check,
    build_skew,
    corner_check,
    corners,
    is_direct_sum,
    skew_morita_check,
    unit_check,
)


@pytest.fixture
def skew_dat(dat):
    return build_skew(ext(dat))


def test_dimensions(skew_dat, gamma):
    assert skew_dat.dim == 12
    assert build_skew(gamma).dim == 16
    assert skew_dat.basis[:5] == (("x", "e1"), ("x", "e3"), ("y", "e2"), ("y", "e4"), ("g", "e3"))


def test_unit_and_associativity(skew_dat, gamma):
    assert unit_check(skew_dat).ok
    assert assoc_check(skew_dat).ok
    R = build_skew(gamma)
    assert unit_check(R).ok and assoc_check(R).ok


def test_products_follow_the_action(skew_dat):
    R = skew_dat
    e1x = R.element({("x", "e1"): 1})
    e1_linv = R.element({("l^-1", "e1"): 1})
    e4_l = R.element({("l", "e4"): 1})
    assert e1x * e1_linv == e1_linv
    assert e4_l * e1x == e4_l
    assert (e1x * e4_l).is_zero()
    assert (e4_l * e1_linv).support() == [("y", "e4")]
    assert str(e4_l + e4_l) == "2e4d[l]"


def test_idempotents(skew_dat):
    one = skew_dat.one()
    ex = skew_dat.idempotent("x")
    assert one * ex == ex
    assert ex * ex == ex
    assert (ex * skew_dat.idempotent("y")).is_zero()


def test_broken_constant_is_caught(skew_dat):
    broken = skew_dat.with_constant(0, 0, 0, 0)
    report = assoc_check(broken)
    assert report.failed("associativity")
    assert not unit_check(broken).ok


def test_corners(skew_dat):
    c = corners(skew_dat, "x")
    assert (c.U.dim, c.V.dim, c.S.dim) == (6, 6, 3)
    report = corner_check(skew_dat, "x")
    assert report.ok
    assert report.facts["dim-S"] == 3


def test_morita_context_is_strict(skew_dat, gamma):
    report = skew_morita_check(skew_dat, "x")
    assert report.ok
    assert report.facts["strict"]
    R = build_skew(gamma)
    x = gamma.groupoid.objects[0]
    assert skew_morita_check(R, x).facts["strict"]


def test_overlapping_ideals_need_opt_out(glob):
    beta = build_globalization(glob.globalization)
    assert not is_direct_sum(beta)
    with pytest.raises(RingNotDirectSum):
        build_skew(beta)
    R = build_skew(beta, require_direct_sum=False)
    assert R.dim == 3 * 8
    assert assoc_check(R).ok


def test_checks_above_the_dense_limit(dat, monkeypatch):
    dense = build_skew(ext(dat))
    expected = {
        "corners": corner_check(dense, "x").facts,
        "morita": skew_morita_check(dense, "x").facts,
    }
    monkeypatch.setattr(skew, "DENSE_LIMIT", 0)
    R = build_skew(ext(dat))
    assert not R.is_dense
    assert unit_check(R).ok
    assert assoc_check(R).ok
    corner_report = corner_check(R, "x")
    assert corner_report.ok
    assert corner_report.facts == expected["corners"]
    morita_report = skew_morita_check(R, "x")
    assert morita_report.ok
    assert morita_report.facts == expected["morita"]
    assert "dense" not in vars(R)

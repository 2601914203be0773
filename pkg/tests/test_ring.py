import pytest
from hypothesis import given, settings
from plugins.split_ring.ring import (
    Ideal,
    InvalidRing,
    NotAHomomorphism,
    NotSubIdeal,
    OutsideDomain,
    PartialRingIso,
    RingHom,
    SplitRing,
    apply,
    compose_partial,
    idem,
    image,
    intersect,
    preimage,
    project,
    restrict,
    sorted_atoms,
)
from .strategies import ring_elements

R = SplitRing(3, ("e1", "e2", "e3", "e4"))


def test_atoms_sort_numerically():
    assert sorted_atoms(["e10", "e2", "e1"]) == ["e1", "e2", "e10"]


@pytest.mark.parametrize("p, atoms", [(4, ("e1",)), (3, ()), (3, ("e1", "e1"))])
def test_invalid_rings(p, atoms):
    with pytest.raises(InvalidRing):
        SplitRing(p, atoms)


def test_element_arithmetic_mod_p():
    a = R.element({"e1": 2, "e2": 1})
    assert str(a + a) == "e1 + 2e2"
    assert str(a * a) == "e1 + e2"
    assert str(2 * a) == "e1 + 2e2"
    assert (a - a).is_zero()
    assert a.support == {"e1", "e2"}


def test_unknown_atom():
    with pytest.raises(OutsideDomain):
        R.element({"e9": 1})


def test_idempotents_are_central_units_of_ideals():
    i = R.ideal(["e1", "e3"])
    e = idem(R, i)
    assert e * e == e
    assert str(project(R.one(), i)) == "e1 + e3"


def test_iso_apply_and_inverse():
    f = PartialRingIso.of({"e1": "e4", "e3": "e2"})
    assert f.dom == Ideal.of("e1", "e3")
    assert f.cod == Ideal.of("e2", "e4")
    assert str(apply(f, R.element({"e1": 2, "e3": 1}))) == "e2 + 2e4"
    assert f.inverse().inverse() == f
    with pytest.raises(OutsideDomain):
        apply(f, R.basis("e2"))


def test_iso_must_be_bijective():
    with pytest.raises(NotAHomomorphism):
        PartialRingIso((("e1", "e2"), ("e3", "e2")))


def test_compose_partial_domain():
    f = PartialRingIso.of({"e1": "e2", "e3": "e4"})
    g = PartialRingIso.of({"e2": "e3"})
    assert compose_partial(g, f) == PartialRingIso.of({"e1": "e3"})
    assert compose_partial(f, g) == PartialRingIso.of({"e2": "e4"})


def test_image_preimage_restrict():
    f = PartialRingIso.of({"e1": "e2", "e3": "e4"})
    assert image(f, Ideal.of("e1")) == Ideal.of("e2")
    assert preimage(f, Ideal.of("e4", "e1")) == Ideal.of("e3")
    assert restrict(f, Ideal.of("e3")) == PartialRingIso.of({"e3": "e4"})
    with pytest.raises(NotSubIdeal):
        image(f, Ideal.of("e2"))
    assert intersect(Ideal.of("e1", "e2"), Ideal.of("e2", "e3")) == Ideal.of("e2")


def test_ring_hom_compose_and_iso():
    i, j = Ideal.of("e1", "e2"), Ideal.of("e1", "e2", "e3", "e4")
    fold = RingHom.of(i, j, {"e1": ["e3", "e4"], "e2": ["e1"]})
    assert str(fold.apply(R.element({"e1": 2, "e2": 1}))) == "e1 + 2e3 + 2e4"
    assert fold.compose(RingHom.identity(i)) == fold
    assert not fold.is_iso()
    assert RingHom.from_iso(PartialRingIso.of({"e1": "e2", "e2": "e1"})).is_iso()
    assert RingHom.zero(i, j).image(i) == Ideal(frozenset())
    with pytest.raises(NotAHomomorphism):
        RingHom.of(i, j, {"e1": ["e3"], "e2": ["e3"]})


@given(ring_elements(R), ring_elements(R))
@settings(max_examples=100, deadline=None)
def test_isos_are_ring_maps(a, b):
    f = PartialRingIso.of({"e1": "e3", "e2": "e1", "e3": "e4", "e4": "e2"})
    assert apply(f, a * b) == apply(f, a) * apply(f, b)
    assert apply(f, a + b) == apply(f, a) + apply(f, b)

from dataclasses import replace
import pytest
from plugins.datum.datum import check_adjunction, ext, res
from plugins.globalization.globalization import globalize
from plugins.partial_action.action import (
    ParMorphism,
    PartialAction,
    ShapeMismatch,
    action_identities,
    as_global,
    all_candidates,
    composes_exactly,
    enumerate_actions,
    composition_order_check,
    identity_action,
    is_global,
    is_group_type,
    is_partial_action,
    join_components,
    leq,
    NotGlobal,
    recoverability_search,
    recoverable_witness,
    restrict_global,
    restrict_to_isotropy,
    split_components,
    under_transversal,
    under_transversal_closed,
    verify_par_morphism,
    verify_partial_action,
)
from plugins.split_ring.ring import Ideal, PartialRingIso, SplitRing


def mutate(alpha: PartialAction, **maps: dict[str, str]) -> PartialAction:
    """Replace alpha_g (and A_g) for the given morphisms; `l_inv` names l^-1."""
    isos = dict(alpha.isos)
    for g, m in maps.items():
        isos[g.replace("_inv", "^-1")] = PartialRingIso.of(m)
    return replace(alpha, ideals={g: f.cod for g, f in isos.items()}, isos=isos)


def test_b2_is_a_partial_action(b2):
    report = verify_partial_action(b2)
    assert report.ok
    assert list(report.checks) == ["ideal-shape", "identity-maps", "domain-closure", "composition"]


def test_redirected_l_fails_domain_closure(b2):
    bad = mutate(b2, l={"e2": "e5"}, l_inv={"e5": "e2"})
    report = verify_partial_action(bad)
    assert not report.ok
    v = report.first_violation
    assert v.check == "domain-closure"
    assert v.morphisms == ("l^-1", "m")
    assert v.atom == "e3"


def test_all_witnesses_collects_more(b2):
    bad = mutate(b2, l={"e2": "e5"}, l_inv={"e5": "e2"})
    first = verify_partial_action(bad)
    every = verify_partial_action(bad, all_witnesses=True)
    assert len(every.violations) > len(first.violations)
    assert every.first_violation == first.first_violation


def test_moved_identity_fails(b2):
    bad = mutate(b2, x={"e1": "e2", "e2": "e1", "e3": "e3"})
    v = verify_partial_action(bad).violations_of("identity-maps")[0]
    assert v.morphisms == ("x",) and v.atom == "e1"


def test_ideal_outside_object(b2):
    bad = mutate(b2, g={"e4": "e4"})
    assert verify_partial_action(bad).violations_of("ideal-shape")[0].atom == "e4"


def test_shape_mismatch(b2):
    isos = dict(b2.isos)
    del isos["g"]
    with pytest.raises(ShapeMismatch):
        verify_partial_action(replace(b2, isos=isos))


def test_b2_not_recoverable(b2):
    search = recoverability_search(b2)
    assert not search.recoverable
    assert search.summary() == "not recoverable; 4/4 (base,transversal) pairs fail"
    assert recoverable_witness(b2) is None


def test_ext_res_strictly_below_b2(b2):
    theta = ext(res(b2, b2.groupoid.canonical_transversal()))
    assert is_partial_action(theta)
    assert leq(theta, b2) and theta != b2
    facts = check_adjunction(b2).facts
    assert facts["strict-at"][0] == "h"
    assert facts["leq"] and not facts["counit-iso"]


def test_identity_family_into_ext_res_fails_containment(b2):
    theta = ext(res(b2, b2.groupoid.canonical_transversal()))
    report = verify_par_morphism(ParMorphism.identity(b2), b2, theta)
    v = report.violations_of("containment")[0]
    assert v.morphisms == ("h",) and v.atom == "e6"
    assert verify_par_morphism(ParMorphism.inclusion(theta, b2), theta, b2).ok


def test_gamma_is_global_and_recoverable(gamma):
    G = gamma.groupoid
    assert is_global(gamma) and composes_exactly(gamma)
    assert as_global(gamma) is gamma
    tau = G.canonical_transversal()
    assert recoverable_witness(gamma) == ("1", tau)
    assert is_group_type(gamma, tau)
    assert ext(res(gamma, tau)) == gamma


def test_b2_is_not_global(b2):
    with pytest.raises(NotGlobal):
        as_global(b2)


def test_action_identities(b2, gamma):
    assert action_identities(b2).ok
    assert action_identities(gamma).ok


def test_identity_action_is_global(hex_groupoid):
    ring = SplitRing(3, ("e1", "e2"))
    beta = identity_action(hex_groupoid, ring)
    assert verify_partial_action(beta).ok
    assert is_global(beta)


def test_isotropy_restriction(b2):
    local = restrict_to_isotropy(b2, "y")
    assert local.groupoid.morphisms == ("y", "h")
    assert local.alpha("h") == PartialRingIso.of({"e6": "e6"})
    assert verify_partial_action(local).ok


def test_split_and_join(b2):
    parts = split_components(b2)
    assert len(parts) == 1
    assert join_components(b2.groupoid, parts) == b2


def test_restricting_a_globalization(dat):
    beta, _ = globalize(dat)
    theta = ext(dat)
    induced = restrict_global(beta, Ideal.of("e1", "e2", "e3", "e4"))
    assert verify_partial_action(induced).ok
    for g in theta.groupoid.morphisms:
        assert induced.A(g) == theta.A(g)
        assert induced.alpha(g) == theta.alpha(g)


def test_extension_order_agrees_with_axioms(hex_groupoid):
    ring = SplitRing(3, ("e1", "e2", "e3"))
    seen = valid = 0
    for cand in all_candidates(hex_groupoid, ring):
        seen += 1
        ok = is_partial_action(cand)
        valid += ok
        assert composition_order_check(cand).ok == ok
    assert seen > valid > 0


def test_recoverability_conditions_agree(hex_groupoid):
    ring = SplitRing(3, ("e1", "e2", "e3"))
    transversals = list(hex_groupoid.all_transversals())
    for cand in all_candidates(hex_groupoid, ring):
        if not is_partial_action(cand):
            continue
        for tau in transversals:
            exact = ext(res(cand, tau)) == cand
            assert exact == under_transversal(cand, tau) == under_transversal_closed(cand, tau)


def test_enumerated_actions_match_census(hex_groupoid):
    from plugins.harness.census import action_census

    ring = SplitRing(3, ("e1", "e2"))
    found = list(enumerate_actions(hex_groupoid, ring))
    assert all(verify_partial_action(a).ok for a in found)
    report = action_census(hex_groupoid, ring, [hex_groupoid.canonical_transversal()], 10**6)
    assert report.facts["actions"] == len(found)


def test_enumerate_with_fixed_ideals(hex_groupoid):
    ring = SplitRing(3, ("e1", "e2"))
    ideals = {"x": Ideal.of("e1"), "y": Ideal.of("e2")}
    found = list(enumerate_actions(hex_groupoid, ring, ideals))
    assert found
    assert all(a.object_ideal("x") == Ideal.of("e1") for a in found)
    overlapping = list(enumerate_actions(hex_groupoid, ring, direct_sum=False))
    assert len(overlapping) > len(list(enumerate_actions(hex_groupoid, ring)))

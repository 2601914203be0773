"""Globalizations: enveloping global actions of partial actions."""

from __future__ import annotations
from dataclasses import dataclass
from typing import Mapping
import logging
from framework.errors import InputError, InternalInconsistency, MathError
from framework.report import Report, Violation
from plugins.datum.datum import Datum, ext
from plugins.groupoid.groupoid import Groupoid, corner
from plugins.partial_action.action import (
    GlobalAction,
    PartialAction,
    is_global,
    is_unital,
    composes_exactly,
    verify_partial_action,
)
from plugins.split_ring.ring import (
    EMPTY,
    Ideal,
    PartialRingIso,
    SplitRing,
    compose_partial,
    image,
    sorted_atoms,
)
from .union_find import UnionFind

logger = logging.getLogger(__name__)


class GroupTypeViolation(MathError):
    pass


class GroupGlobalizationViolation(MathError):
    pass


class IdealExtensionViolation(MathError):
    pass


class SynthesisFailure(MathError):
    pass


def verify_globalization(
    alpha: PartialAction, beta: GlobalAction, all_witnesses: bool = False
) -> Report:
    """Check that beta, on the ring of beta, restricts to alpha."""
    G = alpha.groupoid
    if beta.groupoid != G:
        raise InputError("actions are indexed by different groupoids")
    outside = {a for i in alpha.ideals.values() for a in i.atoms} - set(beta.ring.atoms)
    if outside:
        raise InputError(
            "partial action is not on an ideal of the globalizing ring",
            atoms=sorted_atoms(outside),
        )
    report = Report("globalization", all_witnesses)
    report.merge(verify_partial_action(beta, all_witnesses), "beta")
    report.expect("global", is_global(beta) and composes_exactly(beta), "beta is not global")

    def ideal_containment():
        for x in G.objects:
            for a in sorted_atoms(alpha.object_ideal(x).atoms - beta.object_ideal(x).atoms):
                yield Violation("ideal-containment", (G.identity[x],), a)

    def restricted_ideals():
        for g in G.morphisms:
            A_s = alpha.object_ideal(G.src[g]) & beta.alpha(g).dom
            expected = alpha.object_ideal(G.tgt[g]) & image(beta.alpha(g), A_s)
            for a in sorted_atoms(expected.atoms ^ alpha.A(g).atoms):
                yield Violation("restricted-ideals", (g,), a)

    def restricted_maps():
        for g in G.morphisms:
            b = beta.alpha(g)
            for a, c in alpha.alpha(g).pairs:
                if b.mapping.get(a) != c:
                    yield Violation("restricted-maps", (g,), a, f"{b.mapping.get(a)} != {c}")

    def sum_generation():
        for g in G.morphisms:
            generated = Ideal(frozenset())
            for h in G.morphisms:
                if G.tgt[h] == G.tgt[g]:
                    b = beta.alpha(h)
                    generated = generated | image(b, alpha.object_ideal(G.src[h]) & b.dom)
            for a in sorted_atoms(beta.A(g).atoms ^ generated.atoms):
                yield Violation("sum-generation", (g,), a)

    report.collect("ideal-containment", ideal_containment())
    report.collect("restricted-ideals", restricted_ideals())
    report.collect("restricted-maps", restricted_maps())
    report.collect("sum-generation", sum_generation())
    return report


@dataclass(frozen=True)
class GroupGlobalization:
    ring: SplitRing
    beta: GlobalAction
    embedding: Mapping[str, str]
    classes: Mapping[str, tuple[tuple[str, str], ...]]


def globalize_group(pa: PartialAction) -> GroupGlobalization:
    """Enveloping action of a partial group action.

    Atoms of J_x are classes of pairs (h, a) under (h, a) ~ (h l^-1, gamma_l(a));
    the class of (e, a) keeps the name a, every other class is named h*a
    after its first member.
    """
    H = pa.groupoid
    if len(H.objects) != 1:
        raise InputError("globalize_group needs a one-object groupoid")
    (o,) = H.objects
    e = H.identity[o]
    I = pa.object_ideal(o)
    if not I.atoms:
        # zero ideal: the zero global action on the same ring envelops it
        none = PartialRingIso.identity(EMPTY)
        logger.debug("group globalization: zero ideal")
        return GroupGlobalization(
            pa.ring,
            PartialAction(
                H, pa.ring, {h: EMPTY for h in H.morphisms}, {h: none for h in H.morphisms}
            ),
            {},
            {},
        )
    pairs = [(h, a) for h in H.morphisms for a in I]
    uf = UnionFind(pairs)
    for h, a in pairs:
        for l in H.morphisms:
            f = pa.alpha(l)
            if a in f.dom:
                uf.union((h, a), (H.compose(h, H.inv[l]), f(a)))

    names: dict[tuple[str, str], str] = {}
    classes: dict[str, tuple[tuple[str, str], ...]] = {}
    for members in uf.classes():
        embedded = [a for h, a in members if h == e]
        if len(embedded) > 1:
            raise InternalInconsistency("two atoms of I_x were identified", atoms=embedded)
        h, a = members[0]
        name = embedded[0] if embedded else f"{h}*{a}"
        classes[name] = tuple(members)
        for m in members:
            names[m] = name

    atoms = list(I) + [c for c in classes if c not in I]
    ring = SplitRing(pa.ring.p, tuple(atoms))
    J = ring.whole()
    isos = {
        h: PartialRingIso.of(
            {c: names[(H.compose(h, members[0][0]), members[0][1])] for c, members in classes.items()}
        )
        for h in H.morphisms
    }
    logger.debug("group globalization: %d atoms from %d", len(atoms), len(I))
    return GroupGlobalization(
        ring,
        PartialAction(H, ring, {h: J for h in H.morphisms}, isos),
        {a: a for a in I},
        classes,
    )


def lift_to(alpha: PartialAction, ring: SplitRing) -> PartialAction:
    """The same action read over a ring that contains its atoms."""
    return PartialAction(alpha.groupoid, ring, alpha.ideals, alpha.isos)


def is_globalizable(d: Datum) -> Report:
    """Globalizability of a datum: unital links and a globalizable local action.

    In the split model both always hold; the local half is confirmed by
    building the enveloping action and verifying it.
    """
    report = Report("globalizable")
    x = d.base
    report.expect(
        "unital-links",
        all(d.link(y).dom <= d.I(x) for y in d.groupoid.objects) and is_unital(d.local),
        "some I_tau_y^-1 is not a unital ideal of I_x",
    )
    gg = globalize_group(d.local)
    local_report = verify_globalization(lift_to(d.local, gg.ring), gg.beta)
    report.merge(local_report, "local")
    report.facts["local-atoms"] = len(gg.classes)
    return report


@dataclass(frozen=True)
class GlobalizationData:
    datum: Datum
    ring: SplitRing
    J: Mapping[str, Ideal]
    tilde_local: GlobalAction
    tilde_links: Mapping[str, PartialRingIso]


def check_globalization_data(gd: GlobalizationData):
    d = gd.datum
    G = d.groupoid
    x = d.base
    for y in G.objects:
        if d.link(y).dom != d.I(x) or d.link(y).cod != d.I(y):
            raise GroupTypeViolation(
                f"I_tau_{y}^-1 != I_{x} or I_tau_{y} != I_{y}", object=y
            )

    J_x = gd.J[x]
    if gd.tilde_local.object_ideal(x) != J_x:
        raise GroupGlobalizationViolation("tilde local action does not live on J_x")
    local_report = verify_globalization(lift_to(d.local, gd.ring), gd.tilde_local)
    if not local_report.ok:
        v = local_report.first_violation
        raise GroupGlobalizationViolation(
            f"J_x is not a globalization of the local action: {v}",
            check=v.check,
            morphisms=v.morphisms,
            atom=v.atom,
        )

    for y in G.objects:
        f = gd.tilde_links[y]
        if not d.I(y) <= gd.J[y]:
            a = sorted_atoms(d.I(y).atoms - gd.J[y].atoms)[0]
            raise IdealExtensionViolation(f"I_{y} is not inside J_{y}", object=y, atom=a)
        if f.dom != J_x or f.cod != gd.J[y]:
            raise IdealExtensionViolation(f"tilde gamma_tau_{y} is not J_x -> J_{y}", object=y)
        if not f.extends(d.link(y)):
            raise IdealExtensionViolation(
                f"tilde gamma_tau_{y} does not extend gamma_tau_{y}", object=y
            )
    if not gd.tilde_links[x].is_identity():
        raise IdealExtensionViolation("tilde gamma_tau_x is not the identity", object=x)


def build_globalization(gd: GlobalizationData) -> GlobalAction:
    """beta_g = tilde gamma_tau_t(g) tilde gamma_g_x tilde gamma_tau_s(g)^-1 on J_t(g)."""
    check_globalization_data(gd)
    d = gd.datum
    G = d.groupoid
    isos = {}
    for g in G.morphisms:
        gx = corner(G, g, d.transversal)
        isos[g] = compose_partial(
            gd.tilde_links[G.tgt[g]],
            compose_partial(gd.tilde_local.alpha(gx), gd.tilde_links[G.src[g]].inverse()),
        )
    return PartialAction(G, gd.ring, {g: gd.J[G.tgt[g]] for g in G.morphisms}, isos)


def synthesize_globalization(d: Datum) -> GlobalizationData:
    """Globalization data built from the enveloping action of the local action.

    J_y is a relabeled copy of J_x: atoms of I_x go to their gamma_tau_y image,
    the other classes c to c@y.
    """
    G = d.groupoid
    x = d.base
    for y in G.objects:
        if d.link(y).dom != d.I(x) or d.link(y).cod != d.I(y):
            raise GroupTypeViolation(
                f"I_tau_{y}^-1 != I_{x} or I_tau_{y} != I_{y}", object=y
            )
    gg = globalize_group(d.local)
    J_atoms = [c for c in gg.ring.atoms if c in gg.beta.object_ideal(x)]
    tilde_links: dict[str, dict[str, str]] = {}
    for y in G.objects:
        if y == x:
            tilde_links[y] = {c: c for c in J_atoms}
            continue
        tilde_links[y] = {
            c: d.link(y)(c) if c in d.I(x) else f"{c}@{y}" for c in J_atoms
        }
    atoms = [c for y in G.objects for c in tilde_links[y].values()]
    if len(set(atoms)) != len(atoms):
        raise SynthesisFailure("the copies of J_x overlap; I_y are not disjoint")
    # zero J_x keeps the datum ring, all J_y stay zero
    ring = SplitRing(d.ring.p, tuple(atoms)) if atoms else d.ring
    J = {y: ring.ideal(tilde_links[y].values()) for y in G.objects}
    tilde_local = lift_to(gg.beta, ring)
    return GlobalizationData(
        d,
        ring,
        J,
        tilde_local,
        {y: PartialRingIso.of(m) for y, m in tilde_links.items()},
    )


def globalize(d: Datum, gd: GlobalizationData | None = None) -> tuple[GlobalAction, Report]:
    """Build the globalization of ext(d) and verify it."""
    gd = gd or synthesize_globalization(d)
    beta = build_globalization(gd)
    report = verify_globalization(ext(d), beta)
    report.facts["ring"] = list(beta.ring.atoms)
    for g in d.groupoid.morphisms:
        report.facts[f"beta[{g}]"] = str(beta.alpha(g))
    return beta, report


def globalizations_isomorphic(
    alpha: PartialAction, beta1: GlobalAction, beta2: GlobalAction
) -> bool:
    """Whether two globalizations of alpha agree up to an atom relabeling fixing alpha."""
    G = alpha.groupoid
    relabel: dict[str, str] = {}
    for h in G.morphisms:
        for a in alpha.object_ideal(G.src[h]):
            b1, b2 = beta1.alpha(h).mapping.get(a), beta2.alpha(h).mapping.get(a)
            if b1 is None or b2 is None:
                return False
            if relabel.setdefault(b1, b2) != b2:
                return False
    if len(set(relabel.values())) != len(relabel):
        return False
    if set(relabel) != set().union(*(beta1.object_ideal(x).atoms for x in G.objects)):
        return False
    for g in G.morphisms:
        for a, b in beta1.alpha(g).pairs:
            if beta2.alpha(g).mapping.get(relabel[a]) != relabel[b]:
                return False
    return True

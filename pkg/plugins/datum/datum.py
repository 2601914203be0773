"""Datums (I, gamma_tau, gamma_x), the functors Res and Ext, and basepoint transport."""

from __future__ import annotations
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Mapping
import logging
from framework.report import Report, Violation
from plugins.groupoid.groupoid import (
    Groupoid,
    Transversal,
    check_transversal,
    corner,
)
from plugins.partial_action.action import (
    ParMorphism,
    PartialAction,
    ShapeMismatch,
    candidate_actions,
    is_partial_action,
    leq,
    restrict_to_isotropy,
    verify_par_morphism,
    verify_partial_action,
    partial_bijections,
)
from plugins.split_ring.ring import (
    Ideal,
    PartialRingIso,
    RingHom,
    SplitRing,
    compose_partial,
    image,
    sorted_atoms,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Datum:
    groupoid: Groupoid
    ring: SplitRing
    transversal: Transversal
    ideals: Mapping[str, Ideal]
    links: Mapping[str, PartialRingIso]
    local: PartialAction

    @property
    def base(self) -> str:
        return self.transversal.base

    def I(self, y: str) -> Ideal:
        return self.ideals[y]

    def link(self, y: str) -> PartialRingIso:
        """gamma_tau_y: I_tau_y^-1 -> I_tau_y."""
        return self.links[y]

    def local_iso(self, h: str) -> PartialRingIso:
        return self.local.alpha(h)

    def in_gd(self) -> bool:
        """I_tau_y^-1 = I_x and I_tau_y = I_y for every y."""
        I_x = self.I(self.base)
        return all(
            self.link(y).dom == I_x and self.link(y).cod == self.I(y)
            for y in self.groupoid.objects
        )


def closed_form_range(d: Datum, g: str) -> Ideal:
    """gamma_tau_t(I_tau_t^-1 & gamma_g_x(I_tau_s^-1 & I_g_x^-1))."""
    G = d.groupoid
    gx = corner(G, g, d.transversal)
    H = d.local.groupoid
    inner = d.link(G.src[g]).dom & d.local.A(H.inv[gx])
    middle = d.link(G.tgt[g]).dom & image(d.local_iso(gx), inner)
    return image(d.link(G.tgt[g]), middle)


def verify_datum(d: Datum, all_witnesses: bool = False) -> Report:
    G, tau = d.groupoid, d.transversal
    check_transversal(G, tau)
    if set(d.ideals) != set(G.objects) or set(d.links) != set(G.objects):
        raise ShapeMismatch("datum does not cover every object")
    x = d.base
    H = G.isotropy(x)
    if d.local.groupoid != H:
        raise ShapeMismatch(f"local action is not indexed by G({x})")

    report = Report("datum", all_witnesses)

    def base_identity():
        if d.link(x) != PartialRingIso.identity(d.I(x)):
            yield Violation("base-identity", (tau[x],), None, "gamma_tau_x is not id on I_x")

    def link_ideals():
        for y in G.objects:
            f = d.link(y)
            for a in sorted_atoms(f.dom.atoms - d.I(x).atoms):
                yield Violation("link-ideals", (tau[y],), a, f"I_tau_{y}^-1 not inside I_{x}")
            for a in sorted_atoms(f.cod.atoms - d.I(y).atoms):
                yield Violation("link-ideals", (tau[y],), a, f"I_tau_{y} not inside I_{y}")

    def local_ideal():
        if d.local.object_ideal(x) != d.I(x):
            yield Violation("local-action", (x,), None, "local action does not live on I_x")

    def ideal_condition():
        for g in G.non_identities:
            rng = closed_form_range(d, g)
            for a in sorted_atoms(rng.atoms - d.I(G.tgt[g]).atoms):
                yield Violation("ideal-condition", (g,), a)

    report.collect("base-identity", base_identity())
    report.collect("link-ideals", link_ideals())
    report.collect("local-action", local_ideal())
    report.merge(verify_partial_action(d.local, all_witnesses), "local")
    if not report.failed("link-ideals"):
        report.collect("ideal-condition", ideal_condition())
    return report


def res(alpha: PartialAction, tau: Transversal) -> Datum:
    G = alpha.groupoid
    G.require_connected()
    check_transversal(G, tau)
    return Datum(
        G,
        alpha.ring,
        tau,
        {y: alpha.object_ideal(y) for y in G.objects},
        {y: alpha.alpha(tau[y]) for y in G.objects},
        restrict_to_isotropy(alpha, tau.base),
    )


def ext_map(d: Datum, g: str) -> PartialRingIso:
    G = d.groupoid
    if G.is_identity(g):
        return PartialRingIso.identity(d.I(G.src[g]))
    gx = corner(G, g, d.transversal)
    return compose_partial(
        d.link(G.tgt[g]),
        compose_partial(d.local_iso(gx), d.link(G.src[g]).inverse()),
    )


def ext(d: Datum) -> PartialAction:
    """theta_g = gamma_tau_t(g) gamma_g_x gamma_tau_s(g)^-1, B_g its range."""
    G = d.groupoid
    isos = {g: ext_map(d, g) for g in G.morphisms}
    return PartialAction(G, d.ring, {g: f.cod for g, f in isos.items()}, isos)


def transport_datum(d: Datum, lam: Transversal) -> Datum:
    """Move a datum based at x to the base z of `lam`.

    I_x and I_z trade places, gamma_tau_z becomes the link at x and the
    local action is pulled back along l -> tau_z^-1 l tau_z.
    """
    G, tau = d.groupoid, d.transversal
    check_transversal(G, lam)
    x, z = tau.base, lam.base
    swap = lambda y: {x: z, z: x}.get(y, y)
    ideals = {y: d.I(swap(y)) for y in G.objects}
    links = {y: d.link(swap(y)) for y in G.objects}
    links[z] = PartialRingIso.identity(ideals[z])
    H = G.isotropy(z)
    phi = {l: G.mul(G.inv[tau[z]], l, tau[z]) for l in H.morphisms}
    local = PartialAction(
        H,
        d.ring,
        {l: d.local.A(phi[l]) for l in H.morphisms},
        {l: d.local_iso(phi[l]) for l in H.morphisms},
    )
    return Datum(G, d.ring, lam, ideals, links, local)


@dataclass(frozen=True)
class DatumMorphism:
    maps: Mapping[str, RingHom]

    @classmethod
    def identity(cls, d: Datum) -> DatumMorphism:
        return cls({y: RingHom.identity(d.I(y)) for y in d.groupoid.objects})

    def compose(self, first: DatumMorphism) -> DatumMorphism:
        return DatumMorphism({y: f.compose(first.maps[y]) for y, f in self.maps.items()})


def verify_datum_morphism(
    f: DatumMorphism, d: Datum, d2: Datum, all_witnesses: bool = False
) -> Report:
    G = d.groupoid
    if d2.groupoid != G or d2.transversal != d.transversal or d2.ring != d.ring:
        raise ShapeMismatch("datums live on different groupoids, transversals or rings")
    if set(f.maps) != set(G.objects):
        raise ShapeMismatch("morphism family does not match the objects")
    for y, fy in f.maps.items():
        if fy.source != d.I(y) or not fy.target <= d2.I(y):
            raise ShapeMismatch(f"f_{y} has the wrong source or target", object=y)
    x = d.base
    report = Report("datum morphism", all_witnesses)

    def containment():
        for y in G.objects:
            if y != x:
                moved = f.maps[y].image(d.link(y).cod)
                for a in sorted_atoms(moved.atoms - d2.link(y).cod.atoms):
                    yield Violation("link-containment", (d.transversal[y],), a)
            moved = f.maps[x].image(d.link(y).dom)
            for a in sorted_atoms(moved.atoms - d2.link(y).dom.atoms):
                yield Violation("link-containment", (G.inv[d.transversal[y]],), a)

    def intertwining():
        for y in G.objects:
            g1, g2 = d.link(y), d2.link(y)
            for a in g1.dom:
                pushed = f.maps[x].on_atom(a)
                if not pushed <= g2.dom.atoms or frozenset(
                    g2(b) for b in pushed
                ) != f.maps[y].on_atom(g1(a)):
                    yield Violation("link-intertwining", (d.transversal[y],), a)

    report.collect("link-containment", containment())
    report.collect("link-intertwining", intertwining())
    report.merge(
        verify_par_morphism(ParMorphism({x: f.maps[x]}), d.local, d2.local, all_witnesses),
        "local",
    )
    return report


def res_morphism(psi: ParMorphism) -> DatumMorphism:
    return DatumMorphism(dict(psi.maps))


def ext_morphism(f: DatumMorphism) -> ParMorphism:
    return ParMorphism(dict(f.maps))


def _counit(alpha: PartialAction, tau: Transversal) -> tuple[PartialAction, ParMorphism]:
    theta = ext(res(alpha, tau))
    return theta, ParMorphism.inclusion(theta, alpha)


def check_adjunction(subject: PartialAction | Datum, tau: Transversal | None = None) -> Report:
    """Unit, counit and both triangle identities on one instance."""
    if isinstance(subject, Datum):
        alpha, tau = ext(subject), subject.transversal
        gamma = subject
    else:
        alpha = subject
        tau = tau or alpha.groupoid.canonical_transversal()
        gamma = res(alpha, tau)
    report = Report("adjunction")

    # unit at gamma: Res(Ext(gamma)) = gamma, so eta is the identity family
    unit_ok = res(ext(gamma), tau) == gamma
    report.expect("unit", unit_ok, "Res(Ext(gamma)) != gamma")
    eta = DatumMorphism.identity(gamma)

    theta, eps = _counit(alpha, tau)
    report.merge(verify_par_morphism(eps, theta, alpha), "counit")

    res_alpha = res(alpha, tau)
    triangle_res = res_morphism(eps).compose(DatumMorphism.identity(res_alpha))
    report.expect(
        "triangle-res",
        triangle_res == DatumMorphism.identity(res_alpha)
        and verify_datum_morphism(triangle_res, res_alpha, res_alpha).ok,
        "Res(eps) eta != id",
    )

    ext_gamma = ext(gamma)
    inner, eps_ext = _counit(ext_gamma, tau)
    triangle_ext = eps_ext.compose(ext_morphism(eta))
    report.expect(
        "triangle-ext",
        unit_ok
        and inner == ext_gamma
        and triangle_ext == ParMorphism.identity(ext_gamma)
        and verify_par_morphism(triangle_ext, ext_gamma, ext_gamma).ok,
        "eps Ext(eta) != id",
    )

    G = alpha.groupoid
    strict = [g for g in G.morphisms if theta.A(g) != alpha.A(g)]
    report.facts["leq"] = leq(theta, alpha)
    report.facts["counit-iso"] = theta == alpha
    report.facts["strict-at"] = strict
    return report


def enumerate_group_actions(
    H: Groupoid, ring: SplitRing, I: Ideal
) -> Iterator[PartialAction]:
    (o,) = H.objects
    for cand in candidate_actions(H, ring, {o: I}):
        if is_partial_action(cand):
            yield cand


def _subsets(ring: SplitRing) -> list[Ideal]:
    return [
        Ideal(frozenset(c)) for k in range(ring.n + 1) for c in combinations(ring.atoms, k)
    ]


def enumerate_datums(
    G: Groupoid, ring: SplitRing, tau: Transversal, gd_only: bool = False
) -> Iterator[Datum]:
    """Every datum over (G, ring, tau) in deterministic order."""
    x = tau.base
    H = G.isotropy(x)
    others = [y for y in G.objects if y != x]
    subsets = _subsets(ring)
    for I_x in subsets:
        locals_ = list(enumerate_group_actions(H, ring, I_x))
        for rest in product(subsets, repeat=len(others)):
            ideals = {x: I_x} | dict(zip(others, rest))
            if gd_only:
                link_choices = [
                    [m for m in partial_bijections(list(I_x), list(ideals[y]), False)
                     if len(m) == len(I_x) == len(ideals[y])]
                    for y in others
                ]
            else:
                link_choices = [
                    list(partial_bijections(list(I_x), list(ideals[y]), False))
                    for y in others
                ]
            for picks in product(*link_choices):
                links = {x: PartialRingIso.identity(I_x)} | {
                    y: PartialRingIso.of(m) for y, m in zip(others, picks)
                }
                for local in locals_:
                    yield Datum(G, ring, tau, ideals, links, local)

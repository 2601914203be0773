"""Partial groupoid actions on split rings."""

from __future__ import annotations
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterator, Mapping
import logging
from framework.errors import InputError, InternalInconsistency, MathError
from framework.report import Report, Violation
from plugins.groupoid.groupoid import Groupoid, Transversal, check_transversal
from plugins.split_ring.ring import (
    EMPTY,
    Ideal,
    PartialRingIso,
    RingHom,
    SplitRing,
    compose_partial,
    image,
    preimage,
    restrict,
    sorted_atoms,
)

logger = logging.getLogger(__name__)


class ShapeMismatch(InputError):
    pass


class NotGlobal(MathError):
    pass


@dataclass(frozen=True)
class PartialAction:
    groupoid: Groupoid
    ring: SplitRing
    ideals: Mapping[str, Ideal]
    isos: Mapping[str, PartialRingIso]

    def A(self, g: str) -> Ideal:
        return self.ideals[g]

    def alpha(self, g: str) -> PartialRingIso:
        return self.isos[g]

    def object_ideal(self, x: str) -> Ideal:
        return self.ideals[self.groupoid.identity[x]]

    def carrier(self) -> Ideal:
        """Union of the object ideals."""
        result = EMPTY
        for x in self.groupoid.objects:
            result = result | self.object_ideal(x)
        return result

    def describe(self) -> dict[str, str]:
        return {
            g: f"A={self.ideals[g]} alpha={self.isos[g]}"
            for g in self.groupoid.morphisms
        }


GlobalAction = PartialAction


def check_shape(cand: PartialAction):
    G = cand.groupoid
    missing = [g for g in G.morphisms if g not in cand.ideals or g not in cand.isos]
    extra = [g for g in (*cand.ideals, *cand.isos) if g not in G.index]
    if missing or extra:
        raise ShapeMismatch(
            "action does not match the groupoid", missing=missing, extra=extra
        )
    for g in G.morphisms:
        for a in cand.ideals[g].atoms | cand.isos[g].dom.atoms | cand.isos[g].cod.atoms:
            cand.ring.index(a)


def _ideal_shape(cand: PartialAction) -> Iterator[Violation]:
    G = cand.groupoid
    for g in G.morphisms:
        A_g, A_t = cand.A(g), cand.object_ideal(G.tgt[g])
        for a in sorted_atoms(A_g.atoms - A_t.atoms):
            yield Violation("ideal-shape", (g,), a, f"A_g not inside A_{G.tgt[g]}")
        f = cand.alpha(g)
        if f.dom != cand.A(G.inv[g]) or f.cod != A_g:
            a = sorted_atoms(
                (f.dom.atoms ^ cand.A(G.inv[g]).atoms) | (f.cod.atoms ^ A_g.atoms)
            )[0]
            yield Violation("ideal-shape", (g,), a, "alpha_g is not A_g^-1 -> A_g")


def _identity_maps(cand: PartialAction) -> Iterator[Violation]:
    G = cand.groupoid
    for x in G.objects:
        e = G.identity[x]
        if cand.alpha(e) != PartialRingIso.identity(cand.object_ideal(x)):
            moved = [a for a, b in cand.alpha(e).pairs if a != b]
            yield Violation(
                "identity-maps", (e,), moved[0] if moved else None, "alpha_x is not the identity"
            )


def _meet_domain(cand: PartialAction, g: str, h: str) -> Ideal:
    """alpha_h^-1(A_g^-1 & A_h)."""
    G = cand.groupoid
    return preimage(cand.alpha(h), cand.A(G.inv[g]) & cand.A(h))


def _domain_closure(cand: PartialAction) -> Iterator[Violation]:
    G = cand.groupoid
    for g, h in G.composable_pairs():
        gh = G.compose(g, h)
        for a in _meet_domain(cand, g, h):
            if a not in cand.A(G.inv[gh]):
                yield Violation("domain-closure", (g, h), a, f"not in A_({gh})^-1")


def _composition(cand: PartialAction) -> Iterator[Violation]:
    G = cand.groupoid
    for g, h in G.composable_pairs():
        gh = cand.alpha(G.compose(g, h))
        f_h, f_g = cand.alpha(h), cand.alpha(g)
        for a in _meet_domain(cand, g, h):
            if a in gh.dom and f_g(f_h(a)) != gh(a):
                yield Violation("composition", (g, h), a, f"{f_g(f_h(a))} != {gh(a)}")


def verify_partial_action(
    cand: PartialAction, all_witnesses: bool = False, subject: str = "partial action"
) -> Report:
    check_shape(cand)
    report = Report(subject, all_witnesses)
    report.collect("ideal-shape", _ideal_shape(cand))
    report.collect("identity-maps", _identity_maps(cand))
    if report.failed("ideal-shape"):
        return report
    report.collect("domain-closure", _domain_closure(cand))
    report.collect("composition", _composition(cand))
    return report


def is_partial_action(cand: PartialAction) -> bool:
    return verify_partial_action(cand).ok


def action_identities(alpha: PartialAction, all_witnesses: bool = False) -> Report:
    """Inverse compatibility and the image/intersection identity for a verified action."""
    G = alpha.groupoid
    report = Report("action identities", all_witnesses)

    def inverse_compat():
        for g in G.morphisms:
            if alpha.alpha(g).inverse() != alpha.alpha(G.inv[g]):
                yield Violation("inverse-compat", (g,), None, "alpha_g^-1 != alpha_g^-1")

    def image_intersection():
        for g, h in G.composable_pairs():
            lhs = image(alpha.alpha(g), alpha.A(G.inv[g]) & alpha.A(h))
            rhs = alpha.A(g) & alpha.A(G.compose(g, h))
            for a in sorted_atoms(lhs.atoms ^ rhs.atoms):
                yield Violation("image-intersection", (g, h), a)

    report.collect("inverse-compat", inverse_compat())
    report.collect("image-intersection", image_intersection())
    return report


def composition_order_check(alpha: PartialAction, all_witnesses: bool = False) -> Report:
    """alpha_gh extends alpha_g alpha_h for every composable pair."""
    G = alpha.groupoid
    report = Report("extension order", all_witnesses)

    def witnesses():
        for g, h in G.composable_pairs():
            composed = compose_partial(alpha.alpha(g), alpha.alpha(h))
            gh = alpha.alpha(G.compose(g, h))
            for a, b in composed.pairs:
                if gh.mapping.get(a) != b:
                    yield Violation("extension-order", (g, h), a)
                    break

    report.collect("extension-order", witnesses())
    return report


def is_global(alpha: PartialAction) -> bool:
    G = alpha.groupoid
    return all(alpha.A(g) == alpha.object_ideal(G.tgt[g]) for g in G.morphisms)


def composes_exactly(alpha: PartialAction) -> bool:
    G = alpha.groupoid
    return all(
        compose_partial(alpha.alpha(g), alpha.alpha(h)) == alpha.alpha(G.compose(g, h))
        for g, h in G.composable_pairs()
    )


def as_global(alpha: PartialAction) -> GlobalAction:
    if not is_global(alpha):
        raise NotGlobal("action is not global")
    return alpha


def is_unital(alpha: PartialAction) -> bool:
    # every atom-subset ideal has the unit 1_S; only the atoms need to exist
    return all(
        a in alpha.ring.positions for i in alpha.ideals.values() for a in i.atoms
    )


def restrict_to_isotropy(alpha: PartialAction, x: str) -> PartialAction:
    H = alpha.groupoid.isotropy(x)
    return PartialAction(
        H,
        alpha.ring,
        {h: alpha.A(h) for h in H.morphisms},
        {h: alpha.alpha(h) for h in H.morphisms},
    )


def leq(theta: PartialAction, alpha: PartialAction) -> bool:
    """theta <= alpha: B_g inside A_g and alpha_g extends theta_g."""
    if theta.groupoid != alpha.groupoid or theta.ring != alpha.ring:
        return False
    return all(
        theta.A(g) <= alpha.A(g) and alpha.alpha(g).extends(theta.alpha(g))
        for g in alpha.groupoid.morphisms
    )


def is_group_type(alpha: PartialAction, tau: Transversal) -> bool:
    G = alpha.groupoid
    A_x = alpha.object_ideal(tau.base)
    return all(
        alpha.A(G.inv[tau[y]]) == A_x and alpha.A(tau[y]) == alpha.object_ideal(y)
        for y in G.objects
    )


def under_transversal(alpha: PartialAction, tau: Transversal) -> bool:
    """A_g inside A_tau_t(g) for every non-identity g."""
    G = alpha.groupoid
    return all(alpha.A(g) <= alpha.A(tau[G.tgt[g]]) for g in G.non_identities)


def under_transversal_closed(alpha: PartialAction, tau: Transversal) -> bool:
    """A_g inside A_tau_t(g) & A_(g tau_s(g)) for every non-identity g."""
    G = alpha.groupoid
    return all(
        alpha.A(g)
        <= alpha.A(tau[G.tgt[g]]) & alpha.A(G.compose(g, tau[G.src[g]]))
        for g in G.non_identities
    )


@dataclass
class RecoverabilitySearch:
    witness: tuple[str, Transversal] | None
    tried: int
    failures: list[tuple[str, Transversal]] = field(default_factory=list)

    @property
    def recoverable(self):
        return self.witness is not None

    def summary(self) -> str:
        if self.recoverable:
            x, tau = self.witness
            return f"recoverable at base {x} with transversal {tau}"
        return (
            f"not recoverable; {len(self.failures)}/{self.tried} "
            "(base,transversal) pairs fail"
        )


def recoverability_search(alpha: PartialAction, exhaustive: bool = True) -> RecoverabilitySearch:
    """Search every base and transversal in lexicographic order.

    Both ideal conditions are evaluated at every candidate and must agree.
    With `exhaustive` off the search stops at the first witness.
    """
    G = alpha.groupoid
    G.require_connected()
    result = RecoverabilitySearch(None, 0)
    for tau in G.all_transversals():
        result.tried += 1
        plain = under_transversal(alpha, tau)
        closed = under_transversal_closed(alpha, tau)
        if plain != closed:
            raise InternalInconsistency(
                "recoverability conditions disagree", base=tau.base, transversal=str(tau)
            )
        if plain:
            if result.witness is None:
                result.witness = (tau.base, tau)
            if not exhaustive:
                break
        else:
            result.failures.append((tau.base, tau))
    logger.debug("recoverability: %s", result.summary())
    return result


def recoverable_witness(alpha: PartialAction) -> tuple[str, Transversal] | None:
    return recoverability_search(alpha, exhaustive=False).witness


@dataclass(frozen=True)
class ParMorphism:
    maps: Mapping[str, RingHom]

    @classmethod
    def identity(cls, alpha: PartialAction) -> ParMorphism:
        return cls({x: RingHom.identity(alpha.object_ideal(x)) for x in alpha.groupoid.objects})

    @classmethod
    def inclusion(cls, source: PartialAction, target: PartialAction) -> ParMorphism:
        return cls(
            {
                x: RingHom.inclusion(source.object_ideal(x), target.object_ideal(x))
                for x in source.groupoid.objects
            }
        )

    def compose(self, first: ParMorphism) -> ParMorphism:
        return ParMorphism({y: f.compose(first.maps[y]) for y, f in self.maps.items()})


def verify_par_morphism(
    psi: ParMorphism,
    alpha: PartialAction,
    alpha2: PartialAction,
    all_witnesses: bool = False,
) -> Report:
    G = alpha.groupoid
    if alpha2.groupoid != G or alpha2.ring != alpha.ring:
        raise ShapeMismatch("actions live on different groupoids or rings")
    if set(psi.maps) != set(G.objects):
        raise ShapeMismatch("morphism family does not match the objects", objects=list(psi.maps))
    for y, f in psi.maps.items():
        if f.source != alpha.object_ideal(y) or not f.target <= alpha2.object_ideal(y):
            raise ShapeMismatch(f"psi_{y} has the wrong source or target", object=y)

    report = Report("par morphism", all_witnesses)

    def containment():
        for g in G.morphisms:
            moved = psi.maps[G.tgt[g]].image(alpha.A(g))
            for a in sorted_atoms(moved.atoms - alpha2.A(g).atoms):
                yield Violation("containment", (g,), a, "psi(A_g) not inside A'_g")

    def intertwining():
        for g in G.morphisms:
            f, f2 = alpha.alpha(g), alpha2.alpha(g)
            psi_s, psi_t = psi.maps[G.src[g]], psi.maps[G.tgt[g]]
            for a in f.dom:
                pushed = psi_s.on_atom(a)
                if not pushed <= f2.dom.atoms:
                    yield Violation("intertwining", (g,), a, "psi(a) outside A'_g^-1")
                    continue
                if frozenset(f2(b) for b in pushed) != psi_t.on_atom(f(a)):
                    yield Violation("intertwining", (g,), a)

    report.collect("containment", containment())
    report.collect("intertwining", intertwining())
    return report


def identity_action(G: Groupoid, ring: SplitRing, ideal: Ideal | None = None) -> GlobalAction:
    """Every A_g equal to one ideal, every alpha_g the identity."""
    ideal = ideal if ideal is not None else ring.whole()
    return PartialAction(
        G,
        ring,
        {g: ideal for g in G.morphisms},
        {g: PartialRingIso.identity(ideal) for g in G.morphisms},
    )


def restrict_global(beta: GlobalAction, A: Ideal) -> PartialAction:
    """The partial action induced by a global action on an ideal."""
    G = beta.groupoid
    ideals: dict[str, Ideal] = {}
    for g in G.morphisms:
        A_s = A & beta.object_ideal(G.src[g])
        ideals[g] = A & beta.object_ideal(G.tgt[g]) & image(beta.alpha(g), A_s)
    return PartialAction(
        G,
        beta.ring,
        ideals,
        {g: restrict(beta.alpha(g), ideals[G.inv[g]]) for g in G.morphisms},
    )


def split_components(alpha: PartialAction) -> list[PartialAction]:
    return [
        PartialAction(
            H,
            alpha.ring,
            {g: alpha.A(g) for g in H.morphisms},
            {g: alpha.alpha(g) for g in H.morphisms},
        )
        for _, H in alpha.groupoid.connected_components()
    ]


def join_components(G: Groupoid, parts: list[PartialAction]) -> PartialAction:
    ideals, isos = {}, {}
    for part in parts:
        ideals |= part.ideals
        isos |= part.isos
    return PartialAction(G, parts[0].ring, ideals, isos)


def partial_bijections(S: list[str], T: list[str], involutive: bool) -> Iterator[dict[str, str]]:
    if involutive:
        for k in range(len(S) + 1):
            for dom in combinations(S, k):
                for cod in permutations(dom):
                    yield dict(zip(dom, cod))
        return
    for k in range(min(len(S), len(T)) + 1):
        for dom in combinations(S, k):
            for cod in permutations(T, k):
                yield dict(zip(dom, cod))


def candidate_actions(
    G: Groupoid, ring: SplitRing, object_ideals: Mapping[str, Ideal]
) -> Iterator[PartialAction]:
    """Unverified candidates with the given object ideals.

    One partial bijection is chosen per pair {g, g^-1} of non-identity
    morphisms; the other member gets the inverse.
    """
    reps = []
    for g in G.non_identities:
        if G.inv[g] not in reps:
            reps.append(g)
    choices = [
        partial_bijections(
            list(object_ideals[G.src[g]]),
            list(object_ideals[G.tgt[g]]),
            G.inv[g] == g,
        )
        for g in reps
    ]
    for picks in product(*(list(c) for c in choices)):
        isos = {
            G.identity[x]: PartialRingIso.identity(object_ideals[x]) for x in G.objects
        }
        for g, m in zip(reps, picks):
            f = PartialRingIso.of(m)
            isos[g], isos[G.inv[g]] = f, f.inverse()
        yield PartialAction(G, ring, {g: f.cod for g, f in isos.items()}, isos)


def direct_sum_assignments(G: Groupoid, ring: SplitRing) -> Iterator[dict[str, Ideal]]:
    """Every way of splitting the atoms among the objects."""
    for owners in product(G.objects, repeat=ring.n):
        yield {x: ring.ideal(a for a, o in zip(ring.atoms, owners) if o == x) for x in G.objects}


def all_candidates(G: Groupoid, ring: SplitRing) -> Iterator[PartialAction]:
    """Unverified candidates on A = sum of the I_x, over every split of the atoms."""
    for ideals in direct_sum_assignments(G, ring):
        yield from candidate_actions(G, ring, ideals)


def enumerate_actions(
    G: Groupoid,
    ring: SplitRing,
    object_ideals: Mapping[str, Ideal] | None = None,
    direct_sum: bool = True,
) -> Iterator[PartialAction]:
    """Verified partial actions of G on ring, in deterministic order.

    Without fixed object ideals, every assignment is tried; `direct_sum`
    keeps only assignments partitioning the atoms.
    """
    if object_ideals is not None:
        assignments = [dict(object_ideals)]
    elif direct_sum:
        assignments = direct_sum_assignments(G, ring)
    else:
        subsets = [
            Ideal(frozenset(c))
            for k in range(ring.n + 1)
            for c in combinations(ring.atoms, k)
        ]
        assignments = [dict(zip(G.objects, pick)) for pick in product(subsets, repeat=len(G.objects))]
    for ideals in assignments:
        for cand in candidate_actions(G, ring, ideals):
            if is_partial_action(cand):
                yield cand

"""Finite groupoids given by composition tables."""

from __future__ import annotations
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence
import itertools
import logging
import numpy as np
from framework.errors import InputError

logger = logging.getLogger(__name__)


class GroupoidError(InputError):
    pass


class NonAssociative(GroupoidError):
    pass


class MissingIdentity(GroupoidError):
    pass


class BadInverse(GroupoidError):
    pass


class BadCompositionDomain(GroupoidError):
    pass


class UnknownObject(GroupoidError):
    pass


class UnknownMorphism(GroupoidError):
    pass


class NotConnected(GroupoidError):
    pass


class EmptyObjectSet(GroupoidError):
    pass


@dataclass
class RawGroupoid:
    """Unvalidated composition table.

    `comp[(g, h)]` is gh, i.e. g after h. Objects without an entry in
    `identity` use the morphism named like the object.
    """

    objects: list[str]
    morphisms: list[str]
    src: dict[str, str]
    tgt: dict[str, str]
    inv: dict[str, str]
    comp: dict[tuple[str, str], str]
    identity: dict[str, str] = field(default_factory=dict)

    def identity_of(self, x: str) -> str:
        return self.identity.get(x, x)

    def fill_identities(self) -> RawGroupoid:
        """Add the identity arrows and their compositions where missing."""
        for x in self.objects:
            e = self.identity_of(x)
            if e not in self.morphisms:
                self.morphisms.insert(self.objects.index(x), e)
            self.src.setdefault(e, x)
            self.tgt.setdefault(e, x)
            self.inv.setdefault(e, e)
        for g in self.morphisms:
            if g not in self.src or g not in self.tgt:
                continue
            self.comp.setdefault((self.identity_of(self.tgt[g]), g), g)
            self.comp.setdefault((g, self.identity_of(self.src[g])), g)
        for g, gi in list(self.inv.items()):
            self.inv.setdefault(gi, g)
        for g, gi in self.inv.items():
            if g in self.src and g in self.tgt:
                self.comp.setdefault((gi, g), self.identity_of(self.src[g]))
                self.comp.setdefault((g, gi), self.identity_of(self.tgt[g]))
        return self


class Groupoid:
    def __init__(
        self,
        objects: Sequence[str],
        morphisms: Sequence[str],
        src: Mapping[str, str],
        tgt: Mapping[str, str],
        inv: Mapping[str, str],
        identity: Mapping[str, str],
        comp: Mapping[tuple[str, str], str],
    ):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.inv = dict(inv)
        self.identity = dict(identity)
        self.index = {g: i for i, g in enumerate(self.morphisms)}
        n = len(self.morphisms)
        self.table = np.full((n, n), -1, dtype=np.int64)
        for (g, h), gh in comp.items():
            self.table[self.index[g], self.index[h]] = self.index[gh]

    def key(self):
        return (
            self.objects,
            self.morphisms,
            tuple(sorted(self.src.items())),
            tuple(sorted(self.tgt.items())),
            tuple(sorted(self.inv.items())),
            tuple(sorted(self.identity.items())),
            self.table.tobytes(),
        )

    def __eq__(self, other):
        return isinstance(other, Groupoid) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Groupoid(objects={list(self.objects)}, morphisms={len(self.morphisms)})"

    def check_object(self, x: str):
        if x not in self.identity:
            raise UnknownObject(f"unknown object {x}", object=x)

    def check_morphism(self, g: str):
        if g not in self.index:
            raise UnknownMorphism(f"unknown morphism {g}", morphism=g)

    def compose(self, g: str, h: str) -> str | None:
        """gh (g after h), or None when src(g) != tgt(h)."""
        k = self.table[self.index[g], self.index[h]]
        return None if k < 0 else self.morphisms[k]

    def mul(self, *gs: str) -> str:
        result = gs[-1]
        for g in reversed(gs[:-1]):
            gh = self.compose(g, result)
            if gh is None:
                raise BadCompositionDomain(f"{g} and {result} are not composable", g=g, h=result)
            result = gh
        return result

    def composable_pairs(self) -> Iterator[tuple[str, str]]:
        for g in self.morphisms:
            for h in self.morphisms:
                if self.src[g] == self.tgt[h]:
                    yield g, h

    def is_identity(self, g: str) -> bool:
        return self.identity.get(self.src[g]) == g

    @cached_property
    def non_identities(self) -> tuple[str, ...]:
        return tuple(g for g in self.morphisms if not self.is_identity(g))

    def hom(self, x: str, y: str) -> list[str]:
        """G(x, y): morphisms from x to y."""
        return [g for g in self.morphisms if self.src[g] == x and self.tgt[g] == y]

    def loops(self, x: str) -> list[str]:
        self.check_object(x)
        return self.hom(x, x)

    def full_subgroupoid(self, objects: Sequence[str]) -> Groupoid:
        objs = [x for x in self.objects if x in set(objects)]
        morphs = [
            g for g in self.morphisms if self.src[g] in objs and self.tgt[g] in objs
        ]
        keep = set(morphs)
        return Groupoid(
            objs,
            morphs,
            {g: self.src[g] for g in morphs},
            {g: self.tgt[g] for g in morphs},
            {g: self.inv[g] for g in morphs},
            {x: self.identity[x] for x in objs},
            {
                (g, h): gh
                for g in morphs
                for h in morphs
                if (gh := self.compose(g, h)) is not None and gh in keep
            },
        )

    def isotropy(self, x: str) -> Groupoid:
        """G(x) as a one-object groupoid."""
        self.check_object(x)
        return self.full_subgroupoid([x])

    def connected_components(self) -> list[tuple[frozenset[str], Groupoid]]:
        seen: set[str] = set()
        components = []
        for x in self.objects:
            if x in seen:
                continue
            block = [y for y in self.objects if self.hom(x, y)]
            seen.update(block)
            components.append((frozenset(block), self.full_subgroupoid(block)))
        return components

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    def require_connected(self):
        if not self.is_connected():
            raise NotConnected("groupoid is not connected")

    def transversals(self, x: str) -> Iterator[Transversal]:
        self.check_object(x)
        self.require_connected()
        others = [y for y in self.objects if y != x]
        for choice in itertools.product(*(self.hom(x, y) for y in others)):
            yield Transversal.of(x, {x: self.identity[x]} | dict(zip(others, choice)))

    def transversal_count(self, x: str) -> int:
        return int(np.prod([len(self.hom(x, y)) for y in self.objects if y != x]))

    def all_transversals(self) -> Iterator[Transversal]:
        for x in self.objects:
            yield from self.transversals(x)

    def canonical_transversal(self, x: str | None = None) -> Transversal:
        return next(self.transversals(x if x is not None else self.objects[0]))


@dataclass(frozen=True)
class Transversal:
    base: str
    pick: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, base: str, pick: Mapping[str, str]) -> Transversal:
        return cls(
            base, tuple(sorted(pick.items(), key=lambda kv: (kv[0] != base, kv[0])))
        )

    @cached_property
    def mapping(self) -> dict[str, str]:
        return dict(self.pick)

    def __getitem__(self, y: str) -> str:
        return self.mapping[y]

    def objects(self) -> list[str]:
        return [y for y, _ in self.pick]

    def __str__(self):
        return "{" + ", ".join(f"{y}:{g}" for y, g in self.pick) + "}"


def check_transversal(G: Groupoid, tau: Transversal):
    G.check_object(tau.base)
    if set(tau.objects()) != set(G.objects):
        raise GroupoidError("transversal does not cover every object", base=tau.base)
    for y, g in tau.pick:
        G.check_morphism(g)
        if G.src[g] != tau.base or G.tgt[g] != y:
            raise GroupoidError(f"{g} is not in G({tau.base},{y})", morphism=g)
    if tau[tau.base] != G.identity[tau.base]:
        raise GroupoidError("transversal must pick the identity at its base", morphism=tau[tau.base])


def corner(G: Groupoid, g: str, tau: Transversal) -> str:
    """g_x = tau_t(g)^-1 g tau_s(g), a loop at the base."""
    return G.mul(G.inv[tau[G.tgt[g]]], g, tau[G.src[g]])


def psi_split(G: Groupoid, g: str, tau: Transversal) -> tuple[tuple[str, str], str]:
    return (G.src[g], G.tgt[g]), corner(G, g, tau)


def psi_merge(G: Groupoid, pair: tuple[str, str], h: str, tau: Transversal) -> str:
    y, z = pair
    return G.mul(tau[z], h, G.inv[tau[y]])


def validate_groupoid(raw: RawGroupoid) -> Groupoid:
    """Check the groupoid axioms in order: domains, identities, inverses, associativity."""
    if not raw.objects:
        raise EmptyObjectSet("a groupoid needs at least one object")
    objects = set(raw.objects)
    morphisms = set(raw.morphisms)
    for g in raw.morphisms:
        for side, m in (("src", raw.src), ("tgt", raw.tgt)):
            if g not in m:
                raise GroupoidError(f"{g} has no {side}", morphism=g)
            if m[g] not in objects:
                raise UnknownObject(f"{side}({g}) = {m[g]} is not an object", object=m[g])
        if raw.inv.get(g) not in morphisms:
            raise BadInverse(f"{g} has no inverse", g=g)
    for x in raw.objects:
        e = raw.identity_of(x)
        if e not in morphisms or raw.src[e] != x or raw.tgt[e] != x:
            raise MissingIdentity(f"no identity at {x}", x=x)

    for (g, h), gh in raw.comp.items():
        for k in (g, h, gh):
            if k not in morphisms:
                raise UnknownMorphism(f"unknown morphism {k}", morphism=k)
    for g in raw.morphisms:
        for h in raw.morphisms:
            defined = (g, h) in raw.comp
            if defined != (raw.src[g] == raw.tgt[h]):
                raise BadCompositionDomain(f"composition of {g} and {h}", g=g, h=h)
            if defined:
                gh = raw.comp[(g, h)]
                if raw.src[gh] != raw.src[h] or raw.tgt[gh] != raw.tgt[g]:
                    raise BadCompositionDomain(f"{g}{h} = {gh} has wrong ends", g=g, h=h)

    for x in raw.objects:
        e = raw.identity_of(x)
        if raw.inv[e] != e:
            raise MissingIdentity(f"identity at {x} is not self-inverse", x=x)
        for g in raw.morphisms:
            if raw.tgt[g] == x and raw.comp[(e, g)] != g:
                raise MissingIdentity(f"{e} is not neutral for {g}", x=x)
            if raw.src[g] == x and raw.comp[(g, e)] != g:
                raise MissingIdentity(f"{e} is not neutral for {g}", x=x)

    for g in raw.morphisms:
        gi = raw.inv[g]
        if (
            raw.src[gi] != raw.tgt[g]
            or raw.tgt[gi] != raw.src[g]
            or raw.comp[(gi, g)] != raw.identity_of(raw.src[g])
            or raw.comp[(g, gi)] != raw.identity_of(raw.tgt[g])
        ):
            raise BadInverse(f"{gi} is not an inverse of {g}", g=g)

    for g in raw.morphisms:
        for h in raw.morphisms:
            if raw.src[g] != raw.tgt[h]:
                continue
            gh = raw.comp[(g, h)]
            for k in raw.morphisms:
                if raw.src[h] != raw.tgt[k]:
                    continue
                if raw.comp[(gh, k)] != raw.comp[(g, raw.comp[(h, k)])]:
                    raise NonAssociative(f"({g}{h}){k} != {g}({h}{k})", g=g, h=h, k=k)

    logger.debug(
        "validated groupoid with %d objects and %d morphisms",
        len(raw.objects),
        len(raw.morphisms),
    )
    return Groupoid(
        raw.objects,
        raw.morphisms,
        raw.src,
        raw.tgt,
        raw.inv,
        {x: raw.identity_of(x) for x in raw.objects},
        raw.comp,
    )


def build_coarse(objects: Sequence[str]) -> Groupoid:
    """The coarse groupoid Y^2; (y,z) goes from y to z."""
    if not objects:
        raise EmptyObjectSet("a groupoid needs at least one object")
    name = lambda y, z: f"({y},{z})"
    morphs = {name(y, z): (y, z) for y in objects for z in objects}
    return validate_groupoid(
        RawGroupoid(
            list(objects),
            list(morphs),
            {g: y for g, (y, _) in morphs.items()},
            {g: z for g, (_, z) in morphs.items()},
            {g: name(z, y) for g, (y, z) in morphs.items()},
            {
                (name(z, w), name(y, z)): name(y, w)
                for y in objects
                for z in objects
                for w in objects
            },
            {y: name(y, y) for y in objects},
        )
    )


def cyclic_group(n: int, generator: str = "s") -> Groupoid:
    """Z_n as a one-object groupoid with elements e, s, s^2, ..."""
    names = ["e", generator] + [f"{generator}^{k}" for k in range(2, n)]
    names = names[:n]
    return validate_groupoid(
        RawGroupoid(
            ["e"],
            names,
            {g: "e" for g in names},
            {g: "e" for g in names},
            {names[i]: names[-i % n] for i in range(n)},
            {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)},
        )
    )


def build_gamma(m: int, group: Groupoid) -> Groupoid:
    """Gamma^m_H: morphisms (i,g,j) from j to i, (i,g,j)(j,h,l) = (i,gh,l)."""
    if m < 1:
        raise EmptyObjectSet("a groupoid needs at least one object")
    if len(group.objects) != 1:
        raise GroupoidError("build_gamma needs a one-object groupoid")
    (o,) = group.objects
    e = group.identity[o]
    objects = [str(i) for i in range(1, m + 1)]
    name = lambda i, g, j: f"({i},{g},{j})"
    morphs = {
        name(i, g, j): (i, g, j) for i in objects for j in objects for g in group.morphisms
    }
    return validate_groupoid(
        RawGroupoid(
            objects,
            list(morphs),
            {k: j for k, (_, _, j) in morphs.items()},
            {k: i for k, (i, _, _) in morphs.items()},
            {k: name(j, group.inv[g], i) for k, (i, g, j) in morphs.items()},
            {
                (name(i, g, j), name(j, h, l)): name(i, group.compose(g, h), l)
                for i in objects
                for j in objects
                for l in objects
                for g in group.morphisms
                for h in group.morphisms
            },
            {i: name(i, e, i) for i in objects},
        )
    )


def disjoint_union(*parts: tuple[str, Groupoid]) -> Groupoid:
    """Disjoint union, every name of a part prefixed by its label."""
    objects, morphisms, src, tgt, inv, identity, comp = [], [], {}, {}, {}, {}, {}
    for label, G in parts:
        q = lambda n: f"{label}{n}"
        objects += [q(x) for x in G.objects]
        morphisms += [q(g) for g in G.morphisms]
        for g in G.morphisms:
            src[q(g)], tgt[q(g)], inv[q(g)] = q(G.src[g]), q(G.tgt[g]), q(G.inv[g])
        identity |= {q(x): q(e) for x, e in G.identity.items()}
        comp |= {(q(g), q(h)): q(G.compose(g, h)) for g, h in G.composable_pairs()}
    return validate_groupoid(RawGroupoid(objects, morphisms, src, tgt, inv, comp, identity))

"""The split ring F_p^n.

Elements are coefficient vectors over named atoms (the primitive idempotents
e_i). Ideals are atom subsets, ring isomorphisms between ideals are atom
bijections, and ring homomorphisms send each atom to a sum of orthogonal atoms.
"""

from __future__ import annotations
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping
import re
import numpy as np
from framework.errors import InputError


class InvalidRing(InputError):
    pass


class OutsideDomain(InputError):
    pass


class NotSubIdeal(InputError):
    pass


class NotAHomomorphism(InputError):
    pass


def atom_key(name: str):
    return tuple(
        (0, int(part), "") if part.isdigit() else (1, 0, part)
        for part in re.split(r"(\d+)", name)
        if part
    )


def sorted_atoms(atoms: Iterable[str]) -> list[str]:
    return sorted(atoms, key=atom_key)


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class SplitRing:
    p: int
    atoms: tuple[str, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidRing(f"{self.p} is not prime", p=self.p)
        if not self.atoms:
            raise InvalidRing("a split ring needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise InvalidRing("duplicate atom names", atoms=self.atoms)

    @property
    def n(self):
        return len(self.atoms)

    @cached_property
    def positions(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.atoms)}

    def index(self, atom: str) -> int:
        try:
            return self.positions[atom]
        except KeyError:
            raise OutsideDomain(f"unknown atom {atom}", atom=atom) from None

    def ideal(self, atoms: Iterable[str]) -> Ideal:
        atoms = frozenset(atoms)
        for a in atoms:
            self.index(a)
        return Ideal(atoms)

    def whole(self) -> Ideal:
        return Ideal(frozenset(self.atoms))

    def zero(self) -> RingElement:
        return RingElement(self, (0,) * self.n)

    def one(self) -> RingElement:
        return idem(self, self.whole())

    def basis(self, atom: str) -> RingElement:
        return self.element({atom: 1})

    def element(self, coeffs: Mapping[str, int]) -> RingElement:
        v = [0] * self.n
        for a, c in coeffs.items():
            v[self.index(a)] = c % self.p
        return RingElement(self, tuple(v))

    def from_vector(self, v) -> RingElement:
        return RingElement(self, tuple(int(c) % self.p for c in v))


@dataclass(frozen=True)
class RingElement:
    ring: SplitRing
    coeffs: tuple[int, ...]

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(a for a, c in zip(self.ring.atoms, self.coeffs) if c)

    def coeff(self, atom: str) -> int:
        return self.coeffs[self.ring.index(atom)]

    def is_zero(self):
        return not any(self.coeffs)

    def _zip(self, other: RingElement, op) -> RingElement:
        assert self.ring == other.ring
        p = self.ring.p
        return RingElement(
            self.ring, tuple(op(a, b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __add__(self, other: RingElement):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: RingElement):
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, other: RingElement | int):
        if isinstance(other, int):
            return self.ring.from_vector(c * other for c in self.coeffs)
        return self._zip(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return self.ring.from_vector(-c for c in self.coeffs)

    def __str__(self):
        terms = []
        for a, c in zip(self.ring.atoms, self.coeffs):
            if c:
                terms.append(a if c == 1 else f"{c}{a}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Ideal:
    atoms: frozenset[str]

    @classmethod
    def of(cls, *atoms: str) -> Ideal:
        return cls(frozenset(atoms))

    def __le__(self, other: Ideal):
        return self.atoms <= other.atoms

    def __lt__(self, other: Ideal):
        return self.atoms < other.atoms

    def __and__(self, other: Ideal):
        return Ideal(self.atoms & other.atoms)

    def __or__(self, other: Ideal):
        return Ideal(self.atoms | other.atoms)

    def __contains__(self, atom: str):
        return atom in self.atoms

    def __iter__(self):
        return iter(sorted_atoms(self.atoms))

    def __len__(self):
        return len(self.atoms)

    def __str__(self):
        return "[" + ", ".join(self) + "]"


EMPTY = Ideal(frozenset())


@dataclass(frozen=True)
class PartialRingIso:
    """Ring isomorphism between two ideals, induced by an atom bijection."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        sources = [a for a, _ in self.pairs]
        targets = [b for _, b in self.pairs]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise NotAHomomorphism("atom map is not a bijection", pairs=self.pairs)

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> PartialRingIso:
        return cls(tuple(sorted(mapping.items(), key=lambda kv: atom_key(kv[0]))))

    @classmethod
    def identity(cls, ideal: Ideal) -> PartialRingIso:
        return cls.of({a: a for a in ideal.atoms})

    @cached_property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    @property
    def dom(self) -> Ideal:
        return Ideal(frozenset(self.mapping))

    @property
    def cod(self) -> Ideal:
        return Ideal(frozenset(self.mapping.values()))

    def __call__(self, atom: str) -> str:
        try:
            return self.mapping[atom]
        except KeyError:
            raise OutsideDomain(f"{atom} outside domain", atom=atom) from None

    def inverse(self) -> PartialRingIso:
        return PartialRingIso.of({b: a for a, b in self.pairs})

    def is_identity(self):
        return all(a == b for a, b in self.pairs)

    def extends(self, other: PartialRingIso) -> bool:
        """True iff `self` agrees with `other` on all of dom(other)."""
        return all(self.mapping.get(a) == b for a, b in other.pairs)

    def __str__(self):
        if self.is_identity():
            return f"id{self.dom}"
        return "[" + ", ".join(f"{a}->{b}" for a, b in self.pairs) + "]"


def apply(f: PartialRingIso, a: RingElement) -> RingElement:
    outside = a.support - f.dom.atoms
    if outside:
        atom = sorted_atoms(outside)[0]
        raise OutsideDomain(f"{atom} outside domain {f.dom}", atom=atom)
    return a.ring.element({f(x): a.coeff(x) for x in a.support})


def compose_partial(f2: PartialRingIso, f1: PartialRingIso) -> PartialRingIso:
    """f2 after f1, defined on f1^-1(dom f2 & cod f1)."""
    return PartialRingIso.of(
        {a: f2.mapping[b] for a, b in f1.pairs if b in f2.mapping}
    )


def intersect(i: Ideal, j: Ideal) -> Ideal:
    return i & j


def image(f: PartialRingIso, i: Ideal) -> Ideal:
    if not i <= f.dom:
        raise NotSubIdeal(f"{i} is not inside {f.dom}", atoms=i.atoms - f.dom.atoms)
    return Ideal(frozenset(f(a) for a in i.atoms))


def preimage(f: PartialRingIso, i: Ideal) -> Ideal:
    return Ideal(frozenset(a for a, b in f.pairs if b in i))


def restrict(f: PartialRingIso, i: Ideal) -> PartialRingIso:
    if not i <= f.dom:
        raise NotSubIdeal(f"{i} is not inside {f.dom}", atoms=i.atoms - f.dom.atoms)
    return PartialRingIso.of({a: f(a) for a in i.atoms})


def idem(ring: SplitRing, i: Ideal) -> RingElement:
    """The unit 1_I of the ideal, a central idempotent of the ring."""
    return ring.element({a: 1 for a in i.atoms})


def project(a: RingElement, i: Ideal) -> RingElement:
    return a * idem(a.ring, i)


@dataclass(frozen=True)
class RingHom:
    """Ring map from one ideal to another.

    Each source atom goes to the idempotent sum of its image atoms; images of
    distinct atoms are disjoint, an empty image sends the atom to zero.
    """

    source: Ideal
    target: Ideal
    images: tuple[tuple[str, frozenset[str]], ...]

    def __post_init__(self):
        seen: set[str] = set()
        for a, bs in self.images:
            if a not in self.source:
                raise NotAHomomorphism(f"{a} is not in the source", atom=a)
            if not bs <= self.target.atoms:
                raise NotAHomomorphism(f"image of {a} leaves the target", atom=a)
            if seen & bs:
                raise NotAHomomorphism(f"image of {a} overlaps", atom=a)
            seen |= bs

    @classmethod
    def of(cls, source: Ideal, target: Ideal, images: Mapping[str, Iterable[str]]):
        return cls(
            source,
            target,
            tuple(
                (a, frozenset(images.get(a, ()))) for a in source
            ),
        )

    @classmethod
    def identity(cls, i: Ideal) -> RingHom:
        return cls.inclusion(i, i)

    @classmethod
    def inclusion(cls, i: Ideal, j: Ideal) -> RingHom:
        return cls.of(i, j, {a: (a,) for a in i})

    @classmethod
    def zero(cls, i: Ideal, j: Ideal) -> RingHom:
        return cls.of(i, j, {})

    @classmethod
    def from_iso(cls, f: PartialRingIso, target: Ideal | None = None) -> RingHom:
        return cls.of(f.dom, target or f.cod, {a: (b,) for a, b in f.pairs})

    @cached_property
    def mapping(self) -> dict[str, frozenset[str]]:
        return dict(self.images)

    def on_atom(self, atom: str) -> frozenset[str]:
        try:
            return self.mapping[atom]
        except KeyError:
            raise OutsideDomain(f"{atom} outside {self.source}", atom=atom) from None

    def image(self, i: Ideal) -> Ideal:
        return Ideal(frozenset().union(*(self.on_atom(a) for a in i.atoms)))

    def apply(self, a: RingElement) -> RingElement:
        coeffs: dict[str, int] = {}
        for x in a.support:
            for y in self.on_atom(x):
                coeffs[y] = a.coeff(x)
        return a.ring.element(coeffs)

    def compose(self, first: RingHom) -> RingHom:
        """self after first."""
        return RingHom.of(
            first.source,
            self.target,
            {
                a: frozenset().union(*(self.on_atom(b) for b in bs))
                for a, bs in first.images
            },
        )

    def is_iso(self):
        return (
            all(len(bs) == 1 for _, bs in self.images)
            and self.image(self.source) == self.target
        )

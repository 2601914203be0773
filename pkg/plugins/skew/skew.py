"""Partial skew groupoid rings A *_theta G as explicit F_p-algebras."""

from __future__ import annotations
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable
import logging
import numpy as np
from framework.errors import MathError
from framework.report import Report, Violation
from plugins.partial_action.action import PartialAction, is_unital, restrict_to_isotropy
from plugins.split_ring.linalg import mod_p, rank_mod
from plugins.split_ring.ring import RingElement

logger = logging.getLogger(__name__)

DENSE_LIMIT = 128


class NotUnital(MathError):
    pass


class RingNotDirectSum(MathError):
    pass


def is_direct_sum(theta: PartialAction) -> bool:
    """A = sum of the object ideals, pairwise disjoint."""
    seen: set[str] = set()
    for x in theta.groupoid.objects:
        atoms = theta.object_ideal(x).atoms
        if seen & atoms:
            return False
        seen |= atoms
    return seen == set(theta.ring.atoms)


@dataclass
class SkewAlgebra:
    theta: PartialAction
    basis: tuple[tuple[str, str], ...]
    constants: np.ndarray | None = field(default=None, repr=False)

    @cached_property
    def index(self) -> dict[tuple[str, str], int]:
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def p(self) -> int:
        return self.theta.ring.p

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_product(self, i: int, j: int) -> int | None:
        """Index of b_i b_j when it is a basis element, None when zero."""
        (g, a), (h, b) = self.basis[i], self.basis[j]
        G = self.theta.groupoid
        gh = G.compose(g, h)
        if gh is None:
            return None
        f = self.theta.alpha(g)
        if b not in f.dom or f(b) != a:
            return None
        return self.index[(gh, a)]

    def structure_constants(self) -> np.ndarray:
        if self.constants is not None:
            return self.constants
        T = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for i in range(self.dim):
            for j in range(self.dim):
                k = self.basis_product(i, j)
                if k is not None:
                    T[i, j, k] = 1
        return T

    def with_constant(self, i: int, j: int, k: int, value: int) -> SkewAlgebra:
        T = self.structure_constants().copy()
        T[i, j, k] = value % self.p
        return SkewAlgebra(self.theta, self.basis, T)

    def element(self, coeffs: dict[tuple[str, str], int]) -> SkewElement:
        v = np.zeros(self.dim, dtype=np.int64)
        for b, c in coeffs.items():
            v[self.index[b]] = c
        return SkewElement(self, mod_p(v, self.p))

    def basis_element(self, i: int) -> SkewElement:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return SkewElement(self, v)

    def from_ring(self, a: RingElement, g: str) -> SkewElement:
        """a delta_g, with a already inside B_g."""
        return self.element({(g, x): a.coeff(x) for x in a.support})

    def zero(self) -> SkewElement:
        return SkewElement(self, np.zeros(self.dim, dtype=np.int64))

    def one(self) -> SkewElement:
        G = self.theta.groupoid
        return self.element(
            {
                (G.identity[y], a): 1
                for y in G.objects
                for a in self.theta.object_ideal(y)
            }
        )

    def idempotent(self, x: str) -> SkewElement:
        """1_x delta_x."""
        e = self.theta.groupoid.identity[x]
        return self.element({(e, a): 1 for a in self.theta.object_ideal(x)})

    @property
    def is_dense(self) -> bool:
        return self.constants is not None or self.dim <= DENSE_LIMIT

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if self.is_dense:
            T = self.dense
            return mod_p(np.einsum("i,j,ijk->k", u, v, T), self.p)
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.flatnonzero(u):
            for j in np.flatnonzero(v):
                k = self.basis_product(int(i), int(j))
                if k is not None:
                    out[k] += u[i] * v[j]
        return mod_p(out, self.p)

    @cached_property
    def dense(self) -> np.ndarray:
        return self.structure_constants()


@dataclass(frozen=True, eq=False)
class SkewElement:
    algebra: SkewAlgebra
    coeffs: np.ndarray

    def __mul__(self, other: SkewElement) -> SkewElement:
        return SkewElement(self.algebra, self.algebra.multiply(self.coeffs, other.coeffs))

    def __add__(self, other: SkewElement) -> SkewElement:
        return SkewElement(self.algebra, mod_p(self.coeffs + other.coeffs, self.algebra.p))

    def __eq__(self, other):
        return (
            isinstance(other, SkewElement)
            and self.algebra.basis == other.algebra.basis
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def is_zero(self):
        return not np.any(self.coeffs)

    def support(self) -> list[tuple[str, str]]:
        return [self.algebra.basis[i] for i in np.flatnonzero(self.coeffs)]

    def __str__(self):
        terms = [
            f"{'' if c == 1 else c}{a}d[{g}]"
            for (g, a), c in zip(self.algebra.basis, self.coeffs)
            if c
        ]
        return " + ".join(terms) if terms else "0"


def build_skew(theta: PartialAction, require_direct_sum: bool = True) -> SkewAlgebra:
    if not is_unital(theta):
        raise NotUnital("the action is not unital")
    if require_direct_sum and not is_direct_sum(theta):
        raise RingNotDirectSum("the ring is not the direct sum of the object ideals")
    basis = tuple((g, a) for g in theta.groupoid.morphisms for a in theta.A(g))
    R = SkewAlgebra(theta, basis)
    logger.debug("skew algebra of dimension %d", R.dim)
    return R


def unit_check(R: SkewAlgebra) -> Report:
    report = Report("skew unit")
    one = R.one()

    def witnesses():
        for i, b in enumerate(R.basis):
            e = R.basis_element(i)
            if one * e != e or e * one != e:
                yield Violation("unit", (b[0],), b[1])

    report.collect("unit", witnesses())
    return report


def assoc_check(R: SkewAlgebra, all_witnesses: bool = False) -> Report:
    """Associativity on every basis triple."""
    report = Report("skew associativity", all_witnesses)
    p = R.p

    def dense_triples():
        T = R.dense
        for i in range(R.dim):
            left = mod_p(np.einsum("jm,mkn->jkn", T[i], T), p)
            right = mod_p(np.einsum("jkm,mn->jkn", T, T[i]), p)
            for j, k, _ in np.argwhere(left != right):
                yield i, int(j), int(k)

    def lazy_triples():
        for i in range(R.dim):
            for j in range(R.dim):
                ij = R.basis_product(i, j)
                for k in range(R.dim):
                    jk = R.basis_product(j, k)
                    left = None if ij is None else R.basis_product(ij, k)
                    right = None if jk is None else R.basis_product(i, jk)
                    if left != right:
                        yield i, j, k

    def witnesses():
        for i, j, k in dense_triples() if R.is_dense else lazy_triples():
            yield Violation(
                "associativity",
                (R.basis[i][0], R.basis[j][0], R.basis[k][0]),
                R.basis[i][1],
                f"basis triple ({i}, {j}, {k})",
            )
            if not report.all_witnesses:
                return

    report.collect("associativity", witnesses())
    return report


@dataclass(frozen=True)
class CornerModule:
    kind: str
    indices: tuple[int, ...]

    @property
    def dim(self):
        return len(self.indices)


@dataclass(frozen=True)
class Corners:
    U: CornerModule
    V: CornerModule
    S: CornerModule


def corners(R: SkewAlgebra, x: str) -> Corners:
    """U = R 1_S (s(g) = x), V = 1_S R (t(g) = x), S' = 1_S R 1_S."""
    G = R.theta.groupoid
    G.check_object(x)
    U = tuple(i for i, (g, _) in enumerate(R.basis) if G.src[g] == x)
    V = tuple(i for i, (g, _) in enumerate(R.basis) if G.tgt[g] == x)
    S = tuple(i for i in U if i in set(V))
    return Corners(CornerModule("U", U), CornerModule("V", V), CornerModule("S", S))


def _span_rank(R: SkewAlgebra, vectors: Iterable[np.ndarray]) -> int:
    rows = [v for v in vectors if np.any(v)]
    if not rows:
        return 0
    return rank_mod(np.vstack(rows), R.p)


def corner_check(R: SkewAlgebra, x: str) -> Report:
    """Corner identities: r 1_S projects onto U, S' matches the skew ring of the isotropy action, R 1_S R = R."""
    c = corners(R, x)
    one_s = R.idempotent(x)
    report = Report("skew corners")

    def projection():
        for i, (g, a) in enumerate(R.basis):
            r = R.basis_element(i)
            expected = r if i in c.U.indices else R.zero()
            if r * one_s != expected:
                yield Violation("corner-projection", (g,), a)

    def closure():
        U, V, S = set(c.U.indices), set(c.V.indices), set(c.S.indices)
        for i in range(R.dim):
            for j in range(R.dim):
                k = R.basis_product(i, j)
                if k is None:
                    continue
                if (j in U and k not in U) or (i in V and k not in V):
                    yield Violation("corner-closure", (R.basis[i][0], R.basis[j][0]))

    report.collect("corner-projection", projection())
    report.collect("corner-closure", closure())

    S_ring = build_skew(restrict_to_isotropy(R.theta, x), require_direct_sum=False)
    sub = [R.basis[i] for i in c.S.indices]
    same = tuple(sub) == S_ring.basis
    if same and R.is_dense:
        block = R.dense[np.ix_(c.S.indices, c.S.indices, c.S.indices)]
        same = np.array_equal(block, S_ring.structure_constants())
    elif same:
        at = {i: n for n, i in enumerate(c.S.indices)}
        same = all(
            at.get(R.basis_product(i, j)) == S_ring.basis_product(at[i], at[j])
            for i in c.S.indices
            for j in c.S.indices
        )
    report.expect("corner-isotropy-match", bool(same), "1_S R 1_S differs from the isotropy skew ring")

    products = (
        (R.basis_element(i) * one_s * R.basis_element(j)).coeffs
        for i in range(R.dim)
        for j in range(R.dim)
    )
    report.expect("corner-generates", _span_rank(R, products) == R.dim, "R 1_S R != R")
    report.facts |= {"dim-R": R.dim, "dim-U": c.U.dim, "dim-V": c.V.dim, "dim-S": c.S.dim}
    return report


def skew_morita_check(R: SkewAlgebra, x: str) -> Report:
    """The Morita context (R, S, U, V, mu, nu) given by the corner 1_S R 1_S."""
    c = corners(R, x)
    report = Report("skew morita")
    b = [R.basis_element(i) for i in range(R.dim)]

    def product(i: int, j: int) -> np.ndarray:
        return (b[i] * b[j]).coeffs

    def context_assoc():
        # mu(u v) u' = u nu(v u') and nu(v u) v' = v mu(u v')
        for first, second, third in ((c.U, c.V, c.U), (c.V, c.U, c.V)):
            for i in first.indices:
                for j in second.indices:
                    ij = product(i, j)
                    for k in third.indices:
                        left = R.multiply(ij, b[k].coeffs)
                        right = R.multiply(b[i].coeffs, product(j, k))
                        if not np.array_equal(left, right):
                            yield Violation(
                                "context-associativity",
                                (R.basis[i][0], R.basis[j][0], R.basis[k][0]),
                            )
                            return

    report.collect("context-associativity", context_assoc())
    mu_rank = _span_rank(R, (product(i, j) for i in c.U.indices for j in c.V.indices))
    nu_rank = _span_rank(R, (product(j, i) for j in c.V.indices for i in c.U.indices))
    mu_onto = mu_rank == R.dim
    nu_onto = nu_rank == c.S.dim
    report.facts |= {
        "dim-R": R.dim,
        "dim-S": c.S.dim,
        "mu-onto": mu_onto,
        "nu-onto": nu_onto,
        "strict": mu_onto and nu_onto,
    }
    return report

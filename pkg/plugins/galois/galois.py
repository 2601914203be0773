"""Invariants, trace maps, the (A^theta, A *_theta G) Morita context and Galois coordinates.

Everything is linear algebra over GF(p) on the split model: an element of A
is a coefficient vector over the atoms, theta_g acts by moving coordinates.
Surjectivity questions reduce to span comparisons of images of basis pairs.
"""

from __future__ import annotations
from dataclasses import dataclass
from itertools import product
import logging
import numpy as np
from framework.errors import InternalInconsistency, MathError
from framework.report import Report, Violation
from plugins.datum.datum import Datum, ext, res
from plugins.groupoid.groupoid import Transversal, corner
from plugins.partial_action.action import (
    PartialAction,
    is_partial_action,
    is_unital,
    restrict_to_isotropy,
)
from plugins.skew.skew import SkewAlgebra, SkewElement, build_skew, is_direct_sum
from plugins.split_ring.linalg import mod_p, nullspace_mod, rank_mod, row_basis, same_span, solve_mod
from plugins.split_ring.ring import RingElement, apply, idem, image, project, sorted_atoms

logger = logging.getLogger(__name__)


class HypothesesNotMet(MathError):
    pass


class NotInvariant(MathError):
    pass


def standing_hypotheses(theta: PartialAction, tau: Transversal | None = None) -> Datum:
    """Check that theta is Ext of a GD datum over a connected groupoid, on A = sum of I_y.

    Returns that datum.
    """
    G = theta.groupoid
    if not G.is_connected():
        raise HypothesesNotMet("groupoid is not connected", reason="connected")
    if not is_partial_action(theta):
        raise HypothesesNotMet("not a partial action", reason="partial-action")
    if not is_unital(theta):
        raise HypothesesNotMet("action is not unital", reason="unital")
    if not is_direct_sum(theta):
        raise HypothesesNotMet("A is not the direct sum of the I_y", reason="direct-sum")
    tau = tau or G.canonical_transversal()
    d = res(theta, tau)
    if not d.in_gd():
        raise HypothesesNotMet("restricted datum is not in D_G", reason="gd")
    if ext(d) != theta:
        raise HypothesesNotMet("action is not Ext of its restriction", reason="recoverable")
    return d


def _carrier_indices(theta: PartialAction) -> list[int]:
    ring = theta.ring
    carrier = theta.carrier()
    return [i for i, a in enumerate(ring.atoms) if a in carrier]


def action_matrix(theta: PartialAction, g: str) -> np.ndarray:
    """Matrix of a -> theta_g(a 1_g^-1)."""
    ring = theta.ring
    M = np.zeros((ring.n, ring.n), dtype=np.int64)
    for a, b in theta.alpha(g).pairs:
        M[ring.index(b), ring.index(a)] = 1
    return M


def trace_matrix(theta: PartialAction) -> np.ndarray:
    return mod_p(sum(action_matrix(theta, g) for g in theta.groupoid.morphisms), theta.ring.p)


def trace(theta: PartialAction, a: RingElement) -> RingElement:
    """t(a) = sum over g of theta_g(a 1_g^-1)."""
    result = theta.ring.zero()
    for g in theta.groupoid.morphisms:
        f = theta.alpha(g)
        result = result + apply(f, project(a, f.dom))
    return result


@dataclass(frozen=True, eq=False)
class InvariantBasis:
    theta: PartialAction
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def elements(self) -> list[RingElement]:
        return [self.theta.ring.from_vector(v) for v in self.vectors]

    def contains(self, a: RingElement) -> bool:
        carrier = self.theta.carrier()
        if a.support - carrier.atoms:
            return False
        if not self.dim:
            return a.is_zero()
        p = self.theta.ring.p
        return rank_mod(np.vstack([self.vectors, a.vector]), p) == self.dim

    def __str__(self):
        return "{" + ", ".join(map(str, self.elements)) + "}"


def invariants(theta: PartialAction) -> InvariantBasis:
    """Kernel of a -> theta_g(a 1_g^-1) - a 1_g over all g, on the carrier."""
    ring = theta.ring
    cols = _carrier_indices(theta)
    blocks = []
    for g in theta.groupoid.morphisms:
        M = action_matrix(theta, g)
        for a in theta.A(g):
            M[ring.index(a), ring.index(a)] -= 1
        blocks.append(M)
    stacked = np.vstack(blocks)[:, cols]
    kernel = nullspace_mod(stacked, ring.p)
    full = np.zeros((len(kernel), ring.n), dtype=np.int64)
    full[:, cols] = kernel
    return InvariantBasis(theta, full)


def _trace_image(theta: PartialAction) -> np.ndarray:
    T = trace_matrix(theta)
    return row_basis(T[:, _carrier_indices(theta)].T, theta.ring.p)


def trace_onto(theta: PartialAction) -> bool:
    inv = invariants(theta)
    return same_span(_trace_image(theta), inv.vectors, theta.ring.p)


def group_trace_onto(local: PartialAction) -> bool:
    if len(local.groupoid.objects) != 1:
        raise HypothesesNotMet("group trace needs a one-object groupoid", reason="group")
    return trace_onto(local)


def reconstruct(d: Datum, b_x: RingElement) -> RingElement:
    """sum over y of gamma_tau_y(b_x)."""
    result = d.ring.zero()
    for y in d.groupoid.objects:
        result = result + apply(d.link(y), b_x)
    return result


def invariant_decompose(theta: PartialAction, d: Datum, b: RingElement) -> RingElement:
    """The component b_x of an invariant b, with b = sum over y of gamma_tau_y(b_x)."""
    if not invariants(theta).contains(b):
        raise NotInvariant(f"{b} is not invariant", element=str(b))
    b_x = project(b, d.I(d.base))
    if reconstruct(d, b_x) != b:
        raise InternalInconsistency(
            f"{b} is invariant but does not come from its base component",
            element=str(b),
        )
    return b_x


def decomposition_check(theta: PartialAction, d: Datum) -> Report:
    """Invariants of A and of B_x correspond under b -> b_x."""
    report = Report("invariant decomposition")
    local_inv = invariants(d.local)
    inv = invariants(theta)

    def down():
        for b in inv.elements:
            b_x = invariant_decompose(theta, d, b)
            if not local_inv.contains(b_x):
                yield Violation("decompose", (), None, f"{b_x} is not group invariant")

    def up():
        for b_x in local_inv.elements:
            b = reconstruct(d, b_x)
            if not inv.contains(b):
                yield Violation("reconstruct", (), None, f"{b} is not invariant")

    report.collect("decompose", down())
    report.collect("reconstruct", up())
    report.facts |= {"dim-invariants": inv.dim, "dim-group-invariants": local_inv.dim}
    return report


def prop_trace_equiv(theta: PartialAction, tau: Transversal | None = None) -> Report:
    """Both trace transport identities on every basis input, then the trace iff."""
    d = standing_hypotheses(theta, tau)
    G, x = d.groupoid, d.base
    ring = theta.ring
    local = d.local
    report = Report("trace equivalence")

    def group_side(b_x: RingElement) -> RingElement:
        t_x = trace(local, b_x)
        return reconstruct(d, t_x)

    def transport():
        for b in d.I(x):
            b_x = ring.basis(b)
            expected = group_side(b_x)
            for z in G.objects:
                got = trace(theta, apply(d.link(z), b_x))
                if got != expected:
                    yield Violation("trace-transport", (d.transversal[z],), b, f"{got} != {expected}")

    def decomposition():
        for a in sorted_atoms(theta.carrier().atoms):
            e = ring.basis(a)
            c_x = ring.zero()
            for z in G.objects:
                c_x = c_x + apply(d.link(z).inverse(), project(e, d.I(z)))
            got = trace(theta, e)
            expected = group_side(c_x)
            if got != expected:
                yield Violation("trace-decomposition", (), a, f"{got} != {expected}")

    report.collect("trace-transport", transport())
    report.collect("trace-decomposition", decomposition())
    onto, group_onto = trace_onto(theta), group_trace_onto(local)
    report.facts |= {"trace-onto": onto, "group-trace-onto": group_onto}
    report.expect("trace-iff", onto == group_onto, "trace maps disagree on surjectivity")
    return report


def trace_report(theta: PartialAction) -> Report:
    report = Report("trace")
    inv = invariants(theta)

    def landing():
        for a in sorted_atoms(theta.carrier().atoms):
            t = trace(theta, theta.ring.basis(a))
            if not inv.contains(t):
                yield Violation("trace-invariant", (), a, f"t({a}) = {t}")

    report.collect("trace-invariant", landing())
    for a in sorted_atoms(theta.carrier().atoms):
        report.facts[f"t({a})"] = str(trace(theta, theta.ring.basis(a)))
    report.facts["onto"] = trace_onto(theta)
    return report


def gamma_map(theta: PartialAction, a: RingElement, b: RingElement) -> RingElement:
    """a (x) b -> t(ab)."""
    return trace(theta, a * b)


def gamma_prime(
    theta: PartialAction, a: RingElement, b: RingElement, R: SkewAlgebra | None = None
) -> SkewElement:
    """a (x) b -> sum over g of a theta_g(b 1_g^-1) delta_g."""
    R = R or build_skew(theta, require_direct_sum=False)
    coeffs = {}
    for g in theta.groupoid.morphisms:
        f = theta.alpha(g)
        moved = a * apply(f, project(b, f.dom))
        for c in moved.support:
            coeffs[(g, c)] = moved.coeff(c)
    return R.element(coeffs)


def _pairs(theta: PartialAction) -> list[tuple[str, str]]:
    atoms = sorted_atoms(theta.carrier().atoms)
    return list(product(atoms, atoms))


def _gamma_prime_matrix(theta: PartialAction, R: SkewAlgebra) -> tuple[np.ndarray, list[tuple[str, str]]]:
    """Columns are gamma_prime(e_i, e_j) over carrier atom pairs."""
    ring = theta.ring
    pairs = _pairs(theta)
    cols = [gamma_prime(theta, ring.basis(i), ring.basis(j), R).coeffs for i, j in pairs]
    if not cols:
        return np.zeros((R.dim, 0), dtype=np.int64), pairs
    return np.stack(cols, axis=1), pairs


def gamma_onto(theta: PartialAction) -> bool:
    ring = theta.ring
    images = [gamma_map(theta, ring.basis(i), ring.basis(j)).vector for i, j in _pairs(theta)]
    rows = np.vstack(images) if images else np.zeros((0, ring.n), dtype=np.int64)
    return same_span(rows, invariants(theta).vectors, ring.p)


def gamma_prime_onto(theta: PartialAction, R: SkewAlgebra | None = None) -> bool:
    R = R or build_skew(theta, require_direct_sum=False)
    M, _ = _gamma_prime_matrix(theta, R)
    return rank_mod(M, R.p) == R.dim


def morita_strictness(theta: PartialAction, tau: Transversal | None = None) -> Report:
    """Strictness of the groupoid-level and group-level invariant contexts."""
    d = standing_hypotheses(theta, tau)
    report = Report("morita strictness")
    g_onto, gp_onto = gamma_onto(theta), gamma_prime_onto(theta)
    l_onto, lp_onto = gamma_onto(d.local), gamma_prime_onto(d.local)
    report.facts |= {
        "gamma-onto": g_onto,
        "gamma-prime-onto": gp_onto,
        "strict": g_onto and gp_onto,
        "group-gamma-onto": l_onto,
        "group-gamma-prime-onto": lp_onto,
        "group-strict": l_onto and lp_onto,
    }
    report.expect("gamma-vs-trace", g_onto == trace_onto(theta), "Gamma onto differs from trace onto")
    report.expect(
        "group-gamma-vs-trace", l_onto == trace_onto(d.local), "Gamma_x onto differs from trace onto"
    )
    report.expect(
        "verdicts-agree",
        (g_onto and gp_onto) == (l_onto and lp_onto),
        "groupoid and group contexts disagree on strictness",
    )
    return report


@dataclass(frozen=True)
class GaloisCertificate:
    pairs: tuple[tuple[RingElement, RingElement], ...]

    def to_list(self) -> list[list[str]]:
        return [[str(a), str(b)] for a, b in self.pairs]

    def coefficients(self) -> list[list[list[int]]]:
        """Coefficient vectors, for re-verification outside this package."""
        return [[list(a.coeffs), list(b.coeffs)] for a, b in self.pairs]


def galois_coordinates(theta: PartialAction, R: SkewAlgebra | None = None) -> GaloisCertificate | None:
    """Solve sum of c_ij gamma_prime(e_i, e_j) = 1_R; None when 1_R is out of reach."""
    R = R or build_skew(theta, require_direct_sum=False)
    M, pairs = _gamma_prime_matrix(theta, R)
    c = solve_mod(M, R.one().coeffs, R.p)
    if c is None:
        return None
    ring = theta.ring
    grouped: dict[str, RingElement] = {}
    for (i, j), cij in zip(pairs, c):
        if cij:
            grouped[j] = grouped.get(j, ring.zero()) + ring.basis(i) * int(cij)
    return GaloisCertificate(
        tuple((a, ring.basis(j)) for j, a in grouped.items() if not a.is_zero())
    )


def verify_certificate(theta: PartialAction, cert: GaloisCertificate) -> Report:
    """sum a_i theta_g(b_i 1_g^-1) is 1_y at the identity of y and 0 elsewhere."""
    G = theta.groupoid
    ring = theta.ring
    report = Report("galois coordinates")

    def witnesses():
        for g in G.morphisms:
            f = theta.alpha(g)
            lhs = ring.zero()
            for a, b in cert.pairs:
                lhs = lhs + a * apply(f, project(b, f.dom))
            if G.is_identity(g):
                expected = idem(ring, theta.object_ideal(G.src[g]))
            else:
                expected = ring.zero()
            if lhs != expected:
                yield Violation("galois-coordinates", (g,), None, f"{lhs} != {expected}")

    report.collect("galois-coordinates", witnesses())
    return report


@dataclass(frozen=True)
class EquivalenceReport:
    galois_and_trace: bool
    groupoid_strict: bool
    group_strict: bool
    group_galois_and_trace: bool

    @property
    def legs(self) -> tuple[bool, bool, bool, bool]:
        return (
            self.galois_and_trace,
            self.groupoid_strict,
            self.group_strict,
            self.group_galois_and_trace,
        )

    @property
    def agree(self) -> bool:
        return len(set(self.legs)) == 1

    def to_report(self) -> Report:
        report = Report("equivalence")
        report.facts |= {
            "galois-and-trace-onto": self.galois_and_trace,
            "groupoid-context-strict": self.groupoid_strict,
            "group-context-strict": self.group_strict,
            "group-galois-and-trace-onto": self.group_galois_and_trace,
            "agree": self.agree,
        }
        report.expect("legs-agree", self.agree, "the four statements disagree")
        return report


def equivalence_report(theta: PartialAction, tau: Transversal | None = None) -> EquivalenceReport:
    """Evaluate the four equivalent statements separately and require them to agree."""
    d = standing_hypotheses(theta, tau)
    local = d.local
    R = build_skew(theta)
    S = build_skew(local, require_direct_sum=False)
    result = EquivalenceReport(
        galois_coordinates(theta, R) is not None and trace_onto(theta),
        gamma_onto(theta) and gamma_prime_onto(theta, R),
        gamma_onto(local) and gamma_prime_onto(local, S),
        galois_coordinates(local, S) is not None and group_trace_onto(local),
    )
    logger.debug("equivalence legs %s", result.legs)
    if not result.agree:
        raise InternalInconsistency("the four equivalent statements disagree", legs=result.legs)
    return result


def equivalence_across_transversals(theta: PartialAction) -> Report:
    """The equivalence verdict for every base and transversal."""
    report = Report("equivalence across transversals")
    verdicts: dict[str, bool | str] = {}
    for tau in theta.groupoid.all_transversals():
        try:
            verdicts[str(tau)] = equivalence_report(theta, tau).legs[0]
        except HypothesesNotMet as e:
            logger.debug("transversal %s skipped: %s", tau, e)
            verdicts[str(tau)] = f"hypotheses-not-met: {e.witness.get('reason')}"
    decided = {v for v in verdicts.values() if isinstance(v, bool)}
    report.facts["verdicts"] = verdicts
    report.facts["skipped"] = sum(isinstance(v, str) for v in verdicts.values())
    report.expect(
        "transversal-independent",
        len(decided) <= 1,
        "verdict depends on the transversal",
    )
    return report


def unit_idempotents(theta: PartialAction, d: Datum) -> dict[str, RingElement]:
    """1_g = gamma_tau_t(g)(1_(g_x)) for every g."""
    G = d.groupoid
    result = {}
    for g in G.morphisms:
        gx = corner(G, g, d.transversal)
        result[g] = apply(d.link(G.tgt[g]), idem(d.ring, d.local.A(gx)))
    return result


def ext_identities(theta: PartialAction, tau: Transversal | None = None) -> Report:
    """Ranges, units and maps of theta all transport from the base."""
    d = standing_hypotheses(theta, tau)
    G = d.groupoid
    units = unit_idempotents(theta, d)
    report = Report("ext identities")

    def unit_witnesses():
        for g in G.morphisms:
            if units[g] != idem(theta.ring, theta.A(g)):
                yield Violation("unit-idempotents", (g,), None, f"{units[g]}")

    def range_witnesses():
        for g in G.morphisms:
            gx = corner(G, g, d.transversal)
            expected = image(d.link(G.tgt[g]), d.local.A(gx))
            for a in sorted_atoms(expected.atoms ^ theta.A(g).atoms):
                yield Violation("range-transport", (g,), a)

    def map_witnesses():
        for g in G.morphisms:
            gx = corner(G, g, d.transversal)
            f = d.local_iso(gx)
            for a in f.dom:
                left = theta.alpha(g).mapping.get(d.link(G.src[g])(a))
                right = d.link(G.tgt[g])(f(a))
                if left != right:
                    yield Violation("map-transport", (g,), a, f"{left} != {right}")

    report.collect("unit-idempotents", unit_witnesses())
    report.collect("range-transport", range_witnesses())
    report.collect("map-transport", map_witnesses())
    return report

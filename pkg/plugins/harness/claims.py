"""Documented properties of the built-in fixtures, executed by `all-fixtures`."""

from __future__ import annotations
from dataclasses import dataclass
from typing import Callable
import logging
from framework.errors import AlgebraError
from framework.report import Report, Violation
from plugins.datum.datum import check_adjunction, ext, res, transport_datum
from plugins.galois.galois import (
    equivalence_report,
    galois_coordinates,
    invariant_decompose,
    invariants,
    trace,
    trace_onto,
    verify_certificate,
)
from plugins.globalization.globalization import build_globalization, globalize_group, verify_globalization
from plugins.groupoid.groupoid import Transversal, psi_split
from plugins.partial_action.action import leq, recoverability_search, verify_partial_action
from plugins.skew.skew import assoc_check, build_skew, corners, skew_morita_check, unit_check
from plugins.split_ring.ring import PartialRingIso
from .registry import FixtureRegistry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Claim:
    fixture: str
    text: str
    holds: Callable[[FixtureRegistry], bool]


def _el(reg: FixtureRegistry, fixture: str, coeffs: dict[str, int]):
    return reg.load(fixture).require_ring().element(coeffs)


def _hex_claims():
    hex_ = lambda r: r.load("FX-HEX").require_groupoid()
    yield Claim("FX-HEX", "eight morphisms, connected", lambda r: len(hex_(r).morphisms) == 8 and hex_(r).is_connected())
    yield Claim("FX-HEX", "isotropy at x is {x, g}", lambda r: hex_(r).isotropy("x").morphisms == ("x", "g"))
    yield Claim("FX-HEX", "two transversals per base", lambda r: hex_(r).transversal_count("x") == 2 == hex_(r).transversal_count("y"))
    yield Claim(
        "FX-HEX",
        "psi splits m into ((x, y), g) under tau_y = l",
        lambda r: psi_split(hex_(r), "m", Transversal.of("x", {"x": "x", "y": "l"})) == (("x", "y"), "g"),
    )


def _b2_claims():
    b2 = lambda r: r.load("FX-B2").require_action()
    yield Claim("FX-B2", "passes the partial action checks", lambda r: verify_partial_action(b2(r)).ok)
    yield Claim(
        "FX-B2",
        "invariants are e1, e2 + e4, e3 + e5, e6",
        lambda r: [str(v) for v in invariants(b2(r)).elements] == ["e1", "e2 + e4", "e3 + e5", "e6"],
    )
    yield Claim("FX-B2", "t(e1) = 2e1", lambda r: str(trace(b2(r), _el(r, "FX-B2", {"e1": 1}))) == "2e1")
    yield Claim("FX-B2", "t(e2) = e2 + e4", lambda r: str(trace(b2(r), _el(r, "FX-B2", {"e2": 1}))) == "e2 + e4")
    yield Claim("FX-B2", "trace is onto the invariants", lambda r: trace_onto(b2(r)))
    yield Claim(
        "FX-B2",
        "not recoverable at any base and transversal",
        lambda r: recoverability_search(b2(r)).summary() == "not recoverable; 4/4 (base,transversal) pairs fail",
    )

    def strictly_below(r):
        alpha = b2(r)
        theta = ext(res(alpha, alpha.groupoid.canonical_transversal()))
        facts = check_adjunction(alpha).facts
        return leq(theta, alpha) and theta != alpha and facts["strict-at"][0] == "h"

    yield Claim("FX-B2", "Ext(Res) is strictly below, first at h", strictly_below)


def _gamma_claims():
    gamma = lambda r: r.load("FX-GAMMA").require_action()
    yield Claim("FX-GAMMA", "passes the partial action checks", lambda r: verify_partial_action(gamma(r)).ok)
    yield Claim(
        "FX-GAMMA",
        "invariants are spanned by the orbit sum",
        lambda r: [str(v) for v in invariants(gamma(r)).elements] == ["a1 + a2 + b1 + b2"],
    )
    yield Claim("FX-GAMMA", "skew ring has dimension 16", lambda r: build_skew(gamma(r)).dim == 16)

    def certificate(r):
        theta = gamma(r)
        cert = galois_coordinates(theta)
        return (
            cert is not None
            and [(str(a), str(b)) for a, b in cert.pairs]
            == [(t, t) for t in ("a1", "a2", "b1", "b2")]
            and verify_certificate(theta, cert).ok
        )

    yield Claim("FX-GAMMA", "Galois coordinates are (e_t, e_t)", certificate)
    yield Claim("FX-GAMMA", "all four statements hold", lambda r: equivalence_report(gamma(r)).legs == (True,) * 4)

    def decompose(r):
        theta = gamma(r)
        d = res(theta, theta.groupoid.canonical_transversal())
        b = _el(r, "FX-GAMMA", {"a1": 1, "a2": 1, "b1": 1, "b2": 1})
        return str(invariant_decompose(theta, d, b)) == "a1 + a2"

    yield Claim("FX-GAMMA", "orbit sum decomposes to a1 + a2", decompose)


def _dat_claims():
    dat = lambda r: r.load("FX-DAT").require_datum()

    def closed_form(r):
        theta = ext(dat(r))
        expected = {
            "g": {"e3": "e3"},
            "m": {"e3": "e2"},
            "h": {"e2": "e2"},
            "l": {"e1": "e4", "e3": "e2"},
        }
        return all(theta.alpha(g) == PartialRingIso.of(m) for g, m in expected.items())

    yield Claim("FX-DAT", "Ext matches the closed form", closed_form)
    yield Claim("FX-DAT", "Res(Ext(d)) = d", lambda r: res(ext(dat(r)), dat(r).transversal) == dat(r))
    yield Claim("FX-DAT", "skew ring has dimension 12", lambda r: build_skew(ext(dat(r))).dim == 12)

    def skew_ok(r):
        R = build_skew(ext(dat(r)))
        return unit_check(R).ok and assoc_check(R).ok

    yield Claim("FX-DAT", "skew ring is unital and associative", skew_ok)

    def corner_dims(r):
        c = corners(build_skew(ext(dat(r))), "x")
        return (c.U.dim, c.S.dim) == (6, 3)

    yield Claim("FX-DAT", "dim U = 6 and dim S' = 3", corner_dims)
    yield Claim(
        "FX-DAT",
        "the Morita context is strict",
        lambda r: skew_morita_check(build_skew(ext(dat(r))), "x").facts["strict"],
    )
    yield Claim(
        "FX-DAT",
        "local globalization has classes e1, e3, g*e1",
        lambda r: list(globalize_group(dat(r).local).classes) == ["e1", "e3", "g*e1"],
    )
    yield Claim(
        "FX-DAT",
        "the four statements agree",
        lambda r: equivalence_report(ext(dat(r))).agree,
    )

    def round_trip(r):
        d = dat(r)
        G = d.groupoid
        there = transport_datum(d, G.canonical_transversal("y"))
        back = transport_datum(there, d.transversal)
        return back == d

    yield Claim("FX-DAT", "transport x -> y -> x is exact", round_trip)


def _glob_claims():
    sc = lambda r: r.load("FX-GLOB")

    def maps(r):
        beta = build_globalization(sc(r).globalization)
        return (
            beta.alpha("h") == PartialRingIso.of({"e2": "e2", "e3": "e4", "e4": "e3"})
            and beta.alpha("m") == PartialRingIso.of({"e1": "e3", "e2": "e4", "e3": "e2"})
            and beta.alpha("l") == PartialRingIso.of({"e1": "e4", "e2": "e3", "e3": "e2"})
        )

    yield Claim("FX-GLOB", "beta_h, beta_m, beta_l as expected", maps)

    def restricts(r):
        s = sc(r)
        return verify_globalization(ext(s.datum), build_globalization(s.globalization)).ok

    yield Claim("FX-GLOB", "beta globalizes Ext(FX-DAT)", restricts)


def all_claims() -> list[Claim]:
    return [*_hex_claims(), *_b2_claims(), *_gamma_claims(), *_dat_claims(), *_glob_claims()]


def run_claims(registry: FixtureRegistry) -> Report:
    report = Report("all fixtures")
    for claim in all_claims():
        name = f"{claim.fixture}: {claim.text}"
        try:
            passed, detail = bool(claim.holds(registry)), ""
        except AlgebraError as e:
            passed, detail = False, f"{e.name}: {e}"
        report.collect(name, [] if passed else [Violation(name, (), None, detail)])
    report.facts["claims"] = len(report.checks)
    return report

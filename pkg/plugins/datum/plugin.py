from framework.plugin import BasePlugin, Command, RunOptions
from framework.report import Report, Violation
from plugins.harness.plugin import Plugin as HarnessPlugin
from plugins.harness.scenario import Scenario
from plugins.partial_action.action import verify_partial_action
from .datum import Datum, check_adjunction, ext, res, transport_datum, verify_datum


def _datum_facts(report: Report, d: Datum, prefix: str = ""):
    report.facts[f"{prefix}transversal"] = str(d.transversal)
    for y in d.groupoid.objects:
        report.facts[f"{prefix}I[{y}]"] = str(d.I(y))
        report.facts[f"{prefix}link[{y}]"] = str(d.link(y))
    for h in d.local.groupoid.morphisms:
        report.facts[f"{prefix}local[{h}]"] = str(d.local_iso(h))


def _datum_of(subject: Scenario) -> Datum:
    if subject.datum is not None:
        return subject.datum
    alpha = subject.require_action()
    return res(alpha, alpha.groupoid.canonical_transversal())


class Res(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Restrict the action to a datum at a base and transversal"""
        alpha = subject.require_action()
        G = alpha.groupoid
        report = Report(f"{subject.name} res", options.all_witnesses)
        taus = list(G.all_transversals()) if options.all_transversals else [G.canonical_transversal()]
        for tau in taus:
            d = res(alpha, tau)
            prefix = f"{tau} " if len(taus) > 1 else ""
            report.merge(verify_datum(d, options.all_witnesses), f"{prefix}datum".strip())
            _datum_facts(report, d, prefix)
        return report


class Ext(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Extend a datum (or Res of the action) to a partial action of the groupoid"""
        d = _datum_of(subject)
        theta = ext(d)
        report = Report(f"{subject.name} ext", options.all_witnesses)
        report.merge(verify_partial_action(theta, options.all_witnesses), "theta")
        report.expect("res-ext", res(theta, d.transversal) == d, "Res(Ext(d)) != d")
        for g, line in theta.describe().items():
            report.facts[f"theta[{g}]"] = line
        return report


class Transport(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Move the datum to every other base and back"""
        d = _datum_of(subject)
        G = d.groupoid
        report = Report(f"{subject.name} transport")

        def round_trips():
            for z in G.objects:
                if z == d.base:
                    continue
                lams = list(G.transversals(z)) if options.all_transversals else [G.canonical_transversal(z)]
                for lam in lams:
                    there = transport_datum(d, lam)
                    if not verify_datum(there).ok:
                        yield Violation("round-trip", (), None, f"invalid datum at {lam}")
                    if transport_datum(there, d.transversal) != d:
                        yield Violation("round-trip", (), None, f"via {lam}")

        report.collect("round-trip", round_trips())
        return report


class Adjunction(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Unit, counit and triangle identities of Res and Ext on this instance"""
        if subject.action is not None:
            return check_adjunction(subject.action)
        return check_adjunction(subject.require_datum())


class Plugin(BasePlugin):
    deps = [HarnessPlugin]

    def commands(self):
        return [Res, Ext, Transport, Adjunction]

from framework.plugin import BasePlugin, Command, RunOptions
from framework.report import Report
from plugins.harness.plugin import Plugin as HarnessPlugin
from plugins.harness.scenario import Scenario
from .galois import (
    HypothesesNotMet,
    decomposition_check,
    equivalence_across_transversals,
    equivalence_report,
    ext_identities,
    galois_coordinates,
    invariants,
    morita_strictness,
    prop_trace_equiv,
    standing_hypotheses,
    trace_report,
    verify_certificate,
)


class Invariants(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Basis of the invariant subring, and of the base component when the action comes from a GD datum"""
        theta = subject.theta()
        inv = invariants(theta)
        report = Report(f"{subject.name} invariants")
        report.facts["dim"] = inv.dim
        report.facts["basis"] = [str(v) for v in inv.elements]
        try:
            d = standing_hypotheses(theta)
        except HypothesesNotMet as e:
            report.facts["decomposition"] = f"skipped: {e}"
            return report
        return report.merge(decomposition_check(theta, d))


class Trace(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Trace of every atom, surjectivity onto the invariants, and the trace transport identities"""
        theta = subject.theta()
        report = trace_report(theta)
        try:
            standing_hypotheses(theta)
        except HypothesesNotMet as e:
            report.facts["transport"] = f"skipped: {e}"
            return report
        return report.merge(prop_trace_equiv(theta), "transport")


class Galois(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Search Galois coordinates and verify them against every arrow"""
        theta = subject.theta()
        cert = galois_coordinates(theta)
        report = Report(f"{subject.name} galois")
        report.facts["exists"] = cert is not None
        if cert is None:
            return report
        report.facts["certificate"] = cert.to_list()
        report.facts["coefficients"] = cert.coefficients()
        return report.merge(verify_certificate(theta, cert))


class Morita(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Strictness of the invariant Morita contexts at groupoid and group level"""
        theta = subject.theta()
        report = morita_strictness(theta)
        return report.merge(ext_identities(theta), "ext")


class Equivalence(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """The four equivalent Galois statements, each evaluated on its own"""
        theta = subject.theta()
        report = equivalence_report(theta).to_report()
        if options.all_transversals:
            report.merge(equivalence_across_transversals(theta))
        return report


class Plugin(BasePlugin):
    deps = [HarnessPlugin]

    def commands(self):
        return [Invariants, Trace, Galois, Morita, Equivalence]

from framework.plugin import BasePlugin, Command, RunOptions
from framework.report import Report
from plugins.harness.plugin import Plugin as HarnessPlugin
from plugins.harness.scenario import Scenario
from .groupoid import psi_split


class GroupoidSummary(Command):
    name = "groupoid"

    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Components, isotropy groups and transversals of the scenario's groupoid"""
        G = subject.require_groupoid()
        report = Report(f"{subject.name} groupoid")
        components = G.connected_components()
        report.facts["objects"] = list(G.objects)
        report.facts["morphisms"] = list(G.morphisms)
        report.facts["components"] = [sorted(block) for block, _ in components]
        for x in G.objects:
            report.facts[f"isotropy[{x}]"] = list(G.isotropy(x).morphisms)
        if G.is_connected():
            for x in G.objects:
                report.facts[f"transversals[{x}]"] = G.transversal_count(x)
            tau = G.canonical_transversal()
            report.facts["psi"] = {g: str(psi_split(G, g, tau)) for g in G.morphisms}
        return report


class Plugin(BasePlugin):
    deps = [HarnessPlugin]

    def commands(self):
        return [GroupoidSummary]

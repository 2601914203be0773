from framework.plugin import BasePlugin, Command, RunOptions
from framework.report import Report
from plugins.datum.datum import res
from plugins.harness.plugin import Plugin as HarnessPlugin
from plugins.harness.scenario import Scenario
from .globalization import globalize, globalize_group, is_globalizable, lift_to, verify_globalization


class Globalize(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Build and verify the globalization of the datum, from the scenario's package when given"""
        G = subject.require_groupoid()
        if subject.datum is None and len(G.objects) == 1:
            alpha = subject.require_action()
            gg = globalize_group(alpha)
            report = verify_globalization(lift_to(alpha, gg.ring), gg.beta, options.all_witnesses)
            report.facts["ring"] = list(gg.ring.atoms)
            report.facts["classes"] = {c: [f"{h}*{a}" for h, a in m] for c, m in gg.classes.items()}
            return report
        if subject.datum is not None:
            d = subject.datum
        else:
            d = res(subject.require_action(), G.canonical_transversal())
        report = Report(f"{subject.name} globalization", options.all_witnesses)
        report.merge(is_globalizable(d), "globalizable")
        _, built = globalize(d, subject.globalization)
        return report.merge(built)


class Plugin(BasePlugin):
    deps = [HarnessPlugin]

    def commands(self):
        return [Globalize]

from framework.plugin import BasePlugin, Command, RunOptions
from framework.report import Report
from plugins.harness.plugin import Plugin as HarnessPlugin
from plugins.harness.scenario import Scenario
from .action import action_identities, composition_order_check, is_global, recoverability_search


class Recoverable(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Whether Ext(Res) recovers the action for some base and transversal"""
        alpha = subject.require_action()
        search = recoverability_search(alpha)
        report = Report(f"{subject.name} recoverability")
        report.facts["recoverable"] = search.recoverable
        report.facts["summary"] = search.summary()
        if search.witness is not None:
            report.facts["witness"] = str(search.witness[1])
        if options.all_transversals:
            report.facts["failing"] = [str(tau) for _, tau in search.failures]
        return report


class Identities(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Inverse compatibility, image intersection and the extension order of compositions"""
        alpha = subject.require_action()
        report = Report(f"{subject.name} identities", options.all_witnesses)
        report.merge(action_identities(alpha, options.all_witnesses))
        report.merge(composition_order_check(alpha, options.all_witnesses))
        report.facts["global"] = is_global(alpha)
        return report


class Plugin(BasePlugin):
    deps = [HarnessPlugin]

    def commands(self):
        return [Recoverable, Identities]

from framework.plugin import BasePlugin, Command, RunOptions
from framework.report import Report
from plugins.harness.plugin import Plugin as HarnessPlugin
from plugins.harness.scenario import Scenario
from .skew import assoc_check, build_skew, corner_check, corners, skew_morita_check, unit_check


class Skew(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Build the partial skew groupoid ring and check unit, associativity, corners and the Morita context"""
        theta = subject.theta()
        R = build_skew(theta)
        x = subject.datum.base if subject.datum is not None else theta.groupoid.objects[0]
        report = Report(f"{subject.name} skew ring", options.all_witnesses)
        report.facts["dim"] = R.dim
        report.merge(unit_check(R))
        report.merge(assoc_check(R, options.all_witnesses))
        report.merge(corner_check(R, x), "corners")
        report.merge(skew_morita_check(R, x), "morita")
        c = corners(R, x)
        for module in (c.U, c.V, c.S):
            report.facts[f"basis[{module.kind}]"] = [f"{R.basis[i][1]}d[{R.basis[i][0]}]" for i in module.indices]
        return report


class Plugin(BasePlugin):
    deps = [HarnessPlugin]

    def commands(self):
        return [Skew]

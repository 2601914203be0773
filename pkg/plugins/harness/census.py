"""Exhaustive classification over tiny (G, A)."""

from __future__ import annotations
from collections import Counter
from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Iterable, Iterator
import logging
from framework.event import CensusProgressEvent, EventBus
from framework.report import Report
from framework.worker import ThreadedWorker
from plugins.datum.datum import Datum, enumerate_datums, ext, res, verify_datum
from plugins.globalization.globalization import is_globalizable
from plugins.groupoid.groupoid import Groupoid, Transversal
from plugins.partial_action.action import (
    PartialAction,
    all_candidates,
    is_partial_action,
    under_transversal,
    under_transversal_closed,
)
from plugins.split_ring.ring import SplitRing

logger = logging.getLogger(__name__)

CHUNK = 256


@dataclass
class CensusResult:
    counts: Counter = field(default_factory=Counter)
    examined: int = 0
    truncated: bool = False
    disagreements: list[str] = field(default_factory=list)

    def add(self, other: CensusResult):
        self.counts.update(other.counts)
        self.examined += other.examined
        self.disagreements += other.disagreements


def classify_datum(d: Datum) -> CensusResult:
    result = CensusResult(examined=1)
    result.counts["examined"] += 1
    if not verify_datum(d).ok:
        return result
    result.counts["datums"] += 1
    if d.in_gd():
        result.counts["gd"] += 1
    theta = ext(d)
    if is_partial_action(theta):
        result.counts["ext-valid"] += 1
    else:
        result.disagreements.append(f"ext fails on datum {_describe(d)}")
    if res(theta, d.transversal) == d:
        result.counts["res-ext-identity"] += 1
    else:
        result.disagreements.append(f"res(ext(d)) != d for {_describe(d)}")
    if is_globalizable(d).ok:
        result.counts["globalizable"] += 1
    return result


def classify_action(alpha: PartialAction, transversals: list[Transversal]) -> CensusResult:
    result = CensusResult(examined=1)
    result.counts["examined"] += 1
    if not is_partial_action(alpha):
        return result
    result.counts["actions"] += 1
    recovered_somewhere = False
    for tau in transversals:
        exact = ext(res(alpha, tau)) == alpha
        closed = under_transversal_closed(alpha, tau)
        plain = under_transversal(alpha, tau)
        if not exact == closed == plain:
            result.disagreements.append(
                f"conditions disagree at {tau}: ext-res={exact} closed={closed} plain={plain}"
            )
        recovered_somewhere |= exact
    if recovered_somewhere:
        result.counts["recoverable"] += 1
    return result


def _describe(d: Datum) -> str:
    return ", ".join(f"I_{y}={d.I(y)}" for y in d.groupoid.objects)


def _chunks[T](items: Iterator[T], size: int) -> Iterator[list[T]]:
    while chunk := list(islice(items, size)):
        yield chunk


def _run[T](
    items: Iterable[T], classify: Callable[[T], CensusResult], cap: int
) -> CensusResult:
    total = CensusResult()
    it = iter(items)
    capped = islice(it, cap)

    def work(chunk: list[T]) -> CensusResult:
        part = CensusResult()
        for item in chunk:
            part.add(classify(item))
        return part

    chunks = _chunks(capped, CHUNK)
    if ThreadedWorker.running():
        parts = ThreadedWorker.map_ordered(work, chunks)
    else:
        parts = map(work, chunks)
    for part in parts:
        total.add(part)
        EventBus.trigger_event(CensusProgressEvent(total.examined, cap))
    total.truncated = next(it, None) is not None
    return total


def _report(result: CensusResult, subject: str, cap: int) -> Report:
    report = Report(subject)
    report.facts |= dict(sorted(result.counts.items()))
    report.facts["cap"] = cap
    report.facts["truncated"] = result.truncated
    report.expect(
        "consistent",
        not result.disagreements,
        result.disagreements[0] if result.disagreements else "",
    )
    if result.truncated:
        logger.warning("%s truncated after %d candidates", subject, result.examined)
    return report


def datum_census(G: Groupoid, ring: SplitRing, tau: Transversal, cap: int) -> Report:
    """Every datum over (G, ring, tau): counts of valid, GD, Ext-valid and Res-Ext fixed ones."""
    result = _run(enumerate_datums(G, ring, tau), classify_datum, cap)
    return _report(result, "datum census", cap)


def action_census(
    G: Groupoid, ring: SplitRing, transversals: list[Transversal], cap: int
) -> Report:
    """Candidate partial actions on A = sum of I_y, comparing the three recoverability conditions."""
    result = _run(
        all_candidates(G, ring),
        lambda alpha: classify_action(alpha, transversals),
        cap,
    )
    return _report(result, "action census", cap)

"""
Scoring: strict (rule, line) matching and Table-style aggregation.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from bench.corpus import CATEGORIES, BenchCase


def score_findings(expected: Iterable[tuple[int, int]], actual: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """(TP, FP, FN) for one case. Matching is on (rule, line) with multiplicity."""
    want = Counter(expected)
    got = Counter(actual)
    tp = sum((want & got).values())
    return tp, sum(got.values()) - tp, sum(want.values()) - tp


@dataclass
class Counts:
    gtp: int = 0
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def add(self, gtp: int, tp: int, fp: int, fn: int, clean: bool) -> None:
        self.gtp += gtp
        self.tp += tp
        self.fp += fp
        self.fn += fn
        if clean:
            self.tn += 1

    @property
    def precision(self) -> float:
        return 100.0 if self.tp + self.fp == 0 else 100.0 * self.tp / (self.tp + self.fp)

    @property
    def recall(self) -> float:
        return 100.0 if self.gtp == 0 else 100.0 * self.tp / self.gtp

    @property
    def fpr(self) -> float:
        return 0.0 if self.fp + self.tn == 0 else 100.0 * self.fp / (self.fp + self.tn)

    @property
    def fnr(self) -> float:
        return 0.0 if self.gtp == 0 else 100.0 * self.fn / self.gtp

    def to_dict(self) -> dict:
        return {
            "GTP": self.gtp, "TP": self.tp, "FP": self.fp, "FN": self.fn, "TN": self.tn,
            "precision": round(self.precision, 2), "recall": round(self.recall, 2),
            "FPR": round(self.fpr, 2), "FNR": round(self.fnr, 2),
        }


@dataclass
class CaseScore:
    case: BenchCase
    tp: int
    fp: int
    fn: int
    actual: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class ScoreReport:
    cases: list[CaseScore] = field(default_factory=list)
    groups: dict[str, Counts] = field(default_factory=dict)
    per_rule: dict[int, Counts] = field(default_factory=dict)

    @property
    def overall(self) -> Counts:
        return self.groups["overall"]

    def misses(self) -> list[CaseScore]:
        return [c for c in self.cases if c.fn or c.fp]


def build_score_report(scores: list[CaseScore]) -> ScoreReport:
    report = ScoreReport(cases=list(scores))
    for name in (*CATEGORIES, "advanced", "overall"):
        report.groups[name] = Counts()
    for score in scores:
        case = score.case
        gtp = score.tp + score.fn
        groups = [case.category, "overall"] + (["advanced"] if case.is_advanced else [])
        for name in groups:
            report.groups[name].add(gtp, score.tp, score.fp, score.fn, case.is_clean)
        report.per_rule.setdefault(case.rule_id, Counts()).add(gtp, score.tp, score.fp, score.fn, case.is_clean)
    report.per_rule = dict(sorted(report.per_rule.items()))
    return report

"""Expert checklist scoring and the selection-vs-quality cross table.

Checklists follow a 22-item reporting standard for observational studies.
A paper's quality score is the fraction of checked items; papers at or
above the quality threshold (the lower bound of the top quartile) count as
strong.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import DoiMismatch, EmptyInput, MalformedCsv, WrongItemCount
from .stats import quantile_lower_bound

CHECKLIST_ITEMS = 22

STRONG_MARK = "+"
WEAK_MARK = "•"     # bullet
UNASSESSED_MARK = "?"


@dataclass(frozen=True)
class StrobeChecklist:
    """One reviewer's filled 22-item checklist for one paper."""

    doi: str
    reviewer: str
    items: tuple[bool, ...]

    def __post_init__(self):
        if len(self.items) != CHECKLIST_ITEMS:
            raise WrongItemCount("expected %d items, got %d"
                                 % (CHECKLIST_ITEMS, len(self.items)))


@dataclass(frozen=True)
class QualityVerdict:
    """A paper's quality score and whether it clears the threshold."""

    doi: str
    score: float
    strong: bool


def strobe_score(checklist: StrobeChecklist) -> float:
    """Fraction of checked items, in [0, 1]."""
    return sum(checklist.items) / CHECKLIST_ITEMS


def merge_reviews(a: StrobeChecklist, b: StrobeChecklist,
                  consensus: StrobeChecklist):
    """Return the consensus checklist plus the a-vs-b disagreement count."""
    if not (a.doi == b.doi == consensus.doi):
        raise DoiMismatch("%s / %s / %s" % (a.doi, b.doi, consensus.doi))
    disagreements = sum(1 for x, y in zip(a.items, b.items) if x != y)
    return consensus, disagreements


def quality_threshold(scores) -> float:
    """Lower bound of the top quartile of the scores."""
    values = list(scores)
    if not values:
        raise EmptyInput("no quality scores")
    return quantile_lower_bound(values, 0.75)


def read_checklists(csv_bytes: bytes) -> list[StrobeChecklist]:
    """Parse checklists from CSV: doi, reviewer, item_1..item_22 (0/1)."""
    reader = csv.DictReader(io.StringIO(csv_bytes.decode("utf-8")))
    if reader.fieldnames is None:
        raise MalformedCsv("checklist file missing header")
    item_cols = ["item_%d" % i for i in range(1, CHECKLIST_ITEMS + 1)]
    missing = [c for c in ["doi", "reviewer", *item_cols]
               if c not in reader.fieldnames]
    if missing:
        raise MalformedCsv("checklist file missing columns: %s"
                           % ", ".join(missing))
    checklists = []
    for row in reader:
        try:
            items = tuple(bool(int(row[c])) for c in item_cols)
        except (TypeError, ValueError) as exc:
            raise MalformedCsv("bad checklist row for %r" % row.get("doi")
                               ) from exc
        checklists.append(StrobeChecklist(
            doi=(row["doi"] or "").strip().lower(),
            reviewer=(row["reviewer"] or "").strip(),
            items=items))
    return checklists


def consensus_verdicts(checklists, threshold: float | None = None):
    """Score each paper's consensus checklist and apply the threshold.

    When no threshold is supplied it is derived from the consensus scores
    themselves (top-quartile lower bound). Returns {doi: QualityVerdict}.
    """
    consensus = {cl.doi: cl for cl in checklists
                 if cl.reviewer == "consensus"}
    if not consensus:
        raise EmptyInput("no consensus checklists present")
    scores = {doi: strobe_score(cl) for doi, cl in consensus.items()}
    if threshold is None:
        threshold = quality_threshold(scores.values())
    return {doi: QualityVerdict(doi=doi, score=score,
                                strong=score >= threshold)
            for doi, score in scores.items()}, threshold


def quality_report(labels, rows, verdicts):
    """Annotate the selection cross table with quality marks.

    Every selected cell becomes "+" (strong), the bullet mark (assessed but
    not strong), or "?" (no verdict available); unselected cells stay
    blank. Returns rows of (doi, {label: mark}).
    """
    annotated = []
    for doi, flags in rows:
        verdict = verdicts.get(doi)
        marks = {}
        for label in labels:
            if not flags.get(label, False):
                marks[label] = ""
            elif verdict is None:
                marks[label] = UNASSESSED_MARK
            elif verdict.strong:
                marks[label] = STRONG_MARK
            else:
                marks[label] = WEAK_MARK
        annotated.append((doi, marks))
    return annotated

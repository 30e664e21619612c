"""BARON and HEROCON score computation.

BARON is the percentage of classifiable citations with no detected network
relationship. HEROCON sums configurable per-label weights over the same
denominator. UNKNOWN citations are excluded from both numerator and
denominator; they only affect the data-quality reliability rating.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .classify import CitationClass, ClassifiedCitation
from .errors import MalformedDocument, NoClassifiableCitations, UnknownLabel, WeightOutOfRange

log = logging.getLogger(__name__)

DEFAULT_WEIGHTS: dict[CitationClass, float] = {
    CitationClass.SELF: 0.0,
    CitationClass.DIRECT_COAUTHOR: 0.2,
    CitationClass.TRANSITIVE_COAUTHOR: 0.5,
    CitationClass.SAME_DEPT: 0.1,
    CitationClass.SAME_INSTITUTION: 0.4,
    CitationClass.SAME_PARENT_ORG: 0.7,
    CitationClass.VENUE_SELF_GOVERNANCE: 0.05,
    CitationClass.VENUE_EDITOR_COAUTHOR: 0.15,
    CitationClass.VENUE_EDITOR_AFFIL: 0.3,
    CitationClass.VENUE_COMMITTEE: 0.4,
    CitationClass.EXTERNAL: 1.0,
}


class Reliability(Enum):
    HIGH = "HIGH"
    MODERATE = "MODERATE"
    LOW = "LOW"
    VERY_LOW = "VERY_LOW"


class GapBand(Enum):
    SMALL = "SMALL"
    MODERATE = "MODERATE"
    LARGE = "LARGE"


@dataclass(frozen=True)
class WeightConfig:
    weights: dict[CitationClass, float] = field(
        default_factory=lambda: dict(DEFAULT_WEIGHTS))

    def weight(self, label: CitationClass) -> float:
        return self.weights[label]

    def as_json_dict(self) -> dict[str, float]:
        return {label.value: self.weights[label] for label in DEFAULT_WEIGHTS}


def load_weights(document) -> WeightConfig:
    """Merge a flat label -> number mapping over the defaults.

    Unspecified labels keep their defaults. UNKNOWN carries no weight by
    definition, so it is rejected like any other unknown key.
    """
    if document is None:
        return WeightConfig()
    if not isinstance(document, dict):
        raise MalformedDocument(
            f"weight document must be a flat JSON object, got {type(document).__name__}")
    merged = dict(DEFAULT_WEIGHTS)
    for key, value in document.items():
        try:
            label = CitationClass(key)
        except ValueError:
            raise UnknownLabel(f"unknown classification label in weights: {key!r}")
        if label is CitationClass.UNKNOWN:
            raise UnknownLabel(
                "UNKNOWN carries no weight; it is excluded from scoring by definition")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise MalformedDocument(f"weight for {key} must be a number, got {value!r}")
        if not 0.0 <= float(value) <= 1.0:
            raise WeightOutOfRange(f"weight for {key} must be in [0, 1], got {value}")
        merged[label] = float(value)
    if merged[CitationClass.EXTERNAL] != 1.0:
        log.warning("EXTERNAL weight overridden to %.3f; HEROCON may drop below BARON",
                    merged[CitationClass.EXTERNAL])
    return WeightConfig(merged)


@dataclass(frozen=True)
class ScoreSummary:
    baron: float
    herocon: float
    gap: float
    total_citations: int
    classifiable: int
    unknown: int
    reliability: Reliability
    gap_band: GapBand


def _reliability(classifiable: int, total: int) -> Reliability:
    # integer arithmetic keeps the 85/70/50 percent boundaries exact
    if classifiable * 100 >= 85 * total:
        return Reliability.HIGH
    if classifiable * 100 >= 70 * total:
        return Reliability.MODERATE
    if classifiable * 100 >= 50 * total:
        return Reliability.LOW
    return Reliability.VERY_LOW


def _gap_band(gap: float) -> GapBand:
    if gap < 3.0:
        return GapBand.SMALL
    if gap <= 10.0:
        return GapBand.MODERATE
    return GapBand.LARGE


def compute_scores(classified: list[ClassifiedCitation],
                   weights: WeightConfig | None = None) -> ScoreSummary:
    """Score a classified citation set.

    Raises NoClassifiableCitations when every citation is UNKNOWN (or the
    list is empty); callers still surface the counts in the audit.
    """
    weights = weights or WeightConfig()
    total = len(classified)
    unknown = sum(1 for c in classified if c.label is CitationClass.UNKNOWN)
    classifiable = total - unknown
    if classifiable == 0:
        raise NoClassifiableCitations(
            f"no classifiable citations ({total} total, {unknown} UNKNOWN)")

    external = sum(1 for c in classified if c.label is CitationClass.EXTERNAL)
    weight_sum = sum(weights.weight(c.label) for c in classified
                     if c.label is not CitationClass.UNKNOWN)

    baron = 100.0 * external / classifiable
    herocon = 100.0 * weight_sum / classifiable
    gap = herocon - baron
    return ScoreSummary(
        baron=baron,
        herocon=herocon,
        gap=gap,
        total_citations=total,
        classifiable=classifiable,
        unknown=unknown,
        reliability=_reliability(classifiable, total),
        gap_band=_gap_band(gap),
    )


def label_counts(classified: list[ClassifiedCitation]) -> dict[CitationClass, int]:
    counts: dict[CitationClass, int] = {}
    for c in classified:
        counts[c.label] = counts.get(c.label, 0) + 1
    return counts


@dataclass(frozen=True)
class TrajectoryPoint:
    year: int
    baron: float
    herocon: float
    citations: int  # classifiable citations published that year


def trajectory(classified: list[ClassifiedCitation],
               weights: WeightConfig | None = None) -> list[TrajectoryPoint]:
    """Cumulative scores per citation year, ascending.

    Citations without a year are left out of the series (the pipeline counts
    them in the audit's data-quality block). Years before the first
    classifiable citation are skipped to avoid an undefined denominator.
    """
    weights = weights or WeightConfig()
    dated = [c for c in classified if c.link.citation_year is not None]
    years = sorted({c.link.citation_year for c in dated})
    points: list[TrajectoryPoint] = []
    for year in years:
        upto = [c for c in dated if c.link.citation_year <= year]
        if all(c.label is CitationClass.UNKNOWN for c in upto):
            continue
        summary = compute_scores(upto, weights)
        this_year = sum(1 for c in dated
                        if c.link.citation_year == year
                        and c.label is not CitationClass.UNKNOWN)
        points.append(TrajectoryPoint(year, summary.baron, summary.herocon, this_year))
    return points

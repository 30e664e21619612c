"""Render audit figures and the delimited citation table to files.

Produces the same views the web UI shows, as static artifacts: a donut of
label proportions with the scores centered, the display-pruned co-author
network (target gold, direct co-authors crimson sized by shared papers,
farther authors blue), the dual-line trajectory with shaded gap and annual
bars, and ``citations.csv``.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .audit import AuditReport  # noqa: E402
from .classify import CitationClass  # noqa: E402
from .scoring import label_counts  # noqa: E402

LABEL_COLORS = {
    CitationClass.SELF: "#8c564b",
    CitationClass.DIRECT_COAUTHOR: "#d62728",
    CitationClass.TRANSITIVE_COAUTHOR: "#ff7f0e",
    CitationClass.SAME_DEPT: "#9467bd",
    CitationClass.SAME_INSTITUTION: "#e377c2",
    CitationClass.SAME_PARENT_ORG: "#bcbd22",
    CitationClass.EXTERNAL: "#2ca02c",
    CitationClass.UNKNOWN: "#7f7f7f",
}

GOLD = "#d4a017"
CRIMSON = "#b01030"
BLUE = "#2060c0"


def render_figures(report: AuditReport, outdir: str | Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = [
        _donut(report, outdir / "classification_donut.png"),
        _network(report, outdir / "coauthor_network.png"),
        _citations_csv(report, outdir / "citations.csv"),
    ]
    if report.trajectory:
        written.insert(2, _trajectory(report, outdir / "career_trajectory.png"))
    return written


def _donut(report: AuditReport, path: Path) -> Path:
    counts = label_counts(report.citations)
    labels = [label for label in LABEL_COLORS if counts.get(label)]
    sizes = [counts[label] for label in labels]
    fig, ax = plt.subplots(figsize=(7, 7))
    if sizes:
        ax.pie(sizes,
               labels=[f"{label.value} ({count})" for label, count in zip(labels, sizes)],
               colors=[LABEL_COLORS[label] for label in labels],
               startangle=90, counterclock=False,
               wedgeprops={"width": 0.38, "edgecolor": "white"})
    scores = report.scores
    center = ("BARON {:.1f}%\nHEROCON {:.1f}%".format(scores.baron, scores.herocon)
              if scores else "no classifiable\ncitations")
    ax.text(0, 0, center, ha="center", va="center", fontsize=14, weight="bold")
    ax.set_title(f"Citation origins: {report.researcher_name}")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _ring_positions(ids: list[str], radius: float) -> dict[str, tuple[float, float]]:
    positions = {}
    for i, node_id in enumerate(sorted(ids)):
        angle = 2 * math.pi * i / max(len(ids), 1)
        positions[node_id] = (radius * math.cos(angle), radius * math.sin(angle))
    return positions


def _network(report: AuditReport, path: Path) -> Path:
    graph = report.graph
    retained = set(report.display_retained) or set(graph.names)
    by_ring: dict[int, list[str]] = {}
    for node_id in retained:
        by_ring.setdefault(max(graph.distance(node_id), 0), []).append(node_id)

    positions: dict[str, tuple[float, float]] = {graph.root: (0.0, 0.0)}
    for ring, ids in sorted(by_ring.items()):
        if ring == 0:
            continue
        positions.update(_ring_positions(ids, radius=float(ring)))

    fig, ax = plt.subplots(figsize=(9, 9))
    for (a, b), edge in sorted(graph.edges.items()):
        if a in positions and b in positions:
            xs = [positions[a][0], positions[b][0]]
            ys = [positions[a][1], positions[b][1]]
            ax.plot(xs, ys, color="#cccccc", linewidth=0.5, zorder=1)

    shared_to_root = {}
    for (a, b), edge in graph.edges.items():
        if a == graph.root:
            shared_to_root[b] = edge.shared_papers
        elif b == graph.root:
            shared_to_root[a] = edge.shared_papers

    for node_id, (x, y) in positions.items():
        distance = graph.distance(node_id)
        if distance == 0:
            color, size = GOLD, 400
        elif distance == 1:
            color = CRIMSON
            size = 60 + 25 * shared_to_root.get(node_id, 1)
        else:
            color, size = BLUE, 40
        ax.scatter([x], [y], s=size, c=color, zorder=2,
                   edgecolors="white", linewidths=0.5)

    ax.set_title(f"Co-author network ({len(positions)} of {len(graph.names)} authors shown)")
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _trajectory(report: AuditReport, path: Path) -> Path:
    series = report.trajectory
    years = [p.year for p in series]
    baron = [p.baron for p in series]
    herocon = [p.herocon for p in series]
    counts = [p.citations for p in series]

    fig, ax = plt.subplots(figsize=(10, 5))
    ax.plot(years, baron, color=CRIMSON, marker="o", label="BARON")
    ax.plot(years, herocon, color=BLUE, marker="o", label="HEROCON")
    ax.fill_between(years, baron, herocon, color=BLUE, alpha=0.12, label="gap")
    ax.set_ylabel("cumulative score (%)")
    ax.set_xlabel("citation year")
    ax.set_ylim(0, 105)
    ax.legend(loc="lower left")

    bars = ax.twinx()
    bars.bar(years, counts, color="#999999", alpha=0.3, width=0.6)
    bars.set_ylabel("classifiable citations per year")
    bars.set_ylim(0, max(counts) * 4 if counts else 1)

    ax.set_title(f"Career trajectory: {report.researcher_name}")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _citations_csv(report: AuditReport, path: Path) -> Path:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["citing_work_id", "citing_title", "citation_year",
                         "cited_work_id", "label", "phase", "confidence",
                         "rationale"])
        for c in report.citations:
            writer.writerow([
                c.link.citing_work.work_id,
                c.link.citing_work.title,
                c.link.citation_year if c.link.citation_year is not None else "",
                c.link.cited_work_id,
                c.label.value,
                c.phase,
                c.confidence.value,
                c.rationale,
            ])
    return path

"""Monthly aggregation of daily signed sentiment tables.

Input rows carry, per day and ordered country pair, four non-negative
counts (verbal/material x cooperation/conflict).  The daily directed
sign is the signum of cooperation minus conflict; a month is a fixed
30-day window (days 1+30(t-1) .. 30t) whose directed sign is the signum
of the summed daily signs.  The two directions then collapse to one
undirected edge: agreeing or half-known signs keep the sign,
contradicting or fully unknown pairs produce no edge.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import SignedGraph


class IngestionError(ValueError):
    pass


@dataclass(frozen=True)
class SentimentRecord:
    day: int
    source: str
    target: str
    verbal_cooperation: int
    verbal_conflict: int
    material_cooperation: int
    material_conflict: int

    def __post_init__(self):
        counts = (
            self.verbal_cooperation,
            self.verbal_conflict,
            self.material_cooperation,
            self.material_conflict,
        )
        if any(c < 0 for c in counts):
            raise ValueError("sentiment counts must be non-negative")

    @property
    def net(self) -> int:
        return (
            self.verbal_cooperation
            + self.material_cooperation
            - self.verbal_conflict
            - self.material_conflict
        )


def parse_sentiment_table(text: str) -> list:
    """Read TSV rows: day source target vcoop vconf mcoop mconf."""
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 7:
            raise IngestionError(f"line {lineno}: expected 7 fields, got {len(parts)}")
        try:
            records.append(
                SentimentRecord(
                    int(parts[0]),
                    parts[1],
                    parts[2],
                    int(parts[3]),
                    int(parts[4]),
                    int(parts[5]),
                    int(parts[6]),
                )
            )
        except ValueError as exc:
            raise IngestionError(f"line {lineno}: {exc}") from None
    return records


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def aggregate_signed_month(
    records,
    month: int,
    known_countries=None,
):
    """Signed country graph for 30-day window ``month`` (1-based).

    Returns (SignedGraph, labels); labels index country tokens in
    first-seen order over the whole record stream so different months
    share node ids.  With ``known_countries`` given, unseen tokens raise
    IngestionError.
    """
    if month < 1:
        raise ValueError("month index is 1-based")
    ids: dict = {}
    labels: list = []
    daily: dict = {}  # (u, v, day) -> net count
    lo = 1 + 30 * (month - 1)
    hi = 30 * month
    for rec in records:
        for tok in (rec.source, rec.target):
            if known_countries is not None and tok not in known_countries:
                raise IngestionError(f"unknown country token {tok!r}")
            if tok not in ids:
                ids[tok] = len(labels)
                labels.append(tok)
        if not lo <= rec.day <= hi:
            continue
        u, v = ids[rec.source], ids[rec.target]
        if u == v:
            continue
        key = (u, v, rec.day)
        daily[key] = daily.get(key, 0) + rec.net
    monthly: dict = {}  # (u, v) directed -> sum of daily signs
    for (u, v, _), net in daily.items():
        monthly[(u, v)] = monthly.get((u, v), 0) + _sign(net)
    directed = {pair: _sign(total) for pair, total in monthly.items()}
    edges = []
    for u, v in {(min(p), max(p)) for p in directed}:
        s_uv = directed.get((u, v), 0)
        s_vu = directed.get((v, u), 0)
        signs = {s_uv, s_vu} - {0}
        if len(signs) != 1:
            continue  # contradictory or fully neutral: no edge
        edges.append((u, v, signs.pop()))
    return SignedGraph(len(labels), edges), labels

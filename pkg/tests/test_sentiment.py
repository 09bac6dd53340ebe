"""Monthly aggregation of signed sentiment records."""

import pytest

from triadnet import sentiment
from triadnet.sentiment import SentimentRecord


def rec(day, a, b, coop, conf):
    return SentimentRecord(day, a, b, coop, 0, 0, conf)


class TestDailySigns:
    def test_steady_cooperation_gives_positive_edge(self):
        records = []
        for day in range(1, 31):
            records.append(rec(day, "A", "B", 5, 2))
            records.append(rec(day, "B", "A", 5, 2))
        g, labels = sentiment.aggregate_signed_month(records, 1)
        assert labels == ["A", "B"]
        assert g.sign(0, 1) == 1

    def test_contradicting_directions_drop_edge(self):
        records = [rec(1, "A", "B", 9, 0), rec(1, "B", "A", 0, 9)]
        g, _ = sentiment.aggregate_signed_month(records, 1)
        assert g.edge_count == 0

    def test_half_known_keeps_sign(self):
        records = [rec(3, "A", "B", 0, 4)]  # only one direction reported
        g, _ = sentiment.aggregate_signed_month(records, 1)
        assert g.sign(0, 1) == -1

    def test_sign_of_daily_sum_not_raw_counts(self):
        # many mild positive days outweigh one strongly negative day
        records = [rec(d, "A", "B", 1, 0) for d in range(1, 4)]
        records.append(rec(4, "A", "B", 0, 100))
        g, _ = sentiment.aggregate_signed_month(records, 1)
        assert g.sign(0, 1) == 1


class TestMonthlyWindows:
    def test_two_month_stream_matches_hand_tally(self):
        records = []
        # month 1: A-B positive, A-C negative (both directions agree)
        for day in range(1, 31):
            records += [
                rec(day, "A", "B", 3, 1), rec(day, "B", "A", 2, 1),
                rec(day, "A", "C", 0, 2), rec(day, "C", "A", 1, 3),
            ]
        # month 2: A-B flips negative; B-C appears positive
        for day in range(31, 61):
            records += [
                rec(day, "A", "B", 0, 5), rec(day, "B", "A", 1, 4),
                rec(day, "B", "C", 4, 0),
            ]
        g1, labels = sentiment.aggregate_signed_month(records, 1)
        g2, labels2 = sentiment.aggregate_signed_month(records, 2)
        assert labels == labels2 == ["A", "B", "C"]
        assert g1.sign(0, 1) == 1 and g1.sign(0, 2) == -1 and g1.sign(1, 2) == 0
        assert g2.sign(0, 1) == -1 and g2.sign(1, 2) == 1 and g2.sign(0, 2) == 0

    def test_window_boundaries_are_exclusive(self):
        records = [rec(30, "A", "B", 5, 0), rec(31, "A", "C", 5, 0)]
        g1, _ = sentiment.aggregate_signed_month(records, 1)
        g2, _ = sentiment.aggregate_signed_month(records, 2)
        assert g1.sign(0, 1) == 1 and g1.sign(0, 2) == 0
        assert g2.sign(0, 2) == 1 and g2.sign(0, 1) == 0


class TestIngestion:
    def test_unknown_country_raises(self):
        with pytest.raises(sentiment.IngestionError):
            sentiment.aggregate_signed_month(
                [rec(1, "A", "XX", 1, 0)], 1, known_countries={"A", "B"}
            )

    def test_parse_table(self):
        text = "# day src dst vc vx mc mx\n1 A B 3 1 0 0\n2 B A 0 0 1 2\n"
        records = sentiment.parse_sentiment_table(text)
        assert len(records) == 2
        assert records[0].net == 2
        assert records[1].net == -1

    def test_parse_rejects_bad_rows(self):
        with pytest.raises(sentiment.IngestionError):
            sentiment.parse_sentiment_table("1 A B 3\n")
        with pytest.raises(sentiment.IngestionError):
            sentiment.parse_sentiment_table("1 A B 3 1 0 -2\n")

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            SentimentRecord(1, "A", "B", -1, 0, 0, 0)

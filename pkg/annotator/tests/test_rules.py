"""Rule detectors: patterns, offsets, and the near-miss filters."""

import pytest

from termtag import ConfigError, rule_detect


def labels(text, enabled=("MAIL", "URL", "PHONE", "POSTCODE")):
    return [(span.text, span.label) for span in rule_detect(text, enabled)]


class TestMail:
    def test_plain_address(self):
        assert labels("mail me at a@b.co") == [("a@b.co", "MAIL")]

    def test_tagged_and_dotted_address(self):
        text = "send reports to alice.smith+work@mail.example.org today"
        assert labels(text) == [("alice.smith+work@mail.example.org", "MAIL")]

    def test_trailing_sentence_period_is_not_part_of_the_domain(self):
        assert labels("write to a@b.co.") == [("a@b.co", "MAIL")]

    def test_two_addresses_left_to_right(self):
        spans = rule_detect("either a@b.co or c@d.org works")
        assert [s.text for s in spans] == ["a@b.co", "c@d.org"]
        assert spans[0].end <= spans[1].start

    def test_handle_without_domain_is_not_mail(self):
        assert labels("ping @support on the forum") == []


class TestUrl:
    def test_https(self):
        assert labels("visit https://x.y/z") == [("https://x.y/z", "URL")]

    def test_http_and_www(self):
        assert labels("docs at http://example.org/guide") == [
            ("http://example.org/guide", "URL")
        ]
        assert labels("see www.example.com/a for details") == [
            ("www.example.com/a", "URL")
        ]

    def test_trailing_punctuation_is_trimmed(self):
        spans = rule_detect("source (https://a.b/c?d=1).")
        assert [(s.text, s.label) for s in spans] == [("https://a.b/c?d=1", "URL")]
        text = "source (https://a.b/c?d=1)."
        span = spans[0]
        assert text[span.start:span.end] == span.text


class TestPhone:
    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("call +1 555 0100", "+1 555 0100"),
            ("office: 020 7946 0958", "020 7946 0958"),
            ("fax +44 20 7946 0958", "+44 20 7946 0958"),
            ("dial (0221) 4710 555", "(0221) 4710 555"),
            ("line 555-0100 is open", "555-0100"),
        ],
    )
    def test_detects_grouped_numbers(self, text, expected):
        assert labels(text) == [(expected, "PHONE")]

    @pytest.mark.parametrize(
        "text",
        [
            "I joined on 2004-05-14 and stayed.",
            "moved from 14.05.2004 to next week",
            "logged on 2004 05 14 at noon",
            "between 1000-2000 visitors",
            "pages 10-20 cover the intro",
            "version 2.4.1 shipped",
            "the total was 48.50 euros",
        ],
    )
    def test_dates_and_plain_numbers_are_not_phones(self, text):
        assert labels(text, enabled=("PHONE",)) == []


class TestPostcode:
    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("postcode SW1A 1AA", "SW1A 1AA"),
            ("ships to M1 1AE", "M1 1AE"),
            ("office at EC1A 1BB", "EC1A 1BB"),
            ("zip 90210 covers it", "90210"),
            ("use 12345-6789 on the form", "12345-6789"),
        ],
    )
    def test_uk_and_generic_forms(self, text, expected):
        assert labels(text) == [(expected, "POSTCODE")]

    def test_lower_case_is_not_a_postcode(self):
        assert labels("postcode sw1a 1aa") == []

    def test_longer_digit_runs_are_not_zips(self):
        assert labels("serial 126271 on file", enabled=("POSTCODE",)) == []


class TestDetect:
    def test_plain_sentence_has_no_spans(self):
        assert rule_detect("plain sentence") == []

    def test_empty_text_has_no_spans(self):
        assert rule_detect("") == []

    def test_offsets_cover_the_reported_text(self):
        text = "mail a@b.co, site https://x.y/z, call +1 555 0100, zip 90210"
        for span in rule_detect(text):
            assert text[span.start:span.end] == span.text

    def test_disabled_rules_stay_silent(self):
        text = "mail a@b.co or visit https://x.y/z"
        assert labels(text, enabled=("MAIL",)) == [("a@b.co", "MAIL")]

    def test_spans_of_one_rule_never_overlap(self):
        text = "zips 12345-6789 and 54321 in one line"
        spans = rule_detect(text, enabled=("POSTCODE",))
        assert len(spans) == 2
        first, second = sorted(spans, key=lambda s: s.start)
        assert first.end <= second.start

    def test_unknown_rule_name_is_rejected(self):
        with pytest.raises(ConfigError, match="unknown rule detectors: FAX"):
            rule_detect("text", enabled=("FAX",))

    def test_detection_is_deterministic(self):
        text = "a@b.co https://x.y +1 555 0100 SW1A 1AA"
        assert rule_detect(text) == rule_detect(text)

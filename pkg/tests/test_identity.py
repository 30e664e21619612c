"""ORCID cross-validation: matching, mode thresholds, exclusions."""

import random

import pytest

from citekin.errors import UnknownWorkId
from citekin.identity import (MatchKind, ValidationMode, apply_exclusions,
                              career_span_warning, levenshtein_ratio,
                              match_works, normalize_title, validate)
from citekin.sources import OrcidEntry

from helpers import TARGET, author, inst, work


WORDS = ("graphite osprey lantern quartz meadow cipher ember falcon harbor "
         "ivory juniper kestrel lichen marble nebula obsidian prairie russet "
         "saffron thistle umber vellum willow zephyr basalt cobalt drizzle "
         "fjord glacier heather isthmus jade krill lagoon mesa nectar").split()


def distinct_title(i: int) -> str:
    # word samples keep pairwise similarity far below the 0.90 threshold
    rng = random.Random(1000 + i)
    return " ".join(rng.sample(WORDS, 6))


def openalex_works(n, start=0, institution="I_HOME"):
    return [work(f"W{i}", 2010 + (i % 10),
                 author(TARGET, inst(institution)),
                 title=distinct_title(i),
                 doi=f"10.1000/w{i}")
            for i in range(start, start + n)]


def orcid_for(works):
    return [OrcidEntry(title=w.title, doi=w.doi, year=w.publication_year)
            for w in works]


class TestLevenshtein:
    def test_known_distance(self):
        # kitten -> sitting needs 3 edits over max length 7
        assert levenshtein_ratio("kitten", "sitting") == pytest.approx(1 - 3 / 7)

    def test_identity_and_empty(self):
        assert levenshtein_ratio("abc", "abc") == 1.0
        assert levenshtein_ratio("", "abc") == 0.0

    def test_symmetry(self):
        rng = random.Random(3)
        for _ in range(50):
            a = "".join(rng.choice("abcd ") for _ in range(rng.randint(0, 12)))
            b = "".join(rng.choice("abcd ") for _ in range(rng.randint(0, 12)))
            assert levenshtein_ratio(a, b) == levenshtein_ratio(b, a)


class TestMatchWorks:
    def test_doi_match_case_insensitive(self):
        w = work("W1", 2020, author(TARGET), title="A", doi="10.1000/ABC")
        entries = [OrcidEntry(title="different title", doi="10.1000/abc")]
        assert match_works([w], entries)[0][1] is MatchKind.DOI

    def test_title_match_after_punctuation_and_case_folding(self):
        w = work("W1", 2020, author(TARGET),
                 title="Deep Learning: A Survey!", doi=None)
        entries = [OrcidEntry(title="deep learning a survey")]
        assert normalize_title(w.title) == "deep learning a survey"
        assert match_works([w], entries)[0][1] is MatchKind.TITLE

    def test_dissimilar_title_no_match(self):
        w = work("W1", 2020, author(TARGET), title="Chemistry of cheese", doi=None)
        entries = [OrcidEntry(title="Astrophysics of black holes")]
        assert match_works([w], entries)[0][1] is MatchKind.NONE

    def test_near_miss_below_threshold(self):
        w = work("W1", 2020, author(TARGET), title="short title", doi=None)
        entries = [OrcidEntry(title="short titles and more words")]
        assert match_works([w], entries)[0][1] is MatchKind.NONE


class TestValidate:
    def test_skip(self):
        works = openalex_works(5)
        outcome = validate(works, [], skip=True)
        assert outcome.mode is ValidationMode.SKIPPED
        assert outcome.validated_works == works
        assert outcome.flagged == [] and outcome.excluded == []

    def test_hard_filter_at_075(self):
        works = openalex_works(20)
        entries = orcid_for(works[:15])  # 15/20 = 0.75
        outcome = validate(works, entries)
        assert outcome.mode is ValidationMode.HARD_FILTER
        assert outcome.coverage == pytest.approx(0.75)
        assert len(outcome.validated_works) == 15
        assert len(outcome.excluded) == 5
        assert all(reason for _, reason in outcome.excluded)
        assert outcome.flagged == []

    def test_hard_filter_at_exactly_070(self):
        works = openalex_works(20)
        outcome = validate(works, orcid_for(works[:14]))  # 14/20 = 0.70
        assert outcome.mode is ValidationMode.HARD_FILTER

    def test_anomaly_flag_just_below_070(self):
        works = openalex_works(100)
        outcome = validate(works, orcid_for(works[:69]))  # 0.69
        assert outcome.mode is ValidationMode.ANOMALY_FLAG
        assert outcome.validated_works == works
        assert outcome.excluded == []

    def test_anomaly_flags_never_seen_institution(self):
        works = openalex_works(10)
        intruder = work("W_ODD", 2015, author(TARGET, inst("I_ELSEWHERE")),
                        title=distinct_title(900), doi="10.9/odd")
        all_works = works + [intruder]
        outcome = validate(all_works, orcid_for(works[:5]))  # coverage 5/11
        assert outcome.mode is ValidationMode.ANOMALY_FLAG
        flagged_ids = {w.work_id for w, _ in outcome.flagged}
        assert "W_ODD" in flagged_ids
        # unmatched works from the home institution are not anomalies
        assert not (flagged_ids & {w.work_id for w in works})

    def test_unaffiliated_unmatched_work_not_flagged(self):
        works = openalex_works(10)
        bare = work("W_BARE", 2015, author(TARGET), title="No affiliation here",
                    doi="10.9/bare")
        outcome = validate(works + [bare], orcid_for(works[:5]))
        assert all(w.work_id != "W_BARE" for w, _ in outcome.flagged)

    def test_validated_never_intersects_excluded(self):
        works = openalex_works(20)
        outcome = validate(works, orcid_for(works[:15]))
        validated = {w.work_id for w in outcome.validated_works}
        excluded = {w.work_id for w, _ in outcome.excluded}
        assert not validated & excluded

    def test_input_order_invariance(self):
        works = openalex_works(12)
        entries = orcid_for(works[:9])
        shuffled = list(works)
        random.Random(8).shuffle(shuffled)
        a = validate(works, entries)
        b = validate(shuffled, entries)
        assert {w.work_id for w in a.validated_works} == \
               {w.work_id for w in b.validated_works}
        assert a.mode is b.mode


class TestCareerSpan:
    def test_long_span_warns_with_suggestion(self):
        works = [work("W1", 1990, author(TARGET)), work("W2", 2020, author(TARGET))]
        warning = career_span_warning(works)
        assert warning is not None
        assert "--since" in warning

    def test_short_span_silent(self):
        works = [work("W1", 2005, author(TARGET)), work("W2", 2020, author(TARGET))]
        assert career_span_warning(works) is None

    def test_single_work_silent(self):
        assert career_span_warning([work("W1", 1980, author(TARGET))]) is None

    def test_exactly_25_years_silent(self):
        works = [work("W1", 1995, author(TARGET)), work("W2", 2020, author(TARGET))]
        assert career_span_warning(works) is None


class TestApplyExclusions:
    def _flagged_outcome(self):
        works = openalex_works(10)
        odd1 = work("W_ODD1", 2015, author(TARGET, inst("I_X")), doi="10.9/o1",
                    title="Odd one")
        odd2 = work("W_ODD2", 2016, author(TARGET, inst("I_Y")), doi="10.9/o2",
                    title="Odd two")
        return validate(works + [odd1, odd2], orcid_for(works[:5]))

    def test_empty_decisions_marks_reviewed(self):
        outcome = self._flagged_outcome()
        reviewed = apply_exclusions(outcome, set())
        assert reviewed.flags_reviewed is True
        assert reviewed.flagged == outcome.flagged
        assert reviewed.excluded == outcome.excluded
        assert len(reviewed.validated_works) == len(outcome.validated_works)

    def test_exclude_all_flagged(self):
        outcome = self._flagged_outcome()
        ids = {w.work_id for w, _ in outcome.flagged}
        reviewed = apply_exclusions(outcome, ids)
        assert reviewed.flagged == []
        assert {w.work_id for w, _ in reviewed.excluded} >= ids
        assert all(w.work_id not in ids for w in reviewed.validated_works)
        assert all(reason == "user-confirmed exclusion"
                   for w, reason in reviewed.excluded if w.work_id in ids)
        assert reviewed.user_exclusions == sorted(ids)

    def test_unknown_id_rejected(self):
        outcome = self._flagged_outcome()
        with pytest.raises(UnknownWorkId):
            apply_exclusions(outcome, {"W_NEVER_FLAGGED"})

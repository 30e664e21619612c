"""Affiliation timeline construction and institutional tier matching."""

import itertools

from citekin.affiliation import Tier, build_timeline, match_tier

from helpers import TARGET, author, hierarchy, inst, work


H = hierarchy({
    "I_DEPTED": [],              # university without parents
    "I_UNI": ["I_SYSTEM"],       # university under a system
    "I_OTHERUNI": ["I_SYSTEM"],  # sibling university, same system
    "I_FAR": [],                 # unrelated institution
    "I_SYSTEM": [],
})


def target_works():
    return [
        work("W1", 2018, author(TARGET, inst("I_UNI", dept="Physics"))),
        work("W2", 2019, author(TARGET, inst("I_UNI", dept="Physics"))),
        work("W3", 2020, author(TARGET, inst("I_UNI", dept="Physics"))),
    ]


class TestBuildTimeline:
    def test_single_institution_years_collected(self):
        timeline = build_timeline(target_works(), TARGET, H)
        assert len(timeline.entries) == 1
        entry = timeline.entries[0]
        assert entry.institution.institution_id == "I_UNI"
        assert entry.department == "Physics"
        assert entry.years == frozenset({2018, 2019, 2020})

    def test_no_affiliation_metadata_gives_empty_timeline(self):
        works = [work("W1", 2018, author(TARGET))]
        assert build_timeline(works, TARGET, H).entries == []

    def test_mid_career_move_gives_disjoint_entries(self):
        works = [
            work("W1", 2015, author(TARGET, inst("I_OTHERUNI"))),
            work("W2", 2016, author(TARGET, inst("I_OTHERUNI"))),
            work("W3", 2019, author(TARGET, inst("I_UNI"))),
        ]
        timeline = build_timeline(works, TARGET, H)
        assert len(timeline.entries) == 2
        by_id = {e.institution.institution_id: e.years for e in timeline.entries}
        assert by_id["I_OTHERUNI"] == frozenset({2015, 2016})
        assert by_id["I_UNI"] == frozenset({2019})
        assert not (by_id["I_OTHERUNI"] & by_id["I_UNI"])

    def test_coauthor_affiliations_do_not_leak_in(self):
        works = [work("W1", 2018,
                      author(TARGET, inst("I_UNI")),
                      author("A2", inst("I_FAR")))]
        timeline = build_timeline(works, TARGET, H)
        assert [e.institution.institution_id for e in timeline.entries] == ["I_UNI"]

    def test_unresolvable_institution_dropped(self):
        works = [work("W1", 2018, author(TARGET, inst("I_NOWHERE")))]
        assert build_timeline(works, TARGET, H).entries == []


class TestMatchTier:
    def setup_method(self):
        self.timeline = build_timeline(target_works(), TARGET, H)

    def test_same_department(self):
        citing = [author("B1", inst("I_UNI", dept="Physics"))]
        match = match_tier(self.timeline, citing, 2019, H)
        assert match.tier is Tier.SAME_DEPT
        assert match.evidence.institution_ids == ("I_UNI",)
        assert match.evidence.year == 2019

    def test_department_label_case_folded(self):
        citing = [author("B1", inst("I_UNI", dept="PHYSICS"))]
        assert match_tier(self.timeline, citing, 2019, H).tier is Tier.SAME_DEPT

    def test_same_institution_when_departments_differ(self):
        citing = [author("B1", inst("I_UNI", dept="Chemistry"))]
        assert match_tier(self.timeline, citing, 2019, H).tier is Tier.SAME_INSTITUTION

    def test_same_institution_when_citing_department_absent(self):
        citing = [author("B1", inst("I_UNI"))]
        assert match_tier(self.timeline, citing, 2019, H).tier is Tier.SAME_INSTITUTION

    def test_absent_labels_never_same_dept(self):
        works = [work("W1", 2019, author(TARGET, inst("I_UNI")))]  # no dept label
        timeline = build_timeline(works, TARGET, H)
        citing = [author("B1", inst("I_UNI"))]
        assert match_tier(timeline, citing, 2019, H).tier is Tier.SAME_INSTITUTION

    def test_shared_parent_org(self):
        citing = [author("B1", inst("I_OTHERUNI"))]
        match = match_tier(self.timeline, citing, 2019, H)
        assert match.tier is Tier.SAME_PARENT_ORG
        assert "I_SYSTEM" in match.evidence.institution_ids

    def test_citing_author_at_the_parent_itself(self):
        citing = [author("B1", inst("I_SYSTEM"))]
        assert match_tier(self.timeline, citing, 2019, H).tier is Tier.SAME_PARENT_ORG

    def test_different(self):
        citing = [author("B1", inst("I_FAR"))]
        match = match_tier(self.timeline, citing, 2019, H)
        assert match.tier is Tier.DIFFERENT
        assert match.evidence.institution_ids == ("I_FAR",)

    def test_rule_a_no_timeline_entry_for_year(self):
        citing = [author("B1", inst("I_UNI"))]
        match = match_tier(self.timeline, citing, 2005, H)
        assert match.tier is Tier.INSUFFICIENT_DATA

    def test_rule_b_no_citing_affiliations(self):
        citing = [author("B1"), author("B2")]
        match = match_tier(self.timeline, citing, 2019, H)
        assert match.tier is Tier.INSUFFICIENT_DATA
        assert match.authors_with_data == 0
        assert match.authors_without_data == 2

    def test_rules_a_b_are_the_only_insufficient_causes(self):
        # affiliations on both sides for the year -> never INSUFFICIENT_DATA
        citing = [author("B1", inst("I_FAR"))]
        for year in (2018, 2019, 2020):
            assert match_tier(self.timeline, citing, year, H).tier is not \
                Tier.INSUFFICIENT_DATA

    def test_missing_citation_year_is_insufficient(self):
        citing = [author("B1", inst("I_UNI"))]
        assert match_tier(self.timeline, citing, None, H).tier is \
            Tier.INSUFFICIENT_DATA

    def test_unresolvable_citing_institution_treated_as_missing(self):
        citing = [author("B1", inst("I_NOWHERE"))]
        assert match_tier(self.timeline, citing, 2019, H).tier is \
            Tier.INSUFFICIENT_DATA

    def test_strongest_tier_wins_across_authors(self):
        citing = [
            author("B1", inst("I_FAR")),
            author("B2", inst("I_OTHERUNI")),
            author("B3", inst("I_UNI", dept="Physics")),
        ]
        match = match_tier(self.timeline, citing, 2019, H)
        assert match.tier is Tier.SAME_DEPT
        assert match.evidence.citing_author_id == "B3"

    def test_permutation_invariance(self):
        citing = [
            author("B1", inst("I_FAR")),
            author("B2", inst("I_OTHERUNI")),
            author("B3", inst("I_UNI")),
        ]
        tiers = {match_tier(self.timeline, list(p), 2019, H).tier
                 for p in itertools.permutations(citing)}
        assert tiers == {Tier.SAME_INSTITUTION}

    def test_parent_matching_symmetric(self):
        for a, b in itertools.permutations(["I_UNI", "I_OTHERUNI"], 2):
            assert H.shares_ancestor(a, b) == H.shares_ancestor(b, a)
        assert H.shares_ancestor("I_UNI", "I_UNI") == set()

    def test_exact_year_no_tolerance(self):
        citing = [author("B1", inst("I_UNI"))]
        assert match_tier(self.timeline, citing, 2021, H).tier is \
            Tier.INSUFFICIENT_DATA  # one year after the last evidence year

    def test_lone_affiliated_author_counts_recorded(self):
        citing = [author("B1", inst("I_UNI")), author("B2"), author("B3")]
        match = match_tier(self.timeline, citing, 2019, H)
        assert match.authors_with_data == 1
        assert match.authors_without_data == 2

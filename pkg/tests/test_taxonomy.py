import random

import pytest

from qgen.errors import ConflictingExtension, MalformedExtension, UnknownOutcome, UnknownSubpoint
from qgen.taxonomy import (
    BloomLevel,
    NcaaaDomain,
    SUBPOINT_IDS,
    Taxonomy,
    VERB_ROWS,
    domain_for_so,
    load_registry,
    ncaaa_domain_for_level,
)


def test_bloom_levels_are_a_bijection_onto_1_to_6():
    ordinals = sorted(level.ordinal for level in BloomLevel)
    assert ordinals == [1, 2, 3, 4, 5, 6]
    assert {level.label for level in BloomLevel} == {
        "Remembering", "Understanding", "Applying", "Analyzing", "Evaluating", "Creating",
    }


def test_three_ncaaa_domains():
    assert {d.label for d in NcaaaDomain} == {"Knowledge", "Skills", "Values"}


def test_level_reduction():
    assert ncaaa_domain_for_level(BloomLevel.CREATING) is NcaaaDomain.SKILLS
    assert ncaaa_domain_for_level(BloomLevel.APPLYING) is NcaaaDomain.SKILLS
    assert ncaaa_domain_for_level(BloomLevel.ANALYZING) is NcaaaDomain.SKILLS
    assert ncaaa_domain_for_level(BloomLevel.EVALUATING) is NcaaaDomain.SKILLS
    assert ncaaa_domain_for_level(BloomLevel.UNDERSTANDING) is NcaaaDomain.KNOWLEDGE
    assert ncaaa_domain_for_level(BloomLevel.REMEMBERING) is NcaaaDomain.KNOWLEDGE


def test_domain_for_so_table():
    assert domain_for_so(1) is NcaaaDomain.SKILLS
    assert domain_for_so(2) is NcaaaDomain.SKILLS
    assert domain_for_so(3) is NcaaaDomain.VALUES
    assert domain_for_so(4) is NcaaaDomain.VALUES
    assert domain_for_so(5) is NcaaaDomain.VALUES
    assert domain_for_so(6) is NcaaaDomain.SKILLS
    with pytest.raises(UnknownOutcome):
        domain_for_so(7)
    with pytest.raises(UnknownOutcome):
        domain_for_so(0)


def test_registry_has_five_distinct_rows_and_53_lemmas(tax):
    rows = set(tax.registry.rows.values())
    assert len(rows) == 5
    # brute-force union of the row fixtures, deduplicated
    union = set()
    for lemmas, _, _ in VERB_ROWS.values():
        union |= set(lemmas)
    assert len(tax.registry) == len(union) == 53
    duplicates = sorted(
        lemma
        for lemma in union
        if sum(lemma in lemmas for lemmas, _, _ in VERB_ROWS.values()) > 1
    )
    assert duplicates == ["question", "write"]


def test_subpoint_catalog_is_exactly_the_17_ids(tax):
    expected = {
        "1.1", "1.2", "2.1", "2.2", "2.3", "3.1", "3.2", "3.3",
        "4.1", "4.2", "4.3", "5.1", "5.2", "5.3", "6.1", "6.2", "6.3",
    }
    assert set(tax.subpoints) == expected == set(SUBPOINT_IDS)
    for sp in tax.subpoints.values():
        assert sp.verb_row
        assert sp.ncaaa_domain is domain_for_so(sp.so_id)


def test_verb_rows_for_subpoints(tax):
    assert tax.verbs_for_subpoint("2.1") == (
        "assemble", "construct", "create", "design", "develop", "formulate", "write",
    )
    assert tax.verbs_for_subpoint("4.2") == (
        "classify", "describe", "discuss", "explain", "identify", "locate",
        "recognize", "report", "select", "translate", "paraphrase",
    )
    with pytest.raises(UnknownSubpoint):
        tax.verbs_for_subpoint("7.1")


def test_any_level_subpoints(tax):
    for sp_id in ("5.2", "5.3"):
        sp = tax.subpoint(sp_id)
        assert sp.any_level
        assert sp.bloom_levels == frozenset()
    assert not tax.subpoint("2.3").any_level
    assert tax.subpoint("2.3").bloom_levels == {BloomLevel.EVALUATING}


def test_classify_examples(tax):
    def tags(lemma):
        return {(t.level.label, t.affective) for t in tax.classify_verb(lemma)}

    assert tags("design") == {("Creating", False)}
    assert tags("write") == {("Applying", False), ("Creating", False)}
    assert tags("question") == {("Analyzing", False), ("Evaluating", True)}
    assert tags("dance") == set()


def test_level_set_consistency(tax):
    # a lemma carries level B iff some row labeled B contains it
    for lemma in tax.registry.lemmas:
        expected = {
            level for lemmas, level, _ in VERB_ROWS.values() if lemma in lemmas
        }
        assert tax.registry.levels(lemma) == expected


def test_subpoint_row_consistency(tax):
    for sp in tax.subpoints.values():
        for lemma in sp.verb_row:
            levels = tax.registry.levels(lemma)
            assert sp.bloom_levels <= levels or sp.any_level


def test_affective_flags(tax):
    affective_row = VERB_ROWS["affective"][0]
    for lemma in tax.registry.lemmas:
        assert tax.registry.entry(lemma).affective == (lemma in affective_row)


def test_extension_adds_new_lemma(tax):
    registry, _, _ = load_registry(
        {"schema": "taxonomy-ext.v1",
         "verbs": [{"lemma": "compose", "levels": ["Creating"]}]}
    )
    assert "compose" in registry
    assert registry.levels("compose") == {BloomLevel.CREATING}
    # all built-ins unchanged
    for lemma in tax.registry.lemmas:
        assert registry.levels(lemma) == tax.registry.levels(lemma)


def test_extension_adds_forms_and_levels():
    registry, _, _ = load_registry(
        {"schema": "taxonomy-ext.v1",
         "verbs": [
             {"lemma": "write", "levels": ["Applying", "Creating", "Remembering"]},
             {"lemma": "design", "forms": ["redesigned"]},
         ]}
    )
    assert registry.levels("write") == {
        BloomLevel.APPLYING, BloomLevel.CREATING, BloomLevel.REMEMBERING,
    }
    assert registry.forms["redesigned"] == "design"


def test_extension_monotonicity(tax):
    rng = random.Random(7)
    lemmas = list(tax.registry.lemmas)
    for _ in range(25):
        verbs = []
        for i in range(rng.randint(1, 4)):
            if rng.random() < 0.5:
                base = rng.choice(lemmas)
                extra = rng.choice([l.label for l in BloomLevel])
                levels = sorted({l.label for l in tax.registry.levels(base)} | {extra})
                verbs.append({"lemma": base, "levels": levels})
            else:
                verbs.append({"lemma": f"verb{i}x", "levels": [rng.choice([l.label for l in BloomLevel])]})
        seen = set()
        verbs = [v for v in verbs if not (v["lemma"] in seen or seen.add(v["lemma"]))]
        registry, _, _ = load_registry({"schema": "taxonomy-ext.v1", "verbs": verbs})
        for lemma in tax.registry.lemmas:
            assert tax.registry.levels(lemma) <= registry.levels(lemma)


@pytest.mark.parametrize("config", [
    {"schema": "taxonomy-ext.v2", "verbs": []},
    {"verbs": []},
    {"schema": "taxonomy-ext.v1"},
    {"schema": "taxonomy-ext.v1", "verbs": [{"lemma": "Compose", "levels": ["Creating"]}]},
    {"schema": "taxonomy-ext.v1", "verbs": [{"lemma": "compose"}]},
    {"schema": "taxonomy-ext.v1", "verbs": [{"lemma": "compose", "levels": []}]},
    {"schema": "taxonomy-ext.v1", "verbs": [{"lemma": "compose", "levels": ["Inventing"]}]},
    {"schema": "taxonomy-ext.v1",
     "verbs": [{"lemma": "compose", "levels": ["Creating"]},
               {"lemma": "compose", "levels": ["Creating"]}]},
    {"schema": "taxonomy-ext.v1", "verbs": [{"lemma": "compose", "levels": ["Creating"], "extra": 1}]},
])
def test_malformed_extensions(config):
    with pytest.raises(MalformedExtension):
        load_registry(config)


@pytest.mark.parametrize("config", [
    {"schema": "taxonomy-ext.v1", "verbs": [{"lemma": "write", "levels": ["Creating"]}]},
    {"schema": "taxonomy-ext.v1", "verbs": [{"lemma": "design", "levels": ["Creating"], "affective": True}]},
    {"schema": "taxonomy-ext.v1",
     "verbs": [{"lemma": "compose", "levels": ["Creating"], "forms": ["wrote"]}]},
    {"schema": "taxonomy-ext.v1",
     "verbs": [{"lemma": "compose", "levels": ["Creating"], "forms": ["design"]}]},
])
def test_conflicting_extensions(config):
    with pytest.raises(ConflictingExtension):
        load_registry(config)


def test_table_metadata(tax):
    rows = tax.tables.so_rows
    assert set(rows) == {1, 2, 3, 4, 5, 6}
    assert rows[1].level_labels == ("L3", "L5", "L6")
    assert rows[2].level_labels == ("L5", "L6")
    assert rows[6].domain is NcaaaDomain.SKILLS


def test_taxonomy_handles_are_independent():
    a = Taxonomy.load()
    b = Taxonomy.load({"schema": "taxonomy-ext.v1",
                       "verbs": [{"lemma": "memorize", "levels": ["Remembering"]}]})
    assert "memorize" in b.registry
    assert "memorize" not in a.registry

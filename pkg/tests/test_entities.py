import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import treebank
from igpipe.errors import LexiconError, ValidationError
from igpipe.hypergraph import (
    GraphMode,
    Hyperedge,
    Hypergraph,
    build_hypergraph,
    edge_size_histogram,
    unmentioned_entities,
)
from igpipe.lexicon import EntityKind, lexicon_from_csv
from igpipe.mentions import Mention, MentionClass, extract_mentions
from igpipe.tagger import tag_constitutive, tag_regulative
from test_tagger import WORKED_LEXICON

LEX_TEXT = (
    "canonical_name,kind,surface_form\n"
    "State Party,actor,state party\n"
    "State Party,actor,states parties\n"
    "Committee,actor,committee\n"
    "request,object,request\n"
)


def test_lexicon_csv_merges_forms_per_entity():
    lex = lexicon_from_csv(LEX_TEXT)
    sp = lex.entry("State Party")
    assert sp.kind is EntityKind.ACTOR
    assert sp.surface_forms == (("state", "party"), ("states", "parties"))


def test_lexicon_rejects_bad_kind():
    with pytest.raises(LexiconError, match="kind must be actor or object"):
        lexicon_from_csv("canonical_name,kind,surface_form\nX,thing,x\n")


def test_lexicon_rejects_conflicting_kinds():
    bad = (
        "canonical_name,kind,surface_form\n"
        "X,actor,x\n"
        "X,object,ex\n"
    )
    with pytest.raises(LexiconError, match="two kinds"):
        lexicon_from_csv(bad)


def test_lexicon_rejects_form_shared_by_two_entries():
    bad = (
        "canonical_name,kind,surface_form\n"
        "X,actor,the body\n"
        "Y,actor,the body\n"
    )
    with pytest.raises(LexiconError, match="maps to both"):
        lexicon_from_csv(bad)


def test_lexicon_rejects_missing_header():
    with pytest.raises(LexiconError, match="header"):
        lexicon_from_csv("name,type,form\nX,actor,x\n")


def test_fig1_mention_classes(fig1):
    ann = tag_regulative(fig1, WORKED_LEXICON)
    mentions = extract_mentions(ann, WORKED_LEXICON)
    by_entity = {m.entity: m for m in mentions}
    assert by_entity["State Party"].mention_class is MentionClass.ATTRIBUTE_OR_ENTITY
    assert by_entity["request"].mention_class is MentionClass.OBJECT_OR_PROPERTY
    assert by_entity["Committee"].mention_class is MentionClass.INDIRECT_OBJECT
    # the worked property-of-object case
    assert by_entity["financial assistance"].mention_class is MentionClass.IN_OBJECT_PROPS
    assert by_entity["State Party"].token_span == (6, 7)


def test_no_lexicon_hits_yields_empty(fig3):
    ann = tag_constitutive(fig3)
    assert extract_mentions(ann, WORKED_LEXICON) == []


def test_mention_not_extracted_from_context_region(fig1):
    # without a lexicon at tagging time, "the Committee" lands in Context
    ann = tag_regulative(fig1)
    mentions = extract_mentions(ann, WORKED_LEXICON)
    assert "Committee" not in {m.entity for m in mentions}


def test_longest_match_wins_and_no_overlap():
    lex = lexicon_from_csv(
        "canonical_name,kind,surface_form\n"
        "Assembly,actor,assembly\n"
        "General Assembly,actor,general assembly\n"
    )
    s = treebank.stmt(
        "d", "ga",
        [
            (1, "The", "the", "DET", 3, "det"),
            (2, "General", "general", "PROPN", 3, "compound"),
            (3, "Assembly", "assembly", "PROPN", 4, "nsubj"),
            (4, "decides", "decide", "VERB", 0, "root"),
        ],
    )
    ann = tag_regulative(s)
    mentions = extract_mentions(ann, lex)
    assert [m.entity for m in mentions] == ["General Assembly"]
    assert mentions[0].token_span == (2, 3)


def test_match_cannot_span_two_regions(fig1):
    # "assistance to the committee" bridges DirectObjectProp and
    # IndirectObject regions; a form covering it must not match
    lex = lexicon_from_csv(
        "canonical_name,kind,surface_form\n"
        "Committee,actor,committee\n"
        "odd,object,assistance to the committee\n"
    )
    ann = tag_regulative(fig1, lex)
    mentions = extract_mentions(ann, lex)
    assert {m.entity for m in mentions} == {"Committee"}


def test_case_insensitive_matching(fig1):
    lex = lexicon_from_csv(
        "canonical_name,kind,surface_form\nCommittee,actor,COMMITTEE\n"
    )
    ann = tag_regulative(fig1, lex)
    mentions = extract_mentions(ann, lex)
    assert [m.entity for m in mentions] == ["Committee"]


def mk_mention(entity, sid, cls, doc="d", span=(1, 1)):
    return Mention(
        entity=entity, doc_id=doc, statement_id=sid,
        mention_class=MentionClass(cls), token_span=span,
    )


MINI_LEX = lexicon_from_csv(
    "canonical_name,kind,surface_form\n"
    "State Party,actor,state party\n"
    "Committee,actor,committee\n"
    "request,object,request\n"
    "ghost,object,ghost\n"
)


def test_single_statement_two_mentions_graph():
    mentions = [mk_mention("State Party", "s1", 6), mk_mention("Committee", "s1", 4)]
    h = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, MINI_LEX)
    assert h.vertices == ("Committee", "State Party")
    assert len(h.edges) == 1
    assert h.edges[0].members == frozenset({"State Party", "Committee"})


def test_fig1_hyperedge_size_three(fig1):
    ann = tag_regulative(fig1, WORKED_LEXICON)
    mentions = [
        m for m in extract_mentions(ann, WORKED_LEXICON)
        if m.entity in {"State Party", "request", "Committee"}
    ]
    h = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, WORKED_LEXICON)
    assert h.edges[0].members == frozenset({"State Party", "request", "Committee"})


def test_hyperdegree_counts_statements():
    mentions = [
        mk_mention("State Party", "s1", 6),
        mk_mention("State Party", "s2", 6),
        mk_mention("Committee", "s2", 4),
    ]
    h = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, MINI_LEX)
    degree = sum(1 for e in h.edges if "State Party" in e.members)
    assert degree == 2


def test_duplicate_mentions_collapse_to_one_membership():
    mentions = [
        mk_mention("Committee", "s1", 6),
        mk_mention("Committee", "s1", 4),
    ]
    h = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, MINI_LEX)
    assert h.edges[0].members == frozenset({"Committee"})
    assert len(h.edges) == 1


def test_actors_only_filters_objects():
    mentions = [
        mk_mention("State Party", "s1", 6),
        mk_mention("request", "s1", 5),
        mk_mention("request", "s2", 5),
    ]
    actors = build_hypergraph(mentions, GraphMode.ACTORS, MINI_LEX)
    both = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, MINI_LEX)
    assert actors.vertices == ("State Party",)
    assert len(actors.edges) == 1  # s2 has no qualifying mention -> no edge
    assert set(actors.vertices) <= set(both.vertices)


def test_histogram_counts_and_sum():
    edges = (
        Hyperedge("d", "s1", frozenset({"a", "b"})),
        Hyperedge("d", "s2", frozenset({"a", "c"})),
        Hyperedge("d", "s3", frozenset({"a", "b", "c"})),
    )
    h = Hypergraph(vertices=("a", "b", "c"), edges=edges)
    hist = edge_size_histogram(h)
    assert hist == {2: 2, 3: 1}
    assert sum(hist.values()) == len(h.edges)


def test_histogram_empty_graph():
    h = Hypergraph(vertices=(), edges=())
    assert edge_size_histogram(h) == {}


def test_worked_examples_mini_corpus_max_size(fig1, fig2):
    ann1 = tag_regulative(fig1, WORKED_LEXICON)
    ann2 = tag_constitutive(fig2)
    mentions = extract_mentions(ann1, WORKED_LEXICON) + extract_mentions(
        ann2, WORKED_LEXICON
    )
    h = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, WORKED_LEXICON)
    assert max(len(e.members) for e in h.edges) >= 3


def test_unmentioned_entities_sidecar():
    mentions = [mk_mention("State Party", "s1", 6)]
    h = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, MINI_LEX)
    missing = [e.canonical_name for e in unmentioned_entities(MINI_LEX, h)]
    assert missing == ["Committee", "ghost", "request"]


def test_empty_hyperedge_rejected():
    with pytest.raises(ValidationError, match="empty hyperedge"):
        Hyperedge("d", "s1", frozenset())


@given(
    st.lists(
        st.tuples(
            st.sampled_from(["State Party", "Committee", "request", "ghost"]),
            st.sampled_from(["s1", "s2", "s3"]),
            st.integers(min_value=1, max_value=6),
        ),
        max_size=25,
    )
)
@settings(max_examples=100)
def test_actors_edges_subset_property(raw):
    mentions = [mk_mention(e, s, c) for e, s, c in raw]
    actors = build_hypergraph(mentions, GraphMode.ACTORS, MINI_LEX)
    both = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, MINI_LEX)
    both_by_ref = {e.statement_ref: e.members for e in both.edges}
    for e in actors.edges:
        assert e.members <= both_by_ref[e.statement_ref]
    hist = edge_size_histogram(both)
    assert sum(hist.values()) == len(both.edges)

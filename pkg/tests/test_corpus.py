from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankcf.corpus import (
    load_corpus,
    make_document,
    normalize_whitespace,
    parse_query,
    split_sentences,
    tokenize,
)
from rankcf.errors import (
    DuplicateIdError,
    EmptyBodyError,
    MalformedLineError,
    MissingFileError,
)

FIVE_DOCS = Path(__file__).parent / "fixtures" / "five_docs.jsonl"


class TestTokenize:
    def test_punctuation_and_case(self):
        assert tokenize("COVID-19 outbreak!") == ["covid", "19", "outbreak"]

    def test_empty(self):
        assert tokenize("") == []

    def test_hyphen_and_digits(self):
        assert tokenize("5G micro-chip") == ["5g", "micro", "chip"]

    def test_underscore_separates(self):
        assert tokenize("foo_bar") == ["foo", "bar"]

    @given(st.text(max_size=200))
    def test_lowercase_nonempty_terms(self, text):
        for term in tokenize(text):
            assert term
            assert term == term.lower()


class TestSplitSentences:
    def test_two_sentences(self):
        texts = [s.text for s in split_sentences("A covid outbreak. It spread.")]
        assert texts == ["A covid outbreak.", "It spread."]

    def test_no_terminator(self):
        assert len(split_sentences("No terminator here")) == 1

    def test_abbreviation_guard(self):
        texts = [s.text for s in split_sentences("Dr. Smith spoke. He left.")]
        assert texts == ["Dr. Smith spoke.", "He left."]

    def test_single_letter_guard(self):
        assert len(split_sentences("J. Smith spoke. He left.")) == 2

    def test_dotted_abbreviation_guard(self):
        assert len(split_sentences("It changed e.g. travel habits. Nobody minded.")) == 2

    def test_terminator_without_whitespace_does_not_split(self):
        assert len(split_sentences("Version 3.14 shipped")) == 1

    def test_indices_consecutive(self):
        sentences = split_sentences("One. Two! Three?")
        assert [s.index for s in sentences] == [0, 1, 2]

    def test_tokens_match_text(self):
        for s in split_sentences("A covid outbreak. It spread."):
            assert s.tokens == tokenize(s.text)

    @given(st.text(max_size=300))
    @settings(max_examples=200)
    def test_join_reproduces_body_up_to_whitespace(self, body):
        sentences = split_sentences(body)
        joined = " ".join(s.text for s in sentences)
        assert normalize_whitespace(joined) == normalize_whitespace(body)

    @given(st.text(max_size=300))
    @settings(max_examples=200)
    def test_resplit_of_a_sentence_is_one_sentence(self, body):
        for s in split_sentences(body):
            assert len(split_sentences(s.text)) == 1

    @given(st.text(min_size=1, max_size=300).filter(lambda t: t.strip()))
    @settings(max_examples=200)
    def test_document_tokens_equal_sentence_token_concat(self, body):
        doc = make_document("x", body)
        concat = [t for s in doc.sentences for t in s.tokens]
        assert doc.tokens == concat


class TestParseQuery:
    def test_tokens_and_term_set(self):
        q = parse_query("Covid covid outbreak")
        assert q.tokens == ["covid", "covid", "outbreak"]
        assert q.term_set == {"covid", "outbreak"}


class TestLoadCorpus:
    def test_two_lines(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"id": "a", "body": "Cats sat."}\n{"id": "b", "body": "Dogs ran."}\n'
        )
        corpus = load_corpus(path)
        assert len(corpus) == 2
        assert corpus.get("a").sentences[0].tokens == ["cats", "sat"]

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "body": "x y"}\n{"id": "a", "body": "z w"}\n')
        with pytest.raises(DuplicateIdError):
            load_corpus(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingFileError):
            load_corpus(tmp_path / "absent.jsonl")

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "body": "x"}\nnot json\n')
        with pytest.raises(MalformedLineError) as err:
            load_corpus(path)
        assert err.value.line_number == 2

    def test_missing_required_field(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a"}\n')
        with pytest.raises(MalformedLineError):
            load_corpus(path)

    def test_empty_body(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "body": "   "}\n')
        with pytest.raises(EmptyBodyError):
            load_corpus(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "body": "x y"}\n\n{"id": "b", "body": "z"}\n')
        assert len(load_corpus(path)) == 2

    def test_five_doc_fixture_hand_counted_sentence_splits(self):
        # Hand segmentation: f1 has no terminator; f3/f4/f5 exercise the
        # abbreviation and single-letter guards.
        corpus = load_corpus(FIVE_DOCS)
        counts = {doc.id: len(doc.sentences) for doc in corpus}
        assert counts == {"f1": 1, "f2": 3, "f3": 2, "f4": 2, "f5": 3}

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slorkit.corpus import (
    LATIN_LETTER_RANGES,
    CorpusSplit,
    Sentence,
    clean_text,
    dedupe,
    filter_sentences,
    ingest_dir,
    read_lines,
    split_corpus,
    write_manifest,
    write_sentences,
)
from slorkit.errors import DataError


def sent(text):
    return Sentence.from_text(text)


class TestCleanText:
    def test_whitespace_collapse(self):
        assert clean_text("a\t\tb\n c") == "a b c"

    def test_junk_removal_then_collapse(self):
        assert clean_text("x  •  y") == "x y"

    def test_trim(self):
        assert clean_text("  hello  ") == "hello"

    def test_junk_inside_word_becomes_boundary(self):
        assert clean_text("x•y") == "x y"

    def test_custom_junk_set(self):
        assert clean_text("a-b", junk_chars=frozenset("-")) == "a b"

    @given(st.text(max_size=200))
    def test_idempotent(self, raw):
        once = clean_text(raw)
        assert clean_text(once) == once


class TestSentence:
    def test_tokens_are_whitespace_split(self):
        s = sent("a b c")
        assert s.tokens == ("a", "b", "c")
        assert len(s.id) == 16

    def test_id_is_content_stable(self):
        assert sent("a b").id == sent("a b").id
        assert sent("a b").id != sent("a c").id

    def test_rejects_unnormalized_text(self):
        with pytest.raises(DataError):
            Sentence(id="x", text="a  b", tokens=("a", "b"))

    def test_rejects_empty(self):
        with pytest.raises(DataError):
            sent("")


class TestFilter:
    def _sent_with_tokens(self, n):
        return sent(" ".join(f"w{i}" for i in range(n)))

    def test_length_bounds_inclusive(self):
        kept = filter_sentences(
            [self._sent_with_tokens(n) for n in (7, 8, 25, 26)], 8, 25
        )
        assert [len(s.tokens) for s in kept] == [8, 25]

    def test_latin_rejection(self):
        ok = sent("один два три четыре пять шесть семь восемь")
        bad = sent("один два три четыре пять the семь восемь")
        kept = filter_sentences([ok, bad], 8, 25, LATIN_LETTER_RANGES)
        assert kept == [ok]

    def test_output_subset_and_predicates_hold(self):
        sents = [self._sent_with_tokens(n) for n in range(1, 30)]
        kept = filter_sentences(sents, 8, 25)
        assert all(s in sents for s in kept)
        assert all(8 <= len(s.tokens) <= 25 for s in kept)

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            filter_sentences([], 5, 4)


class TestDedupe:
    def test_first_occurrence_kept(self):
        a1, a2, c = sent("a b"), sent("a b"), sent("c d")
        assert dedupe([a1, a2, c]) == [a1, c]

    def test_empty(self):
        assert dedupe([]) == []

    def test_post_clean_collision(self):
        one = sent(clean_text("a b"))
        two = sent(clean_text("a  b"))
        assert dedupe([one, two]) == [one]


class TestSplit:
    def _corpus(self, n=10):
        return [sent(f"tok{i} tok{i}b") for i in range(n)]

    def test_deterministic(self):
        c = self._corpus()
        a = split_corpus(c, 6, 2, 2, seed=1)
        b = split_corpus(c, 6, 2, 2, seed=1)
        assert a == b

    def test_seed_changes_partition(self):
        c = self._corpus(30)
        a = split_corpus(c, 20, 5, 5, seed=1)
        b = split_corpus(c, 20, 5, 5, seed=2)
        assert a.train != b.train

    def test_disjoint_and_counts(self):
        c = self._corpus()
        s = split_corpus(c, 6, 2, 2, seed=5)
        ids = [x.id for part in (s.train, s.validation, s.test) for x in part]
        assert len(ids) == len(set(ids)) == 10

    def test_insufficient(self):
        with pytest.raises(DataError, match="insufficient: have 10, need 12"):
            split_corpus(self._corpus(), 8, 2, 2, seed=1)

    def test_exhaustive_assignment(self):
        c = self._corpus(4)
        s = split_corpus(c, 4, 0, 0, seed=9)
        assert sorted(x.id for x in s.train) == sorted(x.id for x in c)
        assert s.validation == () and s.test == ()


class TestIngestIO:
    def test_ingest_dir(self, tmp_path):
        (tmp_path / "a.txt").write_text(
            "w1 w2 w3 w4 w5 w6 w7 w8\nshort one\nw1 w2 w3 w4 w5 w6 w7 w8\n"
        )
        (tmp_path / "b.txt").write_text("x1  x2\tx3 x4 x5 x6 x7 x8 x9\n")
        got = ingest_dir(tmp_path, 8, 25)
        assert [s.text for s in got] == [
            "w1 w2 w3 w4 w5 w6 w7 w8",
            "x1 x2 x3 x4 x5 x6 x7 x8 x9",
        ]

    def test_ingest_empty_dir(self, tmp_path):
        with pytest.raises(DataError, match="no .*txt"):
            ingest_dir(tmp_path)

    def test_invalid_utf8_names_byte_offset(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_bytes(b"ok line\n\xff\xfe broken\n")
        with pytest.raises(DataError, match="byte offset 8"):
            ingest_dir(tmp_path)

    def test_round_trip_and_manifest(self, tmp_path):
        sents = [sent(f"alpha{i} beta{i}") for i in range(6)]
        split = split_corpus(sents, 4, 1, 1, seed=3)
        write_sentences(tmp_path / "train.txt", split.train, header="config=x seed=3")
        write_manifest(tmp_path / "manifest.tsv", split, header="config=x seed=3")
        lines = read_lines(tmp_path / "train.txt")
        assert lines == [s.text for s in split.train]
        rows = [ln.split("\t") for ln in read_lines(tmp_path / "manifest.tsv")]
        assert len(rows) == 6
        assert {r[1] for r in rows} == {"train", "validation", "test"}
        by_name = {}
        for sid, name, text in rows:
            by_name.setdefault(name, []).append((sid, text))
        assert [t for _, t in by_name["train"]] == [s.text for s in split.train]

    def test_byte_identical_rerun(self, tmp_path):
        sents = [sent(f"alpha{i} beta{i}") for i in range(6)]
        for name in ("one", "two"):
            split = split_corpus(sents, 4, 1, 1, seed=3)
            write_manifest(tmp_path / f"{name}.tsv", split, header="h")
        assert (tmp_path / "one.tsv").read_bytes() == (tmp_path / "two.tsv").read_bytes()

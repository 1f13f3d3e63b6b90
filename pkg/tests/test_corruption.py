import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slorkit.corpus import Sentence
from slorkit.corruption import (
    CorruptionSpec,
    apply_spec,
    build_graded_testset,
    corrupt_tokens,
    delete_word,
    duplicate_word,
    misspell,
    scramble,
    write_graded,
    read_graded,
)
from slorkit.errors import DataError

TOKENS = ["the", "quick", "brown", "fox", "jumps", "over", "a", "lazy", "dog"]


def edit_distance(a, b):
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


class TestMisspell:
    def test_exactly_one_token_changes(self):
        rng = random.Random(0)
        out = misspell(TOKENS, rng)
        assert len(out) == len(TOKENS)
        diffs = [i for i, (a, b) in enumerate(zip(TOKENS, out)) if a != b]
        assert len(diffs) == 1

    def test_single_character_tokens_error(self):
        with pytest.raises(DataError):
            misspell(["a", "b", "c"], random.Random(0))

    def test_deterministic(self):
        assert misspell(TOKENS, random.Random(7)) == misspell(TOKENS, random.Random(7))

    def test_all_identical_pair_token_still_changes(self):
        for seed in range(20):
            out = misspell(["aa"], random.Random(seed))
            assert out != ["aa"]


class TestDeleteWord:
    def test_single_delete(self):
        out = delete_word(TOKENS, random.Random(1), count=1)
        assert len(out) == len(TOKENS) - 1

    def test_double_delete(self):
        out = delete_word(TOKENS, random.Random(1), count=2)
        assert len(out) == len(TOKENS) - 2

    def test_count_too_large(self):
        with pytest.raises(DataError):
            delete_word(["a", "b"], random.Random(0), count=2)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_output_is_subsequence(self, seed):
        out = delete_word(TOKENS, random.Random(seed), count=2)
        it = iter(TOKENS)
        assert all(any(t == x for x in it) for t in out)


class TestDuplicateWord:
    def test_length_plus_one_and_adjacent(self):
        out = duplicate_word(TOKENS, random.Random(3))
        assert len(out) == len(TOKENS) + 1
        assert any(out[i] == out[i + 1] for i in range(len(out) - 1))

    def test_deterministic(self):
        assert duplicate_word(TOKENS, random.Random(5)) == duplicate_word(
            TOKENS, random.Random(5)
        )


class TestScramble:
    def test_full_is_non_identity_permutation(self):
        for seed in range(10):
            out = scramble(TOKENS, random.Random(seed), scope="full")
            assert out != TOKENS
            assert Counter(out) == Counter(TOKENS)

    def test_half_leaves_other_half_verbatim(self):
        for seed in range(10):
            out = scramble(TOKENS, random.Random(seed), scope="half")
            half = len(TOKENS) // 2
            assert Counter(out) == Counter(TOKENS)
            first_same = out[:half] == TOKENS[:half]
            second_same = out[len(out) - half :] == TOKENS[len(TOKENS) - half :]
            assert first_same or second_same
            assert out != TOKENS

    def test_too_short(self):
        with pytest.raises(DataError):
            scramble(["a", "b", "c"], random.Random(0))

    def test_all_identical_tokens_error(self):
        with pytest.raises(DataError):
            scramble(["x", "x", "x", "x"], random.Random(0), scope="full")

    def test_bad_scope(self):
        with pytest.raises(ValueError):
            scramble(TOKENS, random.Random(0), scope="third")


class TestCorruptTokens:
    def test_level2_is_single_edit(self):
        for seed in range(25):
            out, ops = corrupt_tokens(TOKENS, level=2, seed=seed)
            assert len(ops) == 1 and ops[0] in ("misspell", "delete", "duplicate")
            # one word-level edit: bounded token edit distance
            assert 1 <= edit_distance(TOKENS, out) <= 1

    def test_level1_recipe(self):
        kinds = set()
        for seed in range(40):
            out, ops = corrupt_tokens(TOKENS, level=1, seed=seed)
            kinds.add(ops)
            if ops == ("scramble_half",):
                continue
            assert len(ops) == 2
            assert all(op in ("misspell", "delete", "duplicate") for op in ops)
            assert 1 <= edit_distance(TOKENS, out) <= 4
        assert ("scramble_half",) in kinds
        assert any(len(k) == 2 for k in kinds)

    def test_level0_is_full_scramble(self):
        out, ops = corrupt_tokens(TOKENS, level=0, seed=3)
        assert ops == ("scramble_full",)
        assert Counter(out) == Counter(TOKENS) and out != TOKENS

    def test_bad_level(self):
        with pytest.raises(ValueError):
            corrupt_tokens(TOKENS, level=5, seed=0)

    def test_reproducible(self):
        assert corrupt_tokens(TOKENS, 1, 99) == corrupt_tokens(TOKENS, 1, 99)


class TestBuildGradedTestset:
    def _sources(self, n):
        return [
            Sentence.from_text(" ".join(f"w{i}x{j}" for j in range(10))) for i in range(n)
        ]

    def test_default_counts_500(self):
        graded = build_graded_testset(self._sources(600), total=500, seed=1)
        counts = Counter(g.label for g in graded)
        assert counts == {3: 200, 2: 100, 1: 100, 0: 100}

    def test_counts_total_10(self):
        graded = build_graded_testset(self._sources(12), total=10, seed=1)
        assert Counter(g.label for g in graded) == {3: 4, 2: 2, 1: 2, 0: 2}

    def test_insufficient_sources(self):
        with pytest.raises(DataError, match="insufficient sources: have 3, need 10"):
            build_graded_testset(self._sources(3), total=10, seed=1)

    def test_label3_means_untouched(self):
        for g in build_graded_testset(self._sources(30), total=20, seed=4):
            if g.label == 3:
                assert g.corrupted_text == g.original_text and g.spec is None
            else:
                assert g.corrupted_text != g.original_text and g.spec is not None

    def test_examples_reproducible_from_spec(self):
        for g in build_graded_testset(self._sources(40), total=30, seed=8):
            if g.spec is not None:
                assert apply_spec(g.original_text, g.spec) == g.corrupted_text

    def test_same_seed_identical_output(self, tmp_path):
        a = build_graded_testset(self._sources(40), total=30, seed=8)
        b = build_graded_testset(self._sources(40), total=30, seed=8)
        assert a == b
        pa, pb = tmp_path / "a.tsv", tmp_path / "b.tsv"
        write_graded(pa, a)
        write_graded(pb, b)
        assert pa.read_bytes() == pb.read_bytes()

    def test_unique_ids(self):
        graded = build_graded_testset(self._sources(60), total=50, seed=2)
        assert len({g.sentence_id for g in graded}) == 50

    def test_bad_proportions(self):
        with pytest.raises(ValueError):
            build_graded_testset(self._sources(10), total=5, proportions=(0.5, 0.5), seed=0)


class TestGradedFiles:
    def test_round_trip(self, tmp_path):
        sources = [
            Sentence.from_text(" ".join(f"t{i}k{j}" for j in range(9))) for i in range(20)
        ]
        graded = build_graded_testset(sources, total=15, seed=3)
        path = tmp_path / "graded.tsv"
        write_graded(path, graded, header="config=h seed=3")
        back = read_graded(path)
        assert [g.sentence_id for g in back] == [g.sentence_id for g in graded]
        assert [g.label for g in back] == [g.label for g in graded]
        assert [g.corrupted_text for g in back] == [g.corrupted_text for g in graded]
        assert [g.spec for g in back] == [g.spec for g in graded]

    def test_spec_json_round_trip(self):
        spec = CorruptionSpec(target_level=1, operations=("delete", "misspell"), seed=42)
        assert CorruptionSpec.from_json(spec.to_json()) == spec

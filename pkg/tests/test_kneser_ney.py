import math
import random

import pytest

from slorkit.errors import TrainingError
from slorkit.lm import KneserNeyLm, UnigramLm, load_model, perplexity, save_model
from slorkit.lm.vocab import BOS_TOKEN, EOS_TOKEN, UNK_TOKEN

from .oracles import KnOracle

FIXTURE = [["a", "b"], ["a", "c"]]


def random_corpus(rng, max_tokens=30):
    """Random corpus over a 3-letter alphabet with <= max_tokens tokens."""
    vocab = ["x", "y", "z"]
    corpus = []
    budget = rng.randint(6, max_tokens)
    while budget > 0:
        n = rng.randint(1, min(6, budget))
        corpus.append([rng.choice(vocab) for _ in range(n)])
        budget -= n
    return corpus


class TestFixtureCorpus:
    def test_bigram_formula_by_hand(self):
        d = 0.75
        m = KneserNeyLm(order=2, discount=d).fit(FIXTURE)
        # continuation counts: a,b,c each have one distinct left extension and
        # end-of-sentence has two, so the base level sums to 5 over the
        # predictable vocabulary {a, b, c, </s>, <unk>}
        p_cont_b = (1 - d) / 5 + d * (4 / 5) * (1 / 5)
        assert m.conditional_prob("b", ["a"]) == pytest.approx(
            (1 - d) / 2 + d * p_cont_b, abs=1e-12
        )

    def test_matches_oracle_everywhere(self):
        d = 0.75
        m = KneserNeyLm(order=2, discount=d).fit(FIXTURE)
        oracle = KnOracle(FIXTURE, order=2, discount=d)
        targets = ["a", "b", "c", EOS_TOKEN, UNK_TOKEN]
        contexts = [["a"], ["b"], ["c"], [BOS_TOKEN], ["never-seen"], []]
        for ctx in contexts:
            for t in targets:
                assert m.conditional_prob(t, ctx) == pytest.approx(
                    oracle.conditional_prob(t, ctx), abs=1e-9
                )

    def test_sentence_log_prob_matches_oracle(self):
        m = KneserNeyLm(order=2, discount=0.75).fit(FIXTURE)
        oracle = KnOracle(FIXTURE, order=2, discount=0.75)
        for sent in (["a", "b"], ["a", "c"], ["b", "a"], ["a", "q"]):
            assert m.sentence_log_prob(sent) == pytest.approx(
                oracle.sentence_log_prob(sent), abs=1e-9
            )

    def test_unseen_context_backs_off_exactly(self):
        # ("b","a") and ("c","a") are unseen trigram contexts sharing the
        # suffix ("a",), so both must equal its lower-order distribution
        m = KneserNeyLm(order=3, discount=0.5).fit(FIXTURE)
        d1 = m.prob_dist(["b", "a"])
        d2 = m.prob_dist(["c", "a"])
        assert d1 == d2
        oracle = KnOracle(FIXTURE, order=3, discount=0.5)
        for tok, p in d1.items():
            w = tok if tok in oracle.kept or tok == EOS_TOKEN else UNK_TOKEN
            assert p == pytest.approx(oracle._p(w, ["a"]), abs=1e-12)


class TestRandomizedOracle:
    @pytest.mark.parametrize("seed", range(8))
    def test_conditionals_match(self, seed):
        rng = random.Random(seed)
        corpus = random_corpus(rng)
        order = rng.choice([2, 3])
        d = rng.choice([0.25, 0.5, 0.75])
        m = KneserNeyLm(order=order, discount=d).fit(corpus)
        oracle = KnOracle(corpus, order=order, discount=d)
        contexts = [["x"], ["y", "z"], ["z", "z"], ["q"], []]
        for ctx in contexts:
            for t in ["x", "y", "z", EOS_TOKEN, UNK_TOKEN]:
                assert m.conditional_prob(t, ctx) == pytest.approx(
                    oracle.conditional_prob(t, ctx), abs=1e-9
                )
        for sent in corpus[:3]:
            assert m.sentence_log_prob(sent) == pytest.approx(
                oracle.sentence_log_prob(sent), abs=1e-9
            )


class TestNormalization:
    @pytest.mark.parametrize("order", [2, 3, 5])
    def test_distributions_sum_to_one(self, order, fixture_token_lists):
        corpus = fixture_token_lists[:60]
        m = KneserNeyLm(order=order, discount=0.75).fit(corpus)
        rng = random.Random(1)
        contexts = [[]]
        for _ in range(20):
            sent = rng.choice(corpus)
            i = rng.randrange(len(sent))
            contexts.append(sent[max(0, i - order + 1) : i + 1])
        contexts.append(["unseen-token"] * (order - 1))
        for ctx in contexts:
            assert sum(m.prob_dist(ctx).values()) == pytest.approx(1.0, abs=1e-9)

    def test_bos_never_predicted(self, fixture_token_lists):
        m = KneserNeyLm(order=3, discount=0.75).fit(fixture_token_lists[:40])
        dist = m.prob_dist(fixture_token_lists[0][:2])
        assert BOS_TOKEN not in dist


class TestContract:
    def test_sum_consistency(self, fixture_token_lists):
        m = KneserNeyLm(order=3, discount=0.75).fit(fixture_token_lists[:50])
        toks = fixture_token_lists[0]
        assert m.sentence_log_prob(toks) == pytest.approx(
            sum(m.token_log_probs(toks)), abs=1e-12
        )
        assert m.predicted_token_count(toks) == len(toks) + 1

    def test_log_probs_nonpositive(self, fixture_token_lists):
        m = KneserNeyLm(order=2, discount=0.25).fit(fixture_token_lists[:50])
        for toks in fixture_token_lists[:10]:
            assert all(lp <= 0.0 for lp in m.token_log_probs(toks))

    def test_parameter_errors(self):
        with pytest.raises(ValueError):
            KneserNeyLm(order=1).fit(FIXTURE)
        with pytest.raises(ValueError):
            KneserNeyLm(discount=0.0).fit(FIXTURE)
        with pytest.raises(ValueError):
            KneserNeyLm(discount=1.0).fit(FIXTURE)

    def test_empty_corpus(self):
        with pytest.raises(TrainingError):
            KneserNeyLm().fit([])


class TestUnkPolicy:
    def test_hapax_replacement(self):
        # b and c occur once; with the threshold at 2 they train the unknown
        m = KneserNeyLm(order=2, discount=0.75, unk_min_count=2).fit(FIXTURE)
        assert "b" not in m.vocab_
        assert m.conditional_prob("b", ["a"]) == m.conditional_prob("never-seen", ["a"])
        oracle = KnOracle(FIXTURE, order=2, discount=0.75, unk_min_count=2)
        for t in ["a", "b", EOS_TOKEN]:
            assert m.conditional_prob(t, ["a"]) == pytest.approx(
                oracle.conditional_prob(t, ["a"]), abs=1e-9
            )

    def test_replacement_keeps_normalization(self, fixture_token_lists):
        m = KneserNeyLm(order=3, discount=0.75, unk_min_count=2).fit(fixture_token_lists)
        for ctx in (fixture_token_lists[0][:2], ["nope", "nope"]):
            assert sum(m.prob_dist(ctx).values()) == pytest.approx(1.0, abs=1e-9)


class TestPerplexityRegression:
    def test_kn5_beats_unigram_on_fixture_training_corpus(self, fixture_token_lists):
        kn = KneserNeyLm(order=5, discount=0.75).fit(fixture_token_lists)
        uni = UnigramLm(smoothing_k=1.0).fit(fixture_token_lists)
        assert perplexity(kn, fixture_token_lists) <= perplexity(uni, fixture_token_lists)


class TestSerialization:
    def test_bit_identical_scores_after_reload(self, tmp_path, fixture_token_lists):
        m = KneserNeyLm(order=3, discount=0.75, unk_min_count=2).fit(fixture_token_lists[:80])
        path = tmp_path / "kn.model"
        save_model(m, path)
        loaded = load_model(path)
        assert loaded.order == m.order and loaded.discount == m.discount
        rng = random.Random(6)
        for _ in range(30):
            toks = rng.choice(fixture_token_lists)
            assert loaded.token_log_probs(toks) == m.token_log_probs(toks)

    def test_resave_is_byte_exact(self, tmp_path, fixture_token_lists):
        m = KneserNeyLm(order=2, discount=0.5).fit(fixture_token_lists[:30])
        p1, p2 = tmp_path / "a.model", tmp_path / "b.model"
        save_model(m, p1)
        save_model(load_model(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

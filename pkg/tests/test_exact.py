import pytest
from hypothesis import given, strategies as st

from kgeval import (
    Instance,
    MissingDocument,
    dedup,
    f1_at_5,
    f1_at_k,
    f1_at_m,
    is_present,
    match_predictions,
    normalize_document,
    normalize_phrase,
    split_present_absent,
    token_corpus_prf,
)
from helpers import max_bipartite_matching

A = normalize_phrase("alpha beta")
B = normalize_phrase("gamma")
C = normalize_phrase("delta epsilon")


def phrases(texts):
    return [normalize_phrase(t) for t in texts]


class TestDedup:
    def test_simple(self):
        assert dedup(phrases(["a b", "a b", "c"])) == phrases(["a b", "c"])

    def test_stem_level(self):
        out = dedup(phrases(["Processing", "processed"]))
        assert [p.text for p in out] == ["processing"]

    def test_empty(self):
        assert dedup([]) == []

    def test_keeps_first_occurrence_and_order(self):
        out = dedup(phrases(["x", "y", "x", "z", "y"]))
        assert [p.text for p in out] == ["x", "y", "z"]


class TestMatchPredictions:
    def test_one_to_one(self):
        # two identical predictions, one matching target: only one credited
        P = phrases(["a", "a"])
        Y = phrases(["a"])
        m = match_predictions(P, Y)
        assert m.flags == (True, False)
        assert m.matched_targets == (0, None)

    def test_duplicate_targets_each_creditable(self):
        P = phrases(["a", "a"])
        Y = phrases(["a", "a"])
        m = match_predictions(P, Y)
        assert m.flags == (True, True)
        assert m.matched_targets == (0, 1)

    @given(
        st.lists(st.lists(st.sampled_from("abc"), min_size=1, max_size=2), max_size=6),
        st.lists(st.lists(st.sampled_from("abc"), min_size=1, max_size=2), min_size=1, max_size=6),
    )
    def test_greedy_equals_maximum_matching(self, ps, ys):
        P = [normalize_phrase(" ".join(t)) for t in ps]
        Y = [normalize_phrase(" ".join(t)) for t in ys]
        greedy = match_predictions(P, Y).num_matches
        oracle = max_bipartite_matching([p.stems for p in P], [y.stems for y in Y])
        assert greedy == oracle


class TestF1At5:
    def test_two_correct_of_two_predicted(self):
        # precision 2/5 over padded slots, recall 2/3
        Y = phrases(["a", "b", "c"])
        P = phrases(["a", "b"])
        prf = f1_at_5(P, Y)
        assert prf.precision == pytest.approx(0.4)
        assert prf.recall == pytest.approx(2 / 3)
        assert prf.f1 == pytest.approx(2 * 0.4 * (2 / 3) / (0.4 + 2 / 3), abs=1e-9)
        assert prf.f1 == pytest.approx(0.5, abs=1e-9)

    def test_all_five_correct(self):
        Y = phrases(["a", "b", "c", "d", "e"])
        assert f1_at_5(Y, Y).f1 == 1.0

    def test_none_correct(self):
        assert f1_at_5(phrases(["x"]), phrases(["a"])).f1 == 0.0

    def test_truncates_to_first_five(self):
        Y = phrases(["a", "b", "c", "d", "e", "f"])
        P = phrases(["x1", "x2", "x3", "x4", "x5", "a"])  # the match is sixth
        assert f1_at_5(P, Y).f1 == 0.0

    def test_empty_targets_rejected(self):
        with pytest.raises(ValueError):
            f1_at_5(phrases(["a"]), [])

    @given(
        st.lists(st.sampled_from(["a", "b", "c d", "e f"]), max_size=4),
        st.lists(st.sampled_from(["a", "b", "c d", "x"]), min_size=1, max_size=5),
    )
    def test_padding_never_adds_matches(self, ps, ys):
        P = dedup(phrases(ps))
        Y = phrases(ys)
        padded_flags = match_predictions(
            P[:5] + phrases([f"pad{i} pad{i}" for i in range(5 - min(5, len(P)))]), Y
        ).flags
        bare_flags = match_predictions(P[:5], Y).flags
        assert padded_flags[: len(bare_flags)] == bare_flags
        assert not any(padded_flags[len(bare_flags) :])


class TestF1AtM:
    def test_two_of_two_correct(self):
        Y = phrases(["a", "b", "c"])
        P = phrases(["a", "b"])
        prf = f1_at_m(P, Y)
        assert prf.precision == 1.0
        assert prf.recall == pytest.approx(2 / 3)
        assert prf.f1 == pytest.approx(0.8, abs=1e-9)

    def test_exact_set(self):
        Y = phrases(["a", "b"])
        assert f1_at_m(Y, Y).f1 == 1.0

    def test_empty_predictions(self):
        assert f1_at_m([], phrases(["a"])).f1 == 0.0

    def test_agrees_with_f1_at_5_when_five_predictions(self):
        Y = phrases(["a", "b", "c"])
        P = phrases(["a", "b", "x", "y", "z"])
        assert f1_at_m(P, Y).f1 == pytest.approx(f1_at_5(P, Y).f1, abs=1e-12)

    def test_f1_at_k_generic(self):
        Y = phrases(["a", "b", "c"])
        P = phrases(["a", "x", "b"])
        assert f1_at_k(P, Y, 1).precision == 1.0
        assert f1_at_k(P, Y, 10).precision == pytest.approx(0.2)


class TestSplitPresentAbsent:
    def doc_instance(self, doc, targets, predictions):
        return Instance(
            id="t",
            document=normalize_document(doc),
            targets=tuple(phrases(targets)),
            predictions=tuple(phrases(predictions)),
        )

    def test_all_targets_present(self):
        inst = self.doc_instance(
            "natural language processing tasks",
            ["natural language", "processing tasks"],
            [],
        )
        parts = split_present_absent(inst)
        assert parts.absent_targets == ()
        assert len(parts.present_targets) == 2

    def test_contiguity_required(self):
        inst = self.doc_instance(
            "natural toolkit for language", ["natural language"], []
        )
        parts = split_present_absent(inst)
        assert parts.present_targets == ()
        assert len(parts.absent_targets) == 1

    def test_stem_level_presence(self):
        inst = self.doc_instance(
            "large processing systems win", [], ["processed systems"]
        )
        parts = split_present_absent(inst)
        assert len(parts.present_predictions) == 1
        assert parts.absent_predictions == ()

    def test_missing_document(self):
        inst = Instance(id="t", document=None, targets=(A,), predictions=())
        with pytest.raises(MissingDocument):
            split_present_absent(inst)

    @given(
        st.lists(st.sampled_from(["a b", "c", "d e", "f"]), max_size=5),
        st.lists(st.sampled_from(["a b", "c", "x y", "z"]), max_size=5),
        st.lists(st.sampled_from("abcdef"), max_size=8),
    )
    def test_partitions_are_disjoint_and_complete(self, ys, ps, doc_tokens):
        inst = Instance(
            id="t",
            document=normalize_document(" ".join(doc_tokens)),
            targets=tuple(phrases(ys)),
            predictions=tuple(phrases(ps)),
        )
        parts = split_present_absent(inst)
        assert parts.present_targets + parts.absent_targets == inst.targets or sorted(
            p.stems for p in parts.present_targets + parts.absent_targets
        ) == sorted(y.stems for y in inst.targets)
        assert len(parts.present_targets) + len(parts.absent_targets) == len(inst.targets)
        assert len(parts.present_predictions) + len(parts.absent_predictions) == len(
            inst.predictions
        )
        for y in parts.present_targets:
            assert is_present(y, inst.document)
        for y in parts.absent_targets:
            assert not is_present(y, inst.document)


class TestTokenCorpusPrf:
    def test_identity(self):
        Y = phrases(["a b", "c"])
        prf = token_corpus_prf(Y, Y)
        assert (prf.precision, prf.recall, prf.f1) == (1.0, 1.0, 1.0)

    def test_subset(self):
        prf = token_corpus_prf(
            phrases(["natural language"]), phrases(["natural language processing"])
        )
        assert prf.precision == 1.0
        assert prf.recall == pytest.approx(2 / 3)
        assert prf.f1 == pytest.approx(0.8, abs=1e-9)

    def test_disjoint(self):
        prf = token_corpus_prf(phrases(["x"]), phrases(["a"]))
        assert (prf.precision, prf.recall, prf.f1) == (0.0, 0.0, 0.0)

    def test_pooled_multiset(self):
        # prediction pool {a:2}, target pool {a:1, b:1}: overlap 1
        prf = token_corpus_prf(phrases(["a", "a"]), phrases(["a b"]))
        assert prf.precision == pytest.approx(0.5)
        assert prf.recall == pytest.approx(0.5)

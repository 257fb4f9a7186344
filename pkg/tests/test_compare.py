"""Componentwise comparison engine against the naive positionwise oracle."""

import random

import pytest

from pdapress import compare, slp
from pdapress.compare import (
    WILDCARD,
    ZERO_LEQ_ONE,
    PartialOrderSpec,
    SymbolRelation,
    comp_slp,
    order_from_literal,
    partial_word_match,
)
from pdapress.errors import LengthMismatch

from helpers import random_slp


def lit(word, alphabet):
    return slp.literal(word, alphabet)


def naive(word1, word2, rel):
    for i, (x, y) in enumerate(zip(word1, word2)):
        if not rel.holds(x, y):
            return i
    return None


class TestRelations:
    def test_partial_order_validation(self):
        PartialOrderSpec("01", [("0", "1")])  # fine
        with pytest.raises(ValueError):
            PartialOrderSpec("01", [("0", "1"), ("1", "0")])
        with pytest.raises(ValueError):
            PartialOrderSpec("012", [("0", "1"), ("1", "2")])  # missing (0,2)
        PartialOrderSpec("012", [("0", "1"), ("1", "2"), ("0", "2")])

    def test_relation_rejects_foreign_symbols(self):
        with pytest.raises(ValueError):
            SymbolRelation("ab", [("a", "c")])

    def test_order_literal(self):
        rel = order_from_literal("0<=1")
        assert rel.holds("0", "1") and not rel.holds("1", "0")
        with pytest.raises(ValueError):
            order_from_literal("01")

    def test_wildcard_is_not_an_order(self):
        # ? matches both letters but a and b stay incomparable
        assert WILDCARD.holds("?", "a") and WILDCARD.holds("b", "?")
        assert not WILDCARD.holds("a", "b")
        with pytest.raises(ValueError):
            PartialOrderSpec(WILDCARD.alphabet, WILDCARD.pairs)


class TestCompSlp:
    def test_examples(self):
        assert comp_slp(lit("0101", "01"), lit("0111", "01"), ZERO_LEQ_ONE).holds
        res = comp_slp(lit("0101", "01"), lit("0011", "01"), ZERO_LEQ_ONE)
        assert res.verdict == compare.FAILS and res.witness == 1
        with pytest.raises(LengthMismatch):
            comp_slp(lit("01", "01"), lit("011", "01"), ZERO_LEQ_ONE)

    def test_budget(self):
        a = slp.power(lit("01", "01"), 1 << 20)
        res = comp_slp(a, a, ZERO_LEQ_ONE, budget=1000)
        assert res.verdict == compare.BUDGET_EXCEEDED
        # a violation inside the budget is still reported
        b = slp.concat(lit("10", "01"), slp.power(lit("01", "01"), (1 << 20) - 1))
        res = comp_slp(b, a, ZERO_LEQ_ONE, budget=1000)
        assert res.verdict == compare.FAILS and res.witness == 0

    def test_reflexive_on_self(self):
        rng = random.Random(50)
        for _ in range(40):
            p = random_slp(rng, "01", max_len=4000)
            assert comp_slp(p, p, ZERO_LEQ_ONE).holds

    def test_monotone_in_relation(self):
        eq = SymbolRelation("01", [])
        rng = random.Random(51)
        for _ in range(60):
            p1 = random_slp(rng, "01", min_len=1, max_len=800)
            p2 = slp.slice(p1, 0, slp.length(p1))  # same length, same word
            if rng.random() < 0.5:
                p2 = random_slp(rng, "01", min_len=slp.length(p1), max_len=slp.length(p1))
            if comp_slp(p1, p2, eq).holds:
                assert comp_slp(p1, p2, ZERO_LEQ_ONE).holds

    def test_agrees_with_naive_oracle(self):
        rng = random.Random(52)
        relations = [ZERO_LEQ_ONE, SymbolRelation("01", [])]
        for _ in range(150):
            p1 = random_slp(rng, "01", min_len=1, max_len=5000)
            n = slp.length(p1)
            p2 = random_slp(rng, "01", min_len=1, max_len=5000)
            m = min(n, slp.length(p2))
            p1, p2 = slp.slice(p1, 0, m), slp.slice(p2, 0, m)
            w1, w2 = slp.expand(p1, m), slp.expand(p2, m)
            for rel in relations:
                want = naive(w1, w2, rel)
                got = comp_slp(p1, p2, rel)
                if want is None:
                    assert got.holds
                else:
                    assert (got.verdict, got.witness) == (compare.FAILS, want)


class TestPartialWordMatch:
    def test_examples(self):
        assert partial_word_match(lit("a?", "ab?"), lit("ab", "ab?")).holds
        res = partial_word_match(lit("ab", "ab?"), lit("ba", "ab?"))
        assert res.verdict == compare.FAILS and res.witness == 0

    def test_agrees_with_naive_oracle(self):
        rng = random.Random(53)
        for _ in range(120):
            p1 = random_slp(rng, "ab?", min_len=1, max_len=5000)
            p2 = random_slp(rng, "ab?", min_len=1, max_len=5000)
            m = min(slp.length(p1), slp.length(p2))
            p1, p2 = slp.slice(p1, 0, m), slp.slice(p2, 0, m)
            want = naive(slp.expand(p1, m), slp.expand(p2, m), WILDCARD)
            got = partial_word_match(p1, p2)
            assert got.holds == (want is None)
            if want is not None:
                assert got.witness == want

    def test_rejects_other_alphabets(self):
        with pytest.raises(ValueError):
            partial_word_match(lit("01", "01"), lit("01", "01"))

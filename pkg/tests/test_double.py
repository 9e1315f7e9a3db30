import random

import pytest

from fdl.double import (
    F,
    FBAR,
    cyclic_intersection_exponent,
    is_trivial,
    membership_via_word_problem,
    pinch_reduce,
    power_membership,
    syllables,
)
from fdl.errors import NotFoundWithinBound
from fdl.family import MultiplyingSequence, from_witness, h, hs_member
from fdl.words import Word, erase_bars, involution, product, reduce

from oracles import random_reduced, to_word

P = Word.parse
DOUBLING = MultiplyingSequence(2, (), (2,))
POW2 = MultiplyingSequence(1, (), (2,))
SEQS = [DOUBLING, POW2, MultiplyingSequence(3, (), (2,)), MultiplyingSequence(2, (1,), (3,)),
        MultiplyingSequence(1, (2, 1), (1, 2))]


class TestSyllables:
    def test_examples(self):
        syls = syllables(reduce(P("a b c")))
        assert [(s.factor, str(s.content)) for s in syls] == [(F, "a b"), (FBAR, "c")]
        assert syllables(Word()) == []
        syls = syllables(reduce(P("a c D a^2")))
        assert [(s.factor, str(s.content)) for s in syls] == [(F, "a"), (FBAR, "c D"), (F, "a^2")]

    def test_concatenation(self):
        rng = random.Random(0)
        for _ in range(50):
            w = to_word(random_reduced(rng, 15, "aAbBcCdD"))
            assert product(s.content for s in syllables(w)) == w


class TestPinch:
    def test_examples(self):
        assert pinch_reduce(DOUBLING, reduce(P("a^2 c^-2"))).trivial
        res = pinch_reduce(DOUBLING, reduce(P("a c^-1")))
        assert not res.trivial
        assert [(s.factor, str(s.content)) for s in res.syllables] == [(F, "a"), (FBAR, "C")]
        res = pinch_reduce(DOUBLING, reduce(P("b a^4 B d C^4 D")))
        assert res.trivial and res.log[0].witness == ((1, 1),)

    def test_single_syllable_survivor(self):
        res = pinch_reduce(DOUBLING, P("a^2"))
        assert not res.trivial and len(res.syllables) == 1

    def test_replay_and_retraction(self):
        rng = random.Random(1)
        for seq in SEQS:
            for _ in range(60):
                # build trivial elements: u (h_n-products) u-bar^-1 conjugated around
                wit = [(rng.randint(0, 3), rng.choice([1, -1])) for _ in range(rng.randint(1, 3))]
                hw = from_witness(seq, wit)
                outer = to_word(random_reduced(rng, rng.randint(0, 4), "aAbBcCdD"))
                w = outer * hw * ~involution(hw) * ~outer
                res = pinch_reduce(seq, w)
                assert res.trivial
                assert erase_bars(w) == Word()
                assert len(res.log) <= len(syllables(reduce(w)))
                current = reduce(w)
                for step in res.log:
                    assert step.before == current
                    syl = syllables(current)[step.index]
                    content = syl.content if step.factor == F else involution(syl.content)
                    assert from_witness(seq, step.witness) == content
                    mirrored = [s.content for s in syllables(current)]
                    mirrored[step.index] = involution(syl.content)
                    assert product(mirrored) == step.after
                    current = step.after
                assert current == Word()


class TestIsTrivial:
    def test_examples(self):
        assert not is_trivial(DOUBLING, P("b D"))
        assert is_trivial(POW2, P("a C"))
        assert not is_trivial(DOUBLING, P("b d B D"))

    def test_retraction_compatibility(self):
        rng = random.Random(2)
        for seq in SEQS:
            for _ in range(200):
                w = to_word(random_reduced(rng, rng.randint(0, 10), "aAbBcCdD"))
                if is_trivial(seq, w):
                    assert erase_bars(w) == Word()


class TestMembershipViaWordProblem:
    def test_examples(self):
        assert membership_via_word_problem(DOUBLING, P("a^2"))
        assert not membership_via_word_problem(DOUBLING, P("a"))
        assert membership_via_word_problem(DOUBLING, P("b a^4 B"))

    def test_equivalence(self):
        rng = random.Random(3)
        for seq in SEQS:
            for _ in range(100):
                w = to_word(random_reduced(rng, rng.randint(0, 12)))
                assert membership_via_word_problem(seq, w) == hs_member(seq, w).member


class TestLooseness:
    def test_intersection_exponent(self):
        assert cyclic_intersection_exponent(DOUBLING, 1, 4) == 4
        assert cyclic_intersection_exponent(DOUBLING, 0, 2) == 2
        assert cyclic_intersection_exponent(POW2, 0, 1) == 1
        with pytest.raises(NotFoundWithinBound):
            cyclic_intersection_exponent(DOUBLING, 2, 7)

    def test_power_membership(self):
        assert power_membership(DOUBLING, P("a"), 4) == 2
        assert power_membership(DOUBLING, P("b"), 10) is None
        assert power_membership(DOUBLING, reduce(P("b a B")), 8) == 4

    def test_conjugates_of_a(self):
        for seq in SEQS:
            for p in range(7):
                if seq.value(p) > 1:
                    assert cyclic_intersection_exponent(seq, p, seq.value(p)) == seq.value(p)
                    g = Word([("b", p), ("a", 1), ("b", -p)])
                    assert not hs_member(seq, g).member
                    assert power_membership(seq, g, seq.value(p)) == seq.value(p)
                    assert hs_member(seq, h(seq, p)).member
